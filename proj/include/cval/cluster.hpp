#pragma once

#include "cval/matrix.hpp"
#include "cval/partition.hpp"
#include "cval/rng.hpp"

#include <string>
#include <vector>

namespace cval {

enum class MethodId { KMeans, PAM, SingleLinkage, CompleteLinkage, AverageLinkage, Ward };

enum class Linkage { Single, Complete, Average, Ward };

const char* method_name(MethodId m);
bool parse_method(const std::string& s, MethodId& out);

// Agglomerative merge tree.  merges[t] joins two clusters at height[t];
// cluster ids 0..n-1 are leaves, n+t is the cluster created by merge t.
// Merges are stored sorted by height (ties by formation order), so the K-cut
// applies the first n-K merges and cuts are nested.
class Dendrogram {
public:
    struct Merge {
        int left, right;
        double height;
    };

    Dendrogram(std::size_t n, std::vector<Merge> merges) : n_(n), merges_(std::move(merges)) {}

    std::size_t n() const { return n_; }
    const std::vector<Merge>& merges() const { return merges_; }

    Partition cut(int k) const;

private:
    std::size_t n_;
    std::vector<Merge> merges_;
};

// Lance-Williams agglomeration via the nearest-neighbour chain algorithm.
// Ward follows the ward.D2 convention: updates on squared dissimilarities,
// merge heights reported on the original scale.
Dendrogram hierarchical_tree(const DissimilarityMatrix& d, Linkage linkage);

Partition hierarchical(const DissimilarityMatrix& d, Linkage linkage, int k);

// Lloyd's algorithm, best of `restarts` seeded initialisations by
// within-cluster sum of squares.
Partition kmeans(const DataMatrix& data, int k, int restarts, const RngSeed& seed);

double kmeans_wss(const DataMatrix& data, const Partition& part);

// Partitioning around medoids, BUILD + SWAP.  Deterministic: ties break by
// lowest index, so the seed only matters for interface parity.
Partition pam(const DissimilarityMatrix& d, int k, const RngSeed& seed);

std::vector<int> pam_medoids(const DissimilarityMatrix& d, int k);

// Run a proper clustering method.  `data` may be null for the
// dissimilarity-only methods; k-means requires it.
Partition run_method(MethodId m, const DataMatrix* data, const DissimilarityMatrix& d, int k,
                     const RngSeed& seed, int kmeans_restarts = 10);

}  // namespace cval
