#pragma once

#include "cval/matrix.hpp"
#include "cval/partition.hpp"
#include "cval/rng.hpp"

#include <string>

namespace cval {

enum class RandomMethodId { RKCentroid, RKSingle, RKComplete, RKAverage };

const char* random_method_name(RandomMethodId m);
// short mark used in plots: c / n / f / a
char random_method_mark(RandomMethodId m);

enum class RandomLinkage { Single, Complete, Average };

// Draw K distinct centroids uniformly and assign every point to the nearest
// one (ties to the lowest centroid index).
Partition random_k_centroids(const DissimilarityMatrix& d, int k, const RngSeed& seed);

// Deterministic cores with the initial point sets made explicit.
Partition assign_to_centroids(const DissimilarityMatrix& d, std::span<const int> centroids);
Partition grow_from_seeds(const DissimilarityMatrix& d, std::span<const int> seed_points,
                          RandomLinkage variant);

// Grow K clusters greedily from K random seed points, repeatedly adding the
// (point, cluster) pair with the smallest point-to-cluster dissimilarity
// under the chosen linkage.  Ties break by lowest point index, then lowest
// cluster index.
Partition random_k_linkage(const DissimilarityMatrix& d, int k, RandomLinkage variant, const RngSeed& seed);

Partition random_clustering(RandomMethodId m, const DissimilarityMatrix& d, int k, const RngSeed& seed);

}  // namespace cval
