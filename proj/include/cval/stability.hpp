#pragma once

#include "cval/cluster.hpp"
#include "cval/matrix.hpp"
#include "cval/partition.hpp"
#include "cval/rng.hpp"

#include <span>
#include <vector>

namespace cval {

// Supervised classification rules matched to clustering methods: stability is
// evaluated with the rule that mirrors the cluster concept of the method.
enum class ClassifierRule { NearestCentroid, NearestNeighbour, FurthestNeighbour, AverageDissimilarity };

ClassifierRule rule_for_method(MethodId m);

struct StabilityConfig {
    int repetitions = 50;  // A
    RngSeed seed{0};
};

// Assign each query point to a cluster of the partition trained on
// `train_idx` (indices into the full data set; `train_part` is positional
// over that subset).  For k-means and Ward the centroid is the coordinate
// mean; when no coordinates are available the medoid is used instead and
// `used_medoid_fallback`, if non-null, is set.  Ties go to the lowest
// cluster id.
std::vector<int> classify(MethodId method, const DataMatrix* data, const DissimilarityMatrix& d,
                          std::span<const int> train_idx, const Partition& train_part,
                          std::span<const int> query_idx, bool* used_medoid_fallback = nullptr);

// Tibshirani-Walther prediction strength over `repetitions` random
// half-splits; in [0,1], larger is better.
double prediction_strength(MethodId method, const DataMatrix* data, const DissimilarityMatrix& d, int k,
                           const StabilityConfig& cfg);

// Fang-Wang bootstrap instability: mean disagreement of co-membership
// indicator matrices across paired bootstrap clusterings; in [0,1], smaller
// is better.
double bootstab(MethodId method, const DataMatrix* data, const DissimilarityMatrix& d, int k,
                const StabilityConfig& cfg);

}  // namespace cval
