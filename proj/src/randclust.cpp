#include "cval/randclust.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

namespace cval {

const char* random_method_name(RandomMethodId m) {
    switch (m) {
        case RandomMethodId::RKCentroid: return "rkcentroid";
        case RandomMethodId::RKSingle: return "rksingle";
        case RandomMethodId::RKComplete: return "rkcomplete";
        case RandomMethodId::RKAverage: return "rkaverage";
    }
    return "?";
}

char random_method_mark(RandomMethodId m) {
    switch (m) {
        case RandomMethodId::RKCentroid: return 'c';
        case RandomMethodId::RKSingle: return 'n';
        case RandomMethodId::RKComplete: return 'f';
        case RandomMethodId::RKAverage: return 'a';
    }
    return '?';
}

namespace {

std::vector<int> draw_seed_points(std::size_t n, int k, std::mt19937_64& rng) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> u(i, n - 1);
        std::swap(idx[i], idx[u(rng)]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

Partition assign_to_centroids(const DissimilarityMatrix& d, std::span<const int> centroids) {
    const std::size_t n = d.size();
    const int k = static_cast<int>(centroids.size());
    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c)
            if (d(i, centroids[c]) < bestd) {
                bestd = d(i, centroids[c]);
                best = c;
            }
        raw[i] = best;
    }
    return Partition(std::move(raw), k);
}

Partition random_k_centroids(const DissimilarityMatrix& d, int k, const RngSeed& seed) {
    const std::size_t n = d.size();
    if (k < 1 || static_cast<std::size_t>(k) > n) throw PartitionError("random_k_centroids: K out of range");
    auto rng = seed.engine();
    std::vector<int> centroids = draw_seed_points(n, k, rng);
    return assign_to_centroids(d, centroids);
}

Partition grow_from_seeds(const DissimilarityMatrix& d, std::span<const int> seed_points,
                          RandomLinkage variant) {
    const std::size_t n = d.size();
    const int k = static_cast<int>(seed_points.size());
    std::vector<int> seeds(seed_points.begin(), seed_points.end());

    std::vector<int> labels(n, -1);
    std::vector<int> cluster_count(k, 1);
    for (int c = 0; c < k; ++c) labels[seeds[c]] = c;

    // point-to-cluster dissimilarities for unassigned points; for the average
    // variant kept as running sums
    std::vector<double> dist(n * static_cast<std::size_t>(k));
    std::vector<double> sums;
    if (variant == RandomLinkage::Average) sums.assign(n * static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < k; ++c) {
            dist[i * k + c] = d(i, seeds[c]);
            if (variant == RandomLinkage::Average) sums[i * k + c] = d(i, seeds[c]);
        }

    std::size_t remaining = n - static_cast<std::size_t>(k);
    while (remaining > 0) {
        // argmin over (unassigned point, cluster); ties by point then cluster
        std::size_t best_i = n;
        int best_c = -1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] >= 0) continue;
            for (int c = 0; c < k; ++c)
                if (dist[i * k + c] < best) {
                    best = dist[i * k + c];
                    best_i = i;
                    best_c = c;
                }
        }
        labels[best_i] = best_c;
        ++cluster_count[best_c];
        --remaining;
        for (std::size_t x = 0; x < n; ++x) {
            if (labels[x] >= 0) continue;
            const double dxg = d(x, best_i);
            switch (variant) {
                case RandomLinkage::Single:
                    dist[x * k + best_c] = std::min(dist[x * k + best_c], dxg);
                    break;
                case RandomLinkage::Complete:
                    dist[x * k + best_c] = std::max(dist[x * k + best_c], dxg);
                    break;
                case RandomLinkage::Average:
                    sums[x * k + best_c] += dxg;
                    dist[x * k + best_c] = sums[x * k + best_c] / cluster_count[best_c];
                    break;
            }
        }
    }
    return Partition(std::move(labels), k);
}

Partition random_k_linkage(const DissimilarityMatrix& d, int k, RandomLinkage variant, const RngSeed& seed) {
    const std::size_t n = d.size();
    if (k < 1 || static_cast<std::size_t>(k) > n) throw PartitionError("random_k_linkage: K out of range");
    auto rng = seed.engine();
    std::vector<int> seeds = draw_seed_points(n, k, rng);
    return grow_from_seeds(d, seeds, variant);
}

Partition random_clustering(RandomMethodId m, const DissimilarityMatrix& d, int k, const RngSeed& seed) {
    switch (m) {
        case RandomMethodId::RKCentroid: return random_k_centroids(d, k, seed);
        case RandomMethodId::RKSingle: return random_k_linkage(d, k, RandomLinkage::Single, seed);
        case RandomMethodId::RKComplete: return random_k_linkage(d, k, RandomLinkage::Complete, seed);
        case RandomMethodId::RKAverage: return random_k_linkage(d, k, RandomLinkage::Average, seed);
    }
    throw PartitionError("unknown random method");
}

}  // namespace cval
