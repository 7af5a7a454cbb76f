#include "cval/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cval {

ClassifierRule rule_for_method(MethodId m) {
    switch (m) {
        case MethodId::KMeans:
        case MethodId::PAM:
        case MethodId::Ward: return ClassifierRule::NearestCentroid;
        case MethodId::SingleLinkage: return ClassifierRule::NearestNeighbour;
        case MethodId::CompleteLinkage: return ClassifierRule::FurthestNeighbour;
        case MethodId::AverageLinkage: return ClassifierRule::AverageDissimilarity;
    }
    return ClassifierRule::NearestCentroid;
}

namespace {

// medoid of a training cluster: member minimising the sum of dissimilarities
// to the other members (full-data indices)
int cluster_medoid(const DissimilarityMatrix& d, const std::vector<int>& members) {
    int best = members.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (int i : members) {
        double s = 0.0;
        for (int j : members) s += d(i, j);
        if (s < best_sum) {
            best_sum = s;
            best = i;
        }
    }
    return best;
}

}  // namespace

std::vector<int> classify(MethodId method, const DataMatrix* data, const DissimilarityMatrix& d,
                          std::span<const int> train_idx, const Partition& train_part,
                          std::span<const int> query_idx, bool* used_medoid_fallback) {
    const ClassifierRule rule = rule_for_method(method);
    const int k = train_part.num_clusters();

    // clusters as lists of full-data indices
    std::vector<std::vector<int>> clusters(static_cast<std::size_t>(k));
    for (std::size_t pos = 0; pos < train_idx.size(); ++pos)
        clusters[train_part.label(pos)].push_back(train_idx[pos]);

    std::vector<int> out(query_idx.size());

    if (rule == ClassifierRule::NearestCentroid) {
        const bool want_mean = (method == MethodId::KMeans || method == MethodId::Ward);
        if (want_mean && data) {
            const std::size_t p = data->cols();
            std::vector<double> cent(static_cast<std::size_t>(k) * p, 0.0);
            for (int c = 0; c < k; ++c) {
                for (int i : clusters[c])
                    for (std::size_t j = 0; j < p; ++j) cent[c * p + j] += (*data)(i, j);
                for (std::size_t j = 0; j < p; ++j) cent[c * p + j] /= clusters[c].size();
            }
            for (std::size_t q = 0; q < query_idx.size(); ++q) {
                auto row = data->row(query_idx[q]);
                int best = 0;
                double bestd = std::numeric_limits<double>::infinity();
                for (int c = 0; c < k; ++c) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < p; ++j) {
                        double diff = row[j] - cent[c * p + j];
                        s += diff * diff;
                    }
                    if (s < bestd) {
                        bestd = s;
                        best = c;
                    }
                }
                out[q] = best;
            }
            return out;
        }
        if (want_mean && used_medoid_fallback) *used_medoid_fallback = true;
        std::vector<int> medoids(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c) medoids[c] = cluster_medoid(d, clusters[c]);
        for (std::size_t q = 0; q < query_idx.size(); ++q) {
            int best = 0;
            double bestd = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c)
                if (d(query_idx[q], medoids[c]) < bestd) {
                    bestd = d(query_idx[q], medoids[c]);
                    best = c;
                }
            out[q] = best;
        }
        return out;
    }

    for (std::size_t q = 0; q < query_idx.size(); ++q) {
        const int x = query_idx[q];
        int best = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            double score = 0.0;
            switch (rule) {
                case ClassifierRule::NearestNeighbour: {
                    score = std::numeric_limits<double>::infinity();
                    for (int j : clusters[c]) score = std::min(score, d(x, j));
                    break;
                }
                case ClassifierRule::FurthestNeighbour: {
                    for (int j : clusters[c]) score = std::max(score, d(x, j));
                    break;
                }
                case ClassifierRule::AverageDissimilarity: {
                    for (int j : clusters[c]) score += d(x, j);
                    score /= clusters[c].size();
                    break;
                }
                case ClassifierRule::NearestCentroid: break;  // handled above
            }
            if (score < bestd) {
                bestd = score;
                best = c;
            }
        }
        out[q] = best;
    }
    return out;
}

namespace {

Partition cluster_subset(MethodId method, const DataMatrix* data, const DissimilarityMatrix& d,
                         std::span<const int> idx, int k, const RngSeed& seed) {
    DissimilarityMatrix sub_d = d.subset(idx);
    if (method == MethodId::KMeans) {
        if (!data) throw InvalidDataError("kmeans stability requires coordinate data");
        DataMatrix sub = data->subset(idx);
        return run_method(method, &sub, sub_d, k, seed);
    }
    return run_method(method, nullptr, sub_d, k, seed);
}

}  // namespace

double prediction_strength(MethodId method, const DataMatrix* data, const DissimilarityMatrix& d, int k,
                           const StabilityConfig& cfg) {
    const int n = static_cast<int>(d.size());
    if (k < 2) throw PartitionError("prediction_strength: K >= 2 required");
    if (n < 4) throw PartitionError("prediction_strength: n >= 4 required");
    if (k > n / 2) throw PartitionError("prediction_strength: K larger than half size");

    double total = 0.0;
    for (int a = 0; a < cfg.repetitions; ++a) {
        // the split plan depends only on (seed, a): shared across methods
        auto split_rng = cfg.seed.child({static_cast<std::uint64_t>(a), 0}).engine();
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), split_rng);
        const int n1 = n / 2;
        std::vector<int> half[2];
        half[0].assign(idx.begin(), idx.begin() + n1);
        half[1].assign(idx.begin() + n1, idx.end());
        std::sort(half[0].begin(), half[0].end());
        std::sort(half[1].begin(), half[1].end());

        Partition part[2];
        for (int t = 0; t < 2; ++t)
            part[t] = cluster_subset(method, data, d, half[t], k,
                                     cfg.seed.child({static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(t) + 1}));

        for (int t = 0; t < 2; ++t) {
            const int other = 1 - t;
            // points of half t classified to the clusters found on the other half
            std::vector<int> star = classify(method, data, d, half[other], part[other], half[t]);
            double worst = 1.0;
            for (int c = 0; c < k; ++c) {
                const int nk = part[t].cluster_size(c);
                if (nk <= 1) continue;  // vacuously correct
                long long preserved = 0;
                std::vector<int> members;
                for (std::size_t pos = 0; pos < half[t].size(); ++pos)
                    if (part[t].label(pos) == c) members.push_back(static_cast<int>(pos));
                for (std::size_t u = 0; u < members.size(); ++u)
                    for (std::size_t v = u + 1; v < members.size(); ++v)
                        if (star[members[u]] == star[members[v]]) preserved += 2;  // ordered pairs
                worst = std::min(worst, static_cast<double>(preserved) /
                                            (static_cast<double>(nk) * (nk - 1)));
            }
            total += worst;
        }
    }
    return total / (2.0 * cfg.repetitions);
}

double bootstab(MethodId method, const DataMatrix* data, const DissimilarityMatrix& d, int k,
                const StabilityConfig& cfg) {
    const int n = static_cast<int>(d.size());
    if (k < 2) throw PartitionError("bootstab: K >= 2 required");

    double total = 0.0;
    for (int a = 0; a < cfg.repetitions; ++a) {
        std::vector<int> full_labels[2];
        for (int t = 0; t < 2; ++t) {
            // resample until the bootstrap sample has at least K distinct points
            std::vector<int> uniq;
            auto rng = cfg.seed.child({static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(t)}).engine();
            int tries = 0;
            for (;;) {
                std::vector<char> seen(n, 0);
                std::uniform_int_distribution<int> u(0, n - 1);
                for (int i = 0; i < n; ++i) seen[u(rng)] = 1;
                uniq.clear();
                for (int i = 0; i < n; ++i)
                    if (seen[i]) uniq.push_back(i);
                if (static_cast<int>(uniq.size()) >= k) break;
                if (++tries > 100) throw PartitionError("bootstab: cannot draw sample with K distinct points");
            }
            Partition part = cluster_subset(
                method, data, d, uniq, k,
                cfg.seed.child({static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(t), 2}));

            std::vector<int>& labels = full_labels[t];
            labels.assign(n, -1);
            std::vector<int> out_idx;
            for (std::size_t pos = 0; pos < uniq.size(); ++pos) labels[uniq[pos]] = part.label(pos);
            for (int i = 0; i < n; ++i)
                if (labels[i] < 0) out_idx.push_back(i);
            if (!out_idx.empty()) {
                std::vector<int> cls = classify(method, data, d, uniq, part, out_idx);
                for (std::size_t q = 0; q < out_idx.size(); ++q) labels[out_idx[q]] = cls[q];
            }
        }
        long long diff = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const bool f1 = full_labels[0][i] == full_labels[0][j];
                const bool f2 = full_labels[1][i] == full_labels[1][j];
                if (f1 != f2) ++diff;
            }
        total += static_cast<double>(diff) / (static_cast<double>(n) * n);
    }
    return total / cfg.repetitions;
}

}  // namespace cval
