#include "cval/matrix.hpp"
#include "cval/partition.hpp"

#include <cmath>
#include <cstdint>

namespace cval {

DissimilarityMatrix euclidean_dissimilarity(const DataMatrix& data) {
    if (!data.all_finite()) throw InvalidDataError("euclidean_dissimilarity: non-finite input");
    const std::size_t n = data.rows(), p = data.cols();
    DissimilarityMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto ri = data.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            auto rj = data.row(j);
            double s = 0.0;
            for (std::size_t c = 0; c < p; ++c) {
                double diff = ri[c] - rj[c];
                s += diff * diff;
            }
            d.set(i, j, std::sqrt(s));
        }
    }
    return d;
}

namespace {
// C(m, 2) in exact integer arithmetic; n <= ~3e9 fits in unsigned 64/128.
inline unsigned long long choose2(unsigned long long m) { return m * (m - 1) / 2; }
}  // namespace

double adjusted_rand_index(const Partition& p1, const Partition& p2) {
    if (p1.n() != p2.n()) throw PartitionError("adjusted_rand_index: partitions differ in n");
    const int k1 = p1.num_clusters(), k2 = p2.num_clusters();
    std::vector<unsigned long long> table(static_cast<std::size_t>(k1) * k2, 0);
    for (std::size_t i = 0; i < p1.n(); ++i) ++table[p1.label(i) * static_cast<std::size_t>(k2) + p2.label(i)];

    unsigned long long sum_ij = 0;
    for (auto c : table) sum_ij += choose2(c);
    unsigned long long sum_a = 0, sum_b = 0;
    for (int k = 0; k < k1; ++k) sum_a += choose2(p1.cluster_size(k));
    for (int k = 0; k < k2; ++k) sum_b += choose2(p2.cluster_size(k));
    const double total = static_cast<double>(choose2(p1.n()));

    const double expected = static_cast<double>(sum_a) * static_cast<double>(sum_b) / total;
    const double max_index = 0.5 * (static_cast<double>(sum_a) + static_cast<double>(sum_b));
    if (max_index == expected) return 1.0;  // both partitions trivial in the same way
    return (static_cast<double>(sum_ij) - expected) / (max_index - expected);
}

}  // namespace cval
