#include "cval/indexes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cval {

const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::ASW: return "asw";
        case Criterion::CH: return "ch";
        case Criterion::Dunn: return "dunn";
        case Criterion::CVNN: return "cvnn";
        case Criterion::PearsonGamma: return "pearsongamma";
        case Criterion::AveWithin: return "avewithin";
        case Criterion::SepIndex: return "sepindex";
        case Criterion::WidestGap: return "widestgap";
        case Criterion::Entropy: return "entropy";
        case Criterion::PS: return "ps";
        case Criterion::Bootstab: return "bootstab";
    }
    return "?";
}

bool parse_criterion(const std::string& s, Criterion& out) {
    for (Criterion c : kAllCriteria)
        if (s == criterion_name(c)) {
            out = c;
            return true;
        }
    return false;
}

bool larger_is_better(Criterion c) {
    switch (c) {
        case Criterion::ASW:
        case Criterion::CH:
        case Criterion::Dunn:
        case Criterion::PearsonGamma:
        case Criterion::SepIndex:
        case Criterion::Entropy:
        case Criterion::PS: return true;
        case Criterion::CVNN:
        case Criterion::AveWithin:
        case Criterion::WidestGap:
        case Criterion::Bootstab: return false;
    }
    return true;
}

namespace {

void require_k2(const Partition& part) {
    if (part.num_clusters() < 2) throw PartitionError("index requires K >= 2");
}

}  // namespace

double asw(const DissimilarityMatrix& d, const Partition& part) {
    require_k2(part);
    const std::size_t n = part.n();
    const int k = part.num_clusters();
    std::vector<double> sums(static_cast<std::size_t>(k));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sums.begin(), sums.end(), 0.0);
        auto row = d.row(i);
        for (std::size_t j = 0; j < n; ++j) sums[part.label(j)] += row[j];
        const int li = part.label(i);
        if (part.cluster_size(li) <= 1) continue;  // singleton convention s_i = 0
        const double a = sums[li] / (part.cluster_size(li) - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int h = 0; h < k; ++h) {
            if (h == li) continue;
            b = std::min(b, sums[h] / part.cluster_size(h));
        }
        const double den = std::max(a, b);
        total += den > 0.0 ? (b - a) / den : 0.0;
    }
    return total / static_cast<double>(n);
}

double calinski_harabasz(const DissimilarityMatrix& d, const Partition& part) {
    require_k2(part);
    const std::size_t n = part.n();
    const int k = part.num_clusters();
    if (static_cast<std::size_t>(k) >= n) throw PartitionError("calinski_harabasz requires n > K");
    double within = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = d.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double sq = 2.0 * row[j] * row[j];  // ordered pairs (i,j) and (j,i)
            total += sq;
            if (part.label(i) == part.label(j)) within += sq / part.cluster_size(part.label(i));
        }
    }
    const double between = total / static_cast<double>(n) - within;
    if (within == 0.0) return std::numeric_limits<double>::infinity();
    return between * (static_cast<double>(n) - k) / (within * (k - 1));
}

double dunn(const DissimilarityMatrix& d, const Partition& part) {
    require_k2(part);
    const std::size_t n = part.n();
    double min_between = std::numeric_limits<double>::infinity();
    double max_within = 0.0;
    bool any_within = false;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = d.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (part.label(i) == part.label(j)) {
                max_within = std::max(max_within, row[j]);
                any_within = true;
            } else {
                min_between = std::min(min_between, row[j]);
            }
        }
    }
    if (!any_within || max_within == 0.0) return std::numeric_limits<double>::infinity();
    return min_between / max_within;
}

double pearson_gamma(const DissimilarityMatrix& d, const Partition& part) {
    require_k2(part);
    const std::size_t n = part.n();
    double sum_d = 0.0, sum_c = 0.0, sum_dd = 0.0, sum_cc = 0.0, sum_dc = 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = d.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dv = row[j];
            const double cv = part.label(i) != part.label(j) ? 1.0 : 0.0;
            sum_d += dv;
            sum_c += cv;
            sum_dd += dv * dv;
            sum_cc += cv * cv;
            sum_dc += dv * cv;
            m += 1.0;
        }
    }
    const double var_d = sum_dd - sum_d * sum_d / m;
    const double var_c = sum_cc - sum_c * sum_c / m;
    if (var_d <= 0.0 || var_c <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (sum_dc - sum_d * sum_c / m) / std::sqrt(var_d * var_c);
}

double ave_within(const DissimilarityMatrix& d, const Partition& part) {
    require_k2(part);
    const std::size_t n = part.n();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = d.row(i);
        for (std::size_t j = i + 1; j < n; ++j)
            if (part.label(i) == part.label(j))
                total += 2.0 * row[j] / (part.cluster_size(part.label(i)) - 1);
    }
    return total / static_cast<double>(n);
}

double sep_index(const DissimilarityMatrix& d, const Partition& part, double p) {
    require_k2(part);
    if (!(p > 0.0 && p < 1.0)) throw PartitionError("sep_index: p must be in (0,1)");
    const std::size_t n = part.n();
    const int k = part.num_clusters();
    std::vector<std::vector<double>> border(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        auto row = d.row(i);
        double nearest_foreign = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (part.label(j) != part.label(i)) nearest_foreign = std::min(nearest_foreign, row[j]);
        border[part.label(i)].push_back(nearest_foreign);
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (int c = 0; c < k; ++c) {
        auto& b = border[c];
        // take at least one point per cluster so small clusters stay in the pool
        const std::size_t take = std::max<std::size_t>(1, static_cast<std::size_t>(p * b.size()));
        std::partial_sort(b.begin(), b.begin() + take, b.end());
        for (std::size_t i = 0; i < take; ++i) sum += b[i];
        count += take;
    }
    return sum / static_cast<double>(count);
}

double widest_gap(const DissimilarityMatrix& d, const Partition& part) {
    require_k2(part);
    double widest = 0.0;
    for (const auto& cluster : part.members()) {
        const std::size_t m = cluster.size();
        if (m < 2) continue;
        // max edge of the cluster's minimum spanning tree (Prim)
        std::vector<double> key(m, std::numeric_limits<double>::infinity());
        std::vector<char> used(m, 0);
        key[0] = 0.0;
        double max_edge = 0.0;
        for (std::size_t step = 0; step < m; ++step) {
            std::size_t best = m;
            for (std::size_t i = 0; i < m; ++i)
                if (!used[i] && (best == m || key[i] < key[best])) best = i;
            used[best] = 1;
            max_edge = std::max(max_edge, key[best]);
            for (std::size_t i = 0; i < m; ++i)
                if (!used[i]) key[i] = std::min(key[i], d(cluster[best], cluster[i]));
        }
        widest = std::max(widest, max_edge);
    }
    return widest;
}

double entropy(const Partition& part) {
    require_k2(part);
    const double n = static_cast<double>(part.n());
    double h = 0.0;
    for (int c = 0; c < part.num_clusters(); ++c) {
        const double frac = part.cluster_size(c) / n;
        h -= frac * std::log(frac);
    }
    return h;
}

// ---------------------------------------------------------------------------
// CVNN

NeighborTable::NeighborTable(const DissimilarityMatrix& d, int max_kappa) {
    const std::size_t n = d.size();
    k_ = std::min<std::size_t>(static_cast<std::size_t>(max_kappa), n - 1);
    order_.resize(n * k_);
    std::vector<int> idx;
    for (std::size_t i = 0; i < n; ++i) {
        idx.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) idx.push_back(static_cast<int>(j));
        auto row = d.row(i);
        std::partial_sort(idx.begin(), idx.begin() + k_, idx.end(), [&](int a, int b) {
            if (row[a] != row[b]) return row[a] < row[b];
            return a < b;
        });
        std::copy(idx.begin(), idx.begin() + k_, order_.begin() + i * k_);
    }
}

CvnnComponents cvnn_components(const NeighborTable& nt, const DissimilarityMatrix& d, const Partition& part,
                               int kappa) {
    require_k2(part);
    if (kappa < 1 || kappa > nt.max_kappa()) throw PartitionError("cvnn: kappa out of range");
    const std::size_t n = part.n();
    const int k = part.num_clusters();

    std::vector<double> foreign(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto nb = nt.neighbours(i);
        int q = 0;
        for (int t = 0; t < kappa; ++t)
            if (part.label(nb[t]) != part.label(i)) ++q;
        foreign[part.label(i)] += static_cast<double>(q) / kappa;
    }
    double sep = 0.0;
    for (int c = 0; c < k; ++c) sep = std::max(sep, foreign[c] / part.cluster_size(c));

    double within_sum = 0.0;
    double within_count = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = d.row(i);
        for (std::size_t j = i + 1; j < n; ++j)
            if (part.label(i) == part.label(j)) {
                within_sum += row[j];
                within_count += 1.0;
            }
    }
    const double com = within_count > 0.0 ? within_sum / within_count : 0.0;
    return {sep, com};
}

CvnnComponents cvnn_components(const DissimilarityMatrix& d, const Partition& part, int kappa) {
    NeighborTable nt(d, kappa);
    return cvnn_components(nt, d, part, kappa);
}

std::vector<double> cvnn_aggregate(std::span<const CvnnComponents> parts) {
    if (parts.empty()) throw PartitionError("cvnn_aggregate: empty collection");
    double max_sep = 0.0, max_com = 0.0;
    for (const auto& p : parts) {
        max_sep = std::max(max_sep, p.sep);
        max_com = std::max(max_com, p.com);
    }
    std::vector<double> out;
    out.reserve(parts.size());
    for (const auto& p : parts) {
        double v = 0.0;
        if (max_sep > 0.0) v += p.sep / max_sep;
        if (max_com > 0.0) v += p.com / max_com;
        out.push_back(v);
    }
    return out;
}

}  // namespace cval
