#include "cval/cluster.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

namespace cval {

const char* method_name(MethodId m) {
    switch (m) {
        case MethodId::KMeans: return "kmeans";
        case MethodId::PAM: return "pam";
        case MethodId::SingleLinkage: return "single";
        case MethodId::CompleteLinkage: return "complete";
        case MethodId::AverageLinkage: return "average";
        case MethodId::Ward: return "ward";
    }
    return "?";
}

bool parse_method(const std::string& s, MethodId& out) {
    for (MethodId m : {MethodId::KMeans, MethodId::PAM, MethodId::SingleLinkage, MethodId::CompleteLinkage,
                       MethodId::AverageLinkage, MethodId::Ward})
        if (s == method_name(m)) {
            out = m;
            return true;
        }
    return false;
}

// ---------------------------------------------------------------------------
// Hierarchical clustering (nearest-neighbour chain)

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Partition Dendrogram::cut(int k) const {
    if (k < 1 || static_cast<std::size_t>(k) > n_) throw PartitionError("cut: K out of range");
    UnionFind uf(n_);
    const std::size_t apply = n_ - static_cast<std::size_t>(k);
    for (std::size_t t = 0; t < apply; ++t) uf.unite(merges_[t].left, merges_[t].right);
    std::vector<int> raw(n_);
    for (std::size_t i = 0; i < n_; ++i) raw[i] = uf.find(static_cast<int>(i));
    return Partition::from_raw_labels(raw);
}

Dendrogram hierarchical_tree(const DissimilarityMatrix& d, Linkage linkage) {
    const int n = static_cast<int>(d.size());
    if (n < 1) throw InvalidDataError("hierarchical: empty data");
    const bool squared = (linkage == Linkage::Ward);

    // Mutable working copy; slot i represents the cluster whose lowest leaf is i.
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = d(i, j);
            w[static_cast<std::size_t>(i) * n + j] = squared ? v * v : v;
        }
    auto W = [&](int i, int j) -> double& { return w[static_cast<std::size_t>(i) * n + j]; };

    std::vector<char> active(n, 1);
    std::vector<double> size(n, 1.0);
    std::vector<Dendrogram::Merge> merges;
    merges.reserve(n > 0 ? n - 1 : 0);
    std::vector<int> chain;
    chain.reserve(n);

    int remaining = n;
    while (remaining > 1) {
        if (chain.empty()) {
            for (int i = 0; i < n; ++i)
                if (active[i]) {
                    chain.push_back(i);
                    break;
                }
        }
        for (;;) {
            const int top = chain.back();
            const int prev = chain.size() >= 2 ? chain[chain.size() - 2] : -1;
            int nn = -1;
            double best = std::numeric_limits<double>::infinity();
            if (prev >= 0) {  // prefer the chain predecessor on ties
                nn = prev;
                best = W(top, prev);
            }
            for (int j = 0; j < n; ++j) {
                if (!active[j] || j == top || j == nn) continue;
                if (W(top, j) < best || (W(top, j) == best && (nn < 0 || j < nn) && nn != prev)) {
                    best = W(top, j);
                    nn = j;
                }
            }
            if (nn == prev && prev >= 0) {
                // reciprocal pair: merge top and prev
                const int a = std::min(top, prev), b = std::max(top, prev);
                const double h = squared ? std::sqrt(W(a, b)) : W(a, b);
                merges.push_back({a, b, h});
                const double sa = size[a], sb = size[b];
                for (int k = 0; k < n; ++k) {
                    if (!active[k] || k == a || k == b) continue;
                    double dak = W(a, k), dbk = W(b, k), upd = 0.0;
                    switch (linkage) {
                        case Linkage::Single: upd = std::min(dak, dbk); break;
                        case Linkage::Complete: upd = std::max(dak, dbk); break;
                        case Linkage::Average: upd = (sa * dak + sb * dbk) / (sa + sb); break;
                        case Linkage::Ward: {
                            const double sk = size[k];
                            upd = ((sa + sk) * dak + (sb + sk) * dbk - sk * W(a, b)) / (sa + sb + sk);
                            break;
                        }
                    }
                    W(a, k) = W(k, a) = upd;
                }
                size[a] = sa + sb;
                active[b] = 0;
                chain.pop_back();
                chain.pop_back();
                --remaining;
                break;
            }
            chain.push_back(nn);
        }
    }

    // Heights are monotone for these linkages; a stable sort by height keeps
    // each child merge before its parent, so prefix cuts are valid and nested.
    std::stable_sort(merges.begin(), merges.end(),
                     [](const Dendrogram::Merge& x, const Dendrogram::Merge& y) { return x.height < y.height; });
    return Dendrogram(static_cast<std::size_t>(n), std::move(merges));
}

Partition hierarchical(const DissimilarityMatrix& d, Linkage linkage, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > d.size()) throw PartitionError("hierarchical: K out of range");
    return hierarchical_tree(d, linkage).cut(k);
}

// ---------------------------------------------------------------------------
// K-means

namespace {

std::vector<int> sample_without_replacement(int n, int k, std::mt19937_64& rng) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i) {
        std::uniform_int_distribution<int> u(i, n - 1);
        std::swap(idx[i], idx[u(rng)]);
    }
    idx.resize(k);
    return idx;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        double diff = a[c] - b[c];
        s += diff * diff;
    }
    return s;
}

struct LloydResult {
    std::vector<int> labels;
    double wss;
};

LloydResult lloyd_once(const DataMatrix& data, int k, std::mt19937_64& rng) {
    const int n = static_cast<int>(data.rows());
    const int p = static_cast<int>(data.cols());
    std::vector<int> init = sample_without_replacement(n, k, rng);
    std::sort(init.begin(), init.end());

    std::vector<double> cent(static_cast<std::size_t>(k) * p);
    for (int c = 0; c < k; ++c)
        for (int j = 0; j < p; ++j) cent[static_cast<std::size_t>(c) * p + j] = data(init[c], j);

    std::vector<int> labels(n, -1);
    double prev_wss = std::numeric_limits<double>::infinity();
    double wss = 0.0;
    for (int iter = 0; iter < 300; ++iter) {
        bool changed = false;
        std::vector<int> count(k, 0);
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bestd = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double dd = sq_dist(data.row(i), {cent.data() + static_cast<std::size_t>(c) * p, (std::size_t)p});
                if (dd < bestd) {
                    bestd = dd;
                    best = c;
                }
            }
            if (labels[i] != best) changed = true;
            labels[i] = best;
            ++count[best];
        }
        // empty-cluster repair: move the point farthest from its centroid
        for (int c = 0; c < k; ++c) {
            while (count[c] == 0) {
                int far_i = -1;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    if (count[labels[i]] <= 1) continue;
                    double dd = sq_dist(data.row(i),
                                        {cent.data() + static_cast<std::size_t>(labels[i]) * p, (std::size_t)p});
                    if (dd > far_d) {
                        far_d = dd;
                        far_i = i;
                    }
                }
                if (far_i < 0) throw PartitionError("kmeans: cannot repair empty cluster");
                --count[labels[far_i]];
                labels[far_i] = c;
                ++count[c];
                changed = true;
            }
        }
        // update centroids
        std::fill(cent.begin(), cent.end(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < p; ++j) cent[static_cast<std::size_t>(labels[i]) * p + j] += data(i, j);
        for (int c = 0; c < k; ++c)
            for (int j = 0; j < p; ++j) cent[static_cast<std::size_t>(c) * p + j] /= count[c];
        wss = 0.0;
        for (int i = 0; i < n; ++i)
            wss += sq_dist(data.row(i), {cent.data() + static_cast<std::size_t>(labels[i]) * p, (std::size_t)p});
        assert(wss <= prev_wss * (1 + 1e-9) + 1e-12);
        if (!changed) break;
        prev_wss = wss;
        (void)prev_wss;  // only read by the assert above
    }
    return {std::move(labels), wss};
}

}  // namespace

double kmeans_wss(const DataMatrix& data, const Partition& part) {
    const int p = static_cast<int>(data.cols());
    const int k = part.num_clusters();
    std::vector<double> cent(static_cast<std::size_t>(k) * p, 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i)
        for (int j = 0; j < p; ++j) cent[static_cast<std::size_t>(part.label(i)) * p + j] += data(i, j);
    for (int c = 0; c < k; ++c)
        for (int j = 0; j < p; ++j) cent[static_cast<std::size_t>(c) * p + j] /= part.cluster_size(c);
    double wss = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i)
        wss += sq_dist(data.row(i), {cent.data() + static_cast<std::size_t>(part.label(i)) * p, (std::size_t)p});
    return wss;
}

Partition kmeans(const DataMatrix& data, int k, int restarts, const RngSeed& seed) {
    if (k < 1 || static_cast<std::size_t>(k) > data.rows()) throw PartitionError("kmeans: K out of range");
    if (restarts < 1) throw PartitionError("kmeans: restarts must be >= 1");
    LloydResult best;
    best.wss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        auto rng = seed.child(static_cast<std::uint64_t>(r)).engine();
        LloydResult res = lloyd_once(data, k, rng);
        if (res.wss < best.wss) best = std::move(res);
    }
    return Partition::from_raw_labels(best.labels);
}

// ---------------------------------------------------------------------------
// PAM

namespace {

double pam_cost(const DissimilarityMatrix& d, const std::vector<int>& medoids) {
    double cost = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int m : medoids) best = std::min(best, d(i, m));
        cost += best;
    }
    return cost;
}

}  // namespace

std::vector<int> pam_medoids(const DissimilarityMatrix& d, int k) {
    const int n = static_cast<int>(d.size());
    if (k < 1 || k > n) throw PartitionError("pam: K out of range");

    // BUILD
    std::vector<int> medoids;
    std::vector<char> is_medoid(n, 0);
    {
        int best = 0;
        double bestsum = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += d(i, j);
            if (s < bestsum) {
                bestsum = s;
                best = i;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = 1;
    }
    std::vector<double> nearest(n);
    for (int i = 0; i < n; ++i) nearest[i] = d(i, medoids[0]);
    while (static_cast<int>(medoids.size()) < k) {
        int best = -1;
        double bestgain = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            for (int j = 0; j < n; ++j) gain += std::max(0.0, nearest[j] - d(j, c));
            if (gain > bestgain) {
                bestgain = gain;
                best = c;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = 1;
        for (int j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], d(j, best));
    }

    // SWAP: steepest descent over single swaps
    double cost = pam_cost(d, medoids);
    for (int sweep = 0; sweep < 1000; ++sweep) {
        int best_m = -1, best_c = -1;
        double best_cost = cost;
        for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
            for (int c = 0; c < n; ++c) {
                if (is_medoid[c]) continue;
                std::vector<int> cand = medoids;
                cand[mi] = c;
                double cc = pam_cost(d, cand);
                if (cc < best_cost - 1e-12) {
                    best_cost = cc;
                    best_m = static_cast<int>(mi);
                    best_c = c;
                }
            }
        }
        if (best_m < 0) break;
        is_medoid[medoids[best_m]] = 0;
        medoids[best_m] = best_c;
        is_medoid[best_c] = 1;
        assert(best_cost <= cost);
        cost = best_cost;
    }
    std::sort(medoids.begin(), medoids.end());
    return medoids;
}

Partition pam(const DissimilarityMatrix& d, int k, const RngSeed&) {
    std::vector<int> medoids = pam_medoids(d, k);
    const int n = static_cast<int>(d.size());
    std::vector<int> raw(n);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < medoids.size(); ++m)
            if (d(i, medoids[m]) < bestd) {
                bestd = d(i, medoids[m]);
                best = static_cast<int>(m);
            }
        raw[i] = best;
    }
    return Partition::from_raw_labels(raw);
}

Partition run_method(MethodId m, const DataMatrix* data, const DissimilarityMatrix& d, int k,
                     const RngSeed& seed, int kmeans_restarts) {
    switch (m) {
        case MethodId::KMeans:
            if (!data) throw InvalidDataError("kmeans requires coordinate data");
            return kmeans(*data, k, kmeans_restarts, seed);
        case MethodId::PAM: return pam(d, k, seed);
        case MethodId::SingleLinkage: return hierarchical(d, Linkage::Single, k);
        case MethodId::CompleteLinkage: return hierarchical(d, Linkage::Complete, k);
        case MethodId::AverageLinkage: return hierarchical(d, Linkage::Average, k);
        case MethodId::Ward: return hierarchical(d, Linkage::Ward, k);
    }
    throw PartitionError("unknown method");
}

}  // namespace cval
