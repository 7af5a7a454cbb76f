#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace cval {

struct PartitionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Crisp partition of n objects into K nonempty clusters.  Labels are 0-based
// internally; every cluster id in [0, K) must occur at least once.  Immutable
// after construction.
class Partition {
public:
    Partition() = default;

    Partition(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
        if (k_ < 1) throw PartitionError("K must be >= 1");
        sizes_.assign(k_, 0);
        for (int l : labels_) {
            if (l < 0 || l >= k_) throw PartitionError("label out of range");
            ++sizes_[l];
        }
        for (int s : sizes_)
            if (s == 0) throw PartitionError("empty cluster");
    }

    // Labels with arbitrary (possibly non-contiguous) values; clusters are
    // numbered by first appearance.
    static Partition from_raw_labels(std::span<const int> raw) {
        std::vector<int> labels(raw.size());
        std::vector<int> seen;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            int id = -1;
            for (std::size_t s = 0; s < seen.size(); ++s)
                if (seen[s] == raw[i]) { id = static_cast<int>(s); break; }
            if (id < 0) {
                id = static_cast<int>(seen.size());
                seen.push_back(raw[i]);
            }
            labels[i] = id;
        }
        return Partition(std::move(labels), static_cast<int>(seen.size()));
    }

    std::size_t n() const { return labels_.size(); }
    int num_clusters() const { return k_; }
    int label(std::size_t i) const { return labels_[i]; }
    const std::vector<int>& labels() const { return labels_; }
    int cluster_size(int k) const { return sizes_[k]; }
    const std::vector<int>& sizes() const { return sizes_; }

    std::vector<std::vector<int>> members() const {
        std::vector<std::vector<int>> m(k_);
        for (int k = 0; k < k_; ++k) m[k].reserve(sizes_[k]);
        for (std::size_t i = 0; i < labels_.size(); ++i) m[labels_[i]].push_back(static_cast<int>(i));
        return m;
    }

private:
    std::vector<int> labels_;
    int k_ = 0;
    std::vector<int> sizes_;
};

// Adjusted Rand Index between two partitions of the same objects; 1 iff the
// partitions agree up to label permutation.
double adjusted_rand_index(const Partition& p1, const Partition& p2);

}  // namespace cval
