#pragma once

#include "cval/cluster.hpp"
#include "cval/indexes.hpp"
#include "cval/partition.hpp"
#include "cval/randclust.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cval {

inline constexpr int kNumCriteria = static_cast<int>(std::size(kAllCriteria));
inline int criterion_index(Criterion c) { return static_cast<int>(c); }

struct Source {
    bool proper = true;
    MethodId method = MethodId::KMeans;
    RandomMethodId random = RandomMethodId::RKCentroid;

    std::string name() const { return proper ? method_name(method) : random_method_name(random); }
};

// One clustering with its raw and calibrated criterion values.  Values not
// computed stay NaN with the corresponding `computed` bit unset; computed but
// non-finite values are degenerate and are excluded from calibration.
struct ClusteringEntry {
    Source source;
    int k = 0;
    Partition part;
    std::array<double, kNumCriteria> raw;
    std::array<double, kNumCriteria> calibrated;
    std::array<bool, kNumCriteria> computed;
    double ari = std::numeric_limits<double>::quiet_NaN();  // vs truth, when known

    ClusteringEntry() {
        raw.fill(std::numeric_limits<double>::quiet_NaN());
        calibrated.fill(std::numeric_limits<double>::quiet_NaN());
        computed.fill(false);
    }

    void set_raw(Criterion c, double v) {
        raw[criterion_index(c)] = v;
        computed[criterion_index(c)] = true;
    }
    bool has_value(Criterion c) const {
        return computed[criterion_index(c)] && std::isfinite(raw[criterion_index(c)]);
    }
};

struct ClusteringCollection {
    std::vector<ClusteringEntry> entries;
    int kmin = 2, kmax = 2;
    int random_per_generator = 0;  // B
};

enum class CalibrationRegime { PerK, PooledAllK };

// Z-score standardisation of raw values within each calibration group (one
// group per K, or one pooled group).  Degenerate/missing raw values get no
// calibrated value.  Zero-sd groups calibrate to all zeros; a diagnostic line
// is appended when a sink is given.
void zscore_calibrate(ClusteringCollection& col, CalibrationRegime regime,
                      std::vector<std::string>* diagnostics = nullptr);

struct CompositeComponent {
    Criterion id;
    double weight;
    int sign;  // -1 for smaller-is-better components
};

struct CompositeSpec {
    std::string name;
    std::vector<CompositeComponent> components;
};

CompositeSpec composite_a1();
CompositeSpec composite_a2();

// Signed weighted mean of calibrated component values; NaN when any
// component is missing for the entry.
double aggregate(const ClusteringEntry& entry, const CompositeSpec& spec);

struct RankedEntry {
    std::size_t entry_index;
    double score;
};

// Proper clusterings only, best first.  Random clusterings shape the
// calibration statistics but are never candidates.  Ties break by smaller K,
// then method id order.
std::vector<RankedEntry> rank_clusterings(const ClusteringCollection& col, const CompositeSpec& spec);

}  // namespace cval
