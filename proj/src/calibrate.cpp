#include "cval/calibrate.hpp"

#include <algorithm>
#include <cmath>

namespace cval {

void zscore_calibrate(ClusteringCollection& col, CalibrationRegime regime,
                      std::vector<std::string>* diagnostics) {
    if (col.entries.empty()) throw PartitionError("zscore_calibrate: empty collection");

    std::vector<int> group_keys;
    if (regime == CalibrationRegime::PerK) {
        for (const auto& e : col.entries)
            if (std::find(group_keys.begin(), group_keys.end(), e.k) == group_keys.end())
                group_keys.push_back(e.k);
    } else {
        group_keys.push_back(-1);  // single pooled group
    }

    for (int ci = 0; ci < kNumCriteria; ++ci) {
        for (int key : group_keys) {
            double sum = 0.0, count = 0.0;
            for (const auto& e : col.entries) {
                if (key >= 0 && e.k != key) continue;
                if (!e.has_value(kAllCriteria[ci])) continue;
                sum += e.raw[ci];
                count += 1.0;
            }
            if (count < 2.0) continue;  // not enough non-degenerate values
            const double mean = sum / count;
            double ss = 0.0;
            for (const auto& e : col.entries) {
                if (key >= 0 && e.k != key) continue;
                if (!e.has_value(kAllCriteria[ci])) continue;
                const double dev = e.raw[ci] - mean;
                ss += dev * dev;
            }
            const double sd = std::sqrt(ss / (count - 1.0));
            for (auto& e : col.entries) {
                if (key >= 0 && e.k != key) continue;
                if (!e.has_value(kAllCriteria[ci])) continue;
                e.calibrated[ci] = sd > 0.0 ? (e.raw[ci] - mean) / sd : 0.0;
            }
            if (sd == 0.0 && diagnostics)
                diagnostics->push_back(std::string("zero-variance calibration group for ") +
                                       criterion_name(kAllCriteria[ci]) +
                                       (key >= 0 ? " at K=" + std::to_string(key) : std::string(" (pooled)")));
        }
    }
}

CompositeSpec composite_a1() {
    return {"a1",
            {{Criterion::AveWithin, 1.0, -1},
             {Criterion::PearsonGamma, 1.0, +1},
             {Criterion::Bootstab, 1.0, -1}}};
}

CompositeSpec composite_a2() {
    return {"a2",
            {{Criterion::SepIndex, 1.0, +1},
             {Criterion::WidestGap, 1.0, -1},
             {Criterion::Bootstab, 1.0, -1}}};
}

double aggregate(const ClusteringEntry& entry, const CompositeSpec& spec) {
    if (spec.components.empty()) throw PartitionError("aggregate: empty composite spec");
    double num = 0.0, den = 0.0;
    for (const auto& comp : spec.components) {
        const double v = entry.calibrated[criterion_index(comp.id)];
        if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
        if (!(comp.weight > 0.0)) throw PartitionError("aggregate: weights must be positive");
        num += comp.weight * comp.sign * v;
        den += comp.weight;
    }
    return num / den;
}

std::vector<RankedEntry> rank_clusterings(const ClusteringCollection& col, const CompositeSpec& spec) {
    std::vector<RankedEntry> ranked;
    for (std::size_t i = 0; i < col.entries.size(); ++i) {
        const auto& e = col.entries[i];
        if (!e.source.proper) continue;
        const double score = aggregate(e, spec);
        if (!std::isfinite(score)) continue;
        ranked.push_back({i, score});
    }
    std::sort(ranked.begin(), ranked.end(), [&](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        const auto& ea = col.entries[a.entry_index];
        const auto& eb = col.entries[b.entry_index];
        if (ea.k != eb.k) return ea.k < eb.k;
        return static_cast<int>(ea.source.method) < static_cast<int>(eb.source.method);
    });
    return ranked;
}

}  // namespace cval
