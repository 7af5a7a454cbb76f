#pragma once

#include "cval/calibrate.hpp"
#include "cval/csv.hpp"
#include "cval/indexes.hpp"
#include "cval/scenarios.hpp"
#include "cval/stability.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cval {

struct RunConfig {
    // data source: exactly one of csv_path / scenario
    std::string csv_path;
    bool csv_header = false;
    bool csv_class = false;
    std::string scenario;
    int replicates = 1;

    std::vector<MethodId> methods{MethodId::PAM};
    int kmin = 2;
    int kmax = 10;
    std::vector<Criterion> criteria{kAllCriteria, kAllCriteria + kNumCriteria};
    std::vector<CompositeSpec> composites{composite_a1(), composite_a2()};

    int B = 100;   // random clusterings per generator per K
    int A = 50;    // stability repetitions
    int kappa = 10;
    double p = 0.1;
    CalibrationRegime regime = CalibrationRegime::PooledAllK;
    std::uint64_t seed = 1;
    int kmeans_restarts = 10;
    int threads = 0;  // 0 = hardware concurrency

    std::string out_dir;
};

void validate_config(const RunConfig& cfg, std::size_t n);

RunConfig config_from_json_file(const std::string& path);

struct Selection {
    bool valid = false;
    int k = 0;
    double value = 0.0;
    double ari = std::numeric_limits<double>::quiet_NaN();
};

struct ValidationResult {
    ClusteringCollection collection;
    std::vector<std::string> diagnostics;
    // per composite name: proper clusterings best-first
    std::map<std::string, std::vector<RankedEntry>> rankings;
    // selected K per (method, criterion-or-composite name)
    std::map<std::string, std::map<std::string, Selection>> selections;
};

// Full pipeline on one data set: proper clusterings over the K range, raw
// indexes, stability, 4B random clusterings per K, calibration, composite
// aggregation, ranking.  Deterministic given cfg.seed.
ValidationResult run_validation(const RunConfig& cfg, const DataMatrix& data,
                                const std::optional<Partition>& truth);

struct SimulationRow {
    std::string method;
    std::string criterion;
    std::vector<int> k_counts;  // histogram over kmin..kmax
    double mean_ari = std::numeric_limits<double>::quiet_NaN();
    int valid_replicates = 0;
};

struct SimulationSummary {
    std::string scenario;
    int replicates = 0;
    int kmin = 2, kmax = 10;
    std::vector<SimulationRow> rows;
    std::vector<ValidationResult> per_replicate;  // kept for reporting
};

SimulationSummary run_simulation_study(const RunConfig& cfg);

// Output writers (schemas documented in the README).
void write_results_csv(const std::string& path, const ValidationResult& res, int replicate,
                       const std::vector<CompositeSpec>& composites);
void write_summary_txt(const std::string& path, const RunConfig& cfg, const ValidationResult& res);
void write_simulation_csv(const std::string& path, const SimulationSummary& sum);
void write_simulation_table(const std::string& path, const SimulationSummary& sum);
void emit_plots(const std::string& dir, const ValidationResult& res);

}  // namespace cval
