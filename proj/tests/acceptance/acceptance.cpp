// Acceptance gate: each numbered criterion prints exactly one PASS/FAIL line.
// Usage: acceptance <criterion 1..6>

#include "cval/pipeline.hpp"
#include "../oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cval;

namespace {

std::vector<std::string> g_problems;

void expect(bool ok, const std::string& what) {
    if (!ok) g_problems.push_back(what);
}

// ---------------------------------------------------------------------------
// simulation-study helpers (criteria 1-4)

SimulationSummary run_study(const std::string& scenario, MethodId method) {
    RunConfig cfg;
    cfg.scenario = scenario;
    cfg.replicates = 20;
    cfg.methods = {method};
    cfg.kmin = 2;
    cfg.kmax = 10;
    cfg.B = 20;
    cfg.A = 25;
    cfg.seed = 20230815;
    return run_simulation_study(cfg);
}

const SimulationRow& row_of(const SimulationSummary& sum, const std::string& criterion) {
    for (const auto& r : sum.rows)
        if (r.criterion == criterion) return r;
    throw std::runtime_error("missing row " + criterion);
}

int count_at(const SimulationSummary& sum, const std::string& criterion, int k) {
    const auto& r = row_of(sum, criterion);
    return r.k_counts[k - sum.kmin];
}

std::string histogram(const SimulationSummary& sum, const std::string& criterion) {
    std::ostringstream out;
    const auto& r = row_of(sum, criterion);
    out << criterion << " K-counts [";
    for (std::size_t i = 0; i < r.k_counts.size(); ++i)
        out << (i ? "," : "") << r.k_counts[i];
    out << "]";
    return out.str();
}

// ---------------------------------------------------------------------------
// criteria

void criterion1() {
    const auto sum = run_study("scenario1", MethodId::PAM);
    for (const char* c : {"ch", "pearsongamma", "bootstab", "cvnn", "a1"})
        expect(count_at(sum, c, 3) >= 18,
               std::string(c) + " selected K=3 only " + std::to_string(count_at(sum, c, 3)) +
                   "/20 times; " + histogram(sum, c));
    const double a1_ari = row_of(sum, "a1").mean_ari;
    expect(a1_ari >= 0.95, "a1 mean ARI " + std::to_string(a1_ari) + " < 0.95");
}

void criterion2() {
    const auto sum = run_study("scenario4", MethodId::CompleteLinkage);
    for (const char* c : {"asw", "dunn", "a2"})
        expect(count_at(sum, c, 2) >= 19,
               std::string(c) + " selected K=2 only " + std::to_string(count_at(sum, c, 2)) +
                   "/20 times; " + histogram(sum, c));
    expect(count_at(sum, "ch", 2) < count_at(sum, "a2", 2),
           "ch K=2 count " + std::to_string(count_at(sum, "ch", 2)) + " not below a2 count " +
               std::to_string(count_at(sum, "a2", 2)));
}

void criterion3() {
    const auto sum = run_study("scenario5", MethodId::SingleLinkage);
    for (const char* c : {"dunn", "ps"})
        expect(count_at(sum, c, 2) == 20,
               std::string(c) + " selected K=2 only " + std::to_string(count_at(sum, c, 2)) +
                   "/20 times; " + histogram(sum, c));
    expect(count_at(sum, "a2", 2) >= 18,
           "a2 K=2 count " + std::to_string(count_at(sum, "a2", 2)) + " < 18; " +
               histogram(sum, "a2") +
               " (known shortfall at this reduced Monte Carlo scale: with A=25 bootstrap "
               "pairs the K=2 stability estimate occasionally spikes when resampling "
               "splits the outer ring, and with a single method the stability z-scores "
               "are standardised over only 9 pooled values, so one spike can outweigh "
               "the separation advantage of K=2; systematic across master seeds)");
    expect(count_at(sum, "a1", 2) <= 2,
           "a1 K=2 count " + std::to_string(count_at(sum, "a1", 2)) + " > 2 (expected near 0); " +
               histogram(sum, "a1"));
}

void criterion4() {
    // single linkage stands in for spectral clustering here (out of scope);
    // the moons are separated by construction, so the separation-driven
    // criteria must still find K=2
    const auto sum = run_study("scenario6", MethodId::SingleLinkage);
    for (const char* c : {"dunn", "a2"})
        expect(count_at(sum, c, 2) >= 18,
               std::string(c) + " selected K=2 only " + std::to_string(count_at(sum, c, 2)) +
                   "/20 times; " + histogram(sum, c));
}

// ---------------------------------------------------------------------------
// criterion 5: property suite

void check_perk_moments() {
    std::mt19937_64 rng(501);
    ClusteringCollection col;
    col.kmin = 2;
    col.kmax = 6;
    std::uniform_real_distribution<double> u(-4.0, 9.0);
    for (int k = 2; k <= 6; ++k)
        for (int j = 0; j < 15; ++j) {
            ClusteringEntry e;
            e.source = {j < 3, MethodId::PAM, RandomMethodId::RKSingle};
            e.k = k;
            e.part = Partition(std::vector<int>{0, 1}, 2);
            for (Criterion c : {Criterion::ASW, Criterion::CH, Criterion::SepIndex})
                e.set_raw(c, u(rng));
            col.entries.push_back(e);
        }
    zscore_calibrate(col, CalibrationRegime::PerK);
    for (int k = 2; k <= 6; ++k)
        for (Criterion c : {Criterion::ASW, Criterion::CH, Criterion::SepIndex}) {
            std::vector<double> vals;
            for (const auto& e : col.entries)
                if (e.k == k) vals.push_back(e.calibrated[criterion_index(c)]);
            double mean = 0.0;
            for (double v : vals) mean += v;
            mean /= vals.size();
            double var = 0.0;
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= vals.size() - 1;
            expect(std::fabs(mean) <= 1e-12, "per-K calibrated mean off at K=" + std::to_string(k));
            expect(std::fabs(std::sqrt(var) - 1.0) <= 1e-12,
                   "per-K calibrated sd off at K=" + std::to_string(k));
        }
}

bool close(double a, double b, double rel) {
    if (a == b) return true;
    return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

void check_index_oracles() {
    std::mt19937_64 rng(502);
    std::uniform_int_distribution<int> nn(4, 12), kk(2, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = nn(rng);
        const int k = std::min(n - 1, kk(rng));
        const auto d = oracle::random_dissimilarity(n, rng);
        const auto p = oracle::random_partition(n, k, rng);
        const std::string tag = " (trial " + std::to_string(trial) + ")";
        expect(close(asw(d, p), oracle::asw(d, p), 1e-10), "asw oracle mismatch" + tag);
        expect(close(calinski_harabasz(d, p), oracle::calinski_harabasz(d, p), 1e-10),
               "ch oracle mismatch" + tag);
        expect(close(dunn(d, p), oracle::dunn(d, p), 1e-10), "dunn oracle mismatch" + tag);
        expect(close(pearson_gamma(d, p), oracle::pearson_gamma(d, p), 1e-10),
               "pearsongamma oracle mismatch" + tag);
        expect(close(ave_within(d, p), oracle::ave_within(d, p), 1e-10),
               "avewithin oracle mismatch" + tag);
        expect(close(sep_index(d, p, 0.25), oracle::sep_index(d, p, 0.25), 1e-10),
               "sepindex oracle mismatch" + tag);
        expect(close(widest_gap(d, p), oracle::widest_gap_exhaustive(d, p), 1e-10),
               "widestgap MST vs exhaustive mismatch" + tag);
        expect(close(entropy(p), oracle::entropy(p), 1e-10), "entropy oracle mismatch" + tag);
        const auto c = cvnn_components(d, p, std::min(n - 1, 4));
        expect(close(c.sep, oracle::cvnn_sep(d, p, std::min(n - 1, 4)), 1e-10),
               "cvnn sep oracle mismatch" + tag);
    }
}

void check_invariances() {
    std::mt19937_64 rng(503);
    std::uniform_int_distribution<int> nn(5, 12), kk(2, 4);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = nn(rng);
        const auto d = oracle::random_dissimilarity(n, rng);
        const auto p = oracle::random_partition(n, kk(rng), rng);

        // cluster relabeling
        std::vector<int> perm(p.num_clusters());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> labels(p.n());
        for (std::size_t i = 0; i < p.n(); ++i) labels[i] = perm[p.label(i)];
        const Partition q(labels, p.num_clusters());

        // dissimilarity scaling
        const double c = 3.5;
        DissimilarityMatrix dc(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) dc.set(i, j, c * d(i, j));

        expect(close(asw(d, p), asw(d, q), 1e-12) && close(asw(dc, p), asw(d, p), 1e-12),
               "asw invariance violated");
        expect(close(dunn(d, p), dunn(d, q), 1e-12) && close(dunn(dc, p), dunn(d, p), 1e-12),
               "dunn invariance violated");
        expect(close(calinski_harabasz(d, p), calinski_harabasz(d, q), 1e-12) &&
                   close(calinski_harabasz(dc, p), calinski_harabasz(d, p), 1e-12),
               "ch invariance violated");
        const double pg = pearson_gamma(d, p);
        if (std::isfinite(pg))
            expect(close(pg, pearson_gamma(d, q), 1e-12) && close(pearson_gamma(dc, p), pg, 1e-12),
                   "pearsongamma invariance violated");
        expect(close(ave_within(d, p), ave_within(d, q), 1e-12) &&
                   close(ave_within(dc, p), c * ave_within(d, p), 1e-12),
               "avewithin relabel/scale behaviour violated");
        expect(close(sep_index(d, p, 0.2), sep_index(d, q, 0.2), 1e-12) &&
                   close(sep_index(dc, p, 0.2), c * sep_index(d, p, 0.2), 1e-12),
               "sepindex relabel/scale behaviour violated");
        expect(close(widest_gap(d, p), widest_gap(d, q), 1e-12) &&
                   close(widest_gap(dc, p), c * widest_gap(d, p), 1e-12),
               "widestgap relabel/scale behaviour violated");
        expect(close(entropy(p), entropy(q), 1e-12), "entropy relabel invariance violated");
    }
}

void check_random_generators() {
    std::mt19937_64 rng(504);
    std::uniform_int_distribution<int> nn(4, 10), kk(2, 4);
    for (int trial = 0; trial < 80; ++trial) {
        const int n = nn(rng);
        const int k = std::min(n, kk(rng));
        const auto d = oracle::random_dissimilarity(n, rng);
        for (RandomMethodId m : {RandomMethodId::RKCentroid, RandomMethodId::RKSingle,
                                 RandomMethodId::RKComplete, RandomMethodId::RKAverage}) {
            const auto p = random_clustering(m, d, k, RngSeed(trial * 11 + static_cast<int>(m)));
            expect(p.n() == static_cast<std::size_t>(n) && p.num_clusters() == k,
                   "random generator emitted an invalid partition");
        }
        // Algorithm-2 trace equivalence
        std::vector<int> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> seeds(pool.begin(), pool.begin() + k);
        for (RandomLinkage v :
             {RandomLinkage::Single, RandomLinkage::Complete, RandomLinkage::Average}) {
            expect(grow_from_seeds(d, seeds, v).labels() ==
                       oracle::linkage_trace(d, seeds, v).labels(),
                   "random linkage growth deviates from the Algorithm-2 trace");
        }
    }
}

void check_ari_contract() {
    const Partition a({0, 0, 1, 1, 2}, 3);
    const Partition b({1, 1, 2, 2, 0}, 3);
    expect(adjusted_rand_index(a, b) == 1.0, "ARI not 1 on identical partitions");
    const Partition c1({0, 0, 1, 1}, 2), c2({0, 1, 0, 1}, 2);
    expect(std::fabs(adjusted_rand_index(c1, c2) + 0.5) <= 1e-12,
           "ARI not -0.5 on the crossing example");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_determinism() {
    RunConfig cfg;
    cfg.scenario = "scenario1";
    cfg.methods = {MethodId::PAM, MethodId::SingleLinkage};
    cfg.kmin = 2;
    cfg.kmax = 5;
    cfg.B = 4;
    cfg.A = 5;
    cfg.seed = 77;
    const auto sd = generate_scenario(cfg.scenario, RngSeed(7));

    cfg.threads = 4;
    const auto r1 = run_validation(cfg, sd.data, sd.truth);
    cfg.threads = 1;
    const auto r2 = run_validation(cfg, sd.data, sd.truth);
    const std::string p1 = "/tmp/cval_accept_1.csv", p2 = "/tmp/cval_accept_2.csv";
    write_results_csv(p1, r1, 0, cfg.composites);
    write_results_csv(p2, r2, 0, cfg.composites);
    expect(slurp(p1) == slurp(p2), "results.csv not byte-identical across reruns");
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

void criterion5() {
    check_perk_moments();
    check_index_oracles();
    check_invariances();
    check_random_generators();
    check_ari_contract();
    check_determinism();
}

// ---------------------------------------------------------------------------
// criterion 6: aggregation contract

void criterion6() {
    std::mt19937_64 rng(601);
    std::uniform_real_distribution<double> uval(-5.0, 5.0), uw(0.1, 4.0), uc(0.1, 50.0),
        ushift(-20.0, 20.0);
    const Criterion comps[3] = {Criterion::ASW, Criterion::AveWithin, Criterion::SepIndex};

    for (int trial = 0; trial < 50; ++trial) {
        ClusteringCollection base;
        base.kmin = 2;
        base.kmax = 4;
        for (int k = 2; k <= 4; ++k)
            for (int j = 0; j < 10; ++j) {
                ClusteringEntry e;
                e.source = {j < 3, j == 0 ? MethodId::PAM : MethodId::KMeans,
                            RandomMethodId::RKAverage};
                e.k = k;
                e.part = Partition(std::vector<int>{0, 1}, 2);
                for (Criterion c : comps) e.set_raw(c, uval(rng));
                base.entries.push_back(e);
            }

        CompositeSpec spec{"t", {}};
        for (Criterion c : comps) spec.components.push_back({c, uw(rng), larger_is_better(c) ? 1 : -1});

        auto argmax = [&](ClusteringCollection col, const CompositeSpec& s) {
            zscore_calibrate(col, CalibrationRegime::PooledAllK);
            return rank_clusterings(col, s).front().entry_index;
        };

        const std::size_t winner = argmax(base, spec);

        // positive rescaling of the whole weight vector
        CompositeSpec scaled = spec;
        const double c = uc(rng);
        for (auto& comp : scaled.components) comp.weight *= c;
        expect(argmax(base, scaled) == winner,
               "weight rescaling changed the composite argmax (trial " + std::to_string(trial) + ")");

        // location shift of one index's raw values across the collection
        const Criterion shifted = comps[trial % 3];
        const double delta = ushift(rng);
        ClusteringCollection moved = base;
        for (auto& e : moved.entries)
            e.raw[criterion_index(shifted)] += delta;
        expect(argmax(moved, spec) == winner,
               "per-index location shift changed the composite argmax (trial " +
                   std::to_string(trial) + ")");
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <criterion 1..6>\n";
        return 2;
    }
    const int crit = std::atoi(argv[1]);
    std::string label;
    try {
        switch (crit) {
            case 1:
                label = "scenario1 + pam: ch/pearsongamma/bootstab/cvnn/a1 find K=3";
                criterion1();
                break;
            case 2:
                label = "scenario4 + complete: asw/dunn/a2 find K=2, ch trails a2";
                criterion2();
                break;
            case 3:
                label = "scenario5 + single: dunn/ps/a2 find K=2, a1 does not";
                criterion3();
                break;
            case 4:
                label = "scenario6 + single (stand-in adaptation): dunn/a2 find K=2";
                criterion4();
                break;
            case 5:
                label = "property suite: calibration moments, oracles, invariances, determinism";
                criterion5();
                break;
            case 6:
                label = "aggregation contract: weight rescaling and location shifts keep argmax";
                criterion6();
                break;
            default:
                std::cerr << "unknown criterion " << crit << "\n";
                return 2;
        }
    } catch (const std::exception& ex) {
        g_problems.push_back(std::string("exception: ") + ex.what());
    }

    if (g_problems.empty()) {
        std::cout << "PASS criterion " << crit << ": " << label << "\n";
        return 0;
    }
    std::cout << "FAIL criterion " << crit << ": " << label << "\n";
    for (const auto& p : g_problems) std::cout << "  - " << p << "\n";
    return 1;
}
