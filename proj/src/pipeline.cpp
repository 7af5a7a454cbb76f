#include "cval/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace cval {

namespace {

void parallel_run(std::vector<std::function<void()>>& tasks, int threads) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || tasks.size() <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int used = std::min<int>(threads, static_cast<int>(tasks.size()));
    for (int w = 0; w < used; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                tasks[i]();
            }
        });
    for (auto& th : pool) th.join();
}

std::string fmt(double v) {
    if (!std::isfinite(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void validate_config(const RunConfig& cfg, std::size_t n) {
    if (cfg.kmin < 2) throw InvalidDataError("config: kmin must be >= 2");
    if (cfg.kmax < cfg.kmin) throw InvalidDataError("config: kmax < kmin");
    if (static_cast<std::size_t>(cfg.kmax) > n - 1) throw InvalidDataError("config: kmax must be <= n-1");
    if (cfg.B < 1 || cfg.A < 1) throw InvalidDataError("config: B and A must be >= 1");
    if (cfg.kappa < 1 || static_cast<std::size_t>(cfg.kappa) > n - 1)
        throw InvalidDataError("config: kappa out of range");
    if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw InvalidDataError("config: p must be in (0,1)");
    if (cfg.methods.empty()) throw InvalidDataError("config: no methods");
}

RunConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidDataError("cannot open config " + path);
    nlohmann::json j;
    in >> j;
    RunConfig cfg;
    if (j.contains("data")) cfg.csv_path = j["data"].get<std::string>();
    if (j.contains("csv_header")) cfg.csv_header = j["csv_header"].get<bool>();
    if (j.contains("csv_class")) cfg.csv_class = j["csv_class"].get<bool>();
    if (j.contains("scenario")) cfg.scenario = j["scenario"].get<std::string>();
    if (j.contains("replicates")) cfg.replicates = j["replicates"].get<int>();
    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto& m : j["methods"]) {
            MethodId id;
            if (!parse_method(m.get<std::string>(), id))
                throw InvalidDataError("config: unknown method " + m.get<std::string>());
            cfg.methods.push_back(id);
        }
    }
    if (j.contains("kmin")) cfg.kmin = j["kmin"].get<int>();
    if (j.contains("kmax")) cfg.kmax = j["kmax"].get<int>();
    if (j.contains("indexes")) {
        cfg.criteria.clear();
        for (const auto& c : j["indexes"]) {
            Criterion id;
            if (!parse_criterion(c.get<std::string>(), id))
                throw InvalidDataError("config: unknown index " + c.get<std::string>());
            cfg.criteria.push_back(id);
        }
    }
    if (j.contains("composites")) {
        cfg.composites.clear();
        for (const auto& c : j["composites"]) {
            if (c.is_string()) {
                const std::string name = c.get<std::string>();
                if (name == "a1")
                    cfg.composites.push_back(composite_a1());
                else if (name == "a2")
                    cfg.composites.push_back(composite_a2());
                else
                    throw InvalidDataError("config: unknown composite " + name);
            } else {
                CompositeSpec spec;
                spec.name = c.at("name").get<std::string>();
                for (const auto& comp : c.at("components")) {
                    Criterion id;
                    if (!parse_criterion(comp.at("index").get<std::string>(), id))
                        throw InvalidDataError("config: unknown index in composite");
                    spec.components.push_back(
                        {id, comp.value("weight", 1.0), larger_is_better(id) ? +1 : -1});
                }
                cfg.composites.push_back(std::move(spec));
            }
        }
    }
    if (j.contains("B")) cfg.B = j["B"].get<int>();
    if (j.contains("A")) cfg.A = j["A"].get<int>();
    if (j.contains("kappa")) cfg.kappa = j["kappa"].get<int>();
    if (j.contains("p")) cfg.p = j["p"].get<double>();
    if (j.contains("regime")) {
        const std::string r = j["regime"].get<std::string>();
        if (r == "pooled")
            cfg.regime = CalibrationRegime::PooledAllK;
        else if (r == "perk")
            cfg.regime = CalibrationRegime::PerK;
        else
            throw InvalidDataError("config: regime must be pooled or perk");
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("restarts")) cfg.kmeans_restarts = j["restarts"].get<int>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    return cfg;
}

namespace {

bool wants(const RunConfig& cfg, Criterion c) {
    return std::find(cfg.criteria.begin(), cfg.criteria.end(), c) != cfg.criteria.end();
}

void compute_base_indexes(ClusteringEntry& e, const DissimilarityMatrix& d, const RunConfig& cfg) {
    if (wants(cfg, Criterion::ASW)) e.set_raw(Criterion::ASW, asw(d, e.part));
    if (wants(cfg, Criterion::CH)) e.set_raw(Criterion::CH, calinski_harabasz(d, e.part));
    if (wants(cfg, Criterion::Dunn)) e.set_raw(Criterion::Dunn, dunn(d, e.part));
    if (wants(cfg, Criterion::PearsonGamma)) e.set_raw(Criterion::PearsonGamma, pearson_gamma(d, e.part));
    if (wants(cfg, Criterion::AveWithin)) e.set_raw(Criterion::AveWithin, ave_within(d, e.part));
    if (wants(cfg, Criterion::SepIndex)) e.set_raw(Criterion::SepIndex, sep_index(d, e.part, cfg.p));
    if (wants(cfg, Criterion::WidestGap)) e.set_raw(Criterion::WidestGap, widest_gap(d, e.part));
    if (wants(cfg, Criterion::Entropy)) e.set_raw(Criterion::Entropy, entropy(e.part));
}

Selection best_selection(const ClusteringCollection& col, MethodId m,
                         const std::function<double(const ClusteringEntry&)>& score, bool larger_better) {
    Selection sel;
    for (const auto& e : col.entries) {
        if (!e.source.proper || e.source.method != m || e.part.n() == 0) continue;
        const double v = score(e);
        if (!std::isfinite(v)) continue;
        const bool better = !sel.valid || (larger_better ? v > sel.value : v < sel.value);
        if (better) {
            sel.valid = true;
            sel.value = v;
            sel.k = e.k;
            sel.ari = e.ari;
        }
    }
    return sel;
}

}  // namespace

ValidationResult run_validation(const RunConfig& cfg, const DataMatrix& data,
                                const std::optional<Partition>& truth) {
    validate_config(cfg, data.rows());
    ValidationResult res;
    std::mutex diag_mutex;
    auto note = [&](const std::string& s) {
        std::lock_guard<std::mutex> lock(diag_mutex);
        res.diagnostics.push_back(s);
    };

    const DissimilarityMatrix d = euclidean_dissimilarity(data);
    const NeighborTable nt(d, cfg.kappa);
    const RngSeed root(cfg.seed);

    ClusteringCollection& col = res.collection;
    col.kmin = cfg.kmin;
    col.kmax = cfg.kmax;
    col.random_per_generator = cfg.B;

    const int nk = cfg.kmax - cfg.kmin + 1;
    const std::size_t n_proper = cfg.methods.size() * static_cast<std::size_t>(nk);
    const std::size_t n_random = 4u * cfg.B * static_cast<std::size_t>(nk);
    col.entries.resize(n_proper + n_random);

    std::vector<CvnnComponents> comps(col.entries.size(), {0.0, 0.0});
    std::vector<char> comps_ok(col.entries.size(), 0);

    std::vector<std::function<void()>> tasks;

    // proper clusterings: one task per (method, K) cell
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        for (int k = cfg.kmin; k <= cfg.kmax; ++k) {
            const std::size_t slot = mi * nk + (k - cfg.kmin);
            tasks.push_back([&, mi, k, slot] {
                ClusteringEntry& e = col.entries[slot];
                const MethodId m = cfg.methods[mi];
                e.source = {true, m, RandomMethodId::RKCentroid};
                e.k = k;
                try {
                    e.part = run_method(m, &data, d, k, root.child({1, mi, static_cast<std::uint64_t>(k)}),
                                        cfg.kmeans_restarts);
                } catch (const std::exception& ex) {
                    note(std::string("method ") + method_name(m) + " failed at K=" + std::to_string(k) +
                         ": " + ex.what());
                    return;
                }
                compute_base_indexes(e, d, cfg);
                if (wants(cfg, Criterion::CVNN)) {
                    comps[slot] = cvnn_components(nt, d, e.part, cfg.kappa);
                    comps_ok[slot] = 1;
                }
                if (truth) e.ari = adjusted_rand_index(e.part, *truth);
                // stability plans depend only on (seed, K, a): shared across methods
                if (wants(cfg, Criterion::PS)) {
                    try {
                        StabilityConfig sc{cfg.A, root.child({2, static_cast<std::uint64_t>(k)})};
                        e.set_raw(Criterion::PS, prediction_strength(m, &data, d, k, sc));
                    } catch (const std::exception& ex) {
                        note(std::string("ps failed for ") + method_name(m) + " at K=" +
                             std::to_string(k) + ": " + ex.what());
                    }
                }
                if (wants(cfg, Criterion::Bootstab)) {
                    StabilityConfig sc{cfg.A, root.child({3, static_cast<std::uint64_t>(k)})};
                    e.set_raw(Criterion::Bootstab, bootstab(m, &data, d, k, sc));
                }
            });
        }
    }

    // random clusterings for calibration
    const RandomMethodId generators[4] = {RandomMethodId::RKCentroid, RandomMethodId::RKSingle,
                                          RandomMethodId::RKComplete, RandomMethodId::RKAverage};
    for (int k = cfg.kmin; k <= cfg.kmax; ++k)
        for (int g = 0; g < 4; ++g)
            for (int b = 0; b < cfg.B; ++b) {
                const std::size_t slot = n_proper +
                                         static_cast<std::size_t>(k - cfg.kmin) * 4 * cfg.B +
                                         static_cast<std::size_t>(g) * cfg.B + b;
                tasks.push_back([&, k, g, b, slot] {
                    ClusteringEntry& e = col.entries[slot];
                    e.source = {false, MethodId::KMeans, generators[g]};
                    e.k = k;
                    e.part = random_clustering(
                        generators[g], d, k,
                        root.child({4, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(g),
                                    static_cast<std::uint64_t>(b)}));
                    compute_base_indexes(e, d, cfg);
                });
            }

    parallel_run(tasks, cfg.threads);

    // CVNN normalises over the set of considered (proper) clusterings
    if (wants(cfg, Criterion::CVNN)) {
        std::vector<std::size_t> idx;
        std::vector<CvnnComponents> pool;
        for (std::size_t i = 0; i < col.entries.size(); ++i)
            if (comps_ok[i]) {
                idx.push_back(i);
                pool.push_back(comps[i]);
            }
        if (!pool.empty()) {
            const std::vector<double> scores = cvnn_aggregate(pool);
            for (std::size_t t = 0; t < idx.size(); ++t)
                col.entries[idx[t]].set_raw(Criterion::CVNN, scores[t]);
        }
    }

    zscore_calibrate(col, cfg.regime, &res.diagnostics);

    for (const auto& spec : cfg.composites) res.rankings[spec.name] = rank_clusterings(col, spec);

    for (MethodId m : cfg.methods) {
        auto& per_method = res.selections[method_name(m)];
        for (Criterion c : cfg.criteria) {
            per_method[criterion_name(c)] = best_selection(
                col, m, [&](const ClusteringEntry& e) { return e.raw[criterion_index(c)]; },
                larger_is_better(c));
        }
        for (const auto& spec : cfg.composites) {
            per_method[spec.name] = best_selection(
                col, m, [&](const ClusteringEntry& e) { return aggregate(e, spec); }, true);
        }
    }
    return res;
}

SimulationSummary run_simulation_study(const RunConfig& cfg) {
    if (!is_scenario_name(cfg.scenario)) throw InvalidDataError("simulate: needs a scenario source");
    if (cfg.replicates < 1) throw InvalidDataError("simulate: replicates must be >= 1");

    SimulationSummary sum;
    sum.scenario = cfg.scenario;
    sum.replicates = cfg.replicates;
    sum.kmin = cfg.kmin;
    sum.kmax = cfg.kmax;
    sum.per_replicate.resize(cfg.replicates);

    const RngSeed root(cfg.seed);
    std::vector<std::function<void()>> tasks;
    for (int r = 0; r < cfg.replicates; ++r)
        tasks.push_back([&, r] {
            ScenarioData sd = generate_scenario(cfg.scenario, root.child({10, static_cast<std::uint64_t>(r)}));
            RunConfig rep = cfg;
            rep.seed = root.child({11, static_cast<std::uint64_t>(r)}).value();
            rep.threads = 1;  // replicate is the unit of parallelism
            sum.per_replicate[r] = run_validation(rep, sd.data, sd.truth);
        });
    parallel_run(tasks, cfg.threads);

    const int nk = cfg.kmax - cfg.kmin + 1;
    for (MethodId m : cfg.methods) {
        std::vector<std::string> names;
        for (Criterion c : cfg.criteria) names.push_back(criterion_name(c));
        for (const auto& spec : cfg.composites) names.push_back(spec.name);
        for (const auto& name : names) {
            SimulationRow row;
            row.method = method_name(m);
            row.criterion = name;
            row.k_counts.assign(nk, 0);
            double ari_sum = 0.0;
            int ari_count = 0;
            for (const auto& res : sum.per_replicate) {
                const auto& sel = res.selections.at(method_name(m)).at(name);
                if (!sel.valid) continue;
                ++row.k_counts[sel.k - cfg.kmin];
                ++row.valid_replicates;
                if (std::isfinite(sel.ari)) {
                    ari_sum += sel.ari;
                    ++ari_count;
                }
            }
            if (ari_count > 0) row.mean_ari = ari_sum / ari_count;
            sum.rows.push_back(std::move(row));
        }
    }
    return sum;
}

// ---------------------------------------------------------------------------
// output writers

void write_results_csv(const std::string& path, const ValidationResult& res, int replicate,
                       const std::vector<CompositeSpec>& composites) {
    std::ofstream out(path);
    if (!out) throw InvalidDataError("cannot write " + path);
    out << "replicate,source,kind,k,criterion,raw,calibrated,degenerate,ari\n";
    for (const auto& e : res.collection.entries) {
        if (e.part.n() == 0) continue;
        const std::string kind = e.source.proper ? "proper" : "random";
        for (int ci = 0; ci < kNumCriteria; ++ci) {
            if (!e.computed[ci]) continue;
            const bool degen = !std::isfinite(e.raw[ci]);
            out << replicate << ',' << e.source.name() << ',' << kind << ',' << e.k << ','
                << criterion_name(kAllCriteria[ci]) << ',' << fmt(e.raw[ci]) << ','
                << fmt(e.calibrated[ci]) << ',' << (degen ? 1 : 0) << ',' << fmt(e.ari) << '\n';
        }
        for (const auto& spec : composites) {
            if (!e.source.proper) continue;
            const double v = aggregate(e, spec);
            if (!std::isfinite(v)) continue;
            out << replicate << ',' << e.source.name() << ',' << kind << ',' << e.k << ',' << spec.name
                << ",," << fmt(v) << ",0," << fmt(e.ari) << '\n';
        }
    }
}

void write_summary_txt(const std::string& path, const RunConfig& cfg, const ValidationResult& res) {
    std::ofstream out(path);
    if (!out) throw InvalidDataError("cannot write " + path);
    out << "cluster validation summary\n";
    out << "K range: " << cfg.kmin << ".." << cfg.kmax << "  B=" << cfg.B << "  A=" << cfg.A
        << "  seed=" << cfg.seed << "  regime="
        << (cfg.regime == CalibrationRegime::PooledAllK ? "pooled" : "perk") << "\n\n";

    out << "selected K per method and criterion:\n";
    for (const auto& [method, sels] : res.selections) {
        out << "  " << method << ":\n";
        for (const auto& [name, sel] : sels) {
            out << "    " << name << ": ";
            if (sel.valid) {
                out << "K=" << sel.k << " (value " << fmt(sel.value);
                if (std::isfinite(sel.ari)) out << ", ARI " << fmt(sel.ari);
                out << ")";
            } else {
                out << "no valid selection";
            }
            out << '\n';
        }
    }

    for (const auto& [name, ranked] : res.rankings) {
        out << "\ntop clusterings by " << name << ":\n";
        for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i) {
            const auto& e = res.collection.entries[ranked[i].entry_index];
            out << "  " << (i + 1) << ". " << e.source.name() << " K=" << e.k << "  score "
                << fmt(ranked[i].score);
            if (std::isfinite(e.ari)) out << "  ARI " << fmt(e.ari);
            out << '\n';
        }
    }

    if (!res.diagnostics.empty()) {
        out << "\ndiagnostics:\n";
        auto sorted = res.diagnostics;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& s : sorted) out << "  " << s << '\n';
    }
}

void write_simulation_csv(const std::string& path, const SimulationSummary& sum) {
    std::ofstream out(path);
    if (!out) throw InvalidDataError("cannot write " + path);
    out << "scenario,method,criterion,mean_ari";
    for (int k = sum.kmin; k <= sum.kmax; ++k) out << ",k" << k;
    out << '\n';
    for (const auto& row : sum.rows) {
        out << sum.scenario << ',' << row.method << ',' << row.criterion << ',' << fmt(row.mean_ari);
        for (int c : row.k_counts) out << ',' << c;
        out << '\n';
    }
}

void write_simulation_table(const std::string& path, const SimulationSummary& sum) {
    std::ofstream out(path);
    if (!out) throw InvalidDataError("cannot write " + path);
    out << "simulation study: " << sum.scenario << ", " << sum.replicates
        << " replicates (counts of selected K)\n\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-10s %-14s %8s", "method", "criterion", "meanARI");
    out << buf;
    for (int k = sum.kmin; k <= sum.kmax; ++k) {
        std::snprintf(buf, sizeof(buf), " %4d", k);
        out << buf;
    }
    out << '\n';
    for (const auto& row : sum.rows) {
        std::snprintf(buf, sizeof(buf), "%-10s %-14s %8s", row.method.c_str(), row.criterion.c_str(),
                      std::isfinite(row.mean_ari) ? fmt(row.mean_ari).substr(0, 6).c_str() : "-");
        out << buf;
        for (int c : row.k_counts) {
            std::snprintf(buf, sizeof(buf), " %4d", c);
            out << buf;
        }
        out << '\n';
    }
}

namespace {

constexpr double kPlotW = 720, kPlotH = 480, kMargin = 50;

double map_x(double k, double kmin, double kmax) {
    if (kmax == kmin) return kPlotW / 2;
    return kMargin + (k - kmin) / (kmax - kmin) * (kPlotW - 2 * kMargin);
}

double map_y(double v, double lo, double hi) {
    if (hi == lo) return kPlotH / 2;
    return kPlotH - kMargin - (v - lo) / (hi - lo) * (kPlotH - 2 * kMargin);
}

}  // namespace

void emit_plots(const std::string& dir, const ValidationResult& res) {
    std::filesystem::create_directories(dir);
    const auto& col = res.collection;
    static const char* colors[] = {"#1b6ca8", "#c23b22", "#2e8540", "#8e44ad", "#c77f00", "#16828c"};

    for (int ci = 0; ci < kNumCriteria; ++ci) {
        const Criterion crit = kAllCriteria[ci];
        // value range over non-degenerate entries
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        bool any = false, skipped_degenerate = false;
        for (const auto& e : col.entries) {
            if (!e.computed[ci]) continue;
            if (!std::isfinite(e.raw[ci])) {
                skipped_degenerate = true;
                continue;
            }
            lo = std::min(lo, e.raw[ci]);
            hi = std::max(hi, e.raw[ci]);
            any = true;
        }
        std::ostringstream svg;
        svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kPlotW << "' height='" << kPlotH
            << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
        svg << "<text x='" << kMargin << "' y='20' font-size='14'>" << criterion_name(crit)
            << " vs K (lines: methods; letters: random clusterings)</text>\n";
        if (!any) {
            svg << "<text x='" << kMargin << "' y='45' font-size='12'>no values to plot</text>\n</svg>\n";
        } else {
            if (skipped_degenerate)
                svg << "<text x='" << kMargin
                    << "' y='38' font-size='11' fill='#888'>degenerate values omitted</text>\n";
            // random clustering marks
            for (const auto& e : col.entries) {
                if (e.source.proper || !e.computed[ci] || !std::isfinite(e.raw[ci])) continue;
                svg << "<text x='" << map_x(e.k, col.kmin, col.kmax) << "' y='"
                    << map_y(e.raw[ci], lo, hi) << "' font-size='9' fill='#aaa'>"
                    << random_method_mark(e.source.random) << "</text>\n";
            }
            // one polyline per method
            int color = 0;
            std::vector<std::string> seen;
            for (const auto& e : col.entries) {
                if (!e.source.proper) continue;
                const std::string m = e.source.name();
                if (std::find(seen.begin(), seen.end(), m) != seen.end()) continue;
                seen.push_back(m);
                std::ostringstream pts;
                for (const auto& e2 : col.entries) {
                    if (!e2.source.proper || e2.source.name() != m) continue;
                    if (!e2.computed[ci] || !std::isfinite(e2.raw[ci])) continue;
                    pts << map_x(e2.k, col.kmin, col.kmax) << ',' << map_y(e2.raw[ci], lo, hi) << ' ';
                }
                const char* c = colors[color % 6];
                svg << "<polyline fill='none' stroke='" << c << "' points='" << pts.str() << "'/>\n";
                svg << "<text x='" << kPlotW - kMargin + 4 << "' y='" << 30 + 14 * color
                    << "' font-size='11' fill='" << c << "'>" << m << "</text>\n";
                ++color;
            }
            // axes
            svg << "<line x1='" << kMargin << "' y1='" << kPlotH - kMargin << "' x2='" << kPlotW - kMargin
                << "' y2='" << kPlotH - kMargin << "' stroke='black'/>\n";
            for (int k = col.kmin; k <= col.kmax; ++k)
                svg << "<text x='" << map_x(k, col.kmin, col.kmax) << "' y='" << kPlotH - kMargin + 16
                    << "' font-size='10' text-anchor='middle'>" << k << "</text>\n";
            svg << "</svg>\n";
        }
        std::ofstream out(dir + "/" + criterion_name(crit) + ".svg");
        out << svg.str();
    }
}

}  // namespace cval
