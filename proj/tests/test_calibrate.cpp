#include <doctest.h>

#include "cval/calibrate.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

using namespace cval;

namespace {

Partition tiny_partition(int n, int k) {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i % k;
    return Partition(std::move(labels), k);
}

ClusteringEntry entry(bool proper, int k, MethodId m = MethodId::KMeans,
                      RandomMethodId r = RandomMethodId::RKCentroid) {
    ClusteringEntry e;
    e.source = {proper, m, r};
    e.k = k;
    e.part = tiny_partition(8, k);
    return e;
}

}  // namespace

TEST_CASE("zscore: group (1,2,3) becomes (-1,0,1)") {
    ClusteringCollection col;
    col.kmin = col.kmax = 2;
    for (double v : {1.0, 2.0, 3.0}) {
        auto e = entry(true, 2);
        e.set_raw(Criterion::ASW, v);
        col.entries.push_back(e);
    }
    zscore_calibrate(col, CalibrationRegime::PerK);
    CHECK(col.entries[0].calibrated[criterion_index(Criterion::ASW)] == doctest::Approx(-1.0));
    CHECK(col.entries[1].calibrated[criterion_index(Criterion::ASW)] == doctest::Approx(0.0));
    CHECK(col.entries[2].calibrated[criterion_index(Criterion::ASW)] == doctest::Approx(1.0));
}

TEST_CASE("zscore: constant group calibrates to zeros with a diagnostic") {
    ClusteringCollection col;
    col.kmin = col.kmax = 2;
    for (int i = 0; i < 3; ++i) {
        auto e = entry(true, 2);
        e.set_raw(Criterion::CH, 5.0);
        col.entries.push_back(e);
    }
    std::vector<std::string> diags;
    zscore_calibrate(col, CalibrationRegime::PerK, &diags);
    for (const auto& e : col.entries)
        CHECK(e.calibrated[criterion_index(Criterion::CH)] == doctest::Approx(0.0));
    CHECK(!diags.empty());
}

TEST_CASE("zscore: degenerate values are excluded and get no calibrated value") {
    ClusteringCollection col;
    col.kmin = col.kmax = 2;
    const double vals[] = {1.0, 3.0, std::numeric_limits<double>::infinity()};
    for (double v : vals) {
        auto e = entry(true, 2);
        e.set_raw(Criterion::Dunn, v);
        col.entries.push_back(e);
    }
    zscore_calibrate(col, CalibrationRegime::PerK);
    const int di = criterion_index(Criterion::Dunn);
    // mean/sd computed over (1,3) only
    CHECK(col.entries[0].calibrated[di] == doctest::Approx(-std::sqrt(0.5)));
    CHECK(col.entries[1].calibrated[di] == doctest::Approx(std::sqrt(0.5)));
    CHECK(!std::isfinite(col.entries[2].calibrated[di]));
}

TEST_CASE("per-K vs pooled regimes differ when an index drifts with K") {
    auto build = [] {
        ClusteringCollection col;
        col.kmin = 2;
        col.kmax = 3;
        const double by_k[2][2] = {{1.0, 2.0}, {11.0, 12.0}};  // strong K drift
        for (int k = 2; k <= 3; ++k)
            for (int j = 0; j < 2; ++j) {
                auto e = entry(true, k, j == 0 ? MethodId::KMeans : MethodId::PAM);
                e.set_raw(Criterion::ASW, by_k[k - 2][j]);
                col.entries.push_back(e);
            }
        return col;
    };
    const int ai = criterion_index(Criterion::ASW);

    auto per_k = build();
    zscore_calibrate(per_k, CalibrationRegime::PerK);
    // each K group standardises to (-s, +s): the drift vanishes
    CHECK(per_k.entries[0].calibrated[ai] == doctest::Approx(per_k.entries[2].calibrated[ai]));

    auto pooled = build();
    zscore_calibrate(pooled, CalibrationRegime::PooledAllK);
    CHECK(pooled.entries[2].calibrated[ai] > pooled.entries[0].calibrated[ai] + 1.0);
}

TEST_CASE("per-K calibrated groups have mean 0 and sample sd 1") {
    std::mt19937_64 rng(41);
    ClusteringCollection col;
    col.kmin = 2;
    col.kmax = 5;
    std::uniform_real_distribution<double> u(-3.0, 7.0);
    for (int k = 2; k <= 5; ++k)
        for (int j = 0; j < 12; ++j) {
            auto e = entry(j < 3, k);
            for (Criterion c : {Criterion::ASW, Criterion::CH, Criterion::AveWithin})
                e.set_raw(c, u(rng));
            col.entries.push_back(e);
        }
    zscore_calibrate(col, CalibrationRegime::PerK);
    for (int k = 2; k <= 5; ++k)
        for (Criterion c : {Criterion::ASW, Criterion::CH, Criterion::AveWithin}) {
            const int ci = criterion_index(c);
            std::vector<double> vals;
            for (const auto& e : col.entries)
                if (e.k == k) vals.push_back(e.calibrated[ci]);
            double mean = 0.0;
            for (double v : vals) mean += v;
            mean /= vals.size();
            double var = 0.0;
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= vals.size() - 1;
            CHECK(std::fabs(mean) < 1e-12);
            CHECK(std::fabs(std::sqrt(var) - 1.0) < 1e-12);
        }
}

TEST_CASE("calibration preserves raw ordering within a group") {
    std::mt19937_64 rng(43);
    ClusteringCollection col;
    col.kmin = col.kmax = 4;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int j = 0; j < 20; ++j) {
        auto e = entry(true, 4);
        e.set_raw(Criterion::PearsonGamma, u(rng));
        col.entries.push_back(e);
    }
    zscore_calibrate(col, CalibrationRegime::PerK);
    const int pi = criterion_index(Criterion::PearsonGamma);
    for (std::size_t a = 0; a < col.entries.size(); ++a)
        for (std::size_t b = 0; b < col.entries.size(); ++b)
            if (col.entries[a].raw[pi] < col.entries[b].raw[pi])
                CHECK(col.entries[a].calibrated[pi] < col.entries[b].calibrated[pi]);
}

TEST_CASE("composite specs a1 and a2 match the published definitions") {
    const auto a1 = composite_a1();
    CHECK(a1.name == "a1");
    REQUIRE(a1.components.size() == 3);
    auto find = [](const CompositeSpec& s, Criterion c) -> const CompositeComponent* {
        for (const auto& comp : s.components)
            if (comp.id == c) return &comp;
        return nullptr;
    };
    REQUIRE(find(a1, Criterion::AveWithin));
    CHECK(find(a1, Criterion::AveWithin)->sign == -1);
    REQUIRE(find(a1, Criterion::PearsonGamma));
    CHECK(find(a1, Criterion::PearsonGamma)->sign == +1);
    REQUIRE(find(a1, Criterion::Bootstab));
    CHECK(find(a1, Criterion::Bootstab)->sign == -1);
    for (const auto& c : a1.components) CHECK(c.weight == a1.components.front().weight);

    const auto a2 = composite_a2();
    CHECK(a2.name == "a2");
    REQUIRE(a2.components.size() == 3);
    REQUIRE(find(a2, Criterion::SepIndex));
    CHECK(find(a2, Criterion::SepIndex)->sign == +1);
    REQUIRE(find(a2, Criterion::WidestGap));
    CHECK(find(a2, Criterion::WidestGap)->sign == -1);
    REQUIRE(find(a2, Criterion::Bootstab));
    CHECK(find(a2, Criterion::Bootstab)->sign == -1);
    // no homogeneity component in a2
    CHECK(!find(a2, Criterion::AveWithin));
    CHECK(!find(a2, Criterion::ASW));
}

TEST_CASE("aggregate: equal weights on calibrated (-1, +1) give 0") {
    auto e = entry(true, 2);
    e.calibrated[criterion_index(Criterion::ASW)] = -1.0;
    e.calibrated[criterion_index(Criterion::CH)] = 1.0;
    CompositeSpec spec{"t", {{Criterion::ASW, 1.0, +1}, {Criterion::CH, 1.0, +1}}};
    CHECK(aggregate(e, spec) == doctest::Approx(0.0));
}

TEST_CASE("aggregate contract: empty spec throws, missing component yields NaN") {
    auto e = entry(true, 2);
    CompositeSpec empty{"e", {}};
    CHECK_THROWS(aggregate(e, empty));
    CompositeSpec spec{"t", {{Criterion::ASW, 1.0, +1}}};
    CHECK(std::isnan(aggregate(e, spec)));  // no calibrated ASW present
}

TEST_CASE("weight rescaling leaves aggregates unchanged") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto e = entry(true, 3);
    for (Criterion c : {Criterion::ASW, Criterion::CH, Criterion::Dunn})
        e.calibrated[criterion_index(c)] = u(rng);
    CompositeSpec spec{"t",
                       {{Criterion::ASW, 1.0, +1}, {Criterion::CH, 2.0, -1}, {Criterion::Dunn, 0.5, +1}}};
    CompositeSpec scaled = spec;
    for (auto& c : scaled.components) c.weight *= 17.0;
    CHECK(aggregate(e, spec) == doctest::Approx(aggregate(e, scaled)).epsilon(1e-12));
}

TEST_CASE("ranking: proper entries only, ties by smaller K then method order") {
    ClusteringCollection col;
    col.kmin = 2;
    col.kmax = 3;
    const int ai = criterion_index(Criterion::ASW);

    auto winner_random = entry(false, 2);
    winner_random.calibrated[ai] = 99.0;  // best score, but random -> never ranked
    col.entries.push_back(winner_random);

    auto pam3 = entry(true, 3, MethodId::PAM);
    pam3.calibrated[ai] = 1.0;
    col.entries.push_back(pam3);

    auto kmeans3 = entry(true, 3, MethodId::KMeans);
    kmeans3.calibrated[ai] = 1.0;  // tie with pam3: kmeans has lower method id
    col.entries.push_back(kmeans3);

    auto pam2 = entry(true, 2, MethodId::PAM);
    pam2.calibrated[ai] = 1.0;  // tie: smaller K wins over both
    col.entries.push_back(pam2);

    auto low = entry(true, 2, MethodId::KMeans);
    low.calibrated[ai] = -5.0;
    col.entries.push_back(low);

    CompositeSpec spec{"t", {{Criterion::ASW, 1.0, +1}}};
    const auto ranked = rank_clusterings(col, spec);
    REQUIRE(ranked.size() == 4);
    CHECK(col.entries[ranked[0].entry_index].k == 2);
    CHECK(col.entries[ranked[0].entry_index].source.method == MethodId::PAM);
    CHECK(col.entries[ranked[1].entry_index].source.method == MethodId::KMeans);
    CHECK(col.entries[ranked[1].entry_index].k == 3);
    CHECK(col.entries[ranked[2].entry_index].source.method == MethodId::PAM);
    CHECK(col.entries[ranked[2].entry_index].k == 3);
    CHECK(ranked[3].score == doctest::Approx(-5.0));
}

TEST_CASE("ranking a single proper clustering returns it as rank 1") {
    ClusteringCollection col;
    col.kmin = col.kmax = 2;
    auto e = entry(true, 2);
    e.calibrated[criterion_index(Criterion::ASW)] = 0.3;
    col.entries.push_back(e);
    CompositeSpec spec{"t", {{Criterion::ASW, 1.0, +1}}};
    const auto ranked = rank_clusterings(col, spec);
    REQUIRE(ranked.size() == 1);
    CHECK(ranked[0].entry_index == 0);
}
