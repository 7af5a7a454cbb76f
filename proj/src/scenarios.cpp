#include "cval/scenarios.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace cval {

namespace {

double tdist2(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::chi_squared_distribution<double> chi(2.0);
    return gauss(rng) / std::sqrt(chi(rng) / 2.0);
}

// draw from N(mu, Sigma) given the lower Cholesky factor of Sigma
template <std::size_t P>
std::array<double, P> mvn(std::mt19937_64& rng, const std::array<double, P>& mu,
                          const std::array<std::array<double, P>, P>& chol) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::array<double, P> z{};
    for (auto& v : z) v = gauss(rng);
    std::array<double, P> out{};
    for (std::size_t i = 0; i < P; ++i) {
        double s = mu[i];
        for (std::size_t j = 0; j <= i; ++j) s += chol[i][j] * z[j];
        out[i] = s;
    }
    return out;
}

template <std::size_t P>
std::array<std::array<double, P>, P> cholesky(std::array<std::array<double, P>, P> a) {
    std::array<std::array<double, P>, P> l{};
    for (std::size_t i = 0; i < P; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t t = 0; t < j; ++t) s -= l[i][t] * l[j][t];
            if (i == j)
                l[i][j] = std::sqrt(s);
            else
                l[i][j] = s / l[j][j];
        }
    return l;
}

}  // namespace

ScenarioData scenario1(const RngSeed& seed) {
    auto rng = seed.engine();
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::array<std::array<double, 2>, 3> centres{{{0.0, 0.0}, {0.0, 5.0}, {5.0, -3.0}}};
    const std::array<int, 3> sizes{25, 25, 50};
    DataMatrix data(100, 2);
    std::vector<int> labels(100);
    std::size_t row = 0;
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < sizes[c]; ++i, ++row) {
            data(row, 0) = centres[c][0] + gauss(rng);
            data(row, 1) = centres[c][1] + gauss(rng);
            labels[row] = c;
        }
    return {std::move(data), Partition(std::move(labels), 3)};
}

ScenarioData scenario2(const RngSeed& seed) {
    auto rng = seed.engine();
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double centre_sd = std::sqrt(1.9);
    constexpr int dim = 10;

    std::array<std::array<double, dim>, 4> centres{};
    bool accepted = false;
    for (int attempt = 0; attempt < 1000 && !accepted; ++attempt) {
        for (auto& c : centres)
            for (auto& v : c) v = centre_sd * gauss(rng);
        // discard draws whose closest pair of centres is nearer than 1
        double min_dist = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                double s = 0.0;
                for (int j = 0; j < dim; ++j) {
                    double diff = centres[a][j] - centres[b][j];
                    s += diff * diff;
                }
                min_dist = std::min(min_dist, std::sqrt(s));
            }
        accepted = min_dist >= 1.0;
    }
    if (!accepted) throw InvalidDataError("scenario2: rejection cap exceeded");

    std::array<int, 4> sizes{};
    std::uniform_int_distribution<int> coin(0, 1);
    int total = 0;
    for (auto& s : sizes) {
        s = coin(rng) ? 50 : 25;
        total += s;
    }
    DataMatrix data(total, dim);
    std::vector<int> labels(total);
    std::size_t row = 0;
    for (int c = 0; c < 4; ++c)
        for (int i = 0; i < sizes[c]; ++i, ++row) {
            for (int j = 0; j < dim; ++j) data(row, j) = centres[c][j] + gauss(rng);
            labels[row] = c;
        }
    return {std::move(data), Partition(std::move(labels), 4)};
}

ScenarioData scenario3(const RngSeed& seed) {
    auto rng = seed.engine();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unif(-2.0, 5.0);

    constexpr int n = 560;
    DataMatrix data(n, 6);
    std::vector<int> labels(n);
    std::size_t row = 0;
    auto fill_rest = [&](std::size_t r) {
        data(r, 4) = gauss(rng);   // first noise variable
        data(r, 5) = tdist2(rng);  // second noise variable
    };

    // component 1: tight spherical Gaussian at (0,2,0,2)
    for (int i = 0; i < 150; ++i, ++row) {
        const double sd = std::sqrt(0.1);
        const std::array<double, 4> mu{0, 2, 0, 2};
        for (int j = 0; j < 4; ++j) data(row, j) = mu[j] + sd * gauss(rng);
        fill_rest(row);
        labels[row] = 0;
    }
    // component 2: correlated Gaussian at (3,3,3,3), diag .5, off-diag .25
    {
        std::array<std::array<double, 4>, 4> sigma{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) sigma[i][j] = i == j ? 0.5 : 0.25;
        const auto chol = cholesky(sigma);
        for (int i = 0; i < 250; ++i, ++row) {
            const auto x = mvn<4>(rng, {3, 3, 3, 3}, chol);
            for (int j = 0; j < 4; ++j) data(row, j) = x[j];
            fill_rest(row);
            labels[row] = 1;
        }
    }
    // component 3: independent exponential(1) per dimension, shifted to mean -1
    for (int i = 0; i < 70; ++i, ++row) {
        for (int j = 0; j < 4; ++j) data(row, j) = expo(rng) - 2.0;
        fill_rest(row);
        labels[row] = 2;
    }
    // component 4: 4-variate t2 at (2,0,2,0) with Gaussian covariance 0.1 I
    for (int i = 0; i < 70; ++i, ++row) {
        const double scale = 1.0 / std::sqrt(std::chi_squared_distribution<double>(2.0)(rng) / 2.0);
        const std::array<double, 4> mu{2, 0, 2, 0};
        for (int j = 0; j < 4; ++j) data(row, j) = mu[j] + std::sqrt(0.1) * gauss(rng) * scale;
        fill_rest(row);
        labels[row] = 3;
    }
    // outlier group 1: uniform on [-2, 5]^4
    for (int i = 0; i < 10; ++i, ++row) {
        for (int j = 0; j < 4; ++j) data(row, j) = unif(rng);
        fill_rest(row);
        labels[row] = 4;
    }
    // outlier group 2: 4-variate t2 at (1.5,...) with Gaussian covariance 2 I
    for (int i = 0; i < 10; ++i, ++row) {
        const double scale = 1.0 / std::sqrt(std::chi_squared_distribution<double>(2.0)(rng) / 2.0);
        for (int j = 0; j < 4; ++j) data(row, j) = 1.5 + std::sqrt(2.0) * gauss(rng) * scale;
        fill_rest(row);
        labels[row] = 5;
    }
    return {std::move(data), Partition(std::move(labels), 6)};
}

ScenarioData scenario4(const RngSeed& seed) {
    // Two elongated diagonal clusters.  The second cluster is shifted by 10 in
    // every coordinate (the classic elongated-clusters recipe): a shift of 1
    // would make the segments touch end-to-end, which contradicts the perfect
    // two-cluster recovery this scenario is meant to allow.
    auto rng = seed.engine();
    std::normal_distribution<double> noise(0.0, 0.1);
    DataMatrix data(200, 3);
    std::vector<int> labels(200);
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 100; ++i) {
            const std::size_t row = c * 100 + i;
            const double t = -0.5 + i / 99.0;
            for (int j = 0; j < 3; ++j) data(row, j) = t + noise(rng) + (c == 1 ? 10.0 : 0.0);
            labels[row] = c;
        }
    return {std::move(data), Partition(std::move(labels), 2)};
}

namespace {

ScenarioData two_radial_clusters(const RngSeed& seed, bool moons) {
    auto rng = seed.engine();
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    DataMatrix data(360, 2);
    std::vector<int> labels(360);
    for (int c = 0; c < 2; ++c) {
        std::uniform_real_distribution<double> radius =
            moons ? std::uniform_real_distribution<double>(0.8, 1.2)
                  : (c == 0 ? std::uniform_real_distribution<double>(0.75, 0.9)
                            : std::uniform_real_distribution<double>(0.35, 0.5));
        for (int i = 0; i < 180; ++i) {
            const std::size_t row = c * 180 + i;
            const double r = radius(rng);
            const double al = angle(rng);
            if (moons) {
                constexpr double a = -0.4, b = 1.0;
                if (c == 0) {
                    data(row, 0) = a + std::fabs(r * std::cos(al));
                    data(row, 1) = r * std::sin(al);
                } else {
                    data(row, 0) = -std::fabs(r * std::cos(al));
                    data(row, 1) = r * std::sin(al) - b;
                }
            } else {
                data(row, 0) = r * std::cos(al);
                data(row, 1) = r * std::sin(al);
            }
            labels[row] = c;
        }
    }
    return {std::move(data), Partition(std::move(labels), 2)};
}

}  // namespace

ScenarioData scenario5(const RngSeed& seed) { return two_radial_clusters(seed, false); }
ScenarioData scenario6(const RngSeed& seed) { return two_radial_clusters(seed, true); }

bool is_scenario_name(const std::string& name) {
    return name.size() == 9 && name.rfind("scenario", 0) == 0 && name[8] >= '1' && name[8] <= '6';
}

ScenarioData generate_scenario(const std::string& name, const RngSeed& seed) {
    if (!is_scenario_name(name)) throw InvalidDataError("unknown scenario: " + name);
    switch (name[8]) {
        case '1': return scenario1(seed);
        case '2': return scenario2(seed);
        case '3': return scenario3(seed);
        case '4': return scenario4(seed);
        case '5': return scenario5(seed);
        default: return scenario6(seed);
    }
}

}  // namespace cval
