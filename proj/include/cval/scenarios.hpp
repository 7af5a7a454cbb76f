#pragma once

#include "cval/matrix.hpp"
#include "cval/partition.hpp"
#include "cval/rng.hpp"

#include <string>

namespace cval {

struct ScenarioData {
    DataMatrix data;
    Partition truth;
};

// Seeded synthetic benchmark generators; all deterministic given the seed.
ScenarioData scenario1(const RngSeed& seed);  // three Gaussian blobs, 100 x 2
ScenarioData scenario2(const RngSeed& seed);  // four Gaussian clusters in 10-d
ScenarioData scenario3(const RngSeed& seed);  // mixed shapes + outlier groups, 560 x 6
ScenarioData scenario4(const RngSeed& seed);  // two elongated diagonal clusters, 200 x 3
ScenarioData scenario5(const RngSeed& seed);  // two concentric rings, 360 x 2
ScenarioData scenario6(const RngSeed& seed);  // two moons, 360 x 2

bool is_scenario_name(const std::string& name);
ScenarioData generate_scenario(const std::string& name, const RngSeed& seed);

}  // namespace cval
