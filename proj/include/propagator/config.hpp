#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "propagator/constraints.hpp"
#include "propagator/kernel.hpp"
#include "propagator/signal.hpp"
#include "propagator/time_grid.hpp"
#include "propagator/uzawa.hpp"

namespace prop {

// Fully resolved scenario configuration (JSON on disk).  Unknown keys are
// rejected at load time.
struct ScenarioConfig {
    double T = 1.0;
    int N = 100;
    KernelSpec kernel;
    SignalParams signal;
    ScenarioSpec scenario;
    UzawaConfig uzawa;
    int paths = 1000;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    TimeGrid grid() const { return TimeGrid(T, N); }
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);
std::string serialize_config(const ScenarioConfig& cfg);

// Named configs with the parameter sets used throughout the applications.
std::vector<std::string> bundled_scenario_names();
ScenarioConfig bundled_scenario(const std::string& name);

}  // namespace prop
