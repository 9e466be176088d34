#pragma once

#include "mobring/analysis.hpp"
#include "mobring/propagator.hpp"
#include "mobring/system_model.hpp"
#include "mobring/units.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobring {

/// Units of the energies, rates and times written in a config file. Values
/// are converted to internal xi units on load.
enum class UnitSystem { Xi, PerPs };

struct RunConfig {
    std::string description;
    SystemSpec system;
    PropagationConfig propagation;
    UnitSystem units = UnitSystem::Xi;
    UnitConverter converter;
    std::vector<double> sweep_deltas{0.0, 0.6};
    double detuning_min = -4.0;
    double detuning_max = 4.0;
    int detuning_points = 81;
    SweepMethod sweep_method = SweepMethod::Exact;
    /// Tail-fit window in xi * t; unset means the fractional default.
    std::optional<std::array<double, 2>> tail_window;

    std::vector<double> detuning_grid() const;
};

/// Command-line values that replace config entries before validation. They
/// are read in the units of the config file. `detuning` sets
/// omega = epsilon_a + detuning after the other overrides.
struct ConfigOverrides {
    std::optional<int> n_sites;
    std::optional<double> hopping_g;
    std::optional<double> delta;
    std::optional<std::string> boundary;
    std::optional<double> omega;
    std::optional<double> epsilon_a;
    std::optional<double> coupling_j;
    std::optional<double> gamma;
    std::optional<double> kappa;
    std::optional<double> detuning;
};

/// Required keys: n_sites, hopping_g, delta, boundary, omega, epsilon_a,
/// coupling_j, gamma, kappa. Optional keys and their defaults are listed in
/// the README. Unknown keys, wrong types and constraint violations throw
/// ConfigError naming the key and, where possible, its line.
RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});

/// Reads a file and parses it; an unreadable file is a ConfigError.
RunConfig load_config_file(const std::string& path, const ConfigOverrides& overrides = {});

}  // namespace mobring
