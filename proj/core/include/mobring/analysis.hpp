#pragma once

#include "mobring/propagator.hpp"
#include "mobring/system_model.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mobring {

enum class SweepMethod { Exact, Perturbative };

struct SweepOptions {
    SweepMethod method = SweepMethod::Exact;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// eta over a (dimerization, detuning) grid. Rows are ordered dimerization
/// outer, detuning inner; argmax ties resolve to the lowest grid index.
struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<std::array<double, 2>> grid;
    std::vector<double> eta_values;
    std::vector<bool> converged_flags;
    std::size_t argmax_index = 0;
    double argmax_eta = 0.0;

    std::size_t size() const { return grid.size(); }
};

/// Evenly spaced grid of `points` values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, int points);

/// Index of the largest value, skipping NaN; the first one on ties.
std::size_t argmax_index(std::span<const double> values);

/// For each (delta, Delta) sets the ring dimerization and omega = eps_A + Delta
/// and evaluates eta. Exact points that do not converge are flagged, not
/// fatal. Perturbative points are flagged when the estimate leaves [0, 1],
/// which signals that the expansion has broken down. Points where the
/// second-order frequencies stop decaying or hit the resonance guard are
/// recorded as NaN and flagged.
SweepResult sweep_detuning(const SystemSpec& tmpl, std::span<const double> delta_grid,
                           std::span<const double> detuning_grid, const PropagationConfig& config,
                           const SweepOptions& options = {});

enum class SweepParameter { Detuning, Dimerization, Kappa };

struct Optimum {
    double argmax = 0.0;
    double value = 0.0;
    bool converged = true;
    int evaluations = 0;
};

inline constexpr int kCoarseGridPoints = 33;
inline constexpr double kOptimizerTol = 1e-4;

/// Coarse scan on `grid_points` equally spaced points of [lo, hi], then
/// golden-section refinement inside the cells adjacent to the best point
/// until the bracket is narrower than `tol`.
Optimum maximize_scalar(const std::function<double(double)>& objective, double lo, double hi,
                        int grid_points = kCoarseGridPoints, double tol = kOptimizerTol);

/// maximize_scalar over eta with one parameter of the template varied.
Optimum maximize_efficiency(const SystemSpec& tmpl, SweepParameter parameter, std::array<double, 2> bracket,
                            const PropagationConfig& config);

/// Applies a parameter value to a copy of the template.
SystemSpec with_parameter(const SystemSpec& tmpl, SweepParameter parameter, double value);

struct DecayFit {
    double rate = 0.0;
    double r_squared = 0.0;
    std::size_t samples = 0;
};

/// Least-squares line through log(value) over t in [t0, t1]; rate = -slope.
/// Needs at least 10 samples, all positive (DomainError otherwise).
DecayFit tail_decay_fit(std::span<const std::pair<double, double>> series, std::array<double, 2> window);

/// Default late window as fractions of the last recorded time.
inline constexpr std::array<double, 2> kTailWindowFractions{0.6, 0.95};

/// Interior strict local maxima of a sampled series, in time order.
std::vector<std::pair<double, double>> local_maxima(std::span<const std::pair<double, double>> series);

struct CouplingRow {
    int index_m = 0;
    double momentum_k = 0.0;
    double abs_h_a = 0.0;
    double abs_h_b = 0.0;
};

/// Mode-resolved coupling magnitudes, sorted by momentum.
std::vector<CouplingRow> coupling_report(const RingSpec& ring);

}  // namespace mobring
