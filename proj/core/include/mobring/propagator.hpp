#pragma once

#include "mobring/system_model.hpp"
#include "mobring/types.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace mobring {

/// Amplitudes at dimensionless time xi * t, ordered like the generator labels.
struct AmplitudeState {
    double time = 0.0;
    CVector amplitudes;
};

struct PropagationConfig {
    double step_dt = 0.002;
    double t_max = 200.0;
    double residual_tol = 1e-8;
    /// Steps between recorded samples at the initial step size. The stride is
    /// doubled with every step halving so sample times do not move.
    int sample_stride = 10;

    void validate() const;
};

enum class Termination { ResidualBelowTol, TMaxReached };

std::string_view to_string(Termination termination);

/// Recorded time series. eta_cumulative / loss_cumulative run parallel to
/// samples; the scalar fields hold the values at the final step.
struct Trajectory {
    std::vector<AmplitudeState> samples;
    std::vector<double> eta_cumulative;
    std::vector<double> loss_cumulative;
    std::vector<BasisLabel> labels;
    double eta_accumulated = 0.0;
    double fluorescence_loss = 0.0;
    Termination terminated_by = Termination::TMaxReached;
    double step_dt = 0.0;
    int refinements = 0;
    bool eta_converged = true;

    double final_norm2() const;
};

/// Maximum number of step halvings (stability guard plus eta refinement).
inline constexpr int kMaxRefinements = 6;
/// Step-halving stops once eta changes by less than this.
inline constexpr double kEtaRefinementTol = 1e-8;
/// step_dt * max |M_ij| must stay below this.
inline constexpr double kStabilityLimit = 0.1;

/// Single fixed-step RK4 run of i dpsi/dt = M psi. The state is augmented with
/// the two loss integrals (2 Gamma |alpha_A|^2 into eta, every other decay
/// channel into fluorescence_loss), advanced with the same stages. Stops at
/// ||psi||^2 < residual_tol or t_max. Throws NumericalError on NaN.
Trajectory integrate_fixed_step(const EffectiveGenerator& gen, const AmplitudeState& initial,
                                const PropagationConfig& config, double step_dt, int stride);

/// Fixed-step RK4 with step halving: repeats at dt/2 until eta moves by less
/// than kEtaRefinementTol (at most kMaxRefinements halvings, otherwise the
/// result is flagged via eta_converged = false). Throws NumericalError if the
/// stability guard cannot be met within the refinement cap.
Trajectory propagate(const EffectiveGenerator& gen, const AmplitudeState& initial,
                     const PropagationConfig& config);

/// Photon-only initial state |1_b>.
AmplitudeState photon_initial_state(const EffectiveGenerator& gen);

/// (t, |alpha_A(t)|^2) at every recorded sample.
std::vector<std::pair<double, double>> acceptor_population(const Trajectory& traj);

/// |amplitude|^2 summed over all components with the given role.
std::vector<std::pair<double, double>> role_population(const Trajectory& traj, ComponentRole role);

struct EfficiencyResult {
    double eta = 0.0;
    double fluorescence_loss = 0.0;
    double residual = 1.0;
    /// False when the run hit t_max with residual > kResidualFlag or the step
    /// refinement did not settle; eta is then a lower bound.
    bool converged = true;
    Termination terminated_by = Termination::TMaxReached;
    double step_dt = 0.0;
};

inline constexpr double kResidualFlag = 1e-3;

/// eta = 2 Gamma int |alpha_A|^2 dt for a photon-initialized run.
EfficiencyResult transfer_efficiency(const EffectiveGenerator& gen, const PropagationConfig& config);

}  // namespace mobring
