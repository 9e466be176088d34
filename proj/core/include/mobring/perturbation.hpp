#pragma once

#include "mobring/propagator.hpp"
#include "mobring/ring_model.hpp"
#include "mobring/system_model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mobring {

/// Multi-scale perturbation theory for a photon-initialized run, carried to
/// second order in the couplings with the bookkeeping parameter set to 1.
/// Odd orders of the frequency renormalization vanish identically, so no
/// first- or third-order corrections are represented here.

/// Denominators smaller than this trip the resonance guard.
inline constexpr double kResonanceGuard = 1e-9;

/// Mode-resolved couplings xi_Ak = xi h_Ak, J_Ak = J h_Ak (and B likewise).
struct ModeCouplings {
    std::vector<cplx> xi_a;
    std::vector<cplx> xi_b;
    std::vector<cplx> j_a;
    std::vector<cplx> j_b;
};

ModeCouplings mode_couplings(const SystemSpec& sys, const ModeTable& modes);

struct RenormalizedFrequencies {
    cplx omega_b;
    cplx omega_a;
    std::vector<cplx> omega_ak;
    std::vector<cplx> omega_bk;
};

struct PerturbationSolution {
    SystemSpec system;
    std::vector<double> mode_energies;
    ModeCouplings mode_couplings;
    RenormalizedFrequencies freqs;
    cplx const_a_b;
    cplx const_a_a;
    std::vector<cplx> const_b_ak;
    std::vector<cplx> const_b_bk;
};

/// Second-order renormalized frequencies, e.g.
///   Omega_b = omega + sum_k |J_Ak|^2/(omega - eps_k^-) + |J_Bk|^2/(omega + eps_k^+)
/// with eps_k^{-/+} = eps_k -/+ i kappa. Throws DegenerateInputError when a
/// denominator of a coupled mode falls below kResonanceGuard.
RenormalizedFrequencies renormalized_frequencies(const SystemSpec& sys);

/// Initial-condition constants A_b, A_A, B_Ak, B_Bk for psi(0) = |1_b>.
PerturbationSolution perturbation_constants(const SystemSpec& sys, const RenormalizedFrequencies& freqs);

/// Convenience: renormalized_frequencies followed by perturbation_constants.
PerturbationSolution solve_perturbation(const SystemSpec& sys);

/// Closed-form second-order amplitudes at time t, in momentum-basis order
/// (photon, acceptor, A_0.., B_0..).
AmplitudeState perturbative_amplitudes(const PerturbationSolution& sol, double t);

/// One term c e^{-i Omega t} of an amplitude expansion.
struct ExponentialTerm {
    cplx coefficient;
    cplx frequency;
};

/// alpha_A(t) written as a sum of exponentials.
std::vector<ExponentialTerm> acceptor_expansion(const PerturbationSolution& sol);

/// int_0^inf |sum_i c_i e^{-i Omega_i t}|^2 dt
///   = sum_{i,j} c_i c_j^* / (i (Omega_i - Omega_j^*)).
/// Throws DivergentIntegralError if a nonzero term has Im Omega >= 0.
double exponential_sum_integral(std::span<const ExponentialTerm> terms);

/// 2 Gamma times the closed-form integral of |alpha_A(t)|^2. Zero for Gamma = 0.
double perturbative_efficiency(const PerturbationSolution& sol, double gamma);

struct WwRates {
    double lamb_shift = 0.0;
    double decay_rate = 0.0;
};

/// Lamb shift Re(Omega_b) - omega and decay rate -Im(Omega_b) from the
/// discrete mode sums, regularized with a Lorentzian width (kappa by
/// default). With the default width this is exactly the photon
/// renormalization of renormalized_frequencies; an explicit width gives the
/// broadened estimate used for large-N continuum limits.
WwRates ww_rates(const SystemSpec& sys, std::optional<double> broadening = std::nullopt);

}  // namespace mobring
