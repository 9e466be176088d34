#include "mobring/perturbation.hpp"

#include "mobring/errors.hpp"

#include <cmath>
#include <string>

namespace mobring {

namespace {

// Couplings this small are treated as absent (dark modes of periodic rings).
constexpr double kCouplingFloor = 1e-12;

cplx guarded(cplx denominator, const char* what) {
    if (std::abs(denominator) < kResonanceGuard) {
        throw DegenerateInputError(std::string("resonant denominator ") + what +
                                   " below guard; set kappa > 0 or gamma > 0 to regularize");
    }
    return denominator;
}

struct Bare {
    cplx omega;
    cplx acceptor;               // eps_A' = eps_A - i Gamma
    std::vector<cplx> minus;     // eps_k^- = eps_k - i kappa
    std::vector<cplx> plus;      // eps_k^+ = eps_k + i kappa
};

Bare bare_energies(const SystemSpec& sys, const std::vector<double>& eps) {
    Bare b;
    b.omega = sys.photon_omega;
    b.acceptor = cplx(sys.acceptor_energy, -sys.charge_sep_gamma);
    for (double e : eps) {
        b.minus.emplace_back(e, -sys.fluorescence_kappa);
        b.plus.emplace_back(e, sys.fluorescence_kappa);
    }
    return b;
}

std::vector<double> energies_of(const ModeTable& modes) {
    std::vector<double> eps;
    for (const auto& e : modes.entries) eps.push_back(e.energy_eps_k);
    return eps;
}

bool coupled(cplx j, cplx xi) {
    return std::abs(j) > kCouplingFloor || std::abs(xi) > kCouplingFloor;
}

RenormalizedFrequencies renormalize(const SystemSpec& sys, const std::vector<double>& eps,
                                    const ModeCouplings& c) {
    const Bare bare = bare_energies(sys, eps);
    RenormalizedFrequencies f;
    f.omega_b = bare.omega;
    f.omega_a = bare.acceptor;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        cplx ak = bare.minus[k];
        cplx bk = -bare.plus[k];
        if (coupled(c.j_a[k], c.xi_a[k])) {
            const cplx d_photon = guarded(bare.omega - bare.minus[k], "omega - eps_k^-");
            const cplx d_acceptor = guarded(bare.acceptor - bare.minus[k], "eps_A' - eps_k^-");
            f.omega_b += std::norm(c.j_a[k]) / d_photon;
            f.omega_a += std::norm(c.xi_a[k]) / d_acceptor;
            ak += std::norm(c.xi_a[k]) / (-d_acceptor) + std::norm(c.j_a[k]) / (-d_photon);
        }
        if (coupled(c.j_b[k], c.xi_b[k])) {
            const cplx d_photon = guarded(bare.omega + bare.plus[k], "omega + eps_k^+");
            const cplx d_acceptor = guarded(bare.acceptor + bare.plus[k], "eps_A' + eps_k^+");
            f.omega_b += std::norm(c.j_b[k]) / d_photon;
            f.omega_a += std::norm(c.xi_b[k]) / d_acceptor;
            bk += std::norm(c.xi_b[k]) / (-d_acceptor) + std::norm(c.j_b[k]) / (-d_photon);
        }
        f.omega_ak.push_back(ak);
        f.omega_bk.push_back(bk);
    }
    return f;
}

// sum_k J_Ak xi_Ak^* / (omega - eps_k^-) + J_Bk xi_Bk^* / (omega + eps_k^+)
cplx photon_acceptor_channel(const Bare& bare, const ModeCouplings& c) {
    cplx sum = 0.0;
    for (std::size_t k = 0; k < bare.minus.size(); ++k) {
        if (coupled(c.j_a[k], c.xi_a[k])) sum += c.j_a[k] * std::conj(c.xi_a[k]) / (bare.omega - bare.minus[k]);
        if (coupled(c.j_b[k], c.xi_b[k])) sum += c.j_b[k] * std::conj(c.xi_b[k]) / (bare.omega + bare.plus[k]);
    }
    return sum;
}

}  // namespace

ModeCouplings mode_couplings(const SystemSpec& sys, const ModeTable& modes) {
    ModeCouplings c;
    for (const auto& e : modes.entries) {
        c.xi_a.push_back(sys.acceptor_coupling_xi * e.coupling_h_A);
        c.xi_b.push_back(sys.acceptor_coupling_xi * e.coupling_h_B);
        c.j_a.push_back(sys.photon_coupling_j * e.coupling_h_A);
        c.j_b.push_back(sys.photon_coupling_j * e.coupling_h_B);
    }
    return c;
}

RenormalizedFrequencies renormalized_frequencies(const SystemSpec& sys) {
    sys.validate();
    const ModeTable modes = mode_table(sys.ring);
    return renormalize(sys, energies_of(modes), mode_couplings(sys, modes));
}

PerturbationSolution perturbation_constants(const SystemSpec& sys, const RenormalizedFrequencies& freqs) {
    sys.validate();
    const ModeTable modes = mode_table(sys.ring);

    PerturbationSolution sol;
    sol.system = sys;
    sol.mode_energies = energies_of(modes);
    sol.mode_couplings = mode_couplings(sys, modes);
    sol.freqs = freqs;

    const Bare bare = bare_energies(sys, sol.mode_energies);
    const ModeCouplings& c = sol.mode_couplings;
    const std::size_t count = sol.mode_energies.size();

    sol.const_a_b = 1.0;
    sol.const_a_a = 0.0;
    sol.const_b_ak.assign(count, 0.0);
    sol.const_b_bk.assign(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        if (coupled(c.j_a[k], c.xi_a[k])) {
            const cplx d_photon = guarded(bare.omega - bare.minus[k], "omega - eps_k^-");
            const cplx d_acceptor = guarded(bare.acceptor - bare.minus[k], "eps_A' - eps_k^-");
            sol.const_a_b -= std::norm(c.j_a[k]) / (d_photon * d_photon);
            sol.const_a_a -= c.j_a[k] * std::conj(c.xi_a[k]) / (d_photon * d_acceptor);
            sol.const_b_ak[k] = -c.j_a[k] / d_photon;
        }
        if (coupled(c.j_b[k], c.xi_b[k])) {
            const cplx d_photon = guarded(bare.omega + bare.plus[k], "omega + eps_k^+");
            const cplx d_acceptor = guarded(bare.acceptor + bare.plus[k], "eps_A' + eps_k^+");
            sol.const_a_b -= std::norm(c.j_b[k]) / (d_photon * d_photon);
            sol.const_a_a -= c.j_b[k] * std::conj(c.xi_b[k]) / (d_photon * d_acceptor);
            sol.const_b_bk[k] = -c.j_b[k] / d_photon;
        }
    }
    const cplx channel = photon_acceptor_channel(bare, c);
    if (channel != 0.0) {
        sol.const_a_a -= channel / guarded(bare.omega - bare.acceptor, "omega - eps_A'");
    }
    return sol;
}

PerturbationSolution solve_perturbation(const SystemSpec& sys) {
    return perturbation_constants(sys, renormalized_frequencies(sys));
}

std::vector<ExponentialTerm> acceptor_expansion(const PerturbationSolution& sol) {
    const Bare bare = bare_energies(sol.system, sol.mode_energies);
    const ModeCouplings& c = sol.mode_couplings;
    std::vector<ExponentialTerm> terms;
    terms.push_back({sol.const_a_a, sol.freqs.omega_a});
    for (std::size_t k = 0; k < sol.mode_energies.size(); ++k) {
        if (sol.const_b_ak[k] != 0.0) {
            terms.push_back({sol.const_b_ak[k] * std::conj(c.xi_a[k]) / (bare.minus[k] - bare.acceptor),
                             sol.freqs.omega_ak[k]});
        }
        if (sol.const_b_bk[k] != 0.0) {
            terms.push_back({sol.const_b_bk[k] * std::conj(c.xi_b[k]) / (-bare.plus[k] - bare.acceptor),
                             sol.freqs.omega_bk[k]});
        }
    }
    const cplx channel = photon_acceptor_channel(bare, c);
    if (channel != 0.0) {
        terms.push_back({sol.const_a_b * channel / (bare.omega - bare.acceptor), sol.freqs.omega_b});
    }
    return terms;
}

AmplitudeState perturbative_amplitudes(const PerturbationSolution& sol, double t) {
    const Bare bare = bare_energies(sol.system, sol.mode_energies);
    const ModeCouplings& c = sol.mode_couplings;
    const RenormalizedFrequencies& f = sol.freqs;
    const std::size_t count = sol.mode_energies.size();
    auto evolve = [t](cplx omega) { return std::exp(-kI * omega * t); };

    AmplitudeState state;
    state.time = t;
    state.amplitudes = CVector::Zero(static_cast<Eigen::Index>(2 + 2 * count));

    const cplx photon_phase = evolve(f.omega_b);
    cplx alpha_b = sol.const_a_b * photon_phase;
    for (std::size_t k = 0; k < count; ++k) {
        const auto a_idx = static_cast<Eigen::Index>(2 + k);
        const auto b_idx = static_cast<Eigen::Index>(2 + count + k);
        const cplx ak_phase = evolve(f.omega_ak[k]);
        const cplx bk_phase = evolve(f.omega_bk[k]);
        if (sol.const_b_ak[k] != 0.0) {
            alpha_b += sol.const_b_ak[k] * std::conj(c.j_a[k]) / (bare.minus[k] - bare.omega) * ak_phase;
            state.amplitudes(a_idx) = sol.const_b_ak[k] * ak_phase +
                                      sol.const_a_b * c.j_a[k] / (bare.omega - bare.minus[k]) * photon_phase;
        }
        if (sol.const_b_bk[k] != 0.0) {
            alpha_b += sol.const_b_bk[k] * std::conj(c.j_b[k]) / (-bare.plus[k] - bare.omega) * bk_phase;
            state.amplitudes(b_idx) = sol.const_b_bk[k] * bk_phase +
                                      sol.const_a_b * c.j_b[k] / (bare.omega + bare.plus[k]) * photon_phase;
        }
    }
    cplx alpha_a = 0.0;
    for (const auto& term : acceptor_expansion(sol)) alpha_a += term.coefficient * evolve(term.frequency);

    state.amplitudes(0) = alpha_b;
    state.amplitudes(1) = alpha_a;
    return state;
}

double exponential_sum_integral(std::span<const ExponentialTerm> terms) {
    double scale = 0.0;
    for (const auto& term : terms) scale = std::max(scale, std::abs(term.coefficient));
    std::vector<ExponentialTerm> live;
    for (const auto& term : terms) {
        if (std::abs(term.coefficient) <= 1e-15 * scale) continue;
        if (!(term.frequency.imag() < 0.0)) {
            throw DivergentIntegralError("non-decaying term (Im Omega = " +
                                         std::to_string(term.frequency.imag()) + ") in time integral");
        }
        live.push_back(term);
    }
    cplx sum = 0.0;
    for (const auto& a : live) {
        for (const auto& b : live) {
            sum += a.coefficient * std::conj(b.coefficient) / (kI * (a.frequency - std::conj(b.frequency)));
        }
    }
    return sum.real();
}

double perturbative_efficiency(const PerturbationSolution& sol, double gamma) {
    if (gamma == 0.0) return 0.0;
    const auto terms = acceptor_expansion(sol);
    return 2.0 * gamma * exponential_sum_integral(terms);
}

WwRates ww_rates(const SystemSpec& sys, std::optional<double> broadening) {
    sys.validate();
    const double width = broadening.value_or(sys.fluorescence_kappa);
    if (width < 0.0) throw ConfigError("broadening width must be >= 0");
    const ModeTable modes = mode_table(sys.ring);
    const double j2 = sys.photon_coupling_j * sys.photon_coupling_j;
    cplx sum = 0.0;
    for (const auto& e : modes.entries) {
        const double wa = j2 * std::norm(e.coupling_h_A);
        const double wb = j2 * std::norm(e.coupling_h_B);
        if (wa > 0.0) sum += wa / guarded(cplx(sys.photon_omega - e.energy_eps_k, width), "omega - eps_k");
        if (wb > 0.0) sum += wb / guarded(cplx(sys.photon_omega + e.energy_eps_k, width), "omega + eps_k");
    }
    return {sum.real(), -sum.imag()};
}

}  // namespace mobring
