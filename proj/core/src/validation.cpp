#include "mobring/validation.hpp"

#include "mobring/hermitian_eigen.hpp"
#include "mobring/perturbation.hpp"
#include "mobring/propagator.hpp"
#include "mobring/ring_model.hpp"
#include "mobring/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>

namespace mobring {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

SystemSpec reference_system(double delta, Boundary boundary) {
    SystemSpec sys;
    sys.ring.n_sites = 8;
    sys.ring.dimerization_delta = delta;
    sys.ring.boundary = boundary;
    return sys;
}

CheckResult spectrum_check() {
    double worst = 0.0;
    for (int n : {4, 8, 12}) {
        for (double d : {0.0, 0.3, 1.0}) {
            for (Boundary b : {Boundary::Moebius, Boundary::Periodic}) {
                RingSpec ring{n, 1.0, d, b};
                auto analytic = mode_table(ring).band_diagonal();
                auto numeric = dense_hermitian_eigenvalues(site_hamiltonian(ring));
                std::sort(analytic.begin(), analytic.end());
                std::sort(numeric.begin(), numeric.end());
                for (std::size_t i = 0; i < analytic.size(); ++i) {
                    worst = std::max(worst, std::abs(analytic[i] - numeric[i]));
                }
            }
        }
    }
    return {"spectrum", worst < 1e-10, "max |analytic - jacobi| = " + sci(worst)};
}

CheckResult envelope_check() {
    RingSpec ring{800, 1.0, 0.5, Boundary::Moebius};
    const ModeTable t = mode_table(ring);
    double lo = 1e300, hi = 0.0;
    for (const auto& e : t.entries) {
        lo = std::min(lo, e.energy_eps_k);
        hi = std::max(hi, e.energy_eps_k);
    }
    const bool ok = lo >= 1.0 - 1e-12 && hi <= 2.0 + 1e-12 && std::abs(lo - 1.0) < 1e-3 && std::abs(hi - 2.0) < 1e-3;
    return {"envelope", ok, "N=800 delta=0.5: eps in [" + sci(lo) + ", " + sci(hi) + "]"};
}

CheckResult gauge_check() {
    RingSpec ring{8, 1.0, 0.3, Boundary::Moebius};
    const CMatrix h = site_hamiltonian(ring);
    const auto phases = gauge_phases(ring.n_sites);
    const int n = ring.n_sites;
    const cplx bond_phase = std::polar(1.0, kPi / n);
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        const int next = (j + 1) % n;
        const cplx gauged = std::conj(phases[static_cast<std::size_t>(next)]) * h(next, j) *
                            phases[static_cast<std::size_t>(j)];
        worst = std::max(worst, std::abs(gauged - std::abs(h(next, j)) * std::conj(bond_phase)));
    }
    return {"gauge", worst < 1e-12, "uniform bond phase residual = " + sci(worst)};
}

CheckResult sum_rule_check() {
    double worst = 0.0;
    for (Boundary b : {Boundary::Moebius, Boundary::Periodic}) {
        for (double d : {0.0, 0.6}) {
            RingSpec ring{200, 1.0, d, b};
            double total = 0.0;
            for (const auto& e : mode_table(ring).entries) total += std::norm(e.coupling_h_A) + std::norm(e.coupling_h_B);
            worst = std::max(worst, std::abs(total - 200.0));
        }
    }
    return {"sum_rule", worst < 1e-9, "max |sum |h|^2 - N| = " + sci(worst)};
}

CheckResult pbc_reduction_check() {
    const SystemSpec sys = reference_system(0.0, Boundary::Periodic);
    const EffectiveGenerator full = assemble_momentum_generator(sys);
    const EffectiveGenerator reduced = pbc_effective_generator(sys);
    PropagationConfig cfg;
    cfg.t_max = 50.0;
    const auto a = integrate_fixed_step(full, photon_initial_state(full), cfg, cfg.step_dt, cfg.sample_stride);
    const auto b = integrate_fixed_step(reduced, photon_initial_state(reduced), cfg, cfg.step_dt, cfg.sample_stride);
    double worst = 0.0;
    for (ComponentRole role : {ComponentRole::Photon, ComponentRole::Acceptor}) {
        const Eigen::Index ia = full.index_of(role);
        const Eigen::Index ib = reduced.index_of(role);
        for (std::size_t s = 0; s < a.samples.size(); ++s) {
            worst = std::max(worst, std::abs(a.samples[s].amplitudes(ia) - b.samples[s].amplitudes(ib)));
        }
    }
    return {"pbc_reduction", a.samples.size() == b.samples.size() && worst < 1e-8,
            "max |full - three-level| = " + sci(worst)};
}

CheckResult basis_check() {
    const SystemSpec sys = reference_system(0.3, Boundary::Moebius);
    const ModeTable modes = mode_table(sys.ring);
    const EffectiveGenerator site = assemble_site_generator(sys);
    const EffectiveGenerator momentum = assemble_momentum_generator(sys, modes);
    const CMatrix u = embedded_transform(modes);
    PropagationConfig cfg;
    cfg.t_max = 30.0;
    const auto a = integrate_fixed_step(site, photon_initial_state(site), cfg, cfg.step_dt, cfg.sample_stride);
    const auto b = integrate_fixed_step(momentum, photon_initial_state(momentum), cfg, cfg.step_dt, cfg.sample_stride);
    double worst = 0.0;
    for (std::size_t s = 0; s < a.samples.size(); ++s) {
        worst = std::max(worst, (u * a.samples[s].amplitudes - b.samples[s].amplitudes).cwiseAbs().maxCoeff());
    }
    return {"basis_equivalence", worst < 1e-10, "max |U psi_site - psi_mode| = " + sci(worst)};
}

CheckResult conservation_check() {
    const SystemSpec sys = reference_system(0.3, Boundary::Moebius);
    PropagationConfig cfg;
    cfg.t_max = 100.0;
    const EffectiveGenerator gen = assemble_momentum_generator(sys);
    const auto traj = integrate_fixed_step(gen, photon_initial_state(gen), cfg, cfg.step_dt, 1 << 20);
    const double total = traj.eta_accumulated + traj.fluorescence_loss + traj.final_norm2();
    return {"conservation", std::abs(total - 1.0) < 1e-6, "|eta + loss + residual - 1| = " + sci(std::abs(total - 1.0))};
}

CheckResult pbc_rate_check() {
    SystemSpec sys = reference_system(0.0, Boundary::Periodic);
    sys.photon_coupling_j = 0.1;
    const double n = sys.ring.n_sites;
    const double detune = sys.photon_omega - 2.0 * sys.ring.hopping_g;
    const double kappa = sys.fluorescence_kappa;
    const double expected = n * 0.01 * kappa / (detune * detune + kappa * kappa);
    const double got = ww_rates(sys).decay_rate;
    const double err = std::abs(got - expected);
    return {"pbc_decay_rate", err < 1e-10, "|gamma - closed form| = " + sci(err)};
}

}  // namespace

std::vector<CheckResult> run_oracle_suite() {
    const std::vector<std::pair<const char*, std::function<CheckResult()>>> checks{
        {"spectrum", spectrum_check},       {"envelope", envelope_check},
        {"gauge", gauge_check},             {"sum_rule", sum_rule_check},
        {"pbc_reduction", pbc_reduction_check}, {"basis_equivalence", basis_check},
        {"conservation", conservation_check},   {"pbc_decay_rate", pbc_rate_check},
    };
    std::vector<CheckResult> results;
    for (const auto& [name, fn] : checks) {
        try {
            results.push_back(fn());
        } catch (const std::exception& e) {
            results.push_back({name, false, std::string("threw: ") + e.what()});
        }
    }
    return results;
}

}  // namespace mobring
