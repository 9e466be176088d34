// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. Optional arguments select criteria
// by number.

#include "mobring/analysis.hpp"
#include "mobring/hermitian_eigen.hpp"
#include "mobring/perturbation.hpp"
#include "mobring/propagator.hpp"
#include "mobring/ring_model.hpp"
#include "mobring/system_model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

using namespace mobring;

namespace {

struct Verdict {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int number;
    const char* title;
    double runtime_limit_s;
    std::function<Verdict()> run;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

SystemSpec fig3_system(double delta, Boundary b = Boundary::Moebius) {
    SystemSpec s;
    s.ring = {8, 1.0, delta, b};
    s.photon_omega = -6.0;
    s.acceptor_energy = -6.0;
    s.photon_coupling_j = 1.0;
    s.charge_sep_gamma = 0.3;
    s.fluorescence_kappa = 0.3;
    return s;
}

// ---------------------------------------------------------------------------

Verdict spectrum_oracle() {
    constexpr double kTol = 1e-10;
    double worst = 0.0;
    int cases = 0;
    for (Boundary b : {Boundary::Moebius, Boundary::Periodic}) {
        for (int n : {4, 6, 8, 10, 12, 16}) {
            for (double d : {0.0, 0.3, 0.6, 1.0}) {
                const RingSpec ring{n, 1.0, d, b};
                auto analytic = mode_table(ring).band_diagonal();
                std::sort(analytic.begin(), analytic.end());
                const auto numeric = dense_hermitian_eigenvalues(site_hamiltonian(ring));
                for (std::size_t i = 0; i < analytic.size(); ++i) {
                    worst = std::max(worst, std::abs(analytic[i] - numeric[i]));
                }
                ++cases;
            }
        }
    }
    return {worst < kTol, std::to_string(cases) + " rings, max |analytic - brute force| = " + sci(worst)};
}

Verdict fig2_envelope() {
    constexpr double kEdgeTol = 1e-3;
    constexpr double kGapTol = 2e-3;
    constexpr double kRangeSlack = 1e-12;
    bool ok = true;
    std::string detail;
    for (double d : {0.0, 0.25, 0.5, 0.75}) {
        const ModeTable t = mode_table({800, 1.0, d, Boundary::Moebius});
        double lo = 1e300, hi = 0.0;
        for (const auto& e : t.entries) {
            lo = std::min(lo, e.energy_eps_k);
            hi = std::max(hi, e.energy_eps_k);
        }
        const double floor = 2.0 * std::abs(d);
        const double gap = 2.0 * lo;
        const bool in_range = lo >= floor - kRangeSlack && hi <= 2.0 + kRangeSlack;
        const bool edges = std::abs(lo - floor) < kEdgeTol && std::abs(hi - 2.0) < kEdgeTol;
        const bool gap_ok = std::abs(gap - 4.0 * std::abs(d)) < kGapTol;
        ok = ok && in_range && edges && gap_ok;
        detail += fmt("delta=%.2f", d) + ": min-2g|d|=" + sci(lo - floor) + " 2g-max=" + sci(2.0 - hi) +
                  " gap-4g|d|=" + sci(gap - 4.0 * std::abs(d)) + ((in_range && edges && gap_ok) ? "; " : " [miss]; ");
    }
    return {ok, detail};
}

Verdict pbc_reduction() {
    constexpr double kAmplitudeTol = 1e-8;
    constexpr double kCouplingTol = 1e-12;
    const SystemSpec s = fig3_system(0.0, Boundary::Periodic);
    const EffectiveGenerator full = assemble_momentum_generator(s);
    const EffectiveGenerator reduced = pbc_effective_generator(s);
    PropagationConfig cfg;
    cfg.t_max = 100.0;
    const auto a = integrate_fixed_step(full, photon_initial_state(full), cfg, cfg.step_dt, cfg.sample_stride);
    const auto b = integrate_fixed_step(reduced, photon_initial_state(reduced), cfg, cfg.step_dt, cfg.sample_stride);
    double amp = 0.0;
    if (a.samples.size() != b.samples.size()) return {false, "sample counts differ"};
    for (ComponentRole role : {ComponentRole::Photon, ComponentRole::Acceptor}) {
        const Eigen::Index ia = full.index_of(role);
        const Eigen::Index ib = reduced.index_of(role);
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            amp = std::max(amp, std::abs(a.samples[i].amplitudes(ia) - b.samples[i].amplitudes(ib)));
        }
    }
    double coupling = 0.0;
    int concentrated = 0;
    const double root_n = std::sqrt(8.0);
    for (const auto& e : mode_table(s.ring).entries) {
        for (cplx h : {e.coupling_h_A, e.coupling_h_B}) {
            if (std::abs(std::abs(h) - root_n) < kCouplingTol) {
                ++concentrated;
            } else {
                coupling = std::max(coupling, std::abs(h));
            }
        }
    }
    const bool ok = amp < kAmplitudeTol && concentrated == 1 && coupling < kCouplingTol;
    return {ok, std::to_string(a.samples.size()) + " samples, max amplitude diff = " + sci(amp) +
                    ", modes at sqrt(N) = " + std::to_string(concentrated) + ", max other |h| = " + sci(coupling)};
}

Verdict conservation() {
    constexpr double kBookkeepingTol = 1e-6;
    constexpr double kNormTol = 1e-9;
    double bookkeeping = 0.0;
    for (double d : {0.0, 0.3, 0.6}) {
        const EffectiveGenerator g = assemble_momentum_generator(fig3_system(d));
        const Trajectory t = propagate(g, photon_initial_state(g), {});
        bookkeeping = std::max(bookkeeping, std::abs(t.eta_accumulated + t.fluorescence_loss + t.final_norm2() - 1.0));
    }
    double drift = 0.0;
    for (double d : {0.0, 0.3, 0.6}) {
        SystemSpec s = fig3_system(d);
        s.charge_sep_gamma = 0.0;
        s.fluorescence_kappa = 0.0;
        const EffectiveGenerator g = assemble_momentum_generator(s);
        PropagationConfig cfg;
        cfg.t_max = 100.0;
        const Trajectory t = propagate(g, photon_initial_state(g), cfg);
        for (const auto& sample : t.samples) drift = std::max(drift, std::abs(sample.amplitudes.squaredNorm() - 1.0));
    }
    return {bookkeeping < kBookkeepingTol && drift < kNormTol,
            "max |eta + loss + residual - 1| = " + sci(bookkeeping) + ", lossless norm drift = " + sci(drift)};
}

Verdict fig3_qualitative() {
    constexpr double kEarlyPeakTime = 5.0;
    constexpr double kRateSpread = 0.2;
    const std::array<double, 2> window{60.0, 95.0};
    bool ok = true;
    std::string detail;
    std::vector<double> rates;
    for (double d : {0.0, 0.3, 0.6}) {
        const EffectiveGenerator g = assemble_momentum_generator(fig3_system(d));
        PropagationConfig cfg;
        cfg.t_max = 100.0;
        cfg.residual_tol = 0.0;
        const Trajectory t = propagate(g, photon_initial_state(g), cfg);
        const auto pa = acceptor_population(t);
        const auto peaks = local_maxima(pa);
        const auto global = std::max_element(pa.begin(), pa.end(),
                                             [](const auto& x, const auto& y) { return x.second < y.second; });
        bool shape = pa.front().second == 0.0 && global->first <= kEarlyPeakTime;
        std::vector<std::pair<double, double>> after;
        for (const auto& p : peaks) {
            if (p.first > global->first) after.push_back(p);
        }
        shape = shape && after.size() >= 2 && after[0].second < global->second && after[1].second < after[0].second;
        const DecayFit fit = tail_decay_fit(pa, window);
        rates.push_back(fit.rate);
        ok = ok && shape;
        detail += fmt("delta=%.1f", d) + ": peak " + fmt("%.3f", global->second) + " at t=" + fmt("%.2f", global->first);
        if (after.size() >= 2) detail += ", next " + fmt("%.3f", after[0].second) + ", " + fmt("%.3f", after[1].second);
        detail += ", tail rate " + fmt("%.4f", fit.rate) + (shape ? "; " : " [shape miss]; ");
    }
    const auto [lo, hi] = std::minmax_element(rates.begin(), rates.end());
    const double spread = (*hi - *lo) / *lo;
    ok = ok && spread <= kRateSpread;
    detail += "rate spread " + fmt("%.3f", spread);
    return {ok, detail};
}

Verdict fig4_ordering() {
    constexpr double kResonanceRegion = 1.0;
    PropagationConfig cfg;
    cfg.t_max = 600.0;
    const auto grid = linspace(-4.0, 4.0, 81);
    const std::vector<double> deltas{0.0, 0.6};
    bool ok = true;
    std::string detail;
    for (double kappa : {1.0, 0.1}) {
        SystemSpec s = fig3_system(0.0);
        s.fluorescence_kappa = kappa;
        const SweepResult r = sweep_detuning(s, deltas, grid, cfg);
        const std::size_t n = grid.size();
        int violations = 0;
        double worst = 0.0, first_bad = 0.0, last_bad = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = r.eta_values[n + i] - r.eta_values[i];
            if (diff < 0.0) {
                if (violations == 0) first_bad = grid[i];
                last_bad = grid[i];
                ++violations;
                worst = std::min(worst, diff);
            }
        }
        const std::vector<double> uniform(r.eta_values.begin(), r.eta_values.begin() + static_cast<std::ptrdiff_t>(n));
        const double peak = grid[argmax_index(uniform)];
        const auto flagged = std::count(r.converged_flags.begin(), r.converged_flags.end(), false);
        const bool panel = violations == 0 && std::abs(peak) <= kResonanceRegion && flagged == 0;
        ok = ok && panel;
        detail += fmt("kappa=%.1f", kappa) + ": " + std::to_string(violations) + " ordering violations";
        if (violations) detail += " on [" + fmt("%.1f", first_bad) + ", " + fmt("%.1f", last_bad) + "], worst " + sci(worst);
        detail += ", uniform argmax at detuning " + fmt("%.1f", peak) + ", flagged " + std::to_string(flagged) + "; ";
    }
    return {ok, detail};
}

struct AmplitudeError {
    double relative_l2 = 0.0;
    double normalized_max = 0.0;
};

AmplitudeError perturbative_error(const SystemSpec& s) {
    const EffectiveGenerator g = assemble_momentum_generator(s);
    PropagationConfig cfg;
    cfg.t_max = 20.0;
    cfg.sample_stride = 25;
    const Trajectory exact = propagate(g, photon_initial_state(g), cfg);
    const PerturbationSolution sol = solve_perturbation(s);
    double num = 0.0, den = 0.0;
    RVector err = RVector::Zero(g.dimension());
    RVector ref = RVector::Zero(g.dimension());
    for (const auto& sample : exact.samples) {
        const CVector diff = perturbative_amplitudes(sol, sample.time).amplitudes - sample.amplitudes;
        num += diff.squaredNorm();
        den += sample.amplitudes.squaredNorm();
        err = err.cwiseMax(diff.cwiseAbs());
        ref = ref.cwiseMax(sample.amplitudes.cwiseAbs());
    }
    AmplitudeError e;
    e.relative_l2 = std::sqrt(num / den);
    for (Eigen::Index i = 0; i < g.dimension(); ++i) {
        if (ref(i) > 0.0) e.normalized_max = std::max(e.normalized_max, err(i) / ref(i));
    }
    return e;
}

Verdict fig5_perturbation() {
    constexpr double kL2Tol = 0.05;
    constexpr double kExponentLo = 1.5;
    constexpr double kExponentHi = 2.5;
    SystemSpec base = fig3_system(0.0);
    base.fluorescence_kappa = 0.1;

    const auto grid = linspace(-4.0, 4.0, 81);
    const std::vector<double> deltas{0.0, 0.6};
    const SweepResult r = sweep_detuning(base, deltas, grid, {}, {SweepMethod::Perturbative, 0});
    const std::size_t n = grid.size();
    int violations = 0;
    double first_bad = 0.0, last_bad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(r.eta_values[n + i] >= r.eta_values[i])) {
            if (violations == 0) first_bad = grid[i];
            last_bad = grid[i];
            ++violations;
        }
    }
    const auto out_of_range = std::count(r.converged_flags.begin(), r.converged_flags.end(), false);

    auto scaled = [&](double factor, double delta) {
        SystemSpec s = base;
        s.ring.dimerization_delta = delta;
        s.photon_coupling_j = factor;
        s.acceptor_coupling_xi = factor;
        return s;
    };
    double l2 = 0.0;
    for (double d : {0.0, 0.6}) l2 = std::max(l2, perturbative_error(scaled(0.1, d)).relative_l2);

    std::vector<double> xs, ys;
    for (double f : {0.2, 0.1, 0.05}) {
        xs.push_back(std::log(f));
        ys.push_back(std::log(perturbative_error(scaled(f, 0.0)).normalized_max));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        mx += xs[i] / 3.0;
        my += ys[i] / 3.0;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double exponent = sxy / sxx;

    const bool ok = violations == 0 && l2 < kL2Tol && exponent >= kExponentLo && exponent <= kExponentHi;
    std::string detail = "perturbative ordering violations " + std::to_string(violations);
    if (violations) detail += " on [" + fmt("%.1f", first_bad) + ", " + fmt("%.1f", last_bad) + "]";
    detail += " (" + std::to_string(out_of_range) + " grid values outside [0, 1]); weak-coupling relative L2 " +
              fmt("%.4f", l2) + "; convergence exponent " + fmt("%.3f", exponent);
    return {ok, detail};
}

Verdict fig6_couplings() {
    constexpr double kSumTol = 1e-9;
    constexpr double kNonzero = 1e-10;
    double sum_err = 0.0;
    std::vector<double> max_b;
    double min_total = 1e300;
    double mean_ratio = 0.0;
    for (double d : {0.0, 0.6}) {
        const auto rows = coupling_report({200, 1.0, d, Boundary::Moebius});
        double total = 0.0, mb = 0.0, sa = 0.0, sb = 0.0;
        for (const auto& r : rows) {
            total += r.abs_h_a * r.abs_h_a + r.abs_h_b * r.abs_h_b;
            mb = std::max(mb, r.abs_h_b);
            min_total = std::min(min_total, r.abs_h_a * r.abs_h_a + r.abs_h_b * r.abs_h_b);
            sa += r.abs_h_a;
            sb += r.abs_h_b;
        }
        sum_err = std::max(sum_err, std::abs(total - 200.0));
        max_b.push_back(mb);
        if (d > 0.0) mean_ratio = sa / sb;
    }
    const bool ok = sum_err < kSumTol && max_b[1] < max_b[0] && min_total > kNonzero;
    return {ok, "sum rule error " + sci(sum_err) + ", max|h_B| " + fmt("%.4f", max_b[0]) + " -> " +
                    fmt("%.4f", max_b[1]) + ", min mode weight " + sci(min_total) +
                    ", mean|h_A|/mean|h_B| at delta=0.6 = " + fmt("%.2f", mean_ratio)};
}

Verdict wigner_weisskopf() {
    constexpr double kRateTol = 0.10;
    constexpr double kClosedFormTol = 1e-10;
    SystemSpec s = fig3_system(0.0);
    s.photon_coupling_j = 0.1;
    const double two_gamma = 2.0 * ww_rates(s).decay_rate;
    const EffectiveGenerator g = assemble_momentum_generator(s);
    PropagationConfig cfg;
    cfg.t_max = 200.0;
    cfg.residual_tol = 0.0;
    const Trajectory t = propagate(g, photon_initial_state(g), cfg);
    const auto survival = role_population(t, ComponentRole::Photon);
    const double t_end = survival.back().first;
    const DecayFit fit =
        tail_decay_fit(survival, {kTailWindowFractions[0] * t_end, kTailWindowFractions[1] * t_end});
    const double rel = std::abs(fit.rate - two_gamma) / two_gamma;

    SystemSpec p = s;
    p.ring.boundary = Boundary::Periodic;
    const double det = p.photon_omega - 2.0 * p.ring.hopping_g;
    const double k = p.fluorescence_kappa;
    const double closed = 8.0 * 0.01 * k / (det * det + k * k);
    const double closed_err = std::abs(ww_rates(p).decay_rate - closed);

    return {rel <= kRateTol && closed_err < kClosedFormTol,
            "fitted survival rate " + sci(fit.rate) + " vs 2 gamma " + sci(two_gamma) + " (relative diff " +
                fmt("%.3f", rel) + "); periodic closed-form error " + sci(closed_err)};
}

Verdict basis_independence() {
    constexpr double kAmplitudeTol = 1e-10;
    constexpr double kEtaTol = 1e-8;
    double amp = 0.0, eta = 0.0;
    for (double d : {0.0, 0.3, 0.6}) {
        const SystemSpec s = fig3_system(d);
        const ModeTable modes = mode_table(s.ring);
        const EffectiveGenerator site = assemble_site_generator(s);
        const EffectiveGenerator mom = assemble_momentum_generator(s, modes);
        const CMatrix u = embedded_transform(modes);
        PropagationConfig cfg;
        cfg.t_max = 100.0;
        const auto a = integrate_fixed_step(site, photon_initial_state(site), cfg, cfg.step_dt, cfg.sample_stride);
        const auto b = integrate_fixed_step(mom, photon_initial_state(mom), cfg, cfg.step_dt, cfg.sample_stride);
        for (std::size_t i = 0; i < std::min(a.samples.size(), b.samples.size()); ++i) {
            amp = std::max(amp, (u * a.samples[i].amplitudes - b.samples[i].amplitudes).cwiseAbs().maxCoeff());
        }
        eta = std::max(eta, std::abs(transfer_efficiency(site, {}).eta - transfer_efficiency(mom, {}).eta));
    }
    return {amp < kAmplitudeTol && eta < kEtaTol, "max mapped amplitude diff " + sci(amp) + ", max eta diff " + sci(eta)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "spectrum oracle", 5.0, spectrum_oracle},
        {2, "band envelope N=800", 1.0, fig2_envelope},
        {3, "periodic three-level reduction", 5.0, pbc_reduction},
        {4, "conservation", 10.0, conservation},
        {5, "acceptor population shape", 10.0, fig3_qualitative},
        {6, "dimerized-over-uniform efficiency ordering", 120.0, fig4_ordering},
        {7, "perturbation consistency", 60.0, fig5_perturbation},
        {8, "mode couplings N=200", 1.0, fig6_couplings},
        {9, "Wigner-Weisskopf rates", 10.0, wigner_weisskopf},
        {10, "basis independence", 5.0, basis_independence},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.number)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed < c.runtime_limit_s;
        const bool pass = v.passed && in_time;
        if (!pass) ++failures;
        std::printf("%s criterion %d (%s): %s [%.2f s, limit %.0f s%s]\n", pass ? "PASS" : "FAIL", c.number, c.title,
                    v.detail.c_str(), elapsed, c.runtime_limit_s, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
