#include "commands.hpp"

#include "mobring/analysis.hpp"
#include "mobring/config.hpp"
#include "mobring/csv.hpp"
#include "mobring/errors.hpp"
#include "mobring/perturbation.hpp"
#include "mobring/propagator.hpp"
#include "mobring/ring_model.hpp"
#include "mobring/system_model.hpp"
#include "mobring/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

namespace mobring::cli {

namespace {

using nlohmann::ordered_json;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    ConfigOverrides overrides;
};

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config_path, "JSON config file")->required();
    sub->add_option("--out", o.out_path, "Write results to this file instead of stdout");
    sub->add_option("--n-sites", o.overrides.n_sites, "Override n_sites");
    sub->add_option("--hopping-g", o.overrides.hopping_g, "Override hopping_g");
    sub->add_option("--delta", o.overrides.delta, "Override the dimerization delta");
    sub->add_option("--boundary", o.overrides.boundary, "Override boundary (moebius|periodic)");
    sub->add_option("--omega", o.overrides.omega, "Override the photon frequency");
    sub->add_option("--epsilon-a", o.overrides.epsilon_a, "Override the acceptor energy");
    sub->add_option("--coupling-j", o.overrides.coupling_j, "Override the photon coupling J");
    sub->add_option("--gamma", o.overrides.gamma, "Override the charge-separation rate");
    sub->add_option("--kappa", o.overrides.kappa, "Override the fluorescence rate");
    sub->add_option("--detuning", o.overrides.detuning, "Set omega = epsilon_a + detuning");
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    file << text;
    if (!file) throw ConfigError("failed writing output file '" + path + "'");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

ordered_json system_json(const SystemSpec& sys) {
    return {{"n_sites", sys.ring.n_sites},
            {"boundary", std::string(to_string(sys.ring.boundary))},
            {"delta", sys.ring.dimerization_delta},
            {"omega", sys.photon_omega},
            {"epsilon_a", sys.acceptor_energy},
            {"detuning", sys.detuning()},
            {"gamma", sys.charge_sep_gamma},
            {"kappa", sys.fluorescence_kappa}};
}

std::string sweep_csv(const SweepResult& r) {
    CsvTable table{kSweepHeader, {}};
    for (std::size_t i = 0; i < r.size(); ++i) {
        table.add_row({r.grid[i][0], r.grid[i][1], r.eta_values[i], std::int64_t{r.converged_flags[i] ? 1 : 0}});
    }
    return emit_csv(table);
}

void report_argmax(const SweepResult& r, std::ostream& err) {
    const auto& p = r.grid[r.argmax_index];
    const auto flagged = std::count(r.converged_flags.begin(), r.converged_flags.end(), false);
    err << "argmax: delta=" << format_double(p[0]) << " detuning=" << format_double(p[1])
        << " eta=" << format_double(r.argmax_eta) << "; flagged points: " << flagged << "\n";
}

int cmd_spectrum(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
    const ModeTable t = mode_table(cfg.system.ring);
    CsvTable table{kSpectrumHeader, {}};
    for (const auto& e : t.entries) table.add_row({std::int64_t{e.index_m}, e.momentum_k, e.energy_eps_k});
    write_output(emit_csv(table), out_path, out);
    return kExitOk;
}

int cmd_couplings(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
    CsvTable table{kCouplingHeader, {}};
    for (const auto& row : coupling_report(cfg.system.ring)) {
        table.add_row({std::int64_t{row.index_m}, row.momentum_k, row.abs_h_a, row.abs_h_b});
    }
    write_output(emit_csv(table), out_path, out);
    return kExitOk;
}

int cmd_dynamics(const RunConfig& cfg, const std::string& basis, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
    EffectiveGenerator gen;
    if (basis == "momentum") {
        gen = assemble_momentum_generator(cfg.system);
    } else if (basis == "site") {
        gen = assemble_site_generator(cfg.system);
    } else {
        gen = pbc_effective_generator(cfg.system);
    }
    const Trajectory traj = propagate(gen, photon_initial_state(gen), cfg.propagation);
    const Eigen::Index ip = gen.index_of(ComponentRole::Photon);
    const Eigen::Index ia = gen.index_of(ComponentRole::Acceptor);

    CsvTable table{kTrajectoryHeader, {}};
    for (std::size_t s = 0; s < traj.samples.size(); ++s) {
        const auto& sample = traj.samples[s];
        double donors = 0.0;
        for (std::size_t i = 0; i < traj.labels.size(); ++i) {
            if (traj.labels[i].role == ComponentRole::Donor) {
                donors += std::norm(sample.amplitudes(static_cast<Eigen::Index>(i)));
            }
        }
        table.add_row({sample.time, cfg.converter.time_to_ps(sample.time), std::norm(sample.amplitudes(ip)),
                       std::norm(sample.amplitudes(ia)), donors, sample.amplitudes.squaredNorm(),
                       traj.eta_cumulative[s], traj.loss_cumulative[s]});
    }
    write_output(emit_csv(table), out_path, out);
    err << "eta=" << format_double(traj.eta_accumulated) << " step_dt=" << format_double(traj.step_dt)
        << " terminated_by=" << to_string(traj.terminated_by) << "\n";
    const double t_end = traj.samples.back().time;
    const std::array<double, 2> window =
        cfg.tail_window.value_or(std::array<double, 2>{kTailWindowFractions[0] * t_end, kTailWindowFractions[1] * t_end});
    try {
        const DecayFit fit = tail_decay_fit(acceptor_population(traj), window);
        err << "acceptor_tail_rate=" << format_double(fit.rate) << " r_squared=" << format_double(fit.r_squared)
            << " window=[" << format_double(window[0]) << ", " << format_double(window[1]) << "]\n";
    } catch (const DomainError& e) {
        err << "acceptor_tail_rate skipped: " << e.what() << "\n";
    }
    if (!traj.eta_converged) {
        err << "error: eta did not settle within " << kMaxRefinements << " step halvings\n";
        return kExitNumerical;
    }
    return kExitOk;
}

std::optional<SweepParameter> parse_parameter(const std::string& name) {
    if (name == "detuning") return SweepParameter::Detuning;
    if (name == "delta") return SweepParameter::Dimerization;
    if (name == "kappa") return SweepParameter::Kappa;
    return std::nullopt;
}

int cmd_efficiency(const RunConfig& cfg, const std::string& maximize, std::optional<double> lo,
                   std::optional<double> hi, const std::string& out_path, std::ostream& out, std::ostream& err) {
    ordered_json j;
    j["system"] = system_json(cfg.system);
    bool converged = true;
    if (!maximize.empty()) {
        const auto parameter = parse_parameter(maximize);
        if (!parameter) throw ConfigError("--maximize must be one of detuning, delta, kappa");
        if (!lo || !hi) throw ConfigError("--maximize needs --lo and --hi");
        const Optimum opt = maximize_efficiency(cfg.system, *parameter, {*lo, *hi}, cfg.propagation);
        j["parameter"] = maximize;
        j["argmax"] = opt.argmax;
        j["eta"] = opt.value;
        j["converged"] = opt.converged;
        j["evaluations"] = opt.evaluations;
        converged = opt.converged;
    } else {
        const EfficiencyResult r = transfer_efficiency(assemble_momentum_generator(cfg.system), cfg.propagation);
        j["eta"] = r.eta;
        j["fluorescence_loss"] = r.fluorescence_loss;
        j["residual"] = r.residual;
        j["converged"] = r.converged;
        j["terminated_by"] = std::string(to_string(r.terminated_by));
        j["step_dt"] = r.step_dt;
        converged = r.converged;
    }
    write_output(dump(j), out_path, out);
    if (!converged) {
        err << "error: efficiency evaluation did not converge\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, SweepMethod method, unsigned threads, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
    const auto detunings = cfg.detuning_grid();
    const SweepResult r = sweep_detuning(cfg.system, cfg.sweep_deltas, detunings, cfg.propagation, {method, threads});
    write_output(sweep_csv(r), out_path, out);
    report_argmax(r, err);
    return kExitOk;
}

int cmd_perturb(const RunConfig& cfg, std::optional<double> broadening, const std::string& out_path,
                std::ostream& out, std::ostream& err) {
    const PerturbationSolution sol = solve_perturbation(cfg.system);
    const WwRates ww = ww_rates(cfg.system, broadening);
    const double eta_pt = perturbative_efficiency(sol, cfg.system.charge_sep_gamma);
    const EfficiencyResult exact = transfer_efficiency(assemble_momentum_generator(cfg.system), cfg.propagation);

    ordered_json j;
    j["system"] = system_json(cfg.system);
    j["omega_b"] = complex_json(sol.freqs.omega_b);
    j["omega_a"] = complex_json(sol.freqs.omega_a);
    j["const_a_b"] = complex_json(sol.const_a_b);
    j["const_a_a"] = complex_json(sol.const_a_a);
    j["lamb_shift"] = ww.lamb_shift;
    j["decay_rate"] = ww.decay_rate;
    j["eta_perturbative"] = eta_pt;
    j["perturbative_in_range"] = eta_pt >= 0.0 && eta_pt <= 1.0;
    j["eta_exact"] = exact.eta;
    j["exact_converged"] = exact.converged;
    write_output(dump(j), out_path, out);
    if (!(eta_pt >= 0.0 && eta_pt <= 1.0)) {
        err << "warning: perturbative eta outside [0, 1]; the expansion is not valid at these couplings\n";
    }
    if (!exact.converged) {
        err << "error: exact efficiency did not converge\n";
        return kExitNumerical;
    }
    return kExitOk;
}

inline constexpr double kPbcCompareTol = 1e-8;

int cmd_pbc_compare(const RunConfig& cfg, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const EffectiveGenerator reduced = pbc_effective_generator(cfg.system);
    const EffectiveGenerator full = assemble_momentum_generator(cfg.system);
    const auto& p = cfg.propagation;
    const Trajectory a = integrate_fixed_step(full, photon_initial_state(full), p, p.step_dt, p.sample_stride);
    const Trajectory b = integrate_fixed_step(reduced, photon_initial_state(reduced), p, p.step_dt, p.sample_stride);
    if (a.samples.size() != b.samples.size()) {
        throw ValidationError("full and three-level runs recorded different sample counts");
    }
    const Eigen::Index fa = full.index_of(ComponentRole::Acceptor);
    const Eigen::Index fp = full.index_of(ComponentRole::Photon);
    const Eigen::Index ra = reduced.index_of(ComponentRole::Acceptor);
    const Eigen::Index rp = reduced.index_of(ComponentRole::Photon);
    double d_pa = 0.0, d_pp = 0.0, d_amp = 0.0;
    for (std::size_t s = 0; s < a.samples.size(); ++s) {
        const auto& x = a.samples[s].amplitudes;
        const auto& y = b.samples[s].amplitudes;
        d_pa = std::max(d_pa, std::abs(std::norm(x(fa)) - std::norm(y(ra))));
        d_pp = std::max(d_pp, std::abs(std::norm(x(fp)) - std::norm(y(rp))));
        d_amp = std::max({d_amp, std::abs(x(fa) - y(ra)), std::abs(x(fp) - y(rp))});
    }
    const bool passed = d_pa < kPbcCompareTol && d_amp < kPbcCompareTol;
    ordered_json j;
    j["system"] = system_json(cfg.system);
    j["samples"] = a.samples.size();
    j["max_abs_diff_p_acceptor"] = d_pa;
    j["max_abs_diff_p_photon"] = d_pp;
    j["max_abs_diff_amplitude"] = d_amp;
    j["tolerance"] = kPbcCompareTol;
    j["passed"] = passed;
    write_output(dump(j), out_path, out);
    if (!passed) {
        err << "error: full and three-level dynamics differ by more than " << format_double(kPbcCompareTol) << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

int cmd_validate(const std::string& out_path, std::ostream& out) {
    std::string text;
    bool all = true;
    for (const auto& r : run_oracle_suite()) {
        text += (r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
        all = all && r.passed;
    }
    write_output(text, out_path, out);
    return all ? kExitOk : kExitValidation;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dimerized Moebius/periodic ring light-harvesting simulator", "mobring"};
    app.require_subcommand(1);

    CommonOptions spectrum_o, couplings_o, dynamics_o, efficiency_o, sweep_o, perturb_o, pbc_o;
    auto* spectrum = app.add_subcommand("spectrum", "Band energies eps_k per momentum (CSV)");
    add_common(spectrum, spectrum_o);
    auto* couplings = app.add_subcommand("couplings", "Mode-resolved |h_A|, |h_B| (CSV)");
    add_common(couplings, couplings_o);

    auto* dynamics = app.add_subcommand("dynamics", "Photon-initialized trajectory (CSV)");
    add_common(dynamics, dynamics_o);
    std::string basis = "momentum";
    dynamics->add_option("--basis", basis, "momentum | site | pbc")
        ->check(CLI::IsMember({"momentum", "site", "pbc"}));

    auto* efficiency = app.add_subcommand("efficiency", "Transfer efficiency or its maximum (JSON)");
    add_common(efficiency, efficiency_o);
    std::string maximize;
    std::optional<double> lo, hi;
    efficiency->add_option("--maximize", maximize, "detuning | delta | kappa");
    efficiency->add_option("--lo", lo, "Lower end of the search bracket");
    efficiency->add_option("--hi", hi, "Upper end of the search bracket");

    auto* sweep = app.add_subcommand("sweep", "eta over the (delta, detuning) grid (CSV)");
    add_common(sweep, sweep_o);
    std::optional<std::string> method;
    unsigned threads = 0;
    sweep->add_option("--method", method, "exact | perturbative")->check(CLI::IsMember({"exact", "perturbative"}));
    sweep->add_option("--threads", threads, "Worker threads, 0 = hardware concurrency");

    auto* perturb = app.add_subcommand("perturb", "Second-order perturbation summary (JSON) or sweep (CSV)");
    add_common(perturb, perturb_o);
    bool perturb_sweep = false;
    std::optional<double> broadening;
    perturb->add_flag("--sweep", perturb_sweep, "Emit the perturbative sweep table instead");
    perturb->add_option("--broadening", broadening, "Lorentzian width for the decay-rate estimate");
    perturb->add_option("--threads", threads, "Worker threads for --sweep");

    auto* pbc = app.add_subcommand("pbc-compare", "Full vs three-level periodic dynamics (JSON)");
    add_common(pbc, pbc_o);

    auto* validate = app.add_subcommand("validate", "Run the oracle suite");
    std::string validate_out;
    validate->add_option("--out", validate_out, "Write results to this file instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        if (validate->parsed()) return cmd_validate(validate_out, out);
        if (spectrum->parsed()) {
            return cmd_spectrum(load_config_file(spectrum_o.config_path, spectrum_o.overrides), spectrum_o.out_path,
                                out);
        }
        if (couplings->parsed()) {
            return cmd_couplings(load_config_file(couplings_o.config_path, couplings_o.overrides),
                                 couplings_o.out_path, out);
        }
        if (dynamics->parsed()) {
            return cmd_dynamics(load_config_file(dynamics_o.config_path, dynamics_o.overrides), basis,
                                dynamics_o.out_path, out, err);
        }
        if (efficiency->parsed()) {
            return cmd_efficiency(load_config_file(efficiency_o.config_path, efficiency_o.overrides), maximize, lo, hi,
                                  efficiency_o.out_path, out, err);
        }
        if (sweep->parsed()) {
            const RunConfig cfg = load_config_file(sweep_o.config_path, sweep_o.overrides);
            SweepMethod m = cfg.sweep_method;
            if (method) m = *method == "perturbative" ? SweepMethod::Perturbative : SweepMethod::Exact;
            return cmd_sweep(cfg, m, threads, sweep_o.out_path, out, err);
        }
        if (perturb->parsed()) {
            const RunConfig cfg = load_config_file(perturb_o.config_path, perturb_o.overrides);
            if (perturb_sweep) return cmd_sweep(cfg, SweepMethod::Perturbative, threads, perturb_o.out_path, out, err);
            return cmd_perturb(cfg, broadening, perturb_o.out_path, out, err);
        }
        if (pbc->parsed()) {
            return cmd_pbc_compare(load_config_file(pbc_o.config_path, pbc_o.overrides), pbc_o.out_path, out, err);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfig;
}

}  // namespace mobring::cli
