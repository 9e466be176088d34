#include "mobring/analysis.hpp"

#include "mobring/errors.hpp"
#include "mobring/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace mobring {

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) throw ConfigError("grid needs at least one point");
    std::vector<double> v(static_cast<std::size_t>(points));
    if (points == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
    v.back() = hi;
    return v;
}

std::size_t argmax_index(std::span<const double> values) {
    std::size_t best = 0;
    while (best + 1 < values.size() && std::isnan(values[best])) ++best;
    for (std::size_t i = best + 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

SystemSpec with_parameter(const SystemSpec& tmpl, SweepParameter parameter, double value) {
    SystemSpec sys = tmpl;
    switch (parameter) {
        case SweepParameter::Detuning: sys.photon_omega = sys.acceptor_energy + value; break;
        case SweepParameter::Dimerization: sys.ring.dimerization_delta = value; break;
        case SweepParameter::Kappa: sys.fluorescence_kappa = value; break;
    }
    return sys;
}

namespace {

std::pair<double, bool> evaluate_point(const SystemSpec& sys, const PropagationConfig& config, SweepMethod method) {
    if (method == SweepMethod::Perturbative) {
        try {
            const double eta = perturbative_efficiency(solve_perturbation(sys), sys.charge_sep_gamma);
            return {eta, eta >= 0.0 && eta <= 1.0};
        } catch (const DivergentIntegralError&) {
        } catch (const DegenerateInputError&) {
        }
        return {std::numeric_limits<double>::quiet_NaN(), false};
    }
    const EfficiencyResult r = transfer_efficiency(assemble_momentum_generator(sys), config);
    return {r.eta, r.converged};
}

}  // namespace

SweepResult sweep_detuning(const SystemSpec& tmpl, std::span<const double> delta_grid,
                           std::span<const double> detuning_grid, const PropagationConfig& config,
                           const SweepOptions& options) {
    if (delta_grid.empty() || detuning_grid.empty()) throw ConfigError("sweep grids must be non-empty");
    for (double v : delta_grid) {
        if (!std::isfinite(v)) throw ConfigError("sweep delta values must be finite");
    }
    for (double v : detuning_grid) {
        if (!std::isfinite(v)) throw ConfigError("sweep detuning values must be finite");
    }
    config.validate();

    SweepResult result;
    result.axis_names = {"delta", "detuning"};
    for (double d : delta_grid) {
        for (double det : detuning_grid) result.grid.push_back({d, det});
    }
    for (const auto& point : result.grid) {
        with_parameter(with_parameter(tmpl, SweepParameter::Dimerization, point[0]), SweepParameter::Detuning, point[1])
            .validate();
    }

    const std::size_t total = result.grid.size();
    std::vector<double> eta(total, 0.0);
    std::vector<char> ok(total, 0);

    unsigned workers = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(total));

    auto run_slice = [&](unsigned worker) {
        for (std::size_t i = worker; i < total; i += workers) {
            const auto& point = result.grid[i];
            const SystemSpec sys = with_parameter(
                with_parameter(tmpl, SweepParameter::Dimerization, point[0]), SweepParameter::Detuning, point[1]);
            const auto [value, converged] = evaluate_point(sys, config, options.method);
            eta[i] = value;
            ok[i] = converged ? 1 : 0;
        }
    };

    if (workers == 1) {
        run_slice(0);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    run_slice(w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    result.eta_values = std::move(eta);
    result.converged_flags.assign(ok.begin(), ok.end());
    result.argmax_index = argmax_index(result.eta_values);
    result.argmax_eta = result.eta_values[result.argmax_index];
    return result;
}

Optimum maximize_scalar(const std::function<double(double)>& objective, double lo, double hi, int grid_points,
                        double tol) {
    if (!(lo < hi)) throw ConfigError("maximize: bracket needs lo < hi");
    if (grid_points < 3) throw ConfigError("maximize: coarse grid needs at least 3 points");

    Optimum opt;
    const auto grid = linspace(lo, hi, grid_points);
    std::vector<double> values;
    values.reserve(grid.size());
    for (double x : grid) {
        values.push_back(objective(x));
        ++opt.evaluations;
    }
    const std::size_t best = argmax_index(values);
    opt.argmax = grid[best];
    opt.value = values[best];

    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min(best + 1, grid.size() - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    opt.evaluations += 2;
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
        ++opt.evaluations;
    }
    const double x = 0.5 * (a + b);
    const double fx = objective(x);
    ++opt.evaluations;
    if (fx > opt.value) {
        opt.argmax = x;
        opt.value = fx;
    }
    return opt;
}

Optimum maximize_efficiency(const SystemSpec& tmpl, SweepParameter parameter, std::array<double, 2> bracket,
                            const PropagationConfig& config) {
    with_parameter(tmpl, parameter, bracket[0]).validate();
    with_parameter(tmpl, parameter, bracket[1]).validate();
    bool all_converged = true;
    auto objective = [&](double value) {
        const SystemSpec sys = with_parameter(tmpl, parameter, value);
        const EfficiencyResult r = transfer_efficiency(assemble_momentum_generator(sys), config);
        all_converged = all_converged && r.converged;
        return r.eta;
    };
    Optimum opt = maximize_scalar(objective, bracket[0], bracket[1]);
    opt.converged = all_converged;
    return opt;
}

DecayFit tail_decay_fit(std::span<const std::pair<double, double>> series, std::array<double, 2> window) {
    std::vector<double> ts;
    std::vector<double> logs;
    for (const auto& [t, v] : series) {
        if (t < window[0] || t > window[1]) continue;
        if (!(v > 0.0)) throw DomainError("tail_decay_fit: nonpositive value at t = " + std::to_string(t));
        ts.push_back(t);
        logs.push_back(std::log(v));
    }
    if (ts.size() < 10) {
        throw DomainError("tail_decay_fit: window holds " + std::to_string(ts.size()) + " samples, need >= 10");
    }
    const double n = static_cast<double>(ts.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        my += logs[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        sty += (ts[i] - mt) * (logs[i] - my);
        syy += (logs[i] - my) * (logs[i] - my);
    }
    if (stt == 0.0) throw DomainError("tail_decay_fit: window has no time spread");
    const double slope = sty / stt;
    const double intercept = my - slope * mt;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = logs[i] - (intercept + slope * ts[i]);
        ss_res += r * r;
    }
    DecayFit fit;
    fit.rate = -slope;
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.samples = ts.size();
    return fit;
}

std::vector<std::pair<double, double>> local_maxima(std::span<const std::pair<double, double>> series) {
    std::vector<std::pair<double, double>> peaks;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        if (series[i].second > series[i - 1].second && series[i].second > series[i + 1].second) {
            peaks.push_back(series[i]);
        }
    }
    return peaks;
}

std::vector<CouplingRow> coupling_report(const RingSpec& ring) {
    const ModeTable table = mode_table(ring);
    std::vector<CouplingRow> rows;
    rows.reserve(table.entries.size());
    for (const auto& e : table.entries) {
        rows.push_back({e.index_m, e.momentum_k, std::abs(e.coupling_h_A), std::abs(e.coupling_h_B)});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const CouplingRow& a, const CouplingRow& b) { return a.momentum_k < b.momentum_k; });
    return rows;
}

}  // namespace mobring
