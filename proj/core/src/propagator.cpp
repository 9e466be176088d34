#include "mobring/propagator.hpp"

#include "mobring/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mobring {

namespace {

constexpr double kHermitianOffDiagonalTol = 1e-12;

// Per-component decay rates 2 * (-Im M_ii), split into the acceptor channel
// (eta) and everything else (fluorescence). Rejects gain and off-diagonal
// anti-Hermitian parts, which would break the norm bookkeeping.
struct LossRates {
    RVector eta;
    RVector loss;
};

LossRates loss_rates(const EffectiveGenerator& gen) {
    const Eigen::Index n = gen.dimension();
    if (gen.matrix.cols() != n || static_cast<Eigen::Index>(gen.labels.size()) != n) {
        throw ValidationError("generator matrix and labels disagree in dimension");
    }
    CMatrix anti = 0.5 * (gen.matrix - gen.matrix.adjoint());
    anti.diagonal().setZero();
    const double scale = std::max(1.0, gen.matrix.cwiseAbs().maxCoeff());
    if (anti.cwiseAbs().maxCoeff() > kHermitianOffDiagonalTol * scale) {
        throw ValidationError("generator has off-diagonal non-Hermitian couplings");
    }
    LossRates rates{RVector::Zero(n), RVector::Zero(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const double rate = -2.0 * gen.matrix(i, i).imag();
        if (rate < -kHermitianOffDiagonalTol * scale) {
            throw ValidationError("generator has a gain term on component " + gen.labels[static_cast<std::size_t>(i)].name);
        }
        if (gen.labels[static_cast<std::size_t>(i)].role == ComponentRole::Acceptor) {
            rates.eta(i) = rate;
        } else {
            rates.loss(i) = rate;
        }
    }
    return rates;
}

int doubled_stride(int stride) {
    return stride > std::numeric_limits<int>::max() / 2 ? std::numeric_limits<int>::max() : 2 * stride;
}

double weighted_norm(const RVector& rates, const CVector& y) {
    return (rates.array() * y.cwiseAbs2().array()).sum();
}

}  // namespace

void PropagationConfig::validate() const {
    if (!(step_dt > 0.0) || !std::isfinite(step_dt)) throw ConfigError("step_dt must be > 0");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be > 0");
    if (!(residual_tol >= 0.0)) throw ConfigError("residual_tol must be >= 0");
    if (sample_stride < 1) throw ConfigError("sample_stride must be >= 1");
}

std::string_view to_string(Termination termination) {
    return termination == Termination::ResidualBelowTol ? "residual_below_tol" : "t_max_reached";
}

double Trajectory::final_norm2() const {
    return samples.empty() ? 0.0 : samples.back().amplitudes.squaredNorm();
}

Trajectory integrate_fixed_step(const EffectiveGenerator& gen, const AmplitudeState& initial,
                                const PropagationConfig& config, double step_dt, int stride) {
    if (initial.amplitudes.size() != gen.dimension()) {
        throw ValidationError("initial state dimension does not match the generator");
    }
    if (initial.amplitudes.squaredNorm() > 1.0 + 1e-9) {
        throw ValidationError("initial state norm exceeds 1");
    }
    const LossRates rates = loss_rates(gen);
    const CMatrix k_op = -kI * gen.matrix;
    const Eigen::Index n = gen.dimension();

    Trajectory traj;
    traj.labels = gen.labels;
    traj.step_dt = step_dt;

    CVector psi = initial.amplitudes;
    CVector k1(n), k2(n), k3(n), k4(n), stage(n);
    double eta = 0.0;
    double loss = 0.0;
    const double t0 = initial.time;

    auto record = [&](double t) {
        traj.samples.push_back({t, psi});
        traj.eta_cumulative.push_back(eta);
        traj.loss_cumulative.push_back(loss);
    };
    record(t0);

    const long long steps = static_cast<long long>(std::ceil(config.t_max / step_dt - 1e-9));
    traj.terminated_by = Termination::TMaxReached;
    for (long long s = 1; s <= steps; ++s) {
        const double h = (s == steps) ? config.t_max - static_cast<double>(steps - 1) * step_dt : step_dt;
        if (h <= 0.0) break;

        const double f1_eta = weighted_norm(rates.eta, psi);
        const double f1_loss = weighted_norm(rates.loss, psi);
        k1.noalias() = k_op * psi;

        stage = psi + (0.5 * h) * k1;
        const double f2_eta = weighted_norm(rates.eta, stage);
        const double f2_loss = weighted_norm(rates.loss, stage);
        k2.noalias() = k_op * stage;

        stage = psi + (0.5 * h) * k2;
        const double f3_eta = weighted_norm(rates.eta, stage);
        const double f3_loss = weighted_norm(rates.loss, stage);
        k3.noalias() = k_op * stage;

        stage = psi + h * k3;
        const double f4_eta = weighted_norm(rates.eta, stage);
        const double f4_loss = weighted_norm(rates.loss, stage);
        k4.noalias() = k_op * stage;

        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        eta += (h / 6.0) * (f1_eta + 2.0 * f2_eta + 2.0 * f3_eta + f4_eta);
        loss += (h / 6.0) * (f1_loss + 2.0 * f2_loss + 2.0 * f3_loss + f4_loss);

        const double norm2 = psi.squaredNorm();
        if (!std::isfinite(norm2) || !std::isfinite(eta) || !std::isfinite(loss)) {
            throw NumericalError("propagation produced a non-finite state at step " + std::to_string(s));
        }
        const double t = (s == steps) ? t0 + config.t_max : t0 + static_cast<double>(s) * step_dt;
        if (norm2 < config.residual_tol) {
            traj.terminated_by = Termination::ResidualBelowTol;
            record(t);
            break;
        }
        if (s % stride == 0 || s == steps) record(t);
    }
    traj.eta_accumulated = eta;
    traj.fluorescence_loss = loss;
    return traj;
}

Trajectory propagate(const EffectiveGenerator& gen, const AmplitudeState& initial,
                     const PropagationConfig& config) {
    config.validate();
    const double max_entry = gen.matrix.cwiseAbs().maxCoeff();
    double dt = config.step_dt;
    int stride = config.sample_stride;
    int guard_halvings = 0;
    while (dt * max_entry >= kStabilityLimit) {
        if (++guard_halvings > kMaxRefinements) {
            throw NumericalError("stability guard step_dt * max|M| < 0.1 not met within " +
                                 std::to_string(kMaxRefinements) + " halvings");
        }
        dt *= 0.5;
        stride = doubled_stride(stride);
    }

    Trajectory previous = integrate_fixed_step(gen, initial, config, dt, stride);
    for (int r = 1; r <= kMaxRefinements; ++r) {
        dt *= 0.5;
        stride = doubled_stride(stride);
        Trajectory current = integrate_fixed_step(gen, initial, config, dt, stride);
        current.refinements = r;
        if (std::abs(current.eta_accumulated - previous.eta_accumulated) < kEtaRefinementTol) {
            current.eta_converged = true;
            return current;
        }
        previous = std::move(current);
    }
    previous.eta_converged = false;
    return previous;
}

AmplitudeState photon_initial_state(const EffectiveGenerator& gen) {
    AmplitudeState state;
    state.amplitudes = CVector::Zero(gen.dimension());
    state.amplitudes(gen.index_of(ComponentRole::Photon)) = 1.0;
    return state;
}

std::vector<std::pair<double, double>> role_population(const Trajectory& traj, ComponentRole role) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        double p = 0.0;
        for (std::size_t i = 0; i < traj.labels.size(); ++i) {
            if (traj.labels[i].role == role) p += std::norm(s.amplitudes(static_cast<Eigen::Index>(i)));
        }
        out.emplace_back(s.time, p);
    }
    return out;
}

std::vector<std::pair<double, double>> acceptor_population(const Trajectory& traj) {
    return role_population(traj, ComponentRole::Acceptor);
}

EfficiencyResult transfer_efficiency(const EffectiveGenerator& gen, const PropagationConfig& config) {
    PropagationConfig quiet = config;
    quiet.sample_stride = 1 << 20;  // endpoints only
    const Trajectory traj = propagate(gen, photon_initial_state(gen), quiet);

    EfficiencyResult result;
    result.eta = traj.eta_accumulated;
    result.fluorescence_loss = traj.fluorescence_loss;
    result.residual = traj.final_norm2();
    result.terminated_by = traj.terminated_by;
    result.step_dt = traj.step_dt;
    result.converged = traj.eta_converged &&
                       !(traj.terminated_by == Termination::TMaxReached && result.residual > kResidualFlag);
    return result;
}

}  // namespace mobring
