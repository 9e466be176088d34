#include "mobring/errors.hpp"
#include "mobring/propagator.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace mobring;

namespace {

SystemSpec make_system(double delta, Boundary b = Boundary::Moebius) {
    SystemSpec s;
    s.ring = {8, 1.0, delta, b};
    return s;
}

// 2 Gamma int_0^inf |alpha_A|^2 from the eigendecomposition of M.
double eigen_eta(const EffectiveGenerator& g, double gamma) {
    Eigen::ComplexEigenSolver<CMatrix> es(g.matrix);
    const CVector lam = es.eigenvalues();
    const CMatrix v = es.eigenvectors();
    const CVector c = v.fullPivLu().solve(CVector::Unit(g.dimension(), g.index_of(ComponentRole::Photon)));
    const Eigen::Index ia = g.index_of(ComponentRole::Acceptor);
    cplx sum = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        for (Eigen::Index j = 0; j < lam.size(); ++j) {
            const cplx ai = v(ia, i) * c(i);
            const cplx aj = v(ia, j) * c(j);
            sum += ai * std::conj(aj) / (kI * (lam(i) - std::conj(lam(j))));
        }
    }
    return 2.0 * gamma * sum.real();
}

}  // namespace

TEST(PropagationConfig, Validate) {
    PropagationConfig c;
    EXPECT_NO_THROW(c.validate());
    c.step_dt = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.sample_stride = 0;
    EXPECT_THROW(c.validate(), ConfigError);
}

// Reference values from an independent eigendecomposition of the site-basis
// generator (numpy, double precision).
TEST(TransferEfficiency, MatchesFrozenReferenceValues) {
    struct Case {
        double delta;
        Boundary b;
        double omega;
        double kappa;
        double expected;
    };
    const Case cases[] = {
        {0.0, Boundary::Moebius, -6.0, 0.3, 0.7990749586939158},
        {0.3, Boundary::Moebius, -6.0, 0.3, 0.8051880752239213},
        {0.6, Boundary::Moebius, -6.0, 0.3, 0.8102668456502476},
        {0.0, Boundary::Periodic, -6.0, 0.3, 0.8153606515918815},
        {0.6, Boundary::Moebius, -4.0, 1.0, 0.4958076402076554},
        {0.0, Boundary::Moebius, -7.0, 0.1, 0.8220593360931043},
    };
    PropagationConfig cfg;
    cfg.t_max = 600.0;
    for (const auto& c : cases) {
        SystemSpec s = make_system(c.delta, c.b);
        s.photon_omega = c.omega;
        s.fluorescence_kappa = c.kappa;
        const EfficiencyResult r = transfer_efficiency(assemble_momentum_generator(s), cfg);
        EXPECT_TRUE(r.converged);
        EXPECT_NEAR(r.eta, c.expected, 1e-6) << c.delta << " " << c.omega;
    }
}

TEST(TransferEfficiency, MatchesEigendecomposition) {
    SystemSpec s;
    s.ring = {12, 1.0, 0.3, Boundary::Periodic};
    s.photon_omega = -5.0;
    s.photon_coupling_j = 0.5;
    s.charge_sep_gamma = 0.2;
    s.fluorescence_kappa = 0.4;
    const EffectiveGenerator g = assemble_site_generator(s);
    PropagationConfig cfg;
    cfg.t_max = 2000.0;
    const EfficiencyResult r = transfer_efficiency(g, cfg);
    EXPECT_LT(r.residual, 1e-8);
    EXPECT_NEAR(r.eta, 0.8462698388791514, 1e-6);
    EXPECT_NEAR(r.eta, eigen_eta(g, s.charge_sep_gamma), 1e-6);
}

TEST(Propagate, ProbabilityBookkeeping) {
    for (double d : {0.0, 0.3, 0.6}) {
        const EffectiveGenerator g = assemble_momentum_generator(make_system(d));
        PropagationConfig cfg;
        cfg.t_max = 100.0;
        const Trajectory t = propagate(g, photon_initial_state(g), cfg);
        EXPECT_NEAR(t.eta_accumulated + t.fluorescence_loss + t.final_norm2(), 1.0, 1e-6);
        for (std::size_t i = 0; i < t.samples.size(); ++i) {
            EXPECT_NEAR(t.eta_cumulative[i] + t.loss_cumulative[i] + t.samples[i].amplitudes.squaredNorm(), 1.0, 1e-6);
        }
    }
}

TEST(Propagate, NormConservedWithoutLoss) {
    SystemSpec s = make_system(0.3);
    s.charge_sep_gamma = 0.0;
    s.fluorescence_kappa = 0.0;
    const EffectiveGenerator g = assemble_momentum_generator(s);
    PropagationConfig cfg;
    cfg.t_max = 100.0;
    const Trajectory t = propagate(g, photon_initial_state(g), cfg);
    EXPECT_EQ(t.terminated_by, Termination::TMaxReached);
    double worst = 0.0;
    for (const auto& sample : t.samples) worst = std::max(worst, std::abs(sample.amplitudes.squaredNorm() - 1.0));
    EXPECT_LT(worst, 1e-9);
    EXPECT_EQ(t.eta_accumulated, 0.0);
}

TEST(Propagate, StopsOnResidual) {
    const EffectiveGenerator g = assemble_momentum_generator(make_system(0.0));
    const Trajectory t = propagate(g, photon_initial_state(g), {});
    EXPECT_EQ(t.terminated_by, Termination::ResidualBelowTol);
    EXPECT_LT(t.final_norm2(), 1e-8);
    EXPECT_TRUE(t.eta_converged);
}

TEST(Propagate, SampleTimesStableUnderRefinement) {
    const EffectiveGenerator g = assemble_momentum_generator(make_system(0.3));
    PropagationConfig cfg;
    cfg.t_max = 5.0;
    cfg.sample_stride = 50;
    const Trajectory t = propagate(g, photon_initial_state(g), cfg);
    ASSERT_GE(t.refinements, 1);
    ASSERT_EQ(t.samples.size(), 51u);
    for (std::size_t i = 0; i < t.samples.size(); ++i) EXPECT_NEAR(t.samples[i].time, 0.1 * i, 1e-12);
}

TEST(Propagate, EndsExactlyAtTmax) {
    const EffectiveGenerator g = assemble_momentum_generator(make_system(0.0));
    PropagationConfig cfg;
    cfg.t_max = 1.0005;
    const Trajectory t = integrate_fixed_step(g, photon_initial_state(g), cfg, 0.002, 7);
    EXPECT_DOUBLE_EQ(t.samples.back().time, 1.0005);
}

TEST(Propagate, TwoLevelRabiOracle) {
    // photon <-> acceptor through a single bond: P_photon = cos^2(c t)
    EffectiveGenerator g;
    g.basis = GeneratorBasis::Site;
    g.matrix = CMatrix::Zero(2, 2);
    g.matrix(0, 1) = g.matrix(1, 0) = 0.7;
    g.labels = {{ComponentRole::Photon, "photon"}, {ComponentRole::Acceptor, "acceptor"}};
    PropagationConfig cfg;
    cfg.t_max = 10.0;
    const Trajectory t = propagate(g, photon_initial_state(g), cfg);
    for (const auto& s : t.samples) EXPECT_NEAR(std::norm(s.amplitudes(0)), std::pow(std::cos(0.7 * s.time), 2), 1e-10);
}

TEST(Propagate, StabilityGuardHalvesStep) {
    SystemSpec s = make_system(0.0);
    s.photon_omega = 120.0;
    const EffectiveGenerator g = assemble_momentum_generator(s);
    PropagationConfig cfg;
    cfg.t_max = 1.0;
    const Trajectory t = propagate(g, photon_initial_state(g), cfg);
    EXPECT_LT(t.step_dt * g.matrix.cwiseAbs().maxCoeff(), kStabilityLimit);
}

TEST(Propagate, StabilityGuardGivesUp) {
    SystemSpec s = make_system(0.0);
    s.photon_omega = 1e6;
    const EffectiveGenerator g = assemble_momentum_generator(s);
    EXPECT_THROW(propagate(g, photon_initial_state(g), {}), NumericalError);
}

TEST(Propagate, RejectsGainAndNonHermitianCoupling) {
    EffectiveGenerator g = assemble_momentum_generator(make_system(0.0));
    g.matrix(1, 1) = cplx(-6.0, 0.2);
    EXPECT_THROW(propagate(g, photon_initial_state(g), {}), ValidationError);
    g = assemble_momentum_generator(make_system(0.0));
    g.matrix(0, 2) += cplx(0.0, 0.1);
    EXPECT_THROW(propagate(g, photon_initial_state(g), {}), ValidationError);
}

TEST(Propagate, RejectsMismatchedInitialState) {
    const EffectiveGenerator g = assemble_momentum_generator(make_system(0.0));
    AmplitudeState bad;
    bad.amplitudes = CVector::Zero(3);
    EXPECT_THROW(propagate(g, bad, {}), ValidationError);
}

TEST(TransferEfficiency, FlagsTruncatedRun) {
    const EffectiveGenerator g = assemble_momentum_generator(make_system(0.0));
    PropagationConfig cfg;
    cfg.t_max = 2.0;
    const EfficiencyResult r = transfer_efficiency(g, cfg);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.terminated_by, Termination::TMaxReached);
}

TEST(TransferEfficiency, ZeroGammaGivesZero) {
    SystemSpec s = make_system(0.3);
    s.charge_sep_gamma = 0.0;
    EXPECT_EQ(transfer_efficiency(assemble_momentum_generator(s), {}).eta, 0.0);
}
