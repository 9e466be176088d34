#include "mobring/system_model.hpp"

#include "mobring/errors.hpp"

#include <cmath>
#include <string>

namespace mobring {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) throw ConfigError(std::string(name) + " must be finite");
}

void require_nonnegative(double value, const char* name) {
    require_finite(value, name);
    if (value < 0.0) throw ConfigError(std::string(name) + " must be >= 0");
}

}  // namespace

void SystemSpec::validate() const {
    ring.validate();
    require_finite(photon_omega, "omega");
    require_finite(acceptor_energy, "epsilon_a");
    require_nonnegative(photon_coupling_j, "coupling_j");
    require_finite(acceptor_coupling_xi, "coupling_xi");
    if (!(acceptor_coupling_xi > 0.0)) throw ConfigError("coupling_xi must be > 0");
    require_nonnegative(charge_sep_gamma, "gamma");
    require_nonnegative(fluorescence_kappa, "kappa");
}

Eigen::Index EffectiveGenerator::index_of(ComponentRole role) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].role == role) return static_cast<Eigen::Index>(i);
    }
    throw ValidationError("generator has no component with the requested role");
}

EffectiveGenerator assemble_momentum_generator(const SystemSpec& sys) {
    sys.validate();
    return assemble_momentum_generator(sys, mode_table(sys.ring));
}

EffectiveGenerator assemble_momentum_generator(const SystemSpec& sys, const ModeTable& modes) {
    const int n = sys.ring.n_sites;
    const int cells = modes.mode_count();
    const double kappa = sys.fluorescence_kappa;

    EffectiveGenerator gen;
    gen.basis = GeneratorBasis::Momentum;
    gen.matrix = CMatrix::Zero(n + 2, n + 2);
    gen.labels.reserve(static_cast<std::size_t>(n + 2));
    gen.labels.push_back({ComponentRole::Photon, "photon"});
    gen.labels.push_back({ComponentRole::Acceptor, "acceptor"});

    gen.matrix(0, 0) = sys.photon_omega;
    gen.matrix(1, 1) = cplx(sys.acceptor_energy, -sys.charge_sep_gamma);

    for (int m = 0; m < cells; ++m) {
        const auto& e = modes.entries[static_cast<std::size_t>(m)];
        const Eigen::Index a = 2 + m;
        const Eigen::Index b = 2 + cells + m;
        gen.matrix(a, a) = cplx(e.energy_eps_k, -kappa);
        gen.matrix(b, b) = cplx(-e.energy_eps_k, -kappa);

        // <A_k| H |photon> = J h_A, <A_k| H |acceptor> = xi h_A
        gen.matrix(a, 0) = sys.photon_coupling_j * e.coupling_h_A;
        gen.matrix(b, 0) = sys.photon_coupling_j * e.coupling_h_B;
        gen.matrix(a, 1) = sys.acceptor_coupling_xi * e.coupling_h_A;
        gen.matrix(b, 1) = sys.acceptor_coupling_xi * e.coupling_h_B;
        gen.matrix(0, a) = std::conj(gen.matrix(a, 0));
        gen.matrix(0, b) = std::conj(gen.matrix(b, 0));
        gen.matrix(1, a) = std::conj(gen.matrix(a, 1));
        gen.matrix(1, b) = std::conj(gen.matrix(b, 1));
    }
    for (int m = 0; m < cells; ++m) gen.labels.push_back({ComponentRole::Donor, "A_" + std::to_string(m)});
    for (int m = 0; m < cells; ++m) gen.labels.push_back({ComponentRole::Donor, "B_" + std::to_string(m)});
    return gen;
}

EffectiveGenerator assemble_site_generator(const SystemSpec& sys) {
    sys.validate();
    const int n = sys.ring.n_sites;

    EffectiveGenerator gen;
    gen.basis = GeneratorBasis::Site;
    gen.matrix = CMatrix::Zero(n + 2, n + 2);
    gen.labels.push_back({ComponentRole::Photon, "photon"});
    gen.labels.push_back({ComponentRole::Acceptor, "acceptor"});

    gen.matrix(0, 0) = sys.photon_omega;
    gen.matrix(1, 1) = cplx(sys.acceptor_energy, -sys.charge_sep_gamma);
    gen.matrix.bottomRightCorner(n, n) = site_hamiltonian(sys.ring);
    for (int j = 0; j < n; ++j) {
        const Eigen::Index d = 2 + j;
        gen.matrix(d, d) -= kI * sys.fluorescence_kappa;
        gen.matrix(d, 0) = sys.photon_coupling_j;
        gen.matrix(0, d) = sys.photon_coupling_j;
        gen.matrix(d, 1) = sys.acceptor_coupling_xi;
        gen.matrix(1, d) = sys.acceptor_coupling_xi;
        gen.labels.push_back({ComponentRole::Donor, "site_" + std::to_string(j + 1)});
    }
    return gen;
}

EffectiveGenerator pbc_effective_generator(const SystemSpec& sys) {
    sys.validate();
    if (sys.ring.boundary != Boundary::Periodic) {
        throw ConfigError("the three-level reduction requires boundary \"periodic\"");
    }
    const double root_n = std::sqrt(static_cast<double>(sys.ring.n_sites));

    EffectiveGenerator gen;
    gen.basis = GeneratorBasis::PbcEffective;
    gen.matrix = CMatrix::Zero(3, 3);
    gen.labels = {{ComponentRole::Photon, "photon"},
                  {ComponentRole::Donor, "beta_0"},
                  {ComponentRole::Acceptor, "acceptor"}};
    gen.matrix(0, 0) = sys.photon_omega;
    gen.matrix(1, 1) = cplx(2.0 * sys.ring.hopping_g, -sys.fluorescence_kappa);
    gen.matrix(2, 2) = cplx(sys.acceptor_energy, -sys.charge_sep_gamma);
    gen.matrix(0, 1) = gen.matrix(1, 0) = root_n * sys.photon_coupling_j;
    gen.matrix(2, 1) = gen.matrix(1, 2) = root_n * sys.acceptor_coupling_xi;
    return gen;
}

CMatrix embedded_transform(const ModeTable& modes) {
    const Eigen::Index n = modes.transform_w.rows();
    CMatrix u = CMatrix::Zero(n + 2, n + 2);
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    u.bottomRightCorner(n, n) = modes.transform_w;
    return u;
}

}  // namespace mobring
