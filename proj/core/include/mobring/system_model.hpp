#pragma once

#include "mobring/ring_model.hpp"
#include "mobring/types.hpp"

#include <string>
#include <vector>

namespace mobring {

/// Photon + acceptor + donor ring. All energies and rates in units of the
/// donor-acceptor coupling; acceptor_coupling_xi is therefore 1 unless a
/// caller rescales every coupling at once (weak-coupling studies).
struct SystemSpec {
    RingSpec ring;
    double photon_omega = -6.0;
    double acceptor_energy = -6.0;
    double photon_coupling_j = 1.0;
    double acceptor_coupling_xi = 1.0;
    double charge_sep_gamma = 0.3;
    double fluorescence_kappa = 0.3;

    void validate() const;
    double detuning() const { return photon_omega - acceptor_energy; }
};

enum class GeneratorBasis { Site, Momentum, PbcEffective };

enum class ComponentRole { Photon, Acceptor, Donor };

struct BasisLabel {
    ComponentRole role;
    std::string name;
};

/// Non-Hermitian single-excitation Hamiltonian M; amplitudes obey
/// i dpsi/dt = M psi.
struct EffectiveGenerator {
    GeneratorBasis basis = GeneratorBasis::Site;
    CMatrix matrix;
    std::vector<BasisLabel> labels;

    Eigen::Index dimension() const { return matrix.rows(); }
    /// First component with the given role; throws ValidationError if absent.
    Eigen::Index index_of(ComponentRole role) const;
};

/// Diagonal (omega, eps_A - i Gamma, {eps_k - i kappa}, {-eps_k - i kappa});
/// photon and acceptor couple to mode A_k (B_k) through J h_A (J h_B) and
/// xi h_A (xi h_B).
EffectiveGenerator assemble_momentum_generator(const SystemSpec& sys);
EffectiveGenerator assemble_momentum_generator(const SystemSpec& sys, const ModeTable& modes);

/// Photon and acceptor couple uniformly (J, xi) to every donor site; donor
/// block is the ring Hamiltonian minus i kappa.
EffectiveGenerator assemble_site_generator(const SystemSpec& sys);

/// Three-level reduction (photon, beta_0, acceptor) of a periodic ring, where
/// only the uniform mode at energy 2g couples, with strength sqrt(N) J and
/// sqrt(N) xi. Throws ConfigError for a Moebius ring.
EffectiveGenerator pbc_effective_generator(const SystemSpec& sys);

/// (N + 2)-dimensional unitary diag(1, 1, W) mapping site-basis amplitudes
/// to momentum-basis amplitudes.
CMatrix embedded_transform(const ModeTable& modes);

}  // namespace mobring
