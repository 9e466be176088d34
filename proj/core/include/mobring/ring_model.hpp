#pragma once

#include "mobring/types.hpp"

#include <string_view>
#include <vector>

namespace mobring {

enum class Boundary { Moebius, Periodic };

std::string_view to_string(Boundary boundary);

/// Donor ring: N sites with alternating bonds g(1 -/+ delta). Energies in
/// units of the donor-acceptor coupling.
struct RingSpec {
    int n_sites = 8;
    double hopping_g = 1.0;
    double dimerization_delta = 0.0;
    Boundary boundary = Boundary::Moebius;

    /// Throws ConfigError unless N is even and >= 4, g > 0 and |delta| <= 1.
    void validate() const;
};

/// Energies below this fraction of g count as a zero mode.
inline constexpr double kZeroEnergyTol = 1e-9;

/// One Bloch momentum of the two-site unit cell. The A mode sits at
/// +energy_eps_k, the B mode at -energy_eps_k.
struct ModeEntry {
    int index_m = 0;
    double momentum_k = 0.0;
    double energy_eps_k = 0.0;
    cplx phase_theta_k{1.0, 0.0};
    cplx coupling_h_A{};
    cplx coupling_h_B{};
};

/// Mode decomposition of a ring. Row m of transform_w (m < N/2) holds the
/// site coefficients of A_m, row N/2 + m those of B_m, so that
/// mode amplitudes = transform_w * site amplitudes.
struct ModeTable {
    RingSpec ring;
    std::vector<ModeEntry> entries;
    CMatrix transform_w;

    int mode_count() const { return static_cast<int>(entries.size()); }
    /// {+eps_k} followed by {-eps_k}: the diagonal of W H W^dagger.
    std::vector<double> band_diagonal() const;
};

/// Momenta 4 pi m / N, m = 0 .. N/2 - 1. The literal grid offset by
/// -pi + 2 pi / N only satisfies the Bloch condition for N = 2 mod 4, so the
/// unshifted grid is used for both boundaries.
std::vector<double> momentum_grid(int n_sites);

/// Upper-band energy at momentum k. The Moebius twist shifts the argument by
/// pi/N; periodic rings use the unshifted form.
double band_energy(const RingSpec& ring, double k);

/// Unimodular e^{i theta_k} relating the two sublattice amplitudes of a mode.
/// At a zero-energy mode returns the delta -> 0+ limit e^{-i shift}.
cplx band_phase(const RingSpec& ring, double k);

/// N x N site-basis hopping matrix (zero diagonal).
CMatrix site_hamiltonian(const RingSpec& ring);

/// e^{i j pi / N}, j = 1..N. Conjugating the Moebius Hamiltonian by
/// diag(gauge_phases) moves the boundary sign flip into a uniform bond phase.
std::vector<cplx> gauge_phases(int n_sites);

ModeTable mode_table(const RingSpec& ring);

/// 4 g |delta|.
double band_gap(const RingSpec& ring);

/// Closed-form coupling factors (h_A, h_B) for mode m, summed geometrically
/// over the unit cells. Used only to cross-check the projected factors in
/// mode_table.
std::pair<cplx, cplx> analytic_coupling_factors(const RingSpec& ring, double k);

}  // namespace mobring
