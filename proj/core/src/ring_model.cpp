#include "mobring/ring_model.hpp"

#include "mobring/errors.hpp"

#include <cmath>
#include <string>

namespace mobring {

namespace {

// Argument shift of the Moebius bands; zero for a periodic ring.
double twist_shift(const RingSpec& ring) {
    return ring.boundary == Boundary::Moebius ? kPi / ring.n_sites : 0.0;
}

// Site phase e^{i s pi / N} carried by site s (1-based) in the Moebius modes.
cplx site_phase(const RingSpec& ring, int site) {
    if (ring.boundary == Boundary::Periodic) return {1.0, 0.0};
    return std::polar(1.0, site * kPi / ring.n_sites);
}

void check_sites(int n_sites) {
    if (n_sites < 4 || n_sites % 2 != 0) {
        throw ConfigError("n_sites must be an even integer >= 4 (got " + std::to_string(n_sites) + ")");
    }
}

}  // namespace

std::string_view to_string(Boundary boundary) {
    return boundary == Boundary::Moebius ? "moebius" : "periodic";
}

void RingSpec::validate() const {
    check_sites(n_sites);
    if (!(hopping_g > 0.0) || !std::isfinite(hopping_g)) {
        throw ConfigError("hopping_g must be a finite value > 0");
    }
    if (!(std::abs(dimerization_delta) <= 1.0)) {
        throw ConfigError("delta must lie in [-1, 1] (got " + std::to_string(dimerization_delta) + ")");
    }
}

std::vector<double> ModeTable::band_diagonal() const {
    std::vector<double> d;
    d.reserve(2 * entries.size());
    for (const auto& e : entries) d.push_back(e.energy_eps_k);
    for (const auto& e : entries) d.push_back(-e.energy_eps_k);
    return d;
}

std::vector<double> momentum_grid(int n_sites) {
    check_sites(n_sites);
    std::vector<double> ks;
    ks.reserve(static_cast<std::size_t>(n_sites / 2));
    for (int m = 0; m < n_sites / 2; ++m) {
        double k = 4.0 * kPi * m / n_sites;
        k = std::fmod(k, 2.0 * kPi);
        ks.push_back(k);
    }
    return ks;
}

double band_energy(const RingSpec& ring, double k) {
    const double x = 0.5 * k - twist_shift(ring);
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double d = ring.dimerization_delta;
    return 2.0 * ring.hopping_g * std::sqrt(c * c + d * d * s * s);
}

cplx band_phase(const RingSpec& ring, double k) {
    const double shift = twist_shift(ring);
    const double eps = band_energy(ring, k);
    if (eps < kZeroEnergyTol * ring.hopping_g) {
        return std::polar(1.0, -shift);
    }
    const double d = ring.dimerization_delta;
    return (ring.hopping_g / eps) *
           ((1.0 + d) * std::polar(1.0, -shift) + (1.0 - d) * std::polar(1.0, -(k - shift)));
}

CMatrix site_hamiltonian(const RingSpec& ring) {
    const int n = ring.n_sites;
    const double g = ring.hopping_g;
    const double d = ring.dimerization_delta;
    CMatrix h = CMatrix::Zero(n, n);
    // bond between 1-based sites j and j+1 carries g(1 - (-1)^j delta)
    for (int j = 1; j <= n - 1; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double t = g * (1.0 - sign * d);
        h(j, j - 1) = t;
        h(j - 1, j) = t;
    }
    const double closing = g * (1.0 - ((n % 2 == 0) ? 1.0 : -1.0) * d);
    const double boundary_sign = ring.boundary == Boundary::Moebius ? -1.0 : 1.0;
    h(0, n - 1) = boundary_sign * closing;
    h(n - 1, 0) = boundary_sign * closing;
    return h;
}

std::vector<cplx> gauge_phases(int n_sites) {
    check_sites(n_sites);
    std::vector<cplx> phases;
    phases.reserve(static_cast<std::size_t>(n_sites));
    for (int j = 1; j <= n_sites; ++j) phases.push_back(std::polar(1.0, j * kPi / n_sites));
    return phases;
}

ModeTable mode_table(const RingSpec& ring) {
    ring.validate();
    const int n = ring.n_sites;
    const int cells = n / 2;
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));

    ModeTable table;
    table.ring = ring;
    table.transform_w = CMatrix::Zero(n, n);
    table.entries.reserve(static_cast<std::size_t>(cells));

    const auto ks = momentum_grid(n);
    for (int m = 0; m < cells; ++m) {
        const double k = ks[static_cast<std::size_t>(m)];
        ModeEntry entry;
        entry.index_m = m;
        entry.momentum_k = k;
        entry.energy_eps_k = band_energy(ring, k);
        entry.phase_theta_k = band_phase(ring, k);

        for (int j = 1; j <= cells; ++j) {
            const cplx bloch = norm * std::polar(1.0, -k * j);
            const cplx odd = bloch * site_phase(ring, 2 * j - 1);
            const cplx even = bloch * site_phase(ring, 2 * j) * entry.phase_theta_k;
            table.transform_w(m, 2 * j - 2) = odd;
            table.transform_w(m, 2 * j - 1) = even;
            table.transform_w(cells + m, 2 * j - 2) = odd;
            table.transform_w(cells + m, 2 * j - 1) = -even;
        }
        // expansion coefficients of the uniform site vector sum_j |j>
        entry.coupling_h_A = table.transform_w.row(m).sum();
        entry.coupling_h_B = table.transform_w.row(cells + m).sum();
        table.entries.push_back(entry);
    }
    return table;
}

double band_gap(const RingSpec& ring) {
    return 4.0 * ring.hopping_g * std::abs(ring.dimerization_delta);
}

std::pair<cplx, cplx> analytic_coupling_factors(const RingSpec& ring, double k) {
    const int cells = ring.n_sites / 2;
    const double shift = twist_shift(ring);
    const cplx z = std::polar(1.0, -(k - 2.0 * shift));
    cplx geometric;
    if (std::abs(z - 1.0) < 1e-14) {
        geometric = static_cast<double>(cells);
    } else {
        geometric = z * (1.0 - std::pow(z, cells)) / (1.0 - z);
    }
    const cplx lead = geometric * std::polar(1.0, -shift) / std::sqrt(static_cast<double>(ring.n_sites));
    const cplx twisted = band_phase(ring, k) * std::polar(1.0, shift);
    return {lead * (1.0 + twisted), lead * (1.0 - twisted)};
}

}  // namespace mobring
