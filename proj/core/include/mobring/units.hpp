#pragma once

namespace mobring {

/// Scale of the donor-acceptor coupling in ps^-1.
inline constexpr double kDefaultXiPerPs = 10.0;

/// Converts between internal units (energies as multiples of xi, time as
/// xi * t) and picoseconds.
struct UnitConverter {
    double xi_per_ps = kDefaultXiPerPs;

    /// Throws ConfigError unless the scale is finite and > 0.
    void validate() const;

    double time_to_ps(double t_xi) const { return t_xi / xi_per_ps; }
    double time_from_ps(double t_ps) const { return t_ps * xi_per_ps; }
    double rate_to_per_ps(double e_xi) const { return e_xi * xi_per_ps; }
    double rate_from_per_ps(double e_per_ps) const { return e_per_ps / xi_per_ps; }
};

}  // namespace mobring
