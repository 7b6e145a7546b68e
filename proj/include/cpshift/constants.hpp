// ─────────────────────────────────────────────────────────────────────────────
//  constants.hpp — SI physical constants used throughout the library.
//
//  All quantities are expressed in SI units. The magnetic constant is stored
//  explicitly but must satisfy mu0 = 1/(eps0 c²) to high relative accuracy;
//  consistency_mu0() exposes the residual so callers and tests can assert it.
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <cmath>
#include <numbers>

namespace cpshift {

inline constexpr double kPi = std::numbers::pi;

struct PhysicalConstants {
    double c        = 299'792'458.0;        ///< speed of light in vacuum [m/s]
    double hbar     = 1.054'571'817e-34;    ///< reduced Planck constant [J·s]
    double eps0     = 8.854'187'8128e-12;   ///< vacuum permittivity [F/m]
    double mu0      = 1.256'637'062'12e-6;  ///< vacuum permeability [N/A²]
    double e_charge = 1.602'176'634e-19;    ///< elementary charge [C]
    double a0       = 5.291'772'109'03e-11; ///< Bohr radius [m]
    double alpha_fs = 7.297'352'5693e-3;    ///< fine-structure constant [1]

    /// Relative residual of the constraint mu0·eps0·c² = 1.
    [[nodiscard]] double consistency_mu0() const noexcept {
        return std::abs(mu0 * eps0 * c * c - 1.0);
    }
};

/// The default constant set (CODATA-2018 values).
[[nodiscard]] inline const PhysicalConstants& si_constants() noexcept {
    static const PhysicalConstants k{};
    return k;
}

} // namespace cpshift
