// ─────────────────────────────────────────────────────────────────────────────
//  atom.hpp — Rydberg transition dipoles and the motional response scalars.
//
//  The dipole magnitude of the near-degenerate hydrogenic pair used throughout
//  is |d|² = e²a₀²·(3/4)·n̄²(n̄²−1). The "circular" kind places the dipole in
//  the plane perpendicular to the quantization axis with a 90° phase lag,
//  d ∝ (ê₁ + i ê₂)/√2 with (ê₁, ê₂, axis) right-handed; the "linear" kind
//  puts the full magnitude along the axis.
//
//  The velocity-dependent interaction is controlled by four scalars built
//  from the dipole d and the in-plane velocity v:
//      B_z = Im(d_x d_y*)                 (circulation about the normal)
//      S   = Im[d_z* (v·d)]               (vanishes under transversality)
//      T   = Re[d_z* (v×d)·ẑ]
//      R   = Im[d_z* (v×d)·ẑ]            (rotatory strength)
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <array>
#include <cmath>
#include <string>

#include "constants.hpp"
#include "types.hpp"

namespace cpshift {

enum class TransitionKind { M1_circular, M0_linear };

/// Descriptor of the default Rydberg transition family.
struct RydbergTransition {
    int n_bar = 2;
    TransitionKind kind = TransitionKind::M1_circular;
    std::array<double, 3> quantization_axis{0.0, 0.0, 1.0};

    RydbergTransition() = default;
    RydbergTransition(int n, TransitionKind k, std::array<double, 3> axis)
        : n_bar(n), kind(k), quantization_axis(axis) {
        if (n_bar < 2)
            throw ValidationError("RydbergTransition: n_bar must be >= 2");
        const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] +
                                      axis[2] * axis[2]);
        if (std::abs(norm - 1.0) > 1e-12)
            throw ValidationError(
                "RydbergTransition: quantization_axis must be unit length");
    }
};

/// Motional response scalars of one transition.
struct RotatoryResponses {
    double S = 0.0;   ///< longitudinal scalar [C²m³/s]; 0 under transversality
    double T = 0.0;   ///< time-even cross scalar [C²m³/s]
    double R = 0.0;   ///< rotatory strength [C²m³/s]
    double B_z = 0.0; ///< dipole circulation about the surface normal [C²m²]
};

namespace detail {

/// Right-handed orthonormal pair (ê₁, ê₂) completing the given unit axis.
inline void transverse_frame(const std::array<double, 3>& axis,
                             std::array<double, 3>& e1, std::array<double, 3>& e2) {
    // Helper vector: ŷ when the axis is close to ẑ, else ẑ.
    const bool near_z = std::abs(axis[2]) > 0.9;
    const std::array<double, 3> w =
        near_z ? std::array<double, 3>{0.0, 1.0, 0.0} : std::array<double, 3>{0.0, 0.0, 1.0};
    // ê₁ = ŵ×â normalized, ê₂ = â×ê₁.
    e1 = {w[1] * axis[2] - w[2] * axis[1], w[2] * axis[0] - w[0] * axis[2],
          w[0] * axis[1] - w[1] * axis[0]};
    const double n = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (auto& c : e1) c /= n;
    e2 = {axis[1] * e1[2] - axis[2] * e1[1], axis[2] * e1[0] - axis[0] * e1[2],
          axis[0] * e1[1] - axis[1] * e1[0]};
}

} // namespace detail

/// Hydrogenic dipole matrix element of the n̄ transition pair.
///
/// The transition frequency is left at the degenerate value 0; callers model
/// a finite splitting by overriding omega_nk on the returned spec.
[[nodiscard]] inline TransitionSpec hydrogen_dipole(const RydbergTransition& rt,
                                                    const PhysicalConstants& pc = si_constants()) {
    const double n = static_cast<double>(rt.n_bar);
    const double d2 = pc.e_charge * pc.e_charge * pc.a0 * pc.a0 * 0.75 * n * n *
                      (n * n - 1.0);
    const double d_abs = std::sqrt(d2);

    Complex3Vector d;
    if (rt.kind == TransitionKind::M0_linear) {
        d = Complex3Vector{rt.quantization_axis[0] * d_abs,
                           rt.quantization_axis[1] * d_abs,
                           rt.quantization_axis[2] * d_abs};
    } else {
        std::array<double, 3> e1{}, e2{};
        detail::transverse_frame(rt.quantization_axis, e1, e2);
        const double s = d_abs / std::sqrt(2.0);
        d = Complex3Vector{complex{e1[0] * s, e2[0] * s},
                           complex{e1[1] * s, e2[1] * s},
                           complex{e1[2] * s, e2[2] * s}};
    }
    const std::string lab = std::string("rydberg n=") + std::to_string(rt.n_bar) +
                            (rt.kind == TransitionKind::M1_circular ? " circular"
                                                                    : " linear");
    return TransitionSpec{d, 0.0, lab};
}

/// Circulation of the dipole about the surface normal: Im(d_x d_y*).
[[nodiscard]] inline double geometric_field_z(const Complex3Vector& d) noexcept {
    return std::imag(d.x * std::conj(d.y));
}

/// Effective magnetic moment of the moving dipole, m = −v×d.
[[nodiscard]] inline Complex3Vector effective_magnetic_moment(const Complex3Vector& d,
                                                              const AtomKinematics& kin) {
    const Complex3Vector v{kin.v_x, kin.v_y, 0.0};
    const Complex3Vector vxd = cross(v, d);
    return Complex3Vector{-vxd.x, -vxd.y, -vxd.z};
}

/// The four motional scalars for a dipole/velocity pair.
[[nodiscard]] inline RotatoryResponses rotatory_responses(const Complex3Vector& d,
                                                          const AtomKinematics& kin) {
    RotatoryResponses r;
    const complex dz_conj = std::conj(d.z);
    const complex vxd_z = kin.v_x * d.y - kin.v_y * d.x; // (v×d)·ẑ
    const complex vd = kin.v_x * d.x + kin.v_y * d.y;    // v·d
    const complex q = dz_conj * vxd_z;
    r.T = q.real();
    r.R = q.imag();
    r.S = std::imag(dz_conj * vd);
    r.B_z = geometric_field_z(d);
    return r;
}

} // namespace cpshift
