// ─────────────────────────────────────────────────────────────────────────────
//  asymptotics.hpp — closed-form retarded/nonretarded limits of the shifts
//  and the decay rate, used to cross-check the full numerics.
//
//  Conventions (x = 2ω̃z/c, k = ω̃/c):
//   • Nonretarded limits use the k∥→∞ reflection constants.
//   • Retarded limits keep, per dipole structure, the leading oscillatory
//     envelope built from the k∥→0 reflection constants, plus — for the
//     velocity families — the exact corrections through 1/z³ from the
//     slope and curvature of r in s = (k∥/k)² at normal incidence, which
//     carry the whole effect for media whose cross reflection vanishes
//     at k∥ = 0.
//   • Retarded nonresonant limits are expressed through reflection moments
//     ⟨r⟩_m = ∫₀¹ uᵐ r(u) du evaluated on the imaginary frequency axis,
//     where u parametrizes k∥ = (ξ₀/c)·√(1/u²−1) at any scale ξ₀ (media
//     here are dispersionless, so the moments are scale-free).
//
//  Validity windows are advisory: in_validity_window is false outside
//  x > 5 (retarded) or x < 0.2 (nonretarded); values are still returned.
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "atom.hpp"
#include "constants.hpp"
#include "fresnel.hpp"
#include "greens.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace cpshift {

enum class Contribution { Resonant, Nonresonant, Velocity };

[[nodiscard]] inline const char* contribution_name(Contribution c) noexcept {
    switch (c) {
        case Contribution::Resonant: return "resonant";
        case Contribution::Nonresonant: return "nonresonant";
        case Contribution::Velocity: return "velocity";
    }
    return "?";
}

/// A closed-form limit value plus a window flag.
struct LimitValue {
    double value = 0.0;
    bool in_validity_window = false;
};

namespace detail {

inline bool in_window(RegimeTag regime, double x) noexcept {
    return regime == RegimeTag::Retarded ? (x > 5.0) : (x < 0.2);
}

inline void require_limit_regime(const MediumSpec& m, RegimeTag regime) {
    if (regime == RegimeTag::Full)
        throw ValidationError("limit evaluation requires regime retarded or nonretarded");
    if (const auto* ti = std::get_if<TopologicalInsulator>(&m); ti && ti->mu2 != 1.0)
        throw ValidationError("limit formulas for a topological insulator assume mu2 == 1");
}

/// Quadratic Taylor data of the cross-polarized reflection combinations
/// r_sp ± r_ps in the variable s = (k∥/k)² around normal incidence:
/// slope = d/ds at s = 0, curv = the s² Taylor coefficient (½ d²/ds²).
struct CrossExpansion {
    complex sigma_slope{}; ///< d(r_sp + r_ps)/ds at s = 0
    complex delta_slope{}; ///< d(r_sp - r_ps)/ds at s = 0
    complex sigma_curv{};  ///< s² coefficient of r_sp + r_ps
    complex delta_curv{};  ///< s² coefficient of r_sp - r_ps
};

/// Expansion coefficients by one-sided Richardson differences; identically
/// zero for the ideal mirrors, whose cross reflection is s-independent.
[[nodiscard]] inline CrossExpansion
cross_expansion_normal_incidence(const MediumSpec& m, const PhysicalConstants& pc) {
    if (!std::holds_alternative<TopologicalInsulator>(m) &&
        !std::holds_alternative<IsotropicChiral>(m))
        return {};
    const double w_ref = 1e15;
    const double k_ref = w_ref / pc.c;
    auto cross = [&](double s) -> std::pair<complex, complex> {
        const ReflectionMatrix r =
            reflect(m, make_wave(w_ref, k_ref * std::sqrt(s), m, pc), pc);
        return {r.r_sp + r.r_ps, r.r_sp - r.r_ps};
    };
    const double h = 1e-3;
    const auto r0 = cross(0.0);
    const auto rh2 = cross(0.5 * h);
    const auto rh = cross(h);
    const auto r2h = cross(2.0 * h);
    auto slope = [&](complex f0, complex fh2, complex fh) {
        const complex d_h = (fh - f0) / h;
        const complex d_h2 = (fh2 - f0) / (0.5 * h);
        return 2.0 * d_h2 - d_h;
    };
    auto curvature = [&](complex f0, complex fh2, complex fh, complex f2h) {
        const complex est_h = 2.0 * (f0 - 2.0 * fh2 + fh) / (h * h);
        const complex est_2h = (f0 - 2.0 * fh + f2h) / (2.0 * h * h);
        return 2.0 * est_h - est_2h;
    };
    CrossExpansion e;
    e.sigma_slope = slope(r0.first, rh2.first, rh.first);
    e.delta_slope = slope(r0.second, rh2.second, rh.second);
    e.sigma_curv = curvature(r0.first, rh2.first, rh.first, r2h.first);
    e.delta_curv = curvature(r0.second, rh2.second, rh.second, r2h.second);
    return e;
}

/// Reflection moment ⟨r_ch⟩_m on the imaginary axis, ch selected by a getter.
template <typename Getter>
[[nodiscard]] inline complex reflection_moment(const MediumSpec& m, int order,
                                               Getter get, const QuadratureConfig& cfg,
                                               const PhysicalConstants& pc) {
    const double xi0 = 1e15;
    auto f = [&](double u) -> complex {
        const double ratio = 1.0 / (u * u) - 1.0;
        const double k_par = (xi0 / pc.c) * std::sqrt(std::max(ratio, 0.0));
        const ReflectionMatrix r =
            reflect(m, make_wave(complex{0.0, xi0}, k_par, m, pc), pc);
        double weight = 1.0;
        for (int j = 0; j < order; ++j) weight *= u;
        return weight * get(r);
    };
    QuadratureConfig mcfg = cfg;
    mcfg.decay_scale = 1.0;
    return integrate_finite(f, 0.0, 1.0, mcfg).value;
}

} // namespace detail

/// Closed-form limit of one shift contribution.
[[nodiscard]] inline LimitValue
limit_shift(const TransitionSpec& t, const AtomKinematics& kin, const MediumSpec& m,
            RegimeTag regime, Contribution which, const QuadratureConfig& cfg = {},
            const PhysicalConstants& pc = si_constants()) {
    detail::require_limit_regime(m, regime);
    const double z = kin.z_A;
    const double wt = t.omega_nk;
    const double k = wt / pc.c;
    const double x = 2.0 * std::abs(k) * z;
    LimitValue out;
    out.in_validity_window = detail::in_window(regime, x);

    const Complex3Vector& d = t.dipole;
    const double dpar2 = std::norm(d.x) + std::norm(d.y);
    const double dz2 = std::norm(d.z);
    const double bz = geometric_field_z(d);
    const RotatoryResponses resp = rotatory_responses(d, kin);

    switch (which) {
        case Contribution::Resonant: {
            if (!(wt > 0.0)) {
                out.value = 0.0;
                return out;
            }
            if (regime == RegimeTag::Nonretarded) {
                const ReflectionMatrix rn = reflection_limit(m, RegimeTag::Nonretarded, pc);
                const double sigma_re = std::real(rn.r_sp + rn.r_ps);
                out.value = -std::real(rn.r_pp) / (16.0 * kPi * pc.eps0 * pc.hbar * z * z * z) *
                                (0.5 * dpar2 + dz2) -
                            pc.mu0 * wt * wt / (16.0 * kPi * pc.hbar * z) *
                                (std::real(rn.r_ss) * dpar2 + 2.0 * std::real(rn.r_pp) * dz2) +
                            pc.mu0 * wt * pc.c * bz * sigma_re /
                                (16.0 * kPi * pc.hbar * z * z);
                return out;
            }
            // Retarded: leading envelope per dipole component.
            const ReflectionMatrix rr = reflection_limit(m, RegimeTag::Retarded, pc);
            const complex phase = std::exp(complex{0.0, x});
            Mat3 g{};
            const complex gxx = phase * (rr.r_ss - rr.r_pp) / (16.0 * kPi * z);
            const complex gzz = complex{0.0, -1.0} * phase * rr.r_pp /
                                (8.0 * kPi * k * z * z);
            const complex gxy = phase * (rr.r_sp + rr.r_ps) / (16.0 * kPi * z);
            g(0, 0) = gxx;
            g(1, 1) = gxx;
            g(2, 2) = gzz;
            g(0, 1) = gxy;
            g(1, 0) = -gxy;
            const complex f = contract(d, g, d.conj());
            out.value = -pc.mu0 / pc.hbar * wt * wt * f.real();
            return out;
        }

        case Contribution::Nonresonant: {
            if (regime == RegimeTag::Nonretarded) {
                const ReflectionMatrix rn = reflection_limit(m, RegimeTag::Nonretarded, pc);
                const double sgn = (wt > 0.0) ? 1.0 : (wt < 0.0 ? -1.0 : 0.0);
                const double diag = std::real(rn.r_pp) * (0.5 * dpar2 + dz2) /
                                    (32.0 * kPi * pc.eps0 * pc.hbar * z * z * z);
                const double crossed = bz * std::real(rn.r_sp + rn.r_ps) /
                                       (32.0 * kPi * kPi * pc.eps0 * pc.hbar * z * z * z);
                out.value = sgn * diag + crossed;
                return out;
            }
            if (wt == 0.0)
                throw MissingFrequency(
                    "retarded nonresonant limit requires a nonzero transition frequency");
            // Retarded: moment expansion.
            auto ss = [](const ReflectionMatrix& r) { return r.r_ss; };
            auto pp = [](const ReflectionMatrix& r) { return r.r_pp; };
            auto sig = [](const ReflectionMatrix& r) { return r.r_sp + r.r_ps; };
            const complex pp0 = detail::reflection_moment(m, 0, pp, cfg, pc);
            const complex pp1 = detail::reflection_moment(m, 1, pp, cfg, pc);
            const complex pp2 = detail::reflection_moment(m, 2, pp, cfg, pc);
            const complex pp3 = detail::reflection_moment(m, 3, pp, cfg, pc);
            const complex ss2 = detail::reflection_moment(m, 2, ss, cfg, pc);
            const complex ss3 = detail::reflection_moment(m, 3, ss, cfg, pc);
            const complex sg1 = detail::reflection_moment(m, 1, sig, cfg, pc);
            const complex sg2 = detail::reflection_moment(m, 2, sig, cfg, pc);

            const double a_term = dpar2 * std::real(pp0 - ss2) +
                                  2.0 * dz2 * std::real(pp0 - pp2) +
                                  2.0 * bz * sg1.imag();
            const double c_term = bz * sg2.real() +
                                  0.5 * dpar2 * std::imag(ss3 - pp1) +
                                  dz2 * std::imag(pp3 - pp1);
            const double z4 = z * z * z * z;
            out.value = 3.0 * pc.c / (64.0 * kPi * kPi * pc.eps0 * pc.hbar * wt * z4) * a_term +
                        3.0 * pc.c * pc.c /
                            (16.0 * kPi * kPi * pc.eps0 * pc.hbar * wt * wt * z4 * z) * c_term;
            return out;
        }

        case Contribution::Velocity: {
            if (wt < 0.0) {
                out.value = 0.0;
                return out;
            }
            const double pref = pc.mu0 * pc.c / (8.0 * kPi * pc.hbar);
            if (regime == RegimeTag::Nonretarded) {
                const ReflectionMatrix rn = reflection_limit(m, RegimeTag::Nonretarded, pc);
                const complex sigma = rn.r_sp + rn.r_ps;
                const complex delta = rn.r_sp - rn.r_ps;
                out.value = pref / (4.0 * z * z * z) *
                            (resp.T * sigma.real() + 2.0 * resp.R * delta.imag());
                return out;
            }
            if (wt == 0.0)
                throw MissingFrequency(
                    "retarded velocity limit requires a nonzero transition frequency");
            const ReflectionMatrix rr = reflection_limit(m, RegimeTag::Retarded, pc);
            const auto ce = detail::cross_expansion_normal_incidence(m, pc);
            const complex sigma = rr.r_sp + rr.r_ps;
            const complex delta = rr.r_sp - rr.r_ps;
            const complex phase = std::exp(complex{0.0, x});
            const double z2 = z * z, z3 = z2 * z;
            const complex bracket_sigma =
                phase * (complex{0.0, 1.0} * k * k * sigma / z +
                         2.0 * k * ce.sigma_slope / z2 +
                         complex{0.0, 1.0} *
                             (2.0 * ce.sigma_slope - 6.0 * ce.sigma_curv) / z3);
            const complex bracket_delta =
                phase * (complex{0.0, 1.0} * k * k * delta / z +
                         2.0 * k * ce.delta_slope / z2 +
                         complex{0.0, 1.0} *
                             (5.0 * ce.delta_slope - 6.0 * ce.delta_curv) / z3);
            out.value = pref * (resp.T * bracket_sigma.imag() +
                                resp.R * bracket_delta.real());
            return out;
        }
    }
    return out;
}

/// Exact full-range reference shift for the ideal mirrors, evaluated from
/// the closed-form scattering matrix instead of k∥ quadrature. Valid at any
/// distance; throws WrongMediumKind for dispersive media.
[[nodiscard]] inline double
closed_reference_shift(const TransitionSpec& t, const AtomKinematics& kin,
                       const MediumSpec& m, Contribution which,
                       const QuadratureConfig& cfg = {},
                       const PhysicalConstants& pc = si_constants()) {
    const double z = kin.z_A;
    const double wt = t.omega_nk;
    const Complex3Vector& d = t.dipole;

    switch (which) {
        case Contribution::Resonant: {
            if (!(wt > 0.0))
                return 0.0;
            const Mat3 g = green_closed(m, z, complex{wt, 0.0}, pc).value;
            return -pc.mu0 / pc.hbar * wt * wt * contract(d, g, d.conj()).real();
        }
        case Contribution::Nonresonant: {
            auto integrand = [&](double xi) -> complex {
                // e^{−2ξz/c} underflows: avoid the indeterminate ξ³·0 product.
                if (!(2.0 * xi * z / pc.c < 700.0))
                    return complex{};
                const Mat3 g = green_closed(m, z, complex{0.0, xi}, pc).value;
                const complex f = contract(d, g, d.conj());
                const double lorentz = xi * xi + wt * wt;
                double val = xi * xi * xi * f.imag() / lorentz;
                if (wt != 0.0)
                    val -= xi * xi * wt * f.real() / lorentz;
                return complex{val, 0.0};
            };
            QuadratureConfig outer = cfg;
            outer.decay_scale = pc.c / (2.0 * z) + std::abs(wt);
            const auto q = integrate_semiinfinite(integrand, 0.0, outer);
            return pc.mu0 / (kPi * pc.hbar) * q.value.real();
        }
        case Contribution::Velocity: {
            if (kin.v_x == 0.0 && kin.v_y == 0.0)
                return 0.0;
            if (!validate_transversality(t, kin))
                throw TransversalityViolation(
                    "closed_reference_shift: dipole not transversal to the velocity");
            if (wt < 0.0)
                return 0.0;
            const ReflectionMatrix r = reflection_ideal(m);
            const complex sigma = r.r_sp + r.r_ps;
            const complex delta = r.r_sp - r.r_ps;
            const RotatoryResponses resp = rotatory_responses(d, kin);
            const double pref = pc.mu0 * pc.c / (8.0 * kPi * pc.hbar);
            complex j3, dj3; // W/r̃ and (ωW)'/r̃ for a constant reflection
            if (wt == 0.0) {
                j3 = complex{0.0, -1.0} / (4.0 * z * z * z);
                dj3 = j3;
            } else {
                const double k = wt / pc.c;
                const complex phase = std::exp(complex{0.0, 2.0 * k * z});
                j3 = -phase * (k / (2.0 * z * z) +
                               complex{0.0, 1.0} / (4.0 * z * z * z));
                dj3 = -phase * (complex{0.0, 1.0} * k * k / z + k / (2.0 * z * z) +
                                complex{0.0, 1.0} / (4.0 * z * z * z));
            }
            return pref * (-resp.T * (sigma * dj3).imag() -
                           resp.R * (delta * dj3).real() +
                           3.0 * resp.R * (delta * j3).real());
        }
    }
    return 0.0;
}

/// Exact full-range reference decay rate for the ideal mirrors.
[[nodiscard]] inline double
closed_reference_decay(const TransitionSpec& t, const AtomKinematics& kin,
                       const MediumSpec& m,
                       const PhysicalConstants& pc = si_constants()) {
    if (!(t.omega_nk > 0.0))
        return 0.0;
    const double wt = t.omega_nk;
    const Mat3 g = green_closed(m, kin.z_A, complex{wt, 0.0}, pc).value;
    return 2.0 * pc.mu0 / pc.hbar * wt * wt *
           contract(t.dipole, g, t.dipole.conj()).imag();
}

/// Closed-form limit of the decay rate (needs an upward transition).
[[nodiscard]] inline LimitValue
limit_decay_rate(const TransitionSpec& t, const AtomKinematics& kin,
                 const MediumSpec& m, RegimeTag regime,
                 const PhysicalConstants& pc = si_constants()) {
    detail::require_limit_regime(m, regime);
    if (!(t.omega_nk > 0.0))
        throw MissingFrequency("limit_decay_rate requires a positive transition frequency");
    const double z = kin.z_A;
    const double wt = t.omega_nk;
    const double x = 2.0 * wt * z / pc.c;
    const ReflectionMatrix r = reflection_limit(m, regime, pc);
    const Mat3 g = closed_scattering_matrix(r, z, wt, pc);
    const complex f = contract(t.dipole, g, t.dipole.conj());
    LimitValue out;
    out.in_validity_window = detail::in_window(regime, x);
    out.value = 2.0 * pc.mu0 / pc.hbar * wt * wt * f.imag();
    return out;
}

} // namespace cpshift
