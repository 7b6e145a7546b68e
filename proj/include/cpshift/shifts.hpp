// ─────────────────────────────────────────────────────────────────────────────
//  shifts.hpp — frequency shifts and decay rates of a moving dipole near a
//  planar interface.
//
//  With F(ω) = Σ_ij d_i G_ij(ω) d_j* (G the coincident scattering Green
//  tensor at height z), the position-dependent pieces are
//
//      Γ      =  θ(ω̃)·(2μ₀/ħ)·ω̃²·Im F(ω̃)
//      δω_res = −θ(ω̃)·(μ₀/ħ)·ω̃²·Re F(ω̃)
//      δω_nr  =  (μ₀/πħ)·∫₀^∞ dξ [ξ³·Im F(iξ) − ξ²ω̃·Re F(iξ)]/(ξ²+ω̃²)
//
//  The velocity-dependent shift, linear in the in-plane velocity v and valid
//  under transversality (v·d = 0 in the plane), reduces for every medium
//  here to the two cross-polarization sector integrals
//
//      W_±(ω) = ∫₀^∞ dk∥ (k∥³/k⊥) [r_sp ± r_ps] e^{2ik⊥z}
//
//  via the master combination
//
//      δω_v = (μ₀c/8πħ)·{ −T·Im[(ωW₊)'] − R·Re[(ωW₋)'] + 3R·Re[W₋] },
//
//  where T and R are the motional scalars of atom.hpp and (·)' = d/dω at ω̃.
//  At ω̃ = 0 the propagating sector closes and (ωW)'|₀ = W(0) is evaluated
//  in closed form from the nonretarded reflection constants.
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#include "atom.hpp"
#include "constants.hpp"
#include "fresnel.hpp"
#include "greens.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace cpshift {

/// Scalar result with a propagated numerical error estimate.
struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

/// Velocity-shift result with its cancellation diagnostic.
struct VelocityDetail {
    double value = 0.0;
    double error = 0.0;
    /// Magnitude of the constituent sector integrals before any polarization
    /// cancellation; the reported value may be arbitrarily small against it.
    double scale = 0.0;
    bool fast_motion_warning = false; ///< |v| > 10⁻³ c
};

/// All contributions for one transition at one configuration.
struct ShiftBreakdown {
    double resonant = 0.0;
    double nonresonant = 0.0;
    double velocity = 0.0;
    double total = 0.0;
    double decay_rate = 0.0;
    double quad_err_resonant = 0.0;
    double quad_err_nonresonant = 0.0;
    double quad_err_velocity = 0.0;
    double velocity_scale = 0.0;
    bool fast_motion_warning = false;
    std::string medium;
};

namespace detail {

/// Exact nonretarded (k∥ → ∞) reflection constants for any medium,
/// including a magnetic surface: scale-free media make r(ω=0, k∥) constant.
[[nodiscard]] inline ReflectionMatrix
nonretarded_reflection(const MediumSpec& m, const PhysicalConstants& pc = si_constants()) {
    if (std::holds_alternative<TopologicalInsulator>(m)) {
        // At ω = 0 every k∥ is beyond the light line, so the exact Fresnel
        // expressions already sit at their k∥→∞ values (valid for any μ₂).
        return reflect(m, make_wave(0.0, 1.0, m, pc), pc);
    }
    return reflection_limit(m, RegimeTag::Nonretarded, pc);
}

/// F(ω) = Σ_ij d_i G_ij d_j* together with a contraction-weighted error.
[[nodiscard]] inline std::pair<complex, double>
interaction_scalar(const TransitionSpec& t, const MediumSpec& m, double z,
                   complex omega, const QuadratureConfig& cfg,
                   const PhysicalConstants& pc) {
    const GreensResult g = green_numeric_detail(m, z, omega, cfg, pc);
    const complex f = contract(t.dipole, g.block.value, t.dipole.conj());
    return {f, g.quad_error * 2.0 * t.dipole.norm2()};
}

/// Cross-polarization sector integrals W_±(ω) at real ω > 0.
struct SectorIntegrals {
    complex w_sigma{0.0, 0.0}; ///< r_sp + r_ps sector
    complex w_delta{0.0, 0.0}; ///< r_sp − r_ps sector
    double error = 0.0;
};

[[nodiscard]] inline SectorIntegrals
sector_integrals(const MediumSpec& m, double z, double omega,
                 const QuadratureConfig& cfg, const PhysicalConstants& pc) {
    if (!(omega > 0.0))
        throw ValidationError("sector_integrals: omega must be positive");
    const double k = omega / pc.c;
    const double x = 2.0 * k * z;
    const double k3 = k * k * k;

    SectorIntegrals out;
    for (int sector = 0; sector < 2; ++sector) {
        const double sign = (sector == 0) ? +1.0 : -1.0; // Σ: +, Δ: −
        auto cross_sum = [&](double k_par) -> complex {
            const ReflectionMatrix r = reflect(m, make_wave(omega, k_par, m, pc), pc);
            return r.r_sp + sign * r.r_ps;
        };
        // Propagating sector, k∥ = k sinθ.
        auto f_prop = [&](double theta) -> complex {
            const double s = std::sin(theta), c0 = std::cos(theta);
            return k3 * s * s * s * cross_sum(k * s) *
                   std::exp(complex{0.0, x * c0});
        };
        QuadratureConfig pc_cfg = cfg;
        pc_cfg.decay_scale = 1.0;
        const auto prop = integrate_finite(f_prop, 0.0, 0.5 * kPi, pc_cfg);

        // Evanescent sector, k∥ = k cosh u.
        auto f_evan = [&](double u) -> complex {
            const double sh = std::sinh(u);
            if (!(x * sh < 700.0)) // decay envelope underflows first
                return complex{};
            const double ch = std::cosh(u);
            return complex{0.0, -1.0} * k3 * ch * ch * ch * cross_sum(k * ch) *
                   std::exp(-x * sh);
        };
        QuadratureConfig ev_cfg = cfg;
        ev_cfg.decay_scale = std::asinh(1.0 / std::max(x, 1e-12)) + 1.0;
        const auto evan = integrate_semiinfinite(f_evan, 0.0, ev_cfg);

        const complex w = prop.value + evan.value;
        if (sector == 0)
            out.w_sigma = w;
        else
            out.w_delta = w;
        out.error += prop.error + evan.error;
    }
    return out;
}

/// Absolute-value envelope of all four reflection channels: the size of the
/// sector integrals before any polarization cancellation.
[[nodiscard]] inline double
sector_envelope(const MediumSpec& m, double z, double omega,
                const QuadratureConfig& cfg, const PhysicalConstants& pc) {
    auto channels_abs = [&](const ReflectionMatrix& r) {
        return std::abs(r.r_ss) + std::abs(r.r_pp) + std::abs(r.r_sp) +
               std::abs(r.r_ps);
    };
    if (omega == 0.0) {
        const ReflectionMatrix rn = nonretarded_reflection(m, pc);
        return channels_abs(rn) / (4.0 * z * z * z);
    }
    const double k = omega / pc.c;
    const double x = 2.0 * k * z;
    const double k3 = k * k * k;
    auto f_prop = [&](double theta) -> complex {
        const double s = std::sin(theta);
        return k3 * s * s * s *
               channels_abs(reflect(m, make_wave(omega, k * s, m, pc), pc));
    };
    QuadratureConfig pcfg = cfg;
    pcfg.decay_scale = 1.0;
    const auto prop = integrate_finite(f_prop, 0.0, 0.5 * kPi, pcfg);
    auto f_evan = [&](double u) -> complex {
        const double sh = std::sinh(u);
        if (!(x * sh < 700.0)) // decay envelope underflows first
            return complex{};
        const double ch = std::cosh(u);
        return k3 * ch * ch * ch *
               channels_abs(reflect(m, make_wave(omega, k * ch, m, pc), pc)) *
               std::exp(-x * sh);
    };
    QuadratureConfig ecfg = cfg;
    ecfg.decay_scale = std::asinh(1.0 / std::max(x, 1e-12)) + 1.0;
    const auto evan = integrate_semiinfinite(f_evan, 0.0, ecfg);
    return std::abs(prop.value) + std::abs(evan.value);
}

} // namespace detail

/// Resonant shift, −θ(ω̃)·(μ₀/ħ)·ω̃²·Re F(ω̃).
[[nodiscard]] inline ValueWithError
resonant_shift_detail(const TransitionSpec& t, const AtomKinematics& kin,
                      const MediumSpec& m, const QuadratureConfig& cfg = {},
                      const PhysicalConstants& pc = si_constants()) {
    if (!(t.omega_nk > 0.0))
        return {0.0, 0.0};
    const auto [f, err] = detail::interaction_scalar(t, m, kin.z_A, t.omega_nk, cfg, pc);
    const double pref = pc.mu0 / pc.hbar * t.omega_nk * t.omega_nk;
    return {-pref * f.real(), pref * err};
}

[[nodiscard]] inline double resonant_shift(const TransitionSpec& t,
                                           const AtomKinematics& kin,
                                           const MediumSpec& m,
                                           const QuadratureConfig& cfg = {},
                                           const PhysicalConstants& pc = si_constants()) {
    return resonant_shift_detail(t, kin, m, cfg, pc).value;
}

/// Surface-induced decay rate, θ(ω̃)·(2μ₀/ħ)·ω̃²·Im F(ω̃).
[[nodiscard]] inline ValueWithError
decay_rate_detail(const TransitionSpec& t, const AtomKinematics& kin,
                  const MediumSpec& m, const QuadratureConfig& cfg = {},
                  const PhysicalConstants& pc = si_constants()) {
    if (!(t.omega_nk > 0.0))
        return {0.0, 0.0};
    const auto [f, err] = detail::interaction_scalar(t, m, kin.z_A, t.omega_nk, cfg, pc);
    const double pref = 2.0 * pc.mu0 / pc.hbar * t.omega_nk * t.omega_nk;
    return {pref * f.imag(), pref * err};
}

[[nodiscard]] inline double decay_rate(const TransitionSpec& t,
                                       const AtomKinematics& kin,
                                       const MediumSpec& m,
                                       const QuadratureConfig& cfg = {},
                                       const PhysicalConstants& pc = si_constants()) {
    return decay_rate_detail(t, kin, m, cfg, pc).value;
}

/// Nonresonant (imaginary-axis) shift; well defined for any sign of ω̃.
[[nodiscard]] inline ValueWithError
nonresonant_shift_detail(const TransitionSpec& t, const AtomKinematics& kin,
                         const MediumSpec& m, const QuadratureConfig& cfg = {},
                         const PhysicalConstants& pc = si_constants()) {
    const double z = kin.z_A;
    const double wt = t.omega_nk;
    QuadratureConfig inner = cfg.tightened(1e-2);

    auto integrand = [&](double xi) -> complex {
        // Beyond this point every inner integrand value underflows to zero;
        // avoid the indeterminate ξ³·0 product at the transform endpoint.
        if (!(2.0 * xi * z / pc.c < 700.0))
            return complex{};
        const auto [f, ferr] =
            detail::interaction_scalar(t, m, z, complex{0.0, xi}, inner, pc);
        (void)ferr;
        const double lorentz = xi * xi + wt * wt;
        double val = xi * xi * xi * f.imag() / lorentz;
        if (wt != 0.0)
            val -= xi * xi * wt * f.real() / lorentz;
        return complex{val, 0.0};
    };

    QuadratureConfig outer = cfg;
    outer.decay_scale = pc.c / (2.0 * z) + std::abs(wt);
    const auto q = integrate_semiinfinite(integrand, 0.0, outer);
    const double pref = pc.mu0 / (kPi * pc.hbar);
    return {pref * q.value.real(), pref * q.error};
}

[[nodiscard]] inline double nonresonant_shift(const TransitionSpec& t,
                                              const AtomKinematics& kin,
                                              const MediumSpec& m,
                                              const QuadratureConfig& cfg = {},
                                              const PhysicalConstants& pc = si_constants()) {
    return nonresonant_shift_detail(t, kin, m, cfg, pc).value;
}

/// Velocity-dependent shift via the cross-polarization sector integrals.
///
/// Preconditions: the dipole must be transversal to the velocity in the
/// interface plane (S ≈ 0), otherwise TransversalityViolation is thrown.
/// Downward transitions (ω̃ < 0) contribute nothing; ω̃ = 0 uses the exact
/// evanescent-sector closed form.
[[nodiscard]] inline VelocityDetail
velocity_shift_detail(const TransitionSpec& t, const AtomKinematics& kin,
                      const MediumSpec& m, const QuadratureConfig& cfg = {},
                      double h_rel = 1e-4,
                      const PhysicalConstants& pc = si_constants()) {
    VelocityDetail out;
    if (kin.v_x == 0.0 && kin.v_y == 0.0)
        return out;
    if (!validate_transversality(t, kin))
        throw TransversalityViolation(
            "velocity_shift: dipole couples the surface normal to the velocity "
            "direction (longitudinal response is not modeled)");
    if (!(h_rel >= 1e-7 && h_rel <= 1e-3))
        throw StepTooSmall("velocity_shift: h_rel must lie in [1e-7, 1e-3]");
    out.fast_motion_warning = kin.speed() > 1e-3 * pc.c;

    const double wt = t.omega_nk;
    if (wt < 0.0)
        return out;

    const double z = kin.z_A;
    const RotatoryResponses resp = rotatory_responses(t.dipole, kin);
    const double pref = pc.mu0 * pc.c / (8.0 * kPi * pc.hbar);

    if (wt == 0.0) {
        // (ωW)'|₀ = W(0) = −i·[r_sp ± r_ps]_nret / (4z³): evanescent sector only.
        const ReflectionMatrix rn = detail::nonretarded_reflection(m, pc);
        const complex w_sigma = complex{0.0, -1.0} * (rn.r_sp + rn.r_ps) /
                                (4.0 * z * z * z);
        const complex w_delta = complex{0.0, -1.0} * (rn.r_sp - rn.r_ps) /
                                (4.0 * z * z * z);
        out.value = pref * (-resp.T * w_sigma.imag() - resp.R * w_delta.real() +
                            3.0 * resp.R * w_delta.real());
        out.error = std::abs(out.value) * 1e-14;
    } else {
        QuadratureConfig inner = cfg.tightened(1e-2);
        const double h = h_rel * wt;

        auto h_sigma = [&](double w) -> complex {
            return w * detail::sector_integrals(m, z, w, inner, pc).w_sigma;
        };
        auto h_delta = [&](double w) -> complex {
            return w * detail::sector_integrals(m, z, w, inner, pc).w_delta;
        };
        const auto [dh_sigma, e_sigma] = central_derivative(h_sigma, wt, h);
        const auto [dh_delta, e_delta] = central_derivative(h_delta, wt, h);
        const auto at_wt = detail::sector_integrals(m, z, wt, inner, pc);

        out.value = pref * (-resp.T * dh_sigma.imag() - resp.R * dh_delta.real() +
                            3.0 * resp.R * at_wt.w_delta.real());
        out.error = pref * (std::abs(resp.T) * e_sigma + std::abs(resp.R) * e_delta +
                            3.0 * std::abs(resp.R) * at_wt.error);
    }

    const double u_env = detail::sector_envelope(m, z, wt, cfg.tightened(1e3), pc);
    out.scale = pref * (std::abs(resp.T) + 4.0 * std::abs(resp.R)) * u_env;
    return out;
}

[[nodiscard]] inline double velocity_shift(const TransitionSpec& t,
                                           const AtomKinematics& kin,
                                           const MediumSpec& m,
                                           const QuadratureConfig& cfg = {},
                                           double h_rel = 1e-4,
                                           const PhysicalConstants& pc = si_constants()) {
    return velocity_shift_detail(t, kin, m, cfg, h_rel, pc).value;
}

/// Every contribution for one transition, plus diagnostics.
[[nodiscard]] inline ShiftBreakdown
total_shift(const TransitionSpec& t, const AtomKinematics& kin, const MediumSpec& m,
            const QuadratureConfig& cfg = {}, double h_rel = 1e-4,
            const PhysicalConstants& pc = si_constants()) {
    ShiftBreakdown b;
    b.medium = medium_tag(m);
    const auto res = resonant_shift_detail(t, kin, m, cfg, pc);
    const auto nres = nonresonant_shift_detail(t, kin, m, cfg, pc);
    const auto dec = decay_rate_detail(t, kin, m, cfg, pc);
    const auto vel = velocity_shift_detail(t, kin, m, cfg, h_rel, pc);
    b.resonant = res.value;
    b.nonresonant = nres.value;
    b.velocity = vel.value;
    b.decay_rate = dec.value;
    b.total = b.resonant + b.nonresonant + b.velocity;
    b.quad_err_resonant = res.error;
    b.quad_err_nonresonant = nres.error;
    b.quad_err_velocity = vel.error;
    b.velocity_scale = vel.scale;
    b.fast_motion_warning = vel.fast_motion_warning;
    return b;
}

/// Sum of breakdowns over several transitions sharing one configuration.
[[nodiscard]] inline ShiftBreakdown
aggregate_shifts(const std::vector<TransitionSpec>& transitions,
                 const AtomKinematics& kin, const MediumSpec& m,
                 const QuadratureConfig& cfg = {}, double h_rel = 1e-4,
                 const PhysicalConstants& pc = si_constants()) {
    ShiftBreakdown acc;
    acc.medium = medium_tag(m);
    for (const auto& t : transitions) {
        const ShiftBreakdown b = total_shift(t, kin, m, cfg, h_rel, pc);
        acc.resonant += b.resonant;
        acc.nonresonant += b.nonresonant;
        acc.velocity += b.velocity;
        acc.total += b.total;
        acc.decay_rate += b.decay_rate;
        acc.quad_err_resonant += b.quad_err_resonant;
        acc.quad_err_nonresonant += b.quad_err_nonresonant;
        acc.quad_err_velocity += b.quad_err_velocity;
        acc.velocity_scale = std::max(acc.velocity_scale, b.velocity_scale);
        acc.fast_motion_warning = acc.fast_motion_warning || b.fast_motion_warning;
    }
    return acc;
}

/// Self-consistent dressed frequency: solves ω = ω̃ + δω(ω) by iteration.
[[nodiscard]] inline double
self_consistent_frequency(const TransitionSpec& t, const AtomKinematics& kin,
                          const MediumSpec& m, const QuadratureConfig& cfg = {},
                          int max_iter = 20, double rel_tol = 1e-10,
                          double h_rel = 1e-4,
                          const PhysicalConstants& pc = si_constants()) {
    const double w0 = t.omega_nk;
    double w = w0;
    for (int it = 0; it < max_iter; ++it) {
        TransitionSpec dressed = t;
        dressed.omega_nk = w;
        const double w_next = w0 + total_shift(dressed, kin, m, cfg, h_rel, pc).total;
        const double scale = std::max({std::abs(w_next), std::abs(w0), 1e-300});
        if (std::abs(w_next - w) <= rel_tol * scale)
            return w_next;
        w = w_next;
    }
    throw NonConvergence("self_consistent_frequency: fixed point did not converge");
}

} // namespace cpshift
