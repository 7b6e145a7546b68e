// ─────────────────────────────────────────────────────────────────────────────
//  fresnel.hpp — reflection matrices of the five supported half-spaces.
//
//  Conventions: the interface is z = 0 with vacuum above; a wave of (possibly
//  complex) frequency ω and in-plane wavenumber k∥ has vacuum normal
//  wavenumber k⊥1 with k⊥1² = ω²/c² − k∥² on the branch Im k⊥1 ≥ 0. The s
//  unit vector is k̂∥×ẑ and the p vectors are e_p± = (k∥ẑ ∓ k⊥k̂∥)/k. The
//  2×2 reflection matrix maps incident (s, p) amplitudes to reflected ones;
//  r_ps is reflected-p from incident-s and r_sp reflected-s from incident-p.
//
//  Ideal mirrors have constant matrices. The topological-insulator half-space
//  mixes polarizations through its magnetoelectric parameter delta with a
//  symmetric cross sector (r_sp = r_ps); the isotropic chiral half-space mixes
//  them antisymmetrically (r_ps = −r_sp) through its chirality kappa2.
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "constants.hpp"
#include "types.hpp"

namespace cpshift {

/// 2×2 reflection matrix in the (s, p) polarization basis.
struct ReflectionMatrix {
    complex r_ss{}, r_sp{}, r_ps{}, r_pp{};
};

/// Square root on the branch Im ≥ 0 (and ≥ 0 on the positive real axis),
/// the physical branch for upward-decaying/outgoing reflected waves.
[[nodiscard]] inline complex branch_sqrt_im_pos(complex w) {
    complex r = std::sqrt(w);
    if (r.imag() < 0.0 || (r.imag() == 0.0 && r.real() < 0.0)) r = -r;
    return r;
}

/// Wave kinematics shared by the reflection and Green-function modules.
///
/// k_perp2 is set for the topological insulator (single refracted branch);
/// k_perp2_L/k_perp2_R for the chiral medium's circular eigenwaves. Unused
/// slots stay NaN.
struct WaveKinematics {
    complex omega{};   ///< angular frequency [rad/s]; real or iξ
    double k_par = 0;  ///< in-plane wavenumber [1/m], ≥ 0
    complex k_perp1{}; ///< vacuum normal wavenumber, Im ≥ 0
    complex k_perp2{std::numeric_limits<double>::quiet_NaN(), 0.0};
    complex k_perp2_L{std::numeric_limits<double>::quiet_NaN(), 0.0};
    complex k_perp2_R{std::numeric_limits<double>::quiet_NaN(), 0.0};
};

/// Build the kinematics for a (ω, k∥) pair against the given medium.
[[nodiscard]] inline WaveKinematics make_wave(complex omega, double k_par,
                                              const MediumSpec& medium,
                                              const PhysicalConstants& pc = si_constants()) {
    if (!(k_par >= 0.0) || !std::isfinite(k_par))
        throw ValidationError("make_wave: k_par must be finite and >= 0");
    WaveKinematics w;
    w.omega = omega;
    w.k_par = k_par;
    const complex k1sq = omega * omega / (pc.c * pc.c);
    w.k_perp1 = branch_sqrt_im_pos(k1sq - k_par * k_par);
    if (const auto* ti = std::get_if<TopologicalInsulator>(&medium)) {
        w.k_perp2 = branch_sqrt_im_pos(ti->eps2 * ti->mu2 * k1sq - k_par * k_par);
    } else if (const auto* ch = std::get_if<IsotropicChiral>(&medium)) {
        const complex n = std::sqrt(ch->eps2 * ch->mu2);
        const complex k1 = omega / pc.c;
        const complex kL = k1 * (n - ch->kappa2);
        const complex kR = k1 * (n + ch->kappa2);
        w.k_perp2_L = branch_sqrt_im_pos(kL * kL - k_par * k_par);
        w.k_perp2_R = branch_sqrt_im_pos(kR * kR - k_par * k_par);
    }
    return w;
}

// ── Ideal mirrors ────────────────────────────────────────────────────────────

/// Constant reflection matrix of the three perfectly reflecting mirrors.
/// Throws WrongMediumKind for media that need full kinematics.
[[nodiscard]] inline ReflectionMatrix reflection_ideal(const MediumSpec& medium) {
    if (std::holds_alternative<PerfectConductor>(medium)) {
        ReflectionMatrix r;
        r.r_pp = 1.0;
        r.r_ss = -1.0;
        return r;
    }
    if (const auto* n = std::get_if<NonreciprocalMirror>(&medium)) {
        ReflectionMatrix r;
        r.r_sp = static_cast<double>(n->sign);
        r.r_ps = static_cast<double>(n->sign);
        return r;
    }
    if (const auto* c = std::get_if<ChiralMirror>(&medium)) {
        ReflectionMatrix r;
        if (c->handedness == Handedness::Left) {
            r.r_ps = I;
            r.r_sp = -I;
        } else {
            r.r_ps = -I;
            r.r_sp = I;
        }
        return r;
    }
    throw WrongMediumKind("reflection_ideal: medium is not an ideal mirror");
}

// ── Topological insulator ────────────────────────────────────────────────────

/// Full Fresnel matrix of the topological-insulator half-space.
///
/// The cross coefficients are symmetric (r_sp = r_ps) and odd in delta; at
/// delta = 0 the diagonal entries reduce to the standard magnetodielectric
/// s/p coefficients.
[[nodiscard]] inline ReflectionMatrix reflection_ti(const TopologicalInsulator& ti,
                                                    const WaveKinematics& w) {
    const complex kz1 = w.k_perp1;
    const complex kz2 = w.k_perp2;
    const double m2 = ti.mu2;
    const double e2 = ti.eps2;
    const double d = ti.delta;

    const complex D = (m2 * kz1 + kz2) * m2 * (e2 * kz1 + kz2) + d * d * kz1 * kz2;
    const double scale = std::abs((m2 * kz1 + kz2) * m2 * (e2 * kz1 + kz2)) +
                         std::abs(d * d * kz1 * kz2);
    if (std::abs(D) <= 1e-14 * scale || D == complex{})
        throw DegenerateDenominator("reflection_ti: vanishing denominator");

    ReflectionMatrix r;
    r.r_ss = ((m2 * kz1 - kz2) * m2 * (e2 * kz1 + kz2) - d * d * kz1 * kz2) / D;
    r.r_pp = ((e2 * kz1 - kz2) * m2 * (m2 * kz1 + kz2) + d * d * kz1 * kz2) / D;
    r.r_sp = -2.0 * m2 * kz1 * kz2 * d / D;
    r.r_ps = r.r_sp;
    return r;
}

// ── Isotropic chiral medium ──────────────────────────────────────────────────

/// Full Fresnel matrix of the isotropic chiral half-space.
///
/// The refracted circular eigenwaves L/R have wavenumbers (ω/c)(n ∓ κ₂) with
/// n = sqrt(ε₂μ₂). The cross coefficients are antisymmetric (r_ps = −r_sp)
/// and odd in κ₂; at κ₂ = 0 the diagonal entries reduce to the standard
/// magnetodielectric s/p coefficients.
[[nodiscard]] inline ReflectionMatrix reflection_chiral(const IsotropicChiral& ch,
                                                        const WaveKinematics& w,
                                                        const PhysicalConstants& pc = si_constants()) {
    const complex k1 = w.omega / pc.c;
    const complex n = std::sqrt(ch.eps2 * ch.mu2);
    const complex kL = k1 * (n - ch.kappa2);
    const complex kR = k1 * (n + ch.kappa2);
    const complex kz1 = w.k_perp1;
    const complex kz2L = w.k_perp2_L;
    const complex kz2R = w.k_perp2_R;

    const complex se = std::sqrt(ch.eps2);
    const complex sm = std::sqrt(ch.mu2);

    const complex aL = se * k1 * kz2L / (sm * kz1 * kL);
    const complex aR = se * k1 * kz2R / (sm * kz1 * kR);
    const complex bL = sm * k1 * kz2L / (se * kz1 * kL);
    const complex bR = sm * k1 * kz2R / (se * kz1 * kR);

    const complex t1 = (1.0 + aR) * (1.0 + bL);
    const complex t2 = (1.0 + aL) * (1.0 + bR);
    const complex D = t1 + t2;
    const double scale = std::abs(t1) + std::abs(t2);
    if (std::abs(D) <= 1e-14 * scale || D == complex{})
        throw DegenerateDenominator("reflection_chiral: vanishing denominator");

    ReflectionMatrix r;
    r.r_ss = ((1.0 - aR) * (1.0 + bL) + (1.0 - aL) * (1.0 + bR)) / D;
    r.r_pp = ((1.0 + aR) * (1.0 - bL) + (1.0 + aL) * (1.0 - bR)) / D;
    r.r_sp = (-2.0 * I * k1 / (D * kz1)) * (kz2L / kL - kz2R / kR);
    r.r_ps = -r.r_sp;
    return r;
}

/// Reflection matrix of any supported medium at the given kinematics.
[[nodiscard]] inline ReflectionMatrix reflect(const MediumSpec& medium,
                                              const WaveKinematics& w,
                                              const PhysicalConstants& pc = si_constants()) {
    if (const auto* ti = std::get_if<TopologicalInsulator>(&medium))
        return reflection_ti(*ti, w);
    if (const auto* ch = std::get_if<IsotropicChiral>(&medium))
        return reflection_chiral(*ch, w, pc);
    return reflection_ideal(medium);
}

// ── Closed-form regime limits ────────────────────────────────────────────────

/// Closed-form reflection matrix in the retarded (normal-incidence, k∥ → 0)
/// or nonretarded (k∥ → ∞) limit.
///
/// Ideal mirrors are k-independent. The topological-insulator forms assume
/// mu2 = 1 and reject other values. The chiral-medium retarded limit is
/// evaluated from the full Fresnel matrix at k∥ = 0 on the physical branch,
/// which stays meaningful for complex material parameters.
[[nodiscard]] inline ReflectionMatrix reflection_limit(const MediumSpec& medium,
                                                       RegimeTag regime,
                                                       const PhysicalConstants& pc = si_constants()) {
    if (regime == RegimeTag::Full)
        throw ValidationError("reflection_limit: regime must be Retarded or Nonretarded");

    if (const auto* ti = std::get_if<TopologicalInsulator>(&medium)) {
        if (ti->mu2 != 1.0)
            throw ValidationError("reflection_limit: closed TI forms require mu2 = 1");
        const double e2 = ti->eps2;
        const double d = ti->delta;
        ReflectionMatrix r;
        if (regime == RegimeTag::Retarded) {
            const double se = std::sqrt(e2);
            const double Q = (1.0 + se) * (1.0 + se) + d * d;
            r.r_ss = (1.0 - e2 - d * d) / Q;
            r.r_sp = -2.0 * d / Q;
            r.r_pp = -r.r_ss.real();
        } else {
            const double Dn = 2.0 * (e2 + 1.0) + d * d;
            r.r_ss = -d * d / Dn;
            r.r_sp = -2.0 * d / Dn;
            r.r_pp = (2.0 * (e2 - 1.0) + d * d) / Dn;
        }
        r.r_ps = r.r_sp;
        return r;
    }

    if (const auto* ch = std::get_if<IsotropicChiral>(&medium)) {
        if (regime == RegimeTag::Retarded) {
            // Normal incidence of the full matrix; a representative optical
            // frequency is used only to keep magnitudes near unity (the
            // nondispersive coefficients are scale-free).
            const WaveKinematics w = make_wave(complex{1e15, 0.0}, 0.0, medium, pc);
            return reflection_chiral(*ch, w, pc);
        }
        const complex e2 = ch->eps2;
        const complex m2 = ch->mu2;
        const complex k2 = ch->kappa2;
        const complex DB = e2 * m2 - k2 * k2 + e2 + m2 + 1.0;
        if (DB == complex{})
            throw DegenerateDenominator("reflection_limit: vanishing chiral denominator");
        ReflectionMatrix r;
        r.r_ss = (e2 * m2 - k2 * k2 - e2 + m2 - 1.0) / DB;
        r.r_pp = (e2 * m2 - k2 * k2 + e2 - m2 - 1.0) / DB;
        r.r_sp = -2.0 * I * k2 / DB;
        r.r_ps = -r.r_sp;
        return r;
    }

    return reflection_ideal(medium);
}

} // namespace cpshift
