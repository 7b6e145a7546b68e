// ─────────────────────────────────────────────────────────────────────────────
//  greens.hpp — coincident-point scattering Green function of the planar
//  interface, its curls, and its frequency derivative.
//
//  Everything here is the scattering (reflected) part evaluated at coincident
//  lateral position and equal heights z above the interface; the homogeneous
//  vacuum part is excluded. After the analytic angular integration the
//  coincident dyadic collapses to
//
//      G(z, ω) = (i/4π) ∫₀^∞ dk∥ (k∥/k⊥1) e^{2 i k⊥1 z} M(k∥),
//
//  with M_xx = M_yy = r_ss/2 − r_pp k⊥1²/(2k²), M_zz = r_pp k∥²/k²,
//  M_xy = −M_yx = (r_sp + r_ps) k⊥1/(2k), k = ω/c. On the real axis the
//  integral splits at the light line (k∥ = k sinθ propagating, k∥ = k cosh u
//  evanescent); on the imaginary axis ω = iξ it becomes a single decaying
//  integral over κ = |k⊥1| from ξ/c.
//
//  The curls at coincidence are the same integral with the reflection matrix
//  remapped and an overall factor ik: left curl uses {ss←ps, sp←pp, ps←−ss,
//  pp←−sp}, right curl {ss←sp, sp←−ss, ps←pp, pp←−ps}.
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <array>
#include <cmath>

#include "constants.hpp"
#include "fresnel.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace cpshift {

/// Dense complex 3×3 matrix.
struct Mat3 {
    std::array<std::array<complex, 3>, 3> m{};

    complex& operator()(int i, int j) { return m[i][j]; }
    const complex& operator()(int i, int j) const { return m[i][j]; }

    Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
        return *this;
    }
    [[nodiscard]] Mat3 operator*(complex s) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
        return r;
    }
    [[nodiscard]] double max_abs() const {
        double v = 0.0;
        for (const auto& row : m)
            for (const auto& e : row) v = std::max(v, std::abs(e));
        return v;
    }
};

/// Contraction a·(M·b) with unconjugated products.
[[nodiscard]] inline complex contract(const Complex3Vector& a, const Mat3& M,
                                      const Complex3Vector& b) {
    const complex bx = M(0, 0) * b.x + M(0, 1) * b.y + M(0, 2) * b.z;
    const complex by = M(1, 0) * b.x + M(1, 1) * b.y + M(1, 2) * b.z;
    const complex bz = M(2, 0) * b.x + M(2, 1) * b.y + M(2, 2) * b.z;
    return a.x * bx + a.y * by + a.z * bz;
}

/// Matrix–vector product M·b.
[[nodiscard]] inline Complex3Vector apply(const Mat3& M, const Complex3Vector& b) {
    return Complex3Vector{M(0, 0) * b.x + M(0, 1) * b.y + M(0, 2) * b.z,
                          M(1, 0) * b.x + M(1, 1) * b.y + M(1, 2) * b.z,
                          M(2, 0) * b.x + M(2, 1) * b.y + M(2, 2) * b.z};
}

enum class BlockKind { Plain, CurlLeft, CurlRight, DOmega };
enum class Side { Left, Right };
enum class DOmegaWeight { PlainG, OmegaSquaredG };

/// One evaluated 3×3 Green-function block [1/m] and its evaluation context.
struct GreensBlock {
    Mat3 value;
    BlockKind kind = BlockKind::Plain;
    complex omega{};
    double z = 0.0;
};

/// A block together with the quadrature error estimate of its entries.
struct GreensResult {
    GreensBlock block;
    double quad_error = 0.0;
};

namespace detail {

/// Reflection-matrix remappings implementing the coincident curls.
enum class RMap { Plain, CurlLeft, CurlRight };

[[nodiscard]] inline ReflectionMatrix apply_rmap(const ReflectionMatrix& r, RMap map) {
    switch (map) {
        case RMap::CurlLeft: {
            ReflectionMatrix s;
            s.r_ss = r.r_ps;
            s.r_sp = r.r_pp;
            s.r_ps = -r.r_ss;
            s.r_pp = -r.r_sp;
            return s;
        }
        case RMap::CurlRight: {
            ReflectionMatrix s;
            s.r_ss = r.r_sp;
            s.r_sp = -r.r_ss;
            s.r_ps = r.r_pp;
            s.r_pp = -r.r_ps;
            return s;
        }
        default: return r;
    }
}

/// The angular-averaged polarization matrix M(k∥) for given kinematics.
[[nodiscard]] inline Mat3 polarization_matrix(const ReflectionMatrix& r, complex k_perp,
                                              double k_par, complex k) {
    Mat3 M;
    const complex k2 = k * k;
    const complex diag = 0.5 * r.r_ss - 0.5 * r.r_pp * k_perp * k_perp / k2;
    M(0, 0) = diag;
    M(1, 1) = diag;
    M(2, 2) = r.r_pp * k_par * k_par / k2;
    const complex cross = (r.r_sp + r.r_ps) * k_perp / (2.0 * k);
    M(0, 1) = cross;
    M(1, 0) = -cross;
    return M;
}

/// Integrate four complex scalar channels (diag, zz, xy-numerators) at once by
/// folding them into repeated quadratures of a matrix-valued integrand. To
/// keep the adaptive control simple each matrix entry rides one shared
/// subdivision tree driven by a scalar combination; instead we simply run the
/// full matrix through the quadrature entry-by-entry via a packing trick:
/// the three independent channels (diag, zz, cross) are integrated as one
/// complex pair of quadratures.
struct ChannelValues {
    complex diag{}, zz{}, cross{};
};

template <class F>
ChannelValues integrate_channels(F&& channels_of, double a, double b, bool semi,
                                 const QuadratureConfig& cfg, double* err_out) {
    // Channels are independent 1-D integrals over the same variable; each is
    // integrated separately so the error control is per-channel honest.
    double err = 0.0;
    ChannelValues out;
    auto run = [&](auto pick) -> complex {
        auto f = [&](double x) { return pick(channels_of(x)); };
        QuadratureResult r = semi ? integrate_semiinfinite(f, a, cfg)
                                  : integrate_finite(f, a, b, cfg);
        err = std::max(err, r.error);
        return r.value;
    };
    out.diag = run([](const ChannelValues& c) { return c.diag; });
    out.zz = run([](const ChannelValues& c) { return c.zz; });
    out.cross = run([](const ChannelValues& c) { return c.cross; });
    if (err_out) *err_out = err;
    return out;
}

/// Core engine: the coincident scattering integral with an optional curl map.
inline GreensResult scattering_block(const MediumSpec& medium, double z, complex omega,
                                     RMap map, const QuadratureConfig& cfg,
                                     const PhysicalConstants& pc) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw ValidationError("green: z must be finite and > 0");
    if (omega == complex{})
        throw ValidationError("green: omega must be nonzero");
    const bool real_axis = omega.imag() == 0.0;
    const bool imag_axis = omega.real() == 0.0;
    if (!real_axis && !imag_axis)
        throw ValidationError("green: omega must be real or purely imaginary");

    const complex k = omega / pc.c;

    auto channels_at = [&](double k_par) -> ChannelValues {
        const WaveKinematics w = make_wave(omega, k_par, medium, pc);
        const ReflectionMatrix r = apply_rmap(reflect(medium, w, pc), map);
        const complex k2 = k * k;
        ChannelValues c;
        c.diag = 0.5 * r.r_ss - 0.5 * r.r_pp * w.k_perp1 * w.k_perp1 / k2;
        c.zz = r.r_pp * k_par * k_par / k2;
        c.cross = (r.r_sp + r.r_ps) * w.k_perp1 / (2.0 * k);
        return c;
    };

    ChannelValues total;
    double err = 0.0;

    if (real_axis) {
        const double kr = std::abs(omega.real()) / pc.c;
        const double x = 2.0 * kr * z;
        // Propagating sector: k∥ = k sinθ, measure k sinθ dθ, phase e^{2ikz cosθ}.
        {
            auto f = [&](double theta) -> ChannelValues {
                const double s = std::sin(theta);
                const double ct = std::cos(theta);
                ChannelValues c = channels_at(kr * s);
                const complex factor =
                    complex{0.0, 1.0} / (4.0 * M_PI) * kr * s * std::exp(complex{0.0, x * ct});
                c.diag *= factor;
                c.zz *= factor;
                c.cross *= factor;
                return c;
            };
            double e1 = 0.0;
            ChannelValues prop =
                integrate_channels(f, 0.0, M_PI / 2.0, false, cfg, &e1);
            total.diag += prop.diag;
            total.zz += prop.zz;
            total.cross += prop.cross;
            err = std::max(err, e1);
        }
        // Evanescent sector: k∥ = k cosh u, measure −i k cosh u du, decay
        // e^{−2kz sinh u}.
        {
            auto f = [&](double u) -> ChannelValues {
                const double sh = std::sinh(u);
                // The e^{−x sinh u} envelope underflows long before here;
                // bail out before cosh overflows or k∥ leaves the finite range.
                if (!(x * sh < 700.0))
                    return ChannelValues{};
                const double ch = std::cosh(u);
                ChannelValues c = channels_at(kr * ch);
                const complex factor = complex{0.0, 1.0} / (4.0 * M_PI) *
                                       complex{0.0, -1.0} * kr * ch *
                                       std::exp(-x * sh);
                c.diag *= factor;
                c.zz *= factor;
                c.cross *= factor;
                return c;
            };
            QuadratureConfig ecfg = cfg;
            ecfg.decay_scale = std::asinh(1.0 / std::max(x, 1e-12)) + 1.0;
            double e2 = 0.0;
            ChannelValues evan = integrate_channels(f, 0.0, 0.0, true, ecfg, &e2);
            total.diag += evan.diag;
            total.zz += evan.zz;
            total.cross += evan.cross;
            err = std::max(err, e2);
        }
    } else {
        // Imaginary axis ω = iξ: single decaying integral over κ = |k⊥1|.
        const double xi = omega.imag();
        if (!(xi > 0.0))
            throw ValidationError("green: imaginary-axis omega must have Im > 0");
        const double kappa0 = xi / pc.c;
        auto f = [&](double kappa) -> ChannelValues {
            // The e^{−2κz} envelope underflows long before κ overflows.
            if (!(2.0 * kappa * z < 700.0))
                return ChannelValues{};
            const double dk2 = kappa * kappa - kappa0 * kappa0;
            const double k_par = dk2 > 0.0 ? std::sqrt(dk2) : 0.0;
            ChannelValues c = channels_at(k_par);
            const double factor = std::exp(-2.0 * kappa * z) / (4.0 * M_PI);
            c.diag *= factor;
            c.zz *= factor;
            c.cross *= factor;
            return c;
        };
        QuadratureConfig ecfg = cfg;
        ecfg.decay_scale = 1.0 / (2.0 * z);
        total = integrate_channels(f, kappa0, 0.0, true, ecfg, &err);
    }

    GreensResult out;
    out.block.kind = map == RMap::Plain
                         ? BlockKind::Plain
                         : (map == RMap::CurlLeft ? BlockKind::CurlLeft
                                                  : BlockKind::CurlRight);
    out.block.omega = omega;
    out.block.z = z;
    Mat3& G = out.block.value;
    G(0, 0) = total.diag;
    G(1, 1) = total.diag;
    G(2, 2) = total.zz;
    G(0, 1) = total.cross;
    G(1, 0) = -total.cross;
    out.quad_error = err;
    return out;
}

} // namespace detail

// ── Closed forms (ideal mirrors / constant reflection matrices) ──────────────

/// Coincident scattering block for a k-independent reflection matrix:
///   G_xx = G_yy = e^{2ikz}[(r_ss−r_pp)/(16πz) − i r_pp/(16π k z²) + r_pp/(32π k² z³)]
///   G_zz = r_pp e^{2ikz}[−i/(8π k z²) + 1/(16π k² z³)]
///   G_xy = −G_yx = (r_sp+r_ps) e^{2ikz}[1/(16π z) + i/(32π k z²)]
[[nodiscard]] inline Mat3 closed_scattering_matrix(const ReflectionMatrix& r, double z,
                                                   complex omega,
                                                   const PhysicalConstants& pc = si_constants()) {
    if (!(z > 0.0) || !std::isfinite(z))
        throw ValidationError("closed_scattering_matrix: z must be > 0");
    if (omega == complex{})
        throw ValidationError("closed_scattering_matrix: omega must be nonzero");
    const complex k = omega / pc.c;
    const complex E = std::exp(2.0 * I * k * z);
    Mat3 G;
    const complex sum_cross = r.r_sp + r.r_ps;
    const complex gxx = E * ((r.r_ss - r.r_pp) / (16.0 * M_PI * z) -
                             I * r.r_pp / (16.0 * M_PI * k * z * z) +
                             r.r_pp / (32.0 * M_PI * k * k * z * z * z));
    const complex gzz = r.r_pp * E *
                        (-I / (8.0 * M_PI * k * z * z) +
                         1.0 / (16.0 * M_PI * k * k * z * z * z));
    const complex gxy =
        sum_cross * E * (1.0 / (16.0 * M_PI * z) + I / (32.0 * M_PI * k * z * z));
    G(0, 0) = gxx;
    G(1, 1) = gxx;
    G(2, 2) = gzz;
    G(0, 1) = gxy;
    G(1, 0) = -gxy;
    return G;
}

/// Analytic ∂G/∂ω of the closed block above (constant reflection matrix).
[[nodiscard]] inline Mat3 closed_scattering_matrix_domega(const ReflectionMatrix& r,
                                                          double z, complex omega,
                                                          const PhysicalConstants& pc = si_constants()) {
    const complex k = omega / pc.c;
    const complex E = std::exp(2.0 * I * k * z);
    const complex phase = 2.0 * I * z / pc.c;

    auto dterm = [&](complex a, complex b, complex g) -> complex {
        // d/dω of E·(a + b/k + g/k²): E[phase·(a + b/k + g/k²) − b/(ck²) − 2g/(ck³)]
        return E * (phase * (a + b / k + g / (k * k)) - b / (pc.c * k * k) -
                    2.0 * g / (pc.c * k * k * k));
    };

    Mat3 dG;
    const complex dxx = dterm((r.r_ss - r.r_pp) / (16.0 * M_PI * z),
                              -I * r.r_pp / (16.0 * M_PI * z * z),
                              r.r_pp / (32.0 * M_PI * z * z * z));
    const complex dzz = dterm(0.0, -I * r.r_pp / (8.0 * M_PI * z * z),
                              r.r_pp / (16.0 * M_PI * z * z * z));
    const complex dxy = dterm((r.r_sp + r.r_ps) / (16.0 * M_PI * z),
                              I * (r.r_sp + r.r_ps) / (32.0 * M_PI * z * z), 0.0);
    dG(0, 0) = dxx;
    dG(1, 1) = dxx;
    dG(2, 2) = dzz;
    dG(0, 1) = dxy;
    dG(1, 0) = -dxy;
    return dG;
}

// ── Public operations ────────────────────────────────────────────────────────

/// Closed-form coincident scattering block of the three ideal mirrors.
[[nodiscard]] inline GreensBlock green_closed(const MediumSpec& medium, double z,
                                              complex omega,
                                              const PhysicalConstants& pc = si_constants()) {
    const ReflectionMatrix r = reflection_ideal(medium); // throws for TI/chiral media
    GreensBlock b;
    b.value = closed_scattering_matrix(r, z, omega, pc);
    b.kind = BlockKind::Plain;
    b.omega = omega;
    b.z = z;
    return b;
}

/// Numeric coincident scattering block for any supported medium; ω must be
/// real (light-line split) or purely imaginary (decaying integral).
[[nodiscard]] inline GreensResult green_numeric_detail(const MediumSpec& medium, double z,
                                                       complex omega,
                                                       const QuadratureConfig& cfg = {},
                                                       const PhysicalConstants& pc = si_constants()) {
    return detail::scattering_block(medium, z, omega, detail::RMap::Plain, cfg, pc);
}

[[nodiscard]] inline GreensBlock green_numeric(const MediumSpec& medium, double z,
                                               complex omega,
                                               const QuadratureConfig& cfg = {},
                                               const PhysicalConstants& pc = si_constants()) {
    return green_numeric_detail(medium, z, omega, cfg, pc).block;
}

/// Coincident curl block ∇×G (Side::Left) or the right-acting counterpart
/// (Side::Right): the same scattering integral with the reflection matrix
/// remapped and an overall factor ik.
[[nodiscard]] inline GreensResult green_curl_detail(const MediumSpec& medium, double z,
                                                    complex omega, Side side,
                                                    const QuadratureConfig& cfg = {},
                                                    const PhysicalConstants& pc = si_constants()) {
    GreensResult r = detail::scattering_block(
        medium, z, omega,
        side == Side::Left ? detail::RMap::CurlLeft : detail::RMap::CurlRight, cfg, pc);
    const complex ik = I * omega / pc.c;
    r.block.value = r.block.value * ik;
    r.quad_error *= std::abs(ik);
    return r;
}

[[nodiscard]] inline GreensBlock green_curl(const MediumSpec& medium, double z,
                                            complex omega, Side side,
                                            const QuadratureConfig& cfg = {},
                                            const PhysicalConstants& pc = si_constants()) {
    return green_curl_detail(medium, z, omega, side, cfg, pc).block;
}

/// Frequency derivative at real ω > 0 of G (PlainG) or of ω²G (OmegaSquaredG).
///
/// Ideal mirrors use the analytic derivative of the closed block; dispersive
/// polarization mixing media use a Richardson-extrapolated central difference
/// of the numeric block with step h = h_rel·ω, h_rel ∈ [1e-7, 1e-3].
[[nodiscard]] inline GreensBlock green_domega(const MediumSpec& medium, double z,
                                              double omega, DOmegaWeight weight,
                                              const QuadratureConfig& cfg = {},
                                              double h_rel = 1e-4,
                                              const PhysicalConstants& pc = si_constants()) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ValidationError("green_domega: omega must be finite and > 0");
    if (!(h_rel >= 1e-7 && h_rel <= 1e-3))
        throw StepTooSmall("green_domega: h_rel must lie in [1e-7, 1e-3]");

    GreensBlock out;
    out.kind = BlockKind::DOmega;
    out.omega = omega;
    out.z = z;

    const bool ideal = !std::holds_alternative<TopologicalInsulator>(medium) &&
                       !std::holds_alternative<IsotropicChiral>(medium);
    if (ideal) {
        const ReflectionMatrix r = reflection_ideal(medium);
        Mat3 dG = closed_scattering_matrix_domega(r, z, omega, pc);
        if (weight == DOmegaWeight::OmegaSquaredG) {
            // d(ω²G)/dω = 2ωG + ω² dG/dω
            Mat3 G = closed_scattering_matrix(r, z, omega, pc);
            Mat3 res = G * (2.0 * omega);
            res += dG * (omega * omega);
            out.value = res;
        } else {
            out.value = dG;
        }
        return out;
    }

    const QuadratureConfig inner = cfg.tightened(1e-3);
    const double h = h_rel * omega;
    auto entry = [&](double w, int i, int j) -> complex {
        Mat3 G = green_numeric(medium, z, complex{w, 0.0}, inner, pc).value;
        const double wt = weight == DOmegaWeight::OmegaSquaredG ? w * w : 1.0;
        return wt * G(i, j);
    };
    // Differentiate the three independent channels.
    const std::array<std::pair<int, int>, 3> channels{{{0, 0}, {2, 2}, {0, 1}}};
    Mat3 d;
    for (auto [i, j] : channels) {
        auto g = [&](double w) { return entry(w, i, j); };
        auto [val, est] = central_derivative(g, omega, h);
        (void)est;
        d(i, j) = val;
    }
    d(1, 1) = d(0, 0);
    d(1, 0) = -d(0, 1);
    out.value = d;
    return out;
}

} // namespace cpshift
