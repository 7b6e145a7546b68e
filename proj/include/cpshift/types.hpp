// ─────────────────────────────────────────────────────────────────────────────
//  types.hpp — value types shared by every module: complex 3-vectors, the
//  transition descriptor, the atom kinematics, the medium descriptors, and the
//  error hierarchy.
//
//  Geometry: the interface is the plane z = 0; the atom sits in vacuum at
//  height z_A > 0 and moves parallel to the interface with in-plane velocity
//  (v_x, v_y). All inputs are SI. Every type validates its invariants at
//  construction and is immutable afterwards.
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

namespace cpshift {

using complex = std::complex<double>;
inline constexpr complex I{0.0, 1.0};

// ── Errors ───────────────────────────────────────────────────────────────────

/// Construction-time invariant violation (bad field values).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An adaptive numerical procedure failed to reach its tolerance.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operation was asked to handle a medium kind it does not model.
struct WrongMediumKind : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A reflection-coefficient denominator vanished for the requested kinematics.
struct DegenerateDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The dipole/velocity pair violates the in-plane transversality precondition.
struct TransversalityViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A retarded-regime evaluation was requested without a positive frequency.
struct MissingFrequency : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A finite-difference step fell outside its admissible range.
struct StepTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ── Complex 3-vector ─────────────────────────────────────────────────────────

/// A complex-valued Cartesian 3-vector; every component must be finite.
struct Complex3Vector {
    complex x{}, y{}, z{};

    Complex3Vector() = default;
    Complex3Vector(complex x_, complex y_, complex z_) : x(x_), y(y_), z(z_) {
        if (!is_finite())
            throw ValidationError("Complex3Vector: components must be finite");
    }

    [[nodiscard]] bool is_finite() const noexcept {
        auto ok = [](complex v) {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        };
        return ok(x) && ok(y) && ok(z);
    }

    /// Squared Euclidean norm Σ|vᵢ|².
    [[nodiscard]] double norm2() const noexcept {
        return std::norm(x) + std::norm(y) + std::norm(z);
    }

    [[nodiscard]] Complex3Vector conj() const noexcept {
        return Complex3Vector{std::conj(x), std::conj(y), std::conj(z)};
    }
};

/// Unconjugated dot product a·b = Σ aᵢ bᵢ.
[[nodiscard]] inline complex dot(const Complex3Vector& a, const Complex3Vector& b) noexcept {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Cross product a×b.
[[nodiscard]] inline Complex3Vector cross(const Complex3Vector& a,
                                          const Complex3Vector& b) noexcept {
    return Complex3Vector{a.y * b.z - a.z * b.y,
                          a.z * b.x - a.x * b.z,
                          a.x * b.y - a.y * b.x};
}

// ── Transition ───────────────────────────────────────────────────────────────

/// One electric-dipole transition |n⟩ → |k⟩ of the moving atom.
///
/// `dipole` is the matrix element d_nk [C·m]; `omega_nk` is the transition
/// angular frequency [rad/s], positive for downward transitions (E_n > E_k),
/// and may be zero or negative. `label` is free-form bookkeeping text.
struct TransitionSpec {
    Complex3Vector dipole;
    double omega_nk = 0.0;
    std::string label;

    TransitionSpec() = default;
    TransitionSpec(Complex3Vector d, double omega, std::string lab = {})
        : dipole(d), omega_nk(omega), label(std::move(lab)) {
        if (!std::isfinite(omega_nk))
            throw ValidationError("TransitionSpec: omega_nk must be finite");
        if (dipole.norm2() <= 0.0)
            throw ValidationError("TransitionSpec: dipole must have a nonzero component");
    }
};

// ── Kinematics ───────────────────────────────────────────────────────────────

/// Position and in-plane velocity of the atom (no motion normal to the wall).
struct AtomKinematics {
    double z_A = 0.0; ///< height above the interface [m], strictly positive
    double v_x = 0.0; ///< in-plane velocity component [m/s]
    double v_y = 0.0; ///< in-plane velocity component [m/s]

    AtomKinematics() = default;
    AtomKinematics(double z, double vx, double vy) : z_A(z), v_x(vx), v_y(vy) {
        if (!(std::isfinite(z_A) && z_A > 0.0))
            throw ValidationError("AtomKinematics: z_A must be finite and > 0");
        if (!(std::isfinite(v_x) && std::isfinite(v_y)))
            throw ValidationError("AtomKinematics: velocity must be finite");
    }

    [[nodiscard]] double speed() const noexcept { return std::hypot(v_x, v_y); }
};

// ── Media ────────────────────────────────────────────────────────────────────

/// Perfectly conducting mirror: r_pp = 1, r_ss = −1, no polarization mixing.
struct PerfectConductor {};

/// Perfectly reflecting nonreciprocal (time-reversal-odd) mirror:
/// r_ss = r_pp = 0, r_sp = r_ps = sign.
struct NonreciprocalMirror {
    int sign = -1; ///< +1 or −1
    NonreciprocalMirror() = default;
    explicit NonreciprocalMirror(int s) : sign(s) {
        if (sign != 1 && sign != -1)
            throw ValidationError("NonreciprocalMirror: sign must be +1 or -1");
    }
};

/// Half-space of strong 3D topological insulator with axion-type
/// magnetoelectric coupling delta (= alpha_fs·(2m+1) for integer m when the
/// surface gap selects the m-th Hall plateau). Nondispersive eps2, mu2.
struct TopologicalInsulator {
    double eps2 = 1.0;
    double mu2  = 1.0;
    double delta = 0.0;

    TopologicalInsulator() = default;
    TopologicalInsulator(double eps, double mu, double d)
        : eps2(eps), mu2(mu), delta(d) {
        if (!(std::isfinite(eps2) && eps2 >= 1.0))
            throw ValidationError("TopologicalInsulator: eps2 must be >= 1");
        if (!(std::isfinite(mu2) && mu2 > 0.0))
            throw ValidationError("TopologicalInsulator: mu2 must be > 0");
        if (!(std::isfinite(delta) && std::abs(delta) < 1.0))
            throw ValidationError("TopologicalInsulator: |delta| must be < 1");
    }

    /// Convenience: delta = alpha_fs·(2m+1) for the m-th surface Hall plateau.
    [[nodiscard]] static TopologicalInsulator from_plateau(double eps, double mu, int m,
                                                           double alpha_fs) {
        return TopologicalInsulator(eps, mu, alpha_fs * (2.0 * m + 1.0));
    }
};

enum class Handedness { Left, Right };

/// Perfectly reflecting chiral mirror: pure cross-polarization reflection,
/// r_ps = ±i and r_sp = ∓i (upper signs: Left).
struct ChiralMirror {
    Handedness handedness = Handedness::Left;
    ChiralMirror() = default;
    explicit ChiralMirror(Handedness h) : handedness(h) {}
};

/// Isotropic chiral (optically active) half-space with scalar Boys–Post
/// chirality kappa2; circular eigenwaves have indices sqrt(eps2·mu2) ± kappa2.
struct IsotropicChiral {
    complex eps2{1.0, 0.0};
    complex mu2{1.0, 0.0};
    complex kappa2{0.0, 0.0};

    IsotropicChiral() = default;
    IsotropicChiral(complex eps, complex mu, complex kappa)
        : eps2(eps), mu2(mu), kappa2(kappa) {
        auto fin = [](complex v) {
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        };
        if (!(fin(eps2) && fin(mu2) && fin(kappa2)))
            throw ValidationError("IsotropicChiral: parameters must be finite");
        if (!(std::abs(kappa2) < std::abs(std::sqrt(eps2 * mu2))))
            throw ValidationError(
                "IsotropicChiral: |kappa2| must be < |sqrt(eps2*mu2)|");
    }
};

/// Tagged union over the five supported media.
using MediumSpec = std::variant<PerfectConductor, NonreciprocalMirror,
                                TopologicalInsulator, ChiralMirror, IsotropicChiral>;

/// Short lowercase tag for logs and CSV headers.
[[nodiscard]] inline std::string medium_tag(const MediumSpec& m) {
    struct V {
        std::string operator()(const PerfectConductor&) const { return "conductor"; }
        std::string operator()(const NonreciprocalMirror& n) const {
            return n.sign > 0 ? "nonreciprocal(+)" : "nonreciprocal(-)";
        }
        std::string operator()(const TopologicalInsulator&) const {
            return "topological-insulator";
        }
        std::string operator()(const ChiralMirror& c) const {
            return c.handedness == Handedness::Left ? "chiral-mirror(L)"
                                                    : "chiral-mirror(R)";
        }
        std::string operator()(const IsotropicChiral&) const { return "chiral-medium"; }
    };
    return std::visit(V{}, m);
}

/// True if the medium mixes s and p only through a reciprocal (symmetric)
/// cross-reflection sector, i.e. r_sp = −r_ps or no mixing at all.
[[nodiscard]] inline bool is_reciprocal(const MediumSpec& m) noexcept {
    struct V {
        bool operator()(const PerfectConductor&) const { return true; }
        bool operator()(const NonreciprocalMirror&) const { return false; }
        bool operator()(const TopologicalInsulator&) const { return false; }
        bool operator()(const ChiralMirror&) const { return true; }
        bool operator()(const IsotropicChiral&) const { return true; }
    };
    return std::visit(V{}, m);
}

// ── Transversality ───────────────────────────────────────────────────────────

/// True iff the dipole's longitudinal coupling vanishes within tolerance:
/// |d_z*·(v∥·d∥)| ≤ tol·|v∥|·|d|². The motional response mixes the normal
/// dipole component with the in-plane projection along the velocity, so the
/// condition is vacuously met for v∥ = 0, for d_z = 0, or for d∥ ⊥ v∥.
[[nodiscard]] inline bool validate_transversality(const TransitionSpec& t,
                                                  const AtomKinematics& k,
                                                  double tol = 1e-9) noexcept {
    const double v = k.speed();
    if (v == 0.0) return true;
    const complex vd = k.v_x * t.dipole.x + k.v_y * t.dipole.y;
    const double coupling = std::abs(std::conj(t.dipole.z) * vd);
    return coupling <= tol * v * t.dipole.norm2();
}

/// Regime selector shared by the asymptotics module and the CLI.
enum class RegimeTag { Retarded, Nonretarded, Full };

[[nodiscard]] inline std::string regime_tag_name(RegimeTag r) {
    switch (r) {
        case RegimeTag::Retarded: return "retarded";
        case RegimeTag::Nonretarded: return "nonretarded";
        default: return "full";
    }
}

} // namespace cpshift
