// Frequency shifts and decay rates: velocity channel, nonresonant integral,
// and the resonant/decay contractions.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>

#include "cpshift/atom.hpp"
#include "cpshift/constants.hpp"
#include "cpshift/shifts.hpp"

using namespace cpshift;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const PhysicalConstants& pc = si_constants();

TransitionSpec circular_z(int n, double omega = 0.0) {
    TransitionSpec t = hydrogen_dipole(
        RydbergTransition(n, TransitionKind::M1_circular, {0.0, 0.0, 1.0}), pc);
    t.omega_nk = omega;
    return t;
}

TransitionSpec circular_x(int n, double omega = 0.0) {
    TransitionSpec t = hydrogen_dipole(
        RydbergTransition(n, TransitionKind::M1_circular, {1.0, 0.0, 0.0}), pc);
    t.omega_nk = omega;
    return t;
}

TransitionSpec linear_yz(int n, double omega = 0.0) {
    const double r2 = 1.0 / std::sqrt(2.0);
    TransitionSpec t = hydrogen_dipole(
        RydbergTransition(n, TransitionKind::M0_linear, {0.0, r2, r2}), pc);
    t.omega_nk = omega;
    return t;
}

// Closed evanescent-plus-propagating cross integral for a constant reflection
// matrix: J(k) = -e^{2ikz}(k/(2z^2) + i/(4z^3)) and d(kJ)/dk.
complex j_closed(double k, double z) {
    return -std::exp(complex{0.0, 2.0 * k * z}) *
           complex{k / (2.0 * z * z), 1.0 / (4.0 * z * z * z)};
}
complex dkj_closed(double k, double z) {
    return -std::exp(complex{0.0, 2.0 * k * z}) *
           (complex{0.0, k * k / z} +
            complex{k / (2.0 * z * z), 1.0 / (4.0 * z * z * z)});
}
} // namespace

TEST_CASE("zero-frequency velocity shift of the reference geometries") {
    const double z = 1e-6, v = 300.0;
    const AtomKinematics kin{z, v, 0.0};
    const double pref = pc.mu0 * pc.c / (8.0 * kPi * pc.hbar);

    SECTION("nonreciprocal mirror with a tilted linear dipole") {
        const TransitionSpec t = linear_yz(20);
        const VelocityDetail d =
            velocity_shift_detail(t, kin, NonreciprocalMirror{-1}, {}, 1e-4, pc);
        const double T = v * t.dipole.norm2() / 2.0;
        // W_sigma(0) = -i(-2)/(4z^3): only the time-even sector survives.
        const double expected = -pref * T / (2.0 * z * z * z);
        REQUIRE_THAT(d.value, WithinRel(expected, 1e-12));
        REQUIRE_THAT(d.value, WithinRel(-9.173e1, 1e-3));
        // No cancellation in this geometry: the envelope equals the value.
        REQUIRE(d.scale >= std::abs(d.value));
        REQUIRE_FALSE(d.fast_motion_warning);
    }
    SECTION("chiral mirror with a circular dipole about the motion") {
        const TransitionSpec t = circular_x(20);
        const VelocityDetail d = velocity_shift_detail(
            t, kin, ChiralMirror{Handedness::Left}, {}, 1e-4, pc);
        const double R = -v * t.dipole.norm2() / 2.0;
        // W_delta(0) = -i(-2i)/(4z^3) = -1/(2z^3): rotatory sector, weight 2R.
        const double expected = -pref * R / (z * z * z);
        REQUIRE_THAT(d.value, WithinRel(expected, 1e-12));
        REQUIRE_THAT(d.value, WithinRel(+1.835e2, 1e-3));
    }
    SECTION("velocity shifts double the single-sector magnitudes consistently") {
        const double nr = velocity_shift(linear_yz(20), kin, NonreciprocalMirror{-1}, {}, 1e-4, pc);
        const double ch = velocity_shift(circular_x(20), kin,
                                         ChiralMirror{Handedness::Left}, {}, 1e-4, pc);
        REQUIRE_THAT(ch, WithinRel(-2.0 * nr, 1e-12));
    }
}

TEST_CASE("velocity shift vanishes exactly for a conductor and for atoms at rest") {
    const AtomKinematics moving{1e-6, 300.0, 0.0};
    SECTION("conductor, static closed route") {
        const VelocityDetail d =
            velocity_shift_detail(linear_yz(20), moving, PerfectConductor{}, {}, 1e-4, pc);
        REQUIRE(d.value == 0.0);
        REQUIRE(d.scale > 0.0);
    }
    SECTION("conductor, finite transition frequency") {
        const VelocityDetail d = velocity_shift_detail(linear_yz(20, 1e15), moving,
                                                       PerfectConductor{}, {}, 1e-4, pc);
        REQUIRE(d.value == 0.0);
        REQUIRE(d.scale > 0.0);
    }
    SECTION("atom at rest") {
        const AtomKinematics still{1e-6, 0.0, 0.0};
        const VelocityDetail d = velocity_shift_detail(
            linear_yz(20), still, NonreciprocalMirror{-1}, {}, 1e-4, pc);
        REQUIRE(d.value == 0.0);
        REQUIRE(d.scale == 0.0);
    }
}

TEST_CASE("velocity shift is linear and odd in the velocity") {
    const MediumSpec m = NonreciprocalMirror{-1};
    const TransitionSpec t = linear_yz(20);
    const double v1 = velocity_shift(t, AtomKinematics{1e-6, 300.0, 0.0}, m, {}, 1e-4, pc);
    const double v2 = velocity_shift(t, AtomKinematics{1e-6, 600.0, 0.0}, m, {}, 1e-4, pc);
    const double vm = velocity_shift(t, AtomKinematics{1e-6, -300.0, 0.0}, m, {}, 1e-4, pc);
    REQUIRE(v1 != 0.0);
    REQUIRE(v2 == 2.0 * v1);
    REQUIRE(vm == -v1);

    // Odd under v -> -v also along the dispersive finite-frequency route.
    const MediumSpec ch = IsotropicChiral(2.0, 1.0, complex{0.3, 0.0});
    const TransitionSpec tc = circular_x(20, 1e15);
    const double z = 1.5e-7;
    const double fw = velocity_shift(tc, AtomKinematics{z, 300.0, 0.0}, ch, {}, 1e-4, pc);
    const double bw = velocity_shift(tc, AtomKinematics{z, -300.0, 0.0}, ch, {}, 1e-4, pc);
    REQUIRE(fw != 0.0);
    REQUIRE_THAT(bw, WithinRel(-fw, 1e-12));
}

TEST_CASE("sector integrals agree with an independent parameterization") {
    // Substitute t = k_perp (propagating) and kappa = |k_perp| (evanescent):
    //   W = int_0^k (k^2-t^2) r(k_par) e^{2itz} dt
    //       - i int_0^inf (k^2+kappa^2) r(k_par) e^{-2 kappa z} dkappa.
    const double w = 1e15, k = w / pc.c;
    const double z = 1.0 * pc.c / (2.0 * w); // x = 1
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;

    auto independent = [&](const MediumSpec& m, double sign) -> complex {
        auto cross_sum = [&](double k_par) -> complex {
            const ReflectionMatrix r = reflect(m, make_wave(w, k_par, m, pc), pc);
            return r.r_sp + sign * r.r_ps;
        };
        auto f_prop = [&](double t) -> complex {
            const double kp2 = k * k - t * t;
            return kp2 * cross_sum(std::sqrt(kp2)) * std::exp(complex{0.0, 2.0 * t * z});
        };
        const auto prop = integrate_finite(f_prop, 0.0, k, cfg);
        auto f_evan = [&](double kappa) -> complex {
            const double kp2 = k * k + kappa * kappa;
            return kp2 * cross_sum(std::sqrt(kp2)) * std::exp(-2.0 * kappa * z);
        };
        QuadratureConfig ecfg = cfg;
        ecfg.decay_scale = 1.0 / (2.0 * z);
        const auto evan = integrate_semiinfinite(f_evan, 0.0, ecfg);
        return prop.value + complex{0.0, -1.0} * evan.value;
    };

    SECTION("chiral medium: only the rotatory sector survives") {
        const MediumSpec ch = IsotropicChiral(2.0, 1.0, complex{0.3, 0.0});
        const detail::SectorIntegrals s = detail::sector_integrals(ch, z, w, cfg, pc);
        const complex want = independent(ch, -1.0);
        REQUIRE_THAT(std::abs(s.w_delta - want), WithinAbs(0.0, 1e-6 * std::abs(want)));
        REQUIRE(std::abs(s.w_sigma) <= 1e-12 * std::abs(s.w_delta));
    }
    SECTION("insulator: only the time-even sector survives") {
        const MediumSpec ti = TopologicalInsulator(2.0, 1.0, 0.22);
        const detail::SectorIntegrals s = detail::sector_integrals(ti, z, w, cfg, pc);
        const complex want = independent(ti, +1.0);
        REQUIRE_THAT(std::abs(s.w_sigma - want), WithinAbs(0.0, 1e-6 * std::abs(want)));
        REQUIRE(std::abs(s.w_delta) <= 1e-12 * std::abs(s.w_sigma));
    }
}

TEST_CASE("sector integrals reach the electrostatic limit at low frequency") {
    const MediumSpec ch = IsotropicChiral(2.0, 1.0, complex{0.3, 0.0});
    const double z = 1e-6;
    const double w = 1e-3 * pc.c / (2.0 * z); // x = 1e-3
    const detail::SectorIntegrals s = detail::sector_integrals(ch, z, w, {}, pc);
    const ReflectionMatrix rn = detail::nonretarded_reflection(ch, pc);
    const complex want = complex{0.0, -1.0} * (rn.r_sp - rn.r_ps) / (4.0 * z * z * z);
    REQUIRE_THAT(std::abs(s.w_delta - want), WithinAbs(0.0, 1e-2 * std::abs(want)));
}

TEST_CASE("finite-frequency velocity shift matches the constant-mirror closed form") {
    const double w = 1e15, v = 300.0;
    const double z = 3.0 * pc.c / (2.0 * w); // x = 3
    const double k = w / pc.c;
    const AtomKinematics kin{z, v, 0.0};
    const double pref = pc.mu0 * pc.c / (8.0 * kPi * pc.hbar);

    SECTION("nonreciprocal mirror drives the time-even sector") {
        const TransitionSpec t = linear_yz(20, w);
        const double got = velocity_shift(t, kin, NonreciprocalMirror{-1}, {}, 1e-4, pc);
        const double T = v * t.dipole.norm2() / 2.0;
        const double want = pref * (-T * (-2.0 * dkj_closed(k, z)).imag());
        REQUIRE_THAT(got, WithinRel(want, 1e-4));
    }
    SECTION("chiral mirror drives the rotatory sector") {
        const TransitionSpec t = circular_x(20, w);
        const double got =
            velocity_shift(t, kin, ChiralMirror{Handedness::Left}, {}, 1e-4, pc);
        const double R = -v * t.dipole.norm2() / 2.0;
        const complex rd = complex{0.0, -2.0}; // r_sp - r_ps for the left mirror
        const double want = pref * (-R * (rd * dkj_closed(k, z)).real() +
                                    3.0 * R * (rd * j_closed(k, z)).real());
        REQUIRE_THAT(got, WithinRel(want, 1e-4));
    }
}

TEST_CASE("nonresonant shift of a degenerate circular pair over a nonreciprocal "
          "mirror") {
    // For omega~ = 0 the whole nonresonant integral is the cross channel:
    // delta = |d|^2 / (16 pi^2 eps0 hbar z^3) for the circular-normal dipole.
    const double z = 1e-6;
    const TransitionSpec t = circular_z(20);
    const AtomKinematics kin{z, 0.0, 0.0};
    const auto d = nonresonant_shift_detail(t, kin, NonreciprocalMirror{-1}, {}, pc);
    const double want =
        t.dipole.norm2() / (16.0 * kPi * kPi * pc.eps0 * pc.hbar * z * z * z);
    REQUIRE_THAT(d.value, WithinRel(want, 1e-7));
    REQUIRE(d.error <= 1e-4 * std::abs(d.value));
    REQUIRE_THAT(d.value, WithinRel(5.836e7, 1e-3));
}

TEST_CASE("nonresonant shift approaches the electrostatic image value") {
    const double z = 1e-6;
    const double w = 1e-3 * pc.c / z; // omega z / c = 1e-3
    const TransitionSpec t = linear_yz(20, w);
    const AtomKinematics kin{z, 0.0, 0.0};
    const double got = nonresonant_shift(t, kin, PerfectConductor{}, {}, pc);
    const double d2 = t.dipole.norm2();
    // (|d_par|^2/2 + |d_z|^2) = (3/4)|d|^2 for the tilted linear dipole.
    const double want =
        0.75 * d2 / (32.0 * kPi * pc.eps0 * pc.hbar * z * z * z);
    REQUIRE_THAT(got, WithinRel(want, 2e-2));
}

TEST_CASE("resonant shift and decay rate against the closed mirror block") {
    const double w = 1e15;
    const double z = 1.0 * pc.c / (2.0 * w); // x = 1
    const TransitionSpec t = linear_yz(20, w);
    const AtomKinematics kin{z, 0.0, 0.0};
    const MediumSpec m = PerfectConductor{};

    const complex f = contract(t.dipole, green_closed(m, z, w, pc).value,
                               t.dipole.conj());
    const double pref = pc.mu0 / pc.hbar * w * w;
    REQUIRE_THAT(resonant_shift(t, kin, m, {}, pc), WithinRel(-pref * f.real(), 1e-7));
    REQUIRE_THAT(decay_rate(t, kin, m, {}, pc), WithinRel(2.0 * pref * f.imag(), 1e-7));
}

TEST_CASE("downward and degenerate transitions produce no resonant response") {
    const AtomKinematics kin{1e-6, 0.0, 0.0};
    const MediumSpec m = PerfectConductor{};
    REQUIRE(resonant_shift(circular_z(20, 0.0), kin, m, {}, pc) == 0.0);
    REQUIRE(resonant_shift(circular_z(20, -1e15), kin, m, {}, pc) == 0.0);
    REQUIRE(decay_rate(circular_z(20, 0.0), kin, m, {}, pc) == 0.0);
    REQUIRE(decay_rate(circular_z(20, -1e15), kin, m, {}, pc) == 0.0);
    // The velocity channel also gates on the sign of the frequency.
    const AtomKinematics moving{1e-6, 300.0, 0.0};
    const VelocityDetail d = velocity_shift_detail(
        linear_yz(20, -1e15), moving, NonreciprocalMirror{-1}, {}, 1e-4, pc);
    REQUIRE(d.value == 0.0);
    REQUIRE(d.scale == 0.0);
}

TEST_CASE("velocity channel rejects longitudinally coupled dipoles and bad steps") {
    const AtomKinematics kin{1e-6, 300.0, 0.0};
    const MediumSpec m = NonreciprocalMirror{-1};
    const TransitionSpec tilted{Complex3Vector{1e-30, 0.0, 1e-30}, 0.0, "tilted"};
    REQUIRE_THROWS_AS(velocity_shift(tilted, kin, m, {}, 1e-4, pc),
                      TransversalityViolation);
    REQUIRE_THROWS_AS(velocity_shift(linear_yz(20), kin, m, {}, 1e-8, pc), StepTooSmall);
    REQUIRE_THROWS_AS(velocity_shift(linear_yz(20), kin, m, {}, 5e-3, pc), StepTooSmall);
    // The same dipole is fine when the atom does not move.
    REQUIRE(velocity_shift(tilted, AtomKinematics{1e-6, 0.0, 0.0}, m, {}, 1e-4, pc) == 0.0);
}

TEST_CASE("fast motion sets the warning flag") {
    const AtomKinematics fast{1e-6, 0.01 * pc.c, 0.0};
    const VelocityDetail d = velocity_shift_detail(linear_yz(20), fast,
                                                   NonreciprocalMirror{-1}, {}, 1e-4, pc);
    REQUIRE(d.fast_motion_warning);
    const VelocityDetail slow = velocity_shift_detail(
        linear_yz(20), AtomKinematics{1e-6, 300.0, 0.0}, NonreciprocalMirror{-1}, {},
        1e-4, pc);
    REQUIRE_FALSE(slow.fast_motion_warning);
}

TEST_CASE("nonretarded reflection handles a magnetic insulator exactly") {
    const MediumSpec ti = TopologicalInsulator(2.0, 1.5, 0.22);
    const ReflectionMatrix rn = detail::nonretarded_reflection(ti, pc);
    const double w = 1e15;
    const ReflectionMatrix full = reflect(ti, make_wave(w, 1e4 * w / pc.c, ti, pc), pc);
    REQUIRE_THAT(std::abs(rn.r_ss - full.r_ss), WithinAbs(0.0, 1e-6 * std::abs(full.r_ss)));
    REQUIRE_THAT(std::abs(rn.r_sp - full.r_sp), WithinAbs(0.0, 1e-6 * std::abs(full.r_sp)));
    REQUIRE_THAT(std::abs(rn.r_pp - full.r_pp), WithinAbs(0.0, 1e-6 * std::abs(full.r_pp)));
}

TEST_CASE("material parity flips the matching shift channels") {
    SECTION("axion coupling: resonant shift of a linear dipole is even") {
        const double w = 1e15;
        const double z = 1.0 * pc.c / (2.0 * w);
        const AtomKinematics kin{z, 0.0, 0.0};
        const TransitionSpec t = linear_yz(20, w);
        const double p = resonant_shift(t, kin, TopologicalInsulator(2.0, 1.0, 0.22), {}, pc);
        const double n = resonant_shift(t, kin, TopologicalInsulator(2.0, 1.0, -0.22), {}, pc);
        REQUIRE(p == n);
        REQUIRE(p != 0.0);
    }
    SECTION("axion coupling: velocity shift is odd") {
        const AtomKinematics kin{1e-6, 300.0, 0.0};
        const TransitionSpec t = linear_yz(20);
        const double p = velocity_shift(t, kin, TopologicalInsulator(2.0, 1.0, 0.22), {}, 1e-4, pc);
        const double n = velocity_shift(t, kin, TopologicalInsulator(2.0, 1.0, -0.22), {}, 1e-4, pc);
        REQUIRE(p != 0.0);
        REQUIRE(p == -n);
    }
    SECTION("chirality: velocity shift is odd") {
        const AtomKinematics kin{1e-6, 300.0, 0.0};
        const TransitionSpec t = circular_x(20);
        const double p = velocity_shift(t, kin, IsotropicChiral(2.0, 1.0, complex{0.3, 0.0}),
                                        {}, 1e-4, pc);
        const double n = velocity_shift(t, kin, IsotropicChiral(2.0, 1.0, complex{-0.3, 0.0}),
                                        {}, 1e-4, pc);
        REQUIRE(p != 0.0);
        REQUIRE(p == -n);
    }
    SECTION("mirror handedness: velocity shift is odd") {
        const AtomKinematics kin{1e-6, 300.0, 0.0};
        const TransitionSpec t = circular_x(20);
        const double l = velocity_shift(t, kin, ChiralMirror{Handedness::Left}, {}, 1e-4, pc);
        const double r = velocity_shift(t, kin, ChiralMirror{Handedness::Right}, {}, 1e-4, pc);
        REQUIRE(l != 0.0);
        REQUIRE(l == -r);
    }
}

TEST_CASE("total shift aggregates every channel") {
    const double w = 1e15;
    const double z = 1.0 * pc.c / (2.0 * w);
    const AtomKinematics kin{z, 300.0, 0.0};
    const TransitionSpec t = linear_yz(20, w);
    const MediumSpec m = NonreciprocalMirror{-1};

    const ShiftBreakdown b = total_shift(t, kin, m, {}, 1e-4, pc);
    REQUIRE(b.total == b.resonant + b.nonresonant + b.velocity);
    REQUIRE(b.medium == "nonreciprocal(-)");
    REQUIRE(b.velocity != 0.0);
    REQUIRE(b.velocity_scale > 0.0);
    REQUIRE_THAT(b.resonant, WithinRel(resonant_shift(t, kin, m, {}, pc), 1e-9));
    REQUIRE_THAT(b.decay_rate, WithinRel(decay_rate(t, kin, m, {}, pc), 1e-9));

    const ShiftBreakdown two = aggregate_shifts({t, t}, kin, m, {}, 1e-4, pc);
    REQUIRE_THAT(two.total, WithinRel(2.0 * b.total, 1e-9));
    REQUIRE_THAT(two.decay_rate, WithinRel(2.0 * b.decay_rate, 1e-9));
    REQUIRE(two.velocity_scale == b.velocity_scale);
}

TEST_CASE("self-consistent frequency fixed point") {
    const double w0 = 1e15;
    const double z = 1e-7;
    const AtomKinematics kin{z, 0.0, 0.0};
    const TransitionSpec t = linear_yz(2, w0);
    const MediumSpec m = PerfectConductor{};
    const double ws = self_consistent_frequency(t, kin, m, {}, 20, 1e-10, 1e-4, pc);
    TransitionSpec dressed = t;
    dressed.omega_nk = ws;
    const double residual = w0 + total_shift(dressed, kin, m, {}, 1e-4, pc).total - ws;
    REQUIRE_THAT(residual, WithinAbs(0.0, 1e-8 * w0));
    REQUIRE(ws != w0); // the shift is tiny but nonzero
}
