// Reflection matrices: ideal mirrors, topological insulator, chiral medium.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cpshift/constants.hpp"
#include "cpshift/fresnel.hpp"

using namespace cpshift;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const PhysicalConstants& pc = si_constants();

ReflectionMatrix at(const MediumSpec& m, complex omega, double k_par) {
    return reflect(m, make_wave(omega, k_par, m, pc), pc);
}
} // namespace

TEST_CASE("principal square root keeps the upper half plane") {
    REQUIRE(branch_sqrt_im_pos(complex{4.0, 0.0}) == complex{2.0, 0.0});
    const complex r = branch_sqrt_im_pos(complex{-4.0, 0.0});
    REQUIRE_THAT(r.real(), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(r.imag(), WithinRel(2.0, 1e-15));
    // A decaying-branch candidate is flipped up.
    const complex s = branch_sqrt_im_pos(complex{0.0, -9.0});
    REQUIRE(s.imag() >= 0.0);
    REQUIRE_THAT((s * s).imag(), WithinRel(-9.0, 1e-12));
}

TEST_CASE("wave kinematics construction") {
    const MediumSpec ti = TopologicalInsulator(2.0, 1.0, 0.22);
    const double w = 1e15, k = w / pc.c;
    SECTION("propagating vacuum wave") {
        const WaveKinematics wk = make_wave(w, 0.5 * k, ti, pc);
        REQUIRE_THAT(wk.k_perp1.real(), WithinRel(k * std::sqrt(0.75), 1e-12));
        REQUIRE_THAT(wk.k_perp1.imag(), WithinAbs(0.0, 1e-18));
        // Transmitted branch: eps2*mu2 = 2.
        REQUIRE_THAT(wk.k_perp2.real(), WithinRel(k * std::sqrt(1.75), 1e-12));
    }
    SECTION("evanescent vacuum wave has decaying normal wavenumber") {
        const WaveKinematics wk = make_wave(w, 2.0 * k, ti, pc);
        REQUIRE_THAT(wk.k_perp1.real(), WithinAbs(0.0, 1e-6));
        REQUIRE(wk.k_perp1.imag() > 0.0);
    }
    SECTION("negative in-plane wavenumber is rejected") {
        REQUIRE_THROWS_AS(make_wave(w, -1.0, ti, pc), ValidationError);
    }
}

TEST_CASE("ideal mirror reflection constants") {
    const ReflectionMatrix c = reflection_ideal(PerfectConductor{});
    REQUIRE(c.r_pp == complex{1.0, 0.0});
    REQUIRE(c.r_ss == complex{-1.0, 0.0});
    REQUIRE(c.r_sp == complex{0.0, 0.0});
    REQUIRE(c.r_ps == complex{0.0, 0.0});

    const ReflectionMatrix n = reflection_ideal(NonreciprocalMirror{-1});
    REQUIRE(n.r_sp == complex{-1.0, 0.0});
    REQUIRE(n.r_ps == complex{-1.0, 0.0});
    REQUIRE(n.r_ss == complex{0.0, 0.0});
    REQUIRE(n.r_pp == complex{0.0, 0.0});

    const ReflectionMatrix l = reflection_ideal(ChiralMirror{Handedness::Left});
    REQUIRE(l.r_ps == complex{0.0, 1.0});
    REQUIRE(l.r_sp == complex{0.0, -1.0});
    const ReflectionMatrix r = reflection_ideal(ChiralMirror{Handedness::Right});
    REQUIRE(r.r_ps == complex{0.0, -1.0});
    REQUIRE(r.r_sp == complex{0.0, 1.0});

    REQUIRE_THROWS_AS(reflection_ideal(TopologicalInsulator(2.0, 1.0, 0.22)),
                      WrongMediumKind);
    REQUIRE_THROWS_AS(reflection_ideal(IsotropicChiral(2.0, 1.0, complex{0.3, 0.0})),
                      WrongMediumKind);
}

TEST_CASE("insulator reduces to the standard s and p coefficients without the "
          "axion term") {
    const MediumSpec ti = TopologicalInsulator(2.5, 1.0, 0.0);
    const double w = 1e15, k = w / pc.c;
    for (double frac : {0.0, 0.3, 0.8, 1.7, 5.0}) {
        const WaveKinematics wk = make_wave(w, frac * k, ti, pc);
        const ReflectionMatrix r = at(ti, w, frac * k);
        const complex rs = (wk.k_perp1 - wk.k_perp2) / (wk.k_perp1 + wk.k_perp2);
        const complex rp =
            (2.5 * wk.k_perp1 - wk.k_perp2) / (2.5 * wk.k_perp1 + wk.k_perp2);
        REQUIRE_THAT(std::abs(r.r_ss - rs), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(std::abs(r.r_pp - rp), WithinAbs(0.0, 1e-12));
        REQUIRE(r.r_sp == complex{0.0, 0.0});
    }
}

TEST_CASE("insulator retarded and nonretarded reference values") {
    const MediumSpec ti = TopologicalInsulator(2.0, 1.0, 0.22);
    SECTION("retarded limit (normal incidence)") {
        const ReflectionMatrix r = reflection_limit(ti, RegimeTag::Retarded, pc);
        REQUIRE_THAT(r.r_ss.real(), WithinRel(-0.1783956, 1e-5));
        REQUIRE_THAT(r.r_sp.real(), WithinRel(-0.0748703, 1e-5));
        REQUIRE_THAT(r.r_pp.real(), WithinRel(+0.1783956, 1e-5));
        REQUIRE(r.r_ps == r.r_sp);
        REQUIRE_THAT(r.r_ss.imag(), WithinAbs(0.0, 1e-15));
        // The full matrix at k_par = 0 agrees with the closed constants.
        const ReflectionMatrix f = at(ti, 1e15, 0.0);
        REQUIRE_THAT(std::abs(f.r_ss - r.r_ss), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(std::abs(f.r_sp - r.r_sp), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(std::abs(f.r_pp - r.r_pp), WithinAbs(0.0, 1e-12));
    }
    SECTION("nonretarded limit (electrostatic)") {
        const ReflectionMatrix r = reflection_limit(ti, RegimeTag::Nonretarded, pc);
        REQUIRE_THAT(r.r_ss.real(), WithinRel(-0.0080021, 1e-4));
        REQUIRE_THAT(r.r_sp.real(), WithinRel(-0.0727465, 1e-5));
        REQUIRE_THAT(r.r_pp.real(), WithinRel(+0.3386681, 1e-5));
        REQUIRE(r.r_ps == r.r_sp);
    }
    SECTION("full matrix converges onto the nonretarded constants") {
        const ReflectionMatrix lim = reflection_limit(ti, RegimeTag::Nonretarded, pc);
        const double w = 1e15;
        const ReflectionMatrix f = at(ti, w, 1e3 * w / pc.c);
        REQUIRE_THAT(std::abs(f.r_ss - lim.r_ss), WithinAbs(0.0, 0.005 * std::abs(lim.r_ss)));
        REQUIRE_THAT(std::abs(f.r_sp - lim.r_sp), WithinAbs(0.0, 0.005 * std::abs(lim.r_sp)));
        REQUIRE_THAT(std::abs(f.r_pp - lim.r_pp), WithinAbs(0.0, 0.005 * std::abs(lim.r_pp)));
    }
}

TEST_CASE("insulator cross reflection is odd in the axion coupling") {
    const MediumSpec tp = TopologicalInsulator(2.0, 1.0, 0.22);
    const MediumSpec tm = TopologicalInsulator(2.0, 1.0, -0.22);
    const double w = 1e15, k = w / pc.c;
    for (double frac : {0.2, 0.9, 3.0}) {
        const ReflectionMatrix rp = at(tp, w, frac * k);
        const ReflectionMatrix rm = at(tm, w, frac * k);
        REQUIRE(rp.r_sp == -rm.r_sp); // exact: numerator linear in delta
        REQUIRE(rp.r_ss == rm.r_ss);  // exact: delta enters squared
        REQUIRE(rp.r_pp == rm.r_pp);
    }
}

TEST_CASE("nearly perfect insulator approaches the conductor at normal incidence") {
    const MediumSpec ti = TopologicalInsulator(1e8, 1.0, 0.22);
    const ReflectionMatrix r = at(ti, 1e15, 0.0);
    REQUIRE_THAT(std::abs(r.r_pp - 1.0), WithinAbs(0.0, 1e-3));
    REQUIRE_THAT(std::abs(r.r_ss + 1.0), WithinAbs(0.0, 1e-3));
    REQUIRE_THAT(std::abs(r.r_sp), WithinAbs(0.0, 1e-3));
}

TEST_CASE("dielectric p reflection saturates at the electrostatic value") {
    const MediumSpec ti = TopologicalInsulator(2.0, 1.0, 0.0);
    const double w = 1e15;
    const ReflectionMatrix r = at(ti, w, 1e6 * w / pc.c);
    // (eps-1)/(eps+1) = 1/3
    REQUIRE_THAT(r.r_pp.real(), WithinRel(1.0 / 3.0, 1e-6));
    REQUIRE_THAT(r.r_pp.imag(), WithinAbs(0.0, 1e-12));
}

TEST_CASE("chiral medium reduces to the standard s and p coefficients without "
          "chirality") {
    const MediumSpec ch = IsotropicChiral(2.5, 1.3, complex{0.0, 0.0});
    const double w = 1e15, k = w / pc.c;
    for (double frac : {0.0, 0.4, 0.9, 2.0, 8.0}) {
        const WaveKinematics wk = make_wave(w, frac * k, ch, pc);
        const ReflectionMatrix r = at(ch, w, frac * k);
        // kappa2 = 0: both circular branches coincide.
        const complex kz2 = wk.k_perp2_L;
        const complex rs = (1.3 * wk.k_perp1 - kz2) / (1.3 * wk.k_perp1 + kz2);
        const complex rp = (2.5 * wk.k_perp1 - kz2) / (2.5 * wk.k_perp1 + kz2);
        REQUIRE_THAT(std::abs(r.r_ss - rs), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(std::abs(r.r_pp - rp), WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(std::abs(r.r_sp), WithinAbs(0.0, 1e-14));
    }
}

TEST_CASE("chiral medium retarded and nonretarded reference values") {
    const MediumSpec ch = IsotropicChiral(2.0, 1.0, complex{0.5, 0.0});
    SECTION("nonretarded limit") {
        const ReflectionMatrix r = reflection_limit(ch, RegimeTag::Nonretarded, pc);
        REQUIRE_THAT(r.r_sp.imag(), WithinRel(-0.17391304, 1e-6));
        REQUIRE_THAT(r.r_sp.real(), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(r.r_ss.real(), WithinRel(-0.04347826, 1e-6));
        REQUIRE_THAT(r.r_pp.real(), WithinRel(+0.30434783, 1e-6));
        REQUIRE(r.r_ps == -r.r_sp);
    }
    SECTION("retarded limit (normal incidence)") {
        const ReflectionMatrix r = reflection_limit(ch, RegimeTag::Retarded, pc);
        REQUIRE_THAT(r.r_ss.real(), WithinRel(-0.17157288, 1e-6));
        REQUIRE_THAT(r.r_pp.real(), WithinRel(+0.17157288, 1e-6));
        // Normal-incidence reflection off an isotropic chiral half-space
        // preserves polarization.
        REQUIRE_THAT(std::abs(r.r_sp), WithinAbs(0.0, 1e-12));
    }
    SECTION("full matrix converges onto the nonretarded constants") {
        const ReflectionMatrix lim = reflection_limit(ch, RegimeTag::Nonretarded, pc);
        const double w = 1e15;
        const ReflectionMatrix f = at(ch, w, 1e3 * w / pc.c);
        REQUIRE_THAT(std::abs(f.r_ss - lim.r_ss), WithinAbs(0.0, 0.005 * std::abs(lim.r_ss)));
        REQUIRE_THAT(std::abs(f.r_sp - lim.r_sp), WithinAbs(0.0, 0.005 * std::abs(lim.r_sp)));
        REQUIRE_THAT(std::abs(f.r_pp - lim.r_pp), WithinAbs(0.0, 0.005 * std::abs(lim.r_pp)));
    }
}

TEST_CASE("chiral cross reflection is odd in the chirality parameter") {
    const MediumSpec cp = IsotropicChiral(2.0, 1.0, complex{0.3, 0.0});
    const MediumSpec cm = IsotropicChiral(2.0, 1.0, complex{-0.3, 0.0});
    const double w = 1e15, k = w / pc.c;
    for (double frac : {0.3, 0.95, 4.0}) {
        const ReflectionMatrix rp = at(cp, w, frac * k);
        const ReflectionMatrix rm = at(cm, w, frac * k);
        REQUIRE_THAT(std::abs(rp.r_sp + rm.r_sp), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(rp.r_ss - rm.r_ss), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(rp.r_pp - rm.r_pp), WithinAbs(0.0, 1e-15));
        // Antisymmetric cross sector, exactly.
        REQUIRE(rp.r_ps == -rp.r_sp);
    }
}

TEST_CASE("chiral cross reflection is purely imaginary on the imaginary "
          "frequency axis") {
    const MediumSpec ch = IsotropicChiral(2.0, 1.0, complex{0.3, 0.0});
    const double xi = 1e15;
    for (double k_par : {1e5, 1e6, 1e7}) {
        const ReflectionMatrix r = at(ch, complex{0.0, xi}, k_par);
        REQUIRE_THAT(r.r_sp.real(), WithinAbs(0.0, 1e-15 + 1e-12 * std::abs(r.r_sp)));
        REQUIRE_THAT(r.r_ss.imag(), WithinAbs(0.0, 1e-15 + 1e-12 * std::abs(r.r_ss)));
        REQUIRE_THAT(r.r_pp.imag(), WithinAbs(0.0, 1e-15 + 1e-12 * std::abs(r.r_pp)));
    }
}

TEST_CASE("propagating reflections respect the passivity bound") {
    const MediumSpec ti = TopologicalInsulator(2.0, 1.0, 0.22);
    const MediumSpec ch = IsotropicChiral(2.0, 1.0, complex{0.3, 0.0});
    const double w = 1e15, k = w / pc.c;
    for (const MediumSpec& m : {ti, ch}) {
        for (double frac : {0.0, 0.2, 0.5, 0.8, 0.99}) {
            const ReflectionMatrix r = at(m, w, frac * k);
            const double s_in = std::norm(r.r_ss) + std::norm(r.r_ps);
            const double p_in = std::norm(r.r_pp) + std::norm(r.r_sp);
            REQUIRE(s_in <= 1.0 + 1e-9);
            REQUIRE(p_in <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("lossy chiral parameters stay finite on both frequency axes") {
    const MediumSpec ch =
        IsotropicChiral(complex{2.0, 0.3}, complex{1.0, 0.0}, complex{0.3, 0.05});
    const double w = 1e15, k = w / pc.c;
    for (double frac : {0.0, 0.5, 1.5, 20.0}) {
        const ReflectionMatrix r = at(ch, w, frac * k);
        for (complex v : {r.r_ss, r.r_sp, r.r_ps, r.r_pp}) {
            REQUIRE(std::isfinite(v.real()));
            REQUIRE(std::isfinite(v.imag()));
            REQUIRE(std::abs(v) < 10.0);
        }
        const ReflectionMatrix ri = at(ch, complex{0.0, w}, frac * k);
        REQUIRE(std::isfinite(std::abs(ri.r_sp)));
    }
}

TEST_CASE("gain-type chirality hits the degenerate normal-incidence denominator") {
    // Complex kappa2 against lossless eps2/mu2 describes amplification; one
    // circular branch flips and the normal-incidence denominator vanishes.
    const MediumSpec gain =
        IsotropicChiral(complex{2.0, 0.0}, complex{1.0, 0.0}, complex{0.3, 0.3});
    REQUIRE_THROWS_AS(at(gain, 1e15, 0.0), DegenerateDenominator);
}

TEST_CASE("regime limits reject unsupported requests") {
    const MediumSpec ti = TopologicalInsulator(2.0, 1.0, 0.22);
    REQUIRE_THROWS_AS(reflection_limit(ti, RegimeTag::Full, pc), ValidationError);
    const MediumSpec ti_mu = TopologicalInsulator(2.0, 1.5, 0.22);
    REQUIRE_THROWS_AS(reflection_limit(ti_mu, RegimeTag::Retarded, pc), ValidationError);
    // Ideal mirrors are k-independent in either regime.
    const ReflectionMatrix c = reflection_limit(PerfectConductor{}, RegimeTag::Retarded, pc);
    REQUIRE(c.r_pp == complex{1.0, 0.0});
}
