// ─────────────────────────────────────────────────────────────────────────────
//  cpshift — command-line front end.
//
//  Subcommands
//    table                 reference table of the benchmark Rydberg scenarios
//    sweep                 shift breakdown over a distance sweep (CSV)
//    greens                scattering Green-function components over distance
//    fresnel               reflection coefficients over k∥/k at fixed ω
//    compare-asymptotics   full numerics vs closed-form limits over distance
//
//  Exit codes: 0 success, 2 configuration/validation error (message names the
//  offending key), 3 quadrature non-convergence.
// ─────────────────────────────────────────────────────────────────────────────
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cpshift/asymptotics.hpp"
#include "cpshift/atom.hpp"
#include "cpshift/config.hpp"
#include "cpshift/csv.hpp"
#include "cpshift/shifts.hpp"

namespace {

using namespace cpshift;

// ── shared scenario flags, applied as overrides onto the config map ─────────
struct ScenarioFlags {
    std::string config_path;
    std::string medium_kind;
    std::string out_path;
    std::string handedness;
    std::string spacing;
    std::string kind;
    std::string axis;
    double velocity = 0.0, z = 0.0, tol = 0.0, omega = 0.0;
    double eps2 = 0.0, mu2 = 0.0, delta = 0.0, kappa2 = 0.0, kappa2_im = 0.0;
    double z_min = 0.0, z_max = 0.0, h_rel = 0.0;
    int nbar = 0, sign = 0, points = 0;

    CLI::Option *o_medium = nullptr, *o_out = nullptr, *o_velocity = nullptr,
                *o_z = nullptr, *o_tol = nullptr, *o_omega = nullptr,
                *o_eps2 = nullptr, *o_mu2 = nullptr, *o_delta = nullptr,
                *o_kappa2 = nullptr, *o_kappa2_im = nullptr, *o_zmin = nullptr,
                *o_zmax = nullptr, *o_points = nullptr, *o_nbar = nullptr,
                *o_sign = nullptr, *o_handedness = nullptr, *o_spacing = nullptr,
                *o_kind = nullptr, *o_axis = nullptr, *o_hrel = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (key = value lines)");
        o_medium = cmd->add_option("--medium", medium_kind,
                                   "medium kind (conductor|nonreciprocal|topological-"
                                   "insulator|chiral-mirror|chiral-medium)");
        o_out = cmd->add_option("--out", out_path, "output path ('-' = stdout)");
        o_velocity = cmd->add_option("--velocity", velocity, "in-plane speed [m/s]");
        o_z = cmd->add_option("--z", z, "atom-surface distance [m]");
        o_nbar = cmd->add_option("--nbar", nbar, "principal quantum number");
        o_tol = cmd->add_option("--tol", tol, "quadrature relative tolerance");
        o_omega = cmd->add_option("--omega", omega, "transition frequency [rad/s]");
        o_eps2 = cmd->add_option("--eps2", eps2, "medium permittivity");
        o_mu2 = cmd->add_option("--mu2", mu2, "medium permeability");
        o_delta = cmd->add_option("--delta", delta, "axion coupling");
        o_kappa2 = cmd->add_option("--kappa2", kappa2, "chirality parameter");
        o_kappa2_im = cmd->add_option("--kappa2-im", kappa2_im, "chirality, imag part");
        o_sign = cmd->add_option("--sign", sign, "nonreciprocal mirror sign (+1|-1)");
        o_handedness = cmd->add_option("--handedness", handedness,
                                       "chiral mirror handedness (left|right)");
        o_zmin = cmd->add_option("--z-min", z_min, "sweep start distance [m]");
        o_zmax = cmd->add_option("--z-max", z_max, "sweep end distance [m]");
        o_points = cmd->add_option("--points", points, "sweep point count");
        o_spacing = cmd->add_option("--spacing", spacing, "sweep spacing (log|linear)");
        o_kind = cmd->add_option("--kind", kind, "transition kind (circular|linear)");
        o_axis = cmd->add_option("--axis", axis, "quantization axis 'x,y,z'");
        o_hrel = cmd->add_option("--h-rel", h_rel, "frequency-derivative step fraction");
    }

    [[nodiscard]] ConfigMap config() const {
        ConfigMap cfg = config_path.empty() ? ConfigMap{}
                                            : ConfigMap::parse_file(config_path);
        auto set_d = [&cfg](CLI::Option* o, const char* key, double v) {
            if (o && o->count()) cfg.set(key, format_sci(v));
        };
        auto set_i = [&cfg](CLI::Option* o, const char* key, int v) {
            if (o && o->count()) cfg.set(key, std::to_string(v));
        };
        auto set_s = [&cfg](CLI::Option* o, const char* key, const std::string& v) {
            if (o && o->count()) cfg.set(key, v);
        };
        set_s(o_medium, "medium.kind", medium_kind);
        set_s(o_out, "outputs.path", out_path);
        set_d(o_velocity, "kinematics.v_parallel", velocity);
        set_d(o_z, "kinematics.z_A", z);
        set_i(o_nbar, "transition.n_bar", nbar);
        set_d(o_tol, "numerics.rel_tol", tol);
        set_d(o_omega, "transition.omega_nk", omega);
        set_d(o_eps2, "medium.eps2", eps2);
        set_d(o_mu2, "medium.mu2", mu2);
        set_d(o_delta, "medium.delta", delta);
        set_d(o_kappa2, "medium.kappa2", kappa2);
        set_d(o_kappa2_im, "medium.kappa2_im", kappa2_im);
        set_i(o_sign, "medium.sign", sign);
        set_s(o_handedness, "medium.handedness", handedness);
        set_d(o_zmin, "kinematics.z_min", z_min);
        set_d(o_zmax, "kinematics.z_max", z_max);
        set_i(o_points, "kinematics.points", points);
        set_s(o_spacing, "kinematics.spacing", spacing);
        set_s(o_kind, "transition.kind", kind);
        set_s(o_axis, "transition.axis", axis);
        set_d(o_hrel, "numerics.h_rel", h_rel);
        return cfg;
    }
};

void emit_config_header(CsvWriter& csv, const ConfigMap& cfg) {
    for (const auto& line : effective_config_lines(cfg)) csv.comment(line);
}

// ── table ────────────────────────────────────────────────────────────────────
int run_table(const ScenarioFlags& flags) {
    const ConfigMap cfg = flags.config();
    const double v = cfg.get_double_or("kinematics.v_parallel", 300.0);
    const double z = cfg.get_double_or("kinematics.z_A", 1e-6);
    const std::string out = cfg.get_string_or("outputs.path", "-");

    static constexpr int kNbar[4] = {20, 40, 60, 80};
    static constexpr double kRotRef[4] = {1.291e-51, 2.069e-50, 1.048e-49, 3.312e-49};
    static constexpr double kBareRef[4] = {2.918e7, 4.677e8, 2.369e9, 7.487e9};
    static constexpr double kNrRef[4] = {9.173e1, 1.470e3, 7.446e3, 2.354e4};
    static constexpr double kChRef[4] = {1.835e2, 2.941e3, 1.489e4, 4.707e4};

    CsvWriter csv;
    csv.comment("benchmark scenarios at z_A = " + format_sci(z) +
                " m, v = " + format_sci(v) + " m/s");
    emit_config_header(csv, cfg);
    csv.header({"n_bar", "rotatory_scale", "rotatory_scale_ref", "rotatory_scale_dev",
                "bare_shift", "bare_shift_ref", "bare_shift_dev",
                "nonreciprocal_velocity_shift", "nonreciprocal_velocity_ref",
                "nonreciprocal_velocity_dev", "chiral_velocity_shift",
                "chiral_velocity_ref", "chiral_velocity_dev"});

    const AtomKinematics kin{z, v, 0.0};
    const MediumSpec nr_mirror = NonreciprocalMirror{-1};
    const MediumSpec left_mirror = ChiralMirror{Handedness::Left};

    for (int i = 0; i < 4; ++i) {
        const int n = kNbar[i];
        const TransitionSpec circ_z = hydrogen_dipole(
            RydbergTransition{n, TransitionKind::M1_circular, {0.0, 0.0, 1.0}});
        const TransitionSpec lin_yz = hydrogen_dipole(
            RydbergTransition{n, TransitionKind::M0_linear,
                              {0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}});
        const TransitionSpec circ_x = hydrogen_dipole(
            RydbergTransition{n, TransitionKind::M1_circular, {1.0, 0.0, 0.0}});

        const double rot = 0.5 * v * circ_x.dipole.norm2();
        const double bare = std::abs(
            limit_shift(circ_z, kin, nr_mirror, RegimeTag::Nonretarded,
                        Contribution::Nonresonant)
                .value);
        const double nr_vel = std::abs(
            limit_shift(lin_yz, kin, nr_mirror, RegimeTag::Nonretarded,
                        Contribution::Velocity)
                .value);
        const double ch_vel = std::abs(
            limit_shift(circ_x, kin, left_mirror, RegimeTag::Nonretarded,
                        Contribution::Velocity)
                .value);

        auto dev = [](double val, double ref) { return std::abs(val - ref) / ref; };
        csv.row({std::to_string(n), format_sci(rot), format_sci(kRotRef[i]),
                 format_sci(dev(rot, kRotRef[i])), format_sci(bare),
                 format_sci(kBareRef[i]), format_sci(dev(bare, kBareRef[i])),
                 format_sci(nr_vel), format_sci(kNrRef[i]),
                 format_sci(dev(nr_vel, kNrRef[i])), format_sci(ch_vel),
                 format_sci(kChRef[i]), format_sci(dev(ch_vel, kChRef[i]))});
    }
    csv.write(out);
    return 0;
}

// ── sweep ────────────────────────────────────────────────────────────────────
struct SweepRow {
    double z = 0.0;
    ShiftBreakdown b;
    bool nonconverged = false;
};

template <typename Work>
void run_indexed_pool(std::size_t count, Work work) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(count, 1)));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

int run_sweep(const ScenarioFlags& flags) {
    const ConfigMap cfg = flags.config();
    const ScenarioConfig sc = resolve_scenario(cfg);
    const std::vector<double> zs =
        sc.sweep ? sc.sweep->grid() : std::vector<double>{sc.kinematics.z_A};

    std::vector<SweepRow> rows(zs.size());
    run_indexed_pool(zs.size(), [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.z = zs[i];
        const AtomKinematics kin{zs[i], sc.kinematics.v_x, sc.kinematics.v_y};
        try {
            row.b = total_shift(sc.transition, kin, sc.medium, sc.quadrature, sc.h_rel);
        } catch (const NonConvergence&) {
            row.nonconverged = true;
        }
    });

    CsvWriter csv;
    emit_config_header(csv, cfg);
    csv.header({"z_A", "resonant", "nonresonant", "velocity", "total", "decay_rate",
                "quad_err"});
    bool any_nonconverged = false;
    for (const auto& row : rows) {
        if (row.nonconverged) {
            any_nonconverged = true;
            csv.row({format_sci(row.z), "nan", "nan", "nan", "nan", "nan",
                     "NONCONVERGED"});
            continue;
        }
        const double qerr = row.b.quad_err_resonant + row.b.quad_err_nonresonant +
                            row.b.quad_err_velocity;
        csv.numeric_row({row.z, row.b.resonant, row.b.nonresonant, row.b.velocity,
                         row.b.total, row.b.decay_rate, qerr});
    }
    csv.write(sc.out_path);
    return any_nonconverged ? 3 : 0;
}

// ── greens ───────────────────────────────────────────────────────────────────
int run_greens(const ScenarioFlags& flags) {
    ConfigMap cfg = flags.config();
    if (!cfg.has("kinematics.z_min")) cfg.set("kinematics.z_min", "1.0e-8");
    if (!cfg.has("kinematics.z_max")) cfg.set("kinematics.z_max", "1.0e-5");
    if (!cfg.has("kinematics.points")) cfg.set("kinematics.points", "40");
    const ScenarioConfig sc = resolve_scenario(cfg);
    const double omega = cfg.get_double_or("transition.omega_nk", 1e15);
    if (!(omega > 0.0))
        throw ValidationError("config key 'transition.omega_nk': greens sweep needs "
                              "a positive frequency (set --omega)");
    const std::vector<double> zs = sc.sweep->grid();

    std::vector<GreensResult> res(zs.size());
    run_indexed_pool(zs.size(), [&](std::size_t i) {
        res[i] = green_numeric_detail(sc.medium, zs[i], complex{omega, 0.0},
                                      sc.quadrature);
    });

    CsvWriter csv;
    emit_config_header(csv, cfg);
    csv.header({"z_A", "re_g_xx", "im_g_xx", "re_g_zz", "im_g_zz", "re_g_xy",
                "im_g_xy", "quad_err"});
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const Mat3& g = res[i].block.value;
        csv.numeric_row({zs[i], g(0, 0).real(), g(0, 0).imag(), g(2, 2).real(),
                         g(2, 2).imag(), g(0, 1).real(), g(0, 1).imag(),
                         res[i].quad_error});
    }
    csv.write(sc.out_path);
    return 0;
}

// ── fresnel ──────────────────────────────────────────────────────────────────
int run_fresnel(const ScenarioFlags& flags) {
    const ConfigMap cfg = flags.config();
    const MediumSpec medium = detail::resolve_medium(cfg);
    const double omega = cfg.get_double_or("transition.omega_nk", 1e15);
    if (!(omega > 0.0))
        throw ValidationError("config key 'transition.omega_nk': fresnel sweep needs "
                              "a positive frequency (set --omega)");
    const int points = cfg.get_int_or("kinematics.points", 61);
    if (points < 2)
        throw ValidationError("config key 'kinematics.points': must be at least 2");
    const std::string out = cfg.get_string_or("outputs.path", "-");

    CsvWriter csv;
    emit_config_header(csv, cfg);
    csv.header({"k_par_over_k", "re_r_ss", "im_r_ss", "re_r_sp", "im_r_sp", "re_r_ps",
                "im_r_ps", "re_r_pp", "im_r_pp"});
    const double u_min = 1e-3, u_max = 1e3;
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(points - 1);
        const double u = u_min * std::pow(u_max / u_min, f);
        const double k_par = u * omega / si_constants().c;
        const ReflectionMatrix r = reflect(medium, make_wave(omega, k_par, medium));
        csv.numeric_row({u, r.r_ss.real(), r.r_ss.imag(), r.r_sp.real(), r.r_sp.imag(),
                         r.r_ps.real(), r.r_ps.imag(), r.r_pp.real(), r.r_pp.imag()});
    }
    csv.write(out);
    return 0;
}

// ── compare-asymptotics ──────────────────────────────────────────────────────
int run_compare(const ScenarioFlags& flags, const std::string& contribution,
                const std::string& regime_name) {
    ConfigMap cfg = flags.config();
    if (!cfg.has("transition.omega_nk")) cfg.set("transition.omega_nk", "1.0e15");
    if (!cfg.has("kinematics.z_min")) cfg.set("kinematics.z_min", "1.0e-8");
    if (!cfg.has("kinematics.z_max")) cfg.set("kinematics.z_max", "1.0e-5");
    if (!cfg.has("kinematics.points")) cfg.set("kinematics.points", "25");
    const ScenarioConfig sc = resolve_scenario(cfg);

    RegimeTag regime;
    if (regime_name == "retarded")
        regime = RegimeTag::Retarded;
    else if (regime_name == "nonretarded")
        regime = RegimeTag::Nonretarded;
    else if (regime_name == "full")
        regime = RegimeTag::Full;
    else
        throw ValidationError("--regime: expected retarded|nonretarded|full, got '" +
                              regime_name + "'");

    Contribution which = Contribution::Nonresonant;
    bool is_decay = false;
    if (contribution == "resonant")
        which = Contribution::Resonant;
    else if (contribution == "nonresonant")
        which = Contribution::Nonresonant;
    else if (contribution == "velocity")
        which = Contribution::Velocity;
    else if (contribution == "decay")
        is_decay = true;
    else
        throw ValidationError(
            "--contribution: expected resonant|nonresonant|velocity|decay, got '" +
            contribution + "'");

    const std::vector<double> zs = sc.sweep->grid();
    struct Row {
        double z = 0.0, numeric = 0.0, asym = 0.0, dev = 0.0;
        bool in_window = false;
    };
    std::vector<Row> rows(zs.size());

    run_indexed_pool(zs.size(), [&](std::size_t i) {
        Row& row = rows[i];
        row.z = zs[i];
        const AtomKinematics kin{zs[i], sc.kinematics.v_x, sc.kinematics.v_y};
        if (is_decay) {
            row.numeric = decay_rate(sc.transition, kin, sc.medium, sc.quadrature);
            if (regime == RegimeTag::Full) {
                row.asym = closed_reference_decay(sc.transition, kin, sc.medium);
                row.in_window = true;
            } else {
                const LimitValue lv = limit_decay_rate(sc.transition, kin, sc.medium, regime);
                row.asym = lv.value;
                row.in_window = lv.in_validity_window;
            }
        } else {
            switch (which) {
                case Contribution::Resonant:
                    row.numeric = resonant_shift(sc.transition, kin, sc.medium, sc.quadrature);
                    break;
                case Contribution::Nonresonant:
                    row.numeric = nonresonant_shift(sc.transition, kin, sc.medium, sc.quadrature);
                    break;
                case Contribution::Velocity:
                    row.numeric = velocity_shift(sc.transition, kin, sc.medium,
                                                 sc.quadrature, sc.h_rel);
                    break;
            }
            if (regime == RegimeTag::Full) {
                row.asym = closed_reference_shift(sc.transition, kin, sc.medium, which,
                                                  sc.quadrature);
                row.in_window = true;
            } else {
                const LimitValue lv =
                    limit_shift(sc.transition, kin, sc.medium, regime, which, sc.quadrature);
                row.asym = lv.value;
                row.in_window = lv.in_validity_window;
            }
        }
        const double denom = std::abs(row.asym) > 0.0 ? std::abs(row.asym)
                                                      : std::abs(row.numeric);
        row.dev = denom > 0.0 ? std::abs(row.numeric - row.asym) / denom : 0.0;
    });

    CsvWriter csv;
    emit_config_header(csv, cfg);
    csv.comment("contribution = " + contribution + ", regime = " + regime_name);
    csv.header({"z_A", "numeric", "asymptotic", "rel_dev"});
    double max_dev = 0.0;
    int n_window = 0;
    for (const auto& row : rows) {
        csv.numeric_row({row.z, row.numeric, row.asym, row.dev});
        if (row.in_window) {
            ++n_window;
            max_dev = std::max(max_dev, row.dev);
        }
    }
    csv.comment("max_rel_dev_in_window = " + format_sci(max_dev) + " over " +
                std::to_string(n_window) + " points");
    csv.write(sc.out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cpshift — frequency shifts and decay rates of a moving dipole "
                 "near planar media"};
    app.require_subcommand(1);

    auto* cmd_table = app.add_subcommand("table", "benchmark scenario table");
    ScenarioFlags table_flags;
    table_flags.attach(cmd_table);

    auto* cmd_sweep = app.add_subcommand("sweep", "shift breakdown over distance");
    ScenarioFlags sweep_flags;
    sweep_flags.attach(cmd_sweep);

    auto* cmd_greens = app.add_subcommand("greens", "Green-function components");
    ScenarioFlags greens_flags;
    greens_flags.attach(cmd_greens);

    auto* cmd_fresnel = app.add_subcommand("fresnel", "reflection coefficients");
    ScenarioFlags fresnel_flags;
    fresnel_flags.attach(cmd_fresnel);

    auto* cmd_compare =
        app.add_subcommand("compare-asymptotics", "numerics vs closed-form limits");
    ScenarioFlags compare_flags;
    compare_flags.attach(cmd_compare);
    std::string contribution = "nonresonant";
    std::string regime = "nonretarded";
    cmd_compare->add_option("--contribution", contribution,
                            "resonant|nonresonant|velocity|decay");
    cmd_compare->add_option("--regime", regime, "retarded|nonretarded|full");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_table->parsed()) return run_table(table_flags);
        if (cmd_sweep->parsed()) return run_sweep(sweep_flags);
        if (cmd_greens->parsed()) return run_greens(greens_flags);
        if (cmd_fresnel->parsed()) return run_fresnel(fresnel_flags);
        if (cmd_compare->parsed()) return run_compare(compare_flags, contribution, regime);
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
