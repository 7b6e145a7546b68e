// ─────────────────────────────────────────────────────────────────────────────
//  config.hpp — flat dotted-key configuration for scenario runs.
//
//  Format: one `key = value` pair per line; '#' starts a comment; blank
//  lines ignored. Keys are lower-case dotted paths. Every diagnostic names
//  the offending key. Unknown keys are rejected.
//
//  Recognized keys
//    medium.kind           conductor | nonreciprocal | topological-insulator |
//                          chiral-mirror | chiral-medium
//    medium.sign           +1 | -1            (nonreciprocal, default -1)
//    medium.eps2[_im]      permittivity       (insulator / chiral medium)
//    medium.mu2[_im]       permeability       (default 1)
//    medium.delta          axion coupling     (insulator)
//    medium.kappa2[_im]    chirality          (chiral medium)
//    medium.handedness     left | right       (chiral mirror, default left)
//    transition.n_bar      principal quantum number (default 20)
//    transition.kind       circular | linear  (default circular)
//    transition.axis       "x,y,z" unit vector (default 0,0,1)
//    transition.omega_nk   transition frequency [rad/s] (default 0)
//    transition.dipole_re  "x,y,z" — explicit dipole overrides the n_bar route
//    transition.dipole_im  "x,y,z" (default 0,0,0)
//    kinematics.z_A        atom-surface distance [m] (default 1e-6)
//    kinematics.v_parallel in-plane speed along x [m/s] (default 300)
//    kinematics.v_y        in-plane speed along y [m/s] (default 0)
//    kinematics.z_min/z_max/points/spacing   distance sweep (spacing: log|linear)
//    numerics.rel_tol / abs_tol / max_subdivisions / h_rel
//    outputs.path          output file ("-" = stdout, default)
// ─────────────────────────────────────────────────────────────────────────────
#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "atom.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace cpshift {

/// Ordered key→value store with typed, key-naming accessors.
class ConfigMap {
  public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    [[nodiscard]] bool has(const std::string& key) const { return kv_.count(key) != 0; }

    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return kv_; }

    [[nodiscard]] std::string get_string(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end())
            throw ValidationError("missing required config key '" + key + "'");
        return it->second;
    }
    [[nodiscard]] std::string get_string_or(const std::string& key,
                                            const std::string& fallback) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }
    [[nodiscard]] double get_double(const std::string& key) const {
        return parse_double(key, get_string(key));
    }
    [[nodiscard]] double get_double_or(const std::string& key, double fallback) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : parse_double(key, it->second);
    }
    [[nodiscard]] int get_int(const std::string& key) const {
        return parse_int(key, get_string(key));
    }
    [[nodiscard]] int get_int_or(const std::string& key, int fallback) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : parse_int(key, it->second);
    }

    static ConfigMap parse_string(const std::string& text) {
        ConfigMap cfg;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty())
                continue;
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": expected 'key = value', got '" + trimmed + "'");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": empty key");
            cfg.set(key, value);
        }
        return cfg;
    }

    static ConfigMap parse_file(const std::string& path) {
        std::ifstream f(path);
        if (!f)
            throw ValidationError("cannot open config file '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return parse_string(ss.str());
    }

  private:
    static std::string trim(const std::string& s) {
        auto b = s.begin(), e = s.end();
        while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
        while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
        return {b, e};
    }
    static double parse_double(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            throw ValidationError("config key '" + key + "': cannot parse '" + v +
                                  "' as a number");
        }
    }
    static int parse_int(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const int x = std::stoi(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            throw ValidationError("config key '" + key + "': cannot parse '" + v +
                                  "' as an integer");
        }
    }

    std::map<std::string, std::string> kv_;
};

/// Distance sweep request.
struct SweepSpec {
    double z_min = 0.0;
    double z_max = 0.0;
    int points = 0;
    bool log_spacing = true;

    [[nodiscard]] std::vector<double> grid() const {
        std::vector<double> zs(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double f = (points == 1) ? 0.0
                                           : static_cast<double>(i) /
                                                 static_cast<double>(points - 1);
            zs[static_cast<std::size_t>(i)] =
                log_spacing ? z_min * std::pow(z_max / z_min, f)
                            : z_min + (z_max - z_min) * f;
        }
        return zs;
    }
};

/// Fully resolved scenario.
struct ScenarioConfig {
    MediumSpec medium = PerfectConductor{};
    TransitionSpec transition{Complex3Vector{1e-30, 0.0, 0.0}, 0.0, ""};
    AtomKinematics kinematics{1e-6, 0.0, 0.0};
    std::optional<SweepSpec> sweep;
    QuadratureConfig quadrature;
    double h_rel = 1e-4;
    std::string out_path = "-";
};

namespace detail {

inline std::array<double, 3> parse_triple(const ConfigMap& cfg, const std::string& key) {
    const std::string v = cfg.get_string(key);
    std::array<double, 3> out{};
    std::istringstream ss(v);
    std::string part;
    int i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= 3)
            throw ValidationError("config key '" + key + "': expected three components");
        try {
            std::size_t pos = 0;
            out[static_cast<std::size_t>(i)] = std::stod(part, &pos);
        } catch (const std::exception&) {
            throw ValidationError("config key '" + key + "': cannot parse '" + part +
                                  "' as a number");
        }
        ++i;
    }
    if (i != 3)
        throw ValidationError("config key '" + key + "': expected three components");
    return out;
}

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "medium.kind", "medium.sign", "medium.eps2", "medium.eps2_im", "medium.mu2",
        "medium.mu2_im", "medium.delta", "medium.kappa2", "medium.kappa2_im",
        "medium.handedness", "transition.n_bar", "transition.kind", "transition.axis",
        "transition.omega_nk", "transition.dipole_re", "transition.dipole_im",
        "kinematics.z_A", "kinematics.v_parallel", "kinematics.v_y", "kinematics.z_min",
        "kinematics.z_max", "kinematics.points", "kinematics.spacing",
        "numerics.rel_tol", "numerics.abs_tol", "numerics.max_subdivisions",
        "numerics.h_rel", "outputs.path"};
    return keys;
}

inline MediumSpec resolve_medium(const ConfigMap& cfg) {
    const std::string kind = cfg.get_string_or("medium.kind", "conductor");
    if (kind == "conductor")
        return PerfectConductor{};
    if (kind == "nonreciprocal")
        return NonreciprocalMirror{cfg.get_int_or("medium.sign", -1)};
    if (kind == "topological-insulator")
        return TopologicalInsulator{cfg.get_double("medium.eps2"),
                                    cfg.get_double_or("medium.mu2", 1.0),
                                    cfg.get_double("medium.delta")};
    if (kind == "chiral-mirror") {
        const std::string h = cfg.get_string_or("medium.handedness", "left");
        if (h == "left")
            return ChiralMirror{Handedness::Left};
        if (h == "right")
            return ChiralMirror{Handedness::Right};
        throw ValidationError("config key 'medium.handedness': expected left|right, got '" +
                              h + "'");
    }
    if (kind == "chiral-medium")
        return IsotropicChiral{
            complex{cfg.get_double("medium.eps2"), cfg.get_double_or("medium.eps2_im", 0.0)},
            complex{cfg.get_double_or("medium.mu2", 1.0),
                    cfg.get_double_or("medium.mu2_im", 0.0)},
            complex{cfg.get_double("medium.kappa2"),
                    cfg.get_double_or("medium.kappa2_im", 0.0)}};
    throw ValidationError("config key 'medium.kind': unknown medium '" + kind + "'");
}

inline TransitionSpec resolve_transition(const ConfigMap& cfg) {
    if (cfg.has("transition.dipole_re") || cfg.has("transition.dipole_im")) {
        const auto re = cfg.has("transition.dipole_re")
                            ? parse_triple(cfg, "transition.dipole_re")
                            : std::array<double, 3>{0.0, 0.0, 0.0};
        const auto im = cfg.has("transition.dipole_im")
                            ? parse_triple(cfg, "transition.dipole_im")
                            : std::array<double, 3>{0.0, 0.0, 0.0};
        return TransitionSpec{Complex3Vector{complex{re[0], im[0]}, complex{re[1], im[1]},
                                             complex{re[2], im[2]}},
                              cfg.get_double_or("transition.omega_nk", 0.0), "explicit"};
    }
    const int n_bar = cfg.get_int_or("transition.n_bar", 20);
    const std::string kind_s = cfg.get_string_or("transition.kind", "circular");
    TransitionKind kind;
    if (kind_s == "circular")
        kind = TransitionKind::M1_circular;
    else if (kind_s == "linear")
        kind = TransitionKind::M0_linear;
    else
        throw ValidationError(
            "config key 'transition.kind': expected circular|linear, got '" + kind_s + "'");
    std::array<double, 3> axis{0.0, 0.0, 1.0};
    if (cfg.has("transition.axis")) {
        axis = parse_triple(cfg, "transition.axis");
        const double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
        if (n <= 0.0)
            throw ValidationError("config key 'transition.axis': zero vector");
        for (auto& c : axis) c /= n;
    }
    TransitionSpec t = hydrogen_dipole(RydbergTransition{n_bar, kind, axis});
    t.omega_nk = cfg.get_double_or("transition.omega_nk", 0.0);
    return t;
}

} // namespace detail

/// Resolve a parsed config into a scenario; rejects unknown keys.
[[nodiscard]] inline ScenarioConfig resolve_scenario(const ConfigMap& cfg) {
    for (const auto& [key, value] : cfg.entries()) {
        (void)value;
        if (detail::known_keys().count(key) == 0)
            throw ValidationError("unknown config key '" + key + "'");
    }

    ScenarioConfig sc;
    sc.medium = detail::resolve_medium(cfg);
    sc.transition = detail::resolve_transition(cfg);

    const double v_par = cfg.get_double_or("kinematics.v_parallel", 300.0);
    const double v_y = cfg.get_double_or("kinematics.v_y", 0.0);

    const bool has_sweep = cfg.has("kinematics.z_min") || cfg.has("kinematics.z_max") ||
                           cfg.has("kinematics.points");
    if (has_sweep) {
        SweepSpec sweep;
        sweep.z_min = cfg.get_double("kinematics.z_min");
        sweep.z_max = cfg.get_double("kinematics.z_max");
        sweep.points = cfg.get_int("kinematics.points");
        const std::string spacing = cfg.get_string_or("kinematics.spacing", "log");
        if (spacing == "log")
            sweep.log_spacing = true;
        else if (spacing == "linear")
            sweep.log_spacing = false;
        else
            throw ValidationError(
                "config key 'kinematics.spacing': expected log|linear, got '" + spacing +
                "'");
        if (!(sweep.z_min > 0.0))
            throw ValidationError("config key 'kinematics.z_min': must be positive");
        if (!(sweep.z_min < sweep.z_max))
            throw ValidationError(
                "config key 'kinematics.z_max': must exceed kinematics.z_min");
        if (sweep.points < 2)
            throw ValidationError("config key 'kinematics.points': must be at least 2");
        sc.sweep = sweep;
        sc.kinematics = AtomKinematics{sweep.z_min, v_par, v_y};
    } else {
        const double z = cfg.get_double_or("kinematics.z_A", 1e-6);
        if (!(z > 0.0))
            throw ValidationError("config key 'kinematics.z_A': must be positive");
        sc.kinematics = AtomKinematics{z, v_par, v_y};
    }

    sc.quadrature.rel_tol = cfg.get_double_or("numerics.rel_tol", sc.quadrature.rel_tol);
    sc.quadrature.abs_tol = cfg.get_double_or("numerics.abs_tol", sc.quadrature.abs_tol);
    sc.quadrature.max_subdivisions =
        cfg.get_int_or("numerics.max_subdivisions", sc.quadrature.max_subdivisions);
    if (!(sc.quadrature.rel_tol > 0.0))
        throw ValidationError("config key 'numerics.rel_tol': must be positive");
    if (sc.quadrature.max_subdivisions < 1)
        throw ValidationError("config key 'numerics.max_subdivisions': must be positive");
    sc.h_rel = cfg.get_double_or("numerics.h_rel", 1e-4);
    if (!(sc.h_rel >= 1e-7 && sc.h_rel <= 1e-3))
        throw ValidationError("config key 'numerics.h_rel': must lie in [1e-7, 1e-3]");
    sc.out_path = cfg.get_string_or("outputs.path", "-");
    return sc;
}

/// Canonical echo of the effective configuration (for output headers).
[[nodiscard]] inline std::vector<std::string>
effective_config_lines(const ConfigMap& cfg) {
    std::vector<std::string> lines;
    lines.reserve(cfg.entries().size());
    for (const auto& [key, value] : cfg.entries())
        lines.push_back(key + " = " + value);
    return lines;
}

} // namespace cpshift
