#include "bjj/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "bjj/errors.hpp"

namespace bjj {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> to_double(std::string_view s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

template <class Int>
std::optional<Int> to_integer(std::string_view s) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

/// Key/value store that records every type error and tracks which keys were read.
class Reader {
public:
    std::map<std::string, std::string, std::less<>> values;
    std::map<std::string, int, std::less<>> lines;
    std::vector<std::string> errors;

    bool has(std::string_view key) const { return values.find(key) != values.end(); }

    bool has_section(std::string_view prefix) const {
        return std::any_of(values.begin(), values.end(),
                           [&](const auto& kv) { return std::string_view(kv.first).substr(0, prefix.size()) == prefix; });
    }

    std::optional<std::string> first_key(std::string_view prefix) const {
        for (const auto& [k, v] : values)
            if (std::string_view(k).substr(0, prefix.size()) == prefix) return k;
        return std::nullopt;
    }

    std::optional<double> number(std::string_view key) {
        const auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        const auto v = to_double(it->second);
        if (!v || !std::isfinite(*v)) type_error(key, "a finite number");
        return v && std::isfinite(*v) ? v : std::nullopt;
    }

    template <class Int>
    std::optional<Int> integer(std::string_view key, const char* what) {
        const auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        const auto v = to_integer<Int>(it->second);
        if (!v) type_error(key, what);
        return v;
    }

    std::optional<bool> boolean(std::string_view key) {
        const auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        if (it->second == "true") return true;
        if (it->second == "false") return false;
        type_error(key, "true or false");
        return std::nullopt;
    }

    std::optional<std::string> string(std::string_view key) {
        const auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        return it->second;
    }

    std::optional<std::vector<double>> number_list(std::string_view key) {
        const auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        std::vector<double> out;
        for (auto item : split(it->second, ',')) {
            const auto v = to_double(item);
            if (!v || !std::isfinite(*v)) {
                type_error(key, "a comma-separated list of finite numbers");
                return std::nullopt;
            }
            out.push_back(*v);
        }
        return out;
    }

    std::optional<std::vector<std::pair<double, double>>> knot_list(std::string_view key) {
        const auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        std::vector<std::pair<double, double>> out;
        for (auto item : split(it->second, ',')) {
            const auto parts = split(item, ':');
            const auto t = parts.size() == 2 ? to_double(parts[0]) : std::nullopt;
            const auto j = parts.size() == 2 ? to_double(parts[1]) : std::nullopt;
            if (!t || !j) {
                type_error(key, "a comma-separated list of t:J pairs");
                return std::nullopt;
            }
            out.emplace_back(*t, *j);
        }
        return out;
    }

    void missing(std::string_view key) { errors.push_back("missing required key '" + std::string(key) + "'"); }

    void invalid(std::string_view key, const std::string& why) {
        errors.push_back(where(key) + "invalid value for '" + std::string(key) + "': " + why);
    }

private:
    std::string where(std::string_view key) const {
        const auto it = lines.find(key);
        return it == lines.end() ? std::string() : "line " + std::to_string(it->second) + ": ";
    }

    void type_error(std::string_view key, const char* expected) {
        errors.push_back(where(key) + "type mismatch for '" + std::string(key) + "': expected " + expected +
                         ", got '" + values.find(key)->second + "'");
    }
};

const std::set<std::string, std::less<>>& known_keys() {
    static const std::set<std::string, std::less<>> keys{
        "scheme",
        "run.output",
        "run.seed",
        "run.sample_stride",
        "run.threads",
        "model.n_atoms",
        "model.n_atoms_a",
        "model.n_atoms_b",
        "model.tunneling_j",
        "model.ec_all",
        "model.ec_aa",
        "model.ec_bb",
        "model.ec_ab",
        "ramp.kind",
        "ramp.j_initial",
        "ramp.duration",
        "ramp.knots",
        "evolution.dt",
        "evolution.t_max",
        "initial.theta_a",
        "initial.phi_a",
        "initial.theta_b",
        "initial.phi_b",
        "noise.xi",
        "noise.diffusion_rate",
        "noise.trajectories",
        "global.uncoupled_reference",
        "local.n_atoms",
        "local.chi",
        "local.t_hold",
        "local.scan_points",
        "sweep.axis",
        "sweep.grid",
        "sweep.objective",
        "sweep.per_point_csv",
        "sweep.refine",
    };
    return keys;
}

std::optional<SchemeKind> scheme_from_string(std::string_view s) {
    if (s == "global") return SchemeKind::global;
    if (s == "local") return SchemeKind::local;
    if (s == "sweep") return SchemeKind::sweep;
    return std::nullopt;
}

std::optional<SchemeKind> resolve_scheme(Reader& r) {
    struct Section {
        SchemeKind kind;
        const char* prefix;
    };
    const Section sections[] = {{SchemeKind::global, "global."}, {SchemeKind::local, "local."},
                                {SchemeKind::sweep, "sweep."}};
    std::vector<std::pair<SchemeKind, std::string>> present;
    for (const auto& s : sections)
        if (auto k = r.first_key(s.prefix)) present.emplace_back(s.kind, *k);
    if (present.size() > 1) {
        std::string msg = "conflicting scheme sections: ";
        for (std::size_t i = 0; i < present.size(); ++i) msg += (i ? " and '" : "'") + present[i].second + "'";
        r.errors.push_back(msg);
        return std::nullopt;
    }
    std::optional<SchemeKind> declared;
    if (auto s = r.string("scheme")) {
        declared = scheme_from_string(*s);
        if (!declared) {
            r.invalid("scheme", "expected global, local or sweep");
            return std::nullopt;
        }
    }
    if (declared && !present.empty() && present.front().first != *declared) {
        r.errors.push_back("conflicting scheme sections: 'scheme = " + std::string(to_string(*declared)) +
                           "' and '" + present.front().second + "'");
        return std::nullopt;
    }
    if (declared) return declared;
    if (!present.empty()) return present.front().first;
    r.missing("scheme");
    return std::nullopt;
}

void read_model(Reader& r, ModelParams& p) {
    const auto n = r.integer<int>("model.n_atoms", "an integer");
    const auto na = r.integer<int>("model.n_atoms_a", "an integer");
    const auto nb = r.integer<int>("model.n_atoms_b", "an integer");
    if (n && (na || nb)) r.errors.push_back("'model.n_atoms' conflicts with 'model.n_atoms_a'/'model.n_atoms_b'");
    if (n) p.n_atoms_a = p.n_atoms_b = *n;
    if (na) p.n_atoms_a = *na;
    if (nb) p.n_atoms_b = *nb;
    if (!n && !(na && nb) && !r.has("model.n_atoms") && !(r.has("model.n_atoms_a") && r.has("model.n_atoms_b")))
        r.missing("model.n_atoms");

    if (auto j = r.number("model.tunneling_j")) p.tunneling_j = *j;
    else if (!r.has("model.tunneling_j")) r.missing("model.tunneling_j");

    const auto all = r.number("model.ec_all");
    if (all && (r.has("model.ec_aa") || r.has("model.ec_bb") || r.has("model.ec_ab")))
        r.errors.push_back("'model.ec_all' conflicts with 'model.ec_aa'/'model.ec_bb'/'model.ec_ab'");
    if (all) p.ec_aa = p.ec_bb = p.ec_ab = *all;
    if (auto v = r.number("model.ec_aa")) p.ec_aa = *v;
    if (auto v = r.number("model.ec_bb")) p.ec_bb = *v;
    if (auto v = r.number("model.ec_ab")) p.ec_ab = *v;
}

void read_global(Reader& r, GlobalSchemeConfig& g) {
    read_model(r, g.params);
    if (auto k = r.string("ramp.kind")) {
        if (auto kind = ramp_kind_from_string(*k)) g.ramp.kind = *kind;
        else r.invalid("ramp.kind", "expected sudden, linear or piecewise");
    }
    if (auto v = r.number("ramp.j_initial")) g.ramp.j_initial = *v;
    if (auto v = r.number("ramp.duration")) g.ramp.duration = *v;
    if (auto v = r.knot_list("ramp.knots")) g.ramp.knots = *v;
    if (g.ramp.kind == RampKind::linear && !r.has("ramp.duration")) r.missing("ramp.duration");
    if (g.ramp.kind == RampKind::piecewise && !r.has("ramp.knots")) r.missing("ramp.knots");
    if (g.ramp.kind != RampKind::linear)
        for (const char* key : {"ramp.j_initial", "ramp.duration"})
            if (r.has(key)) r.errors.push_back("'" + std::string(key) + "' only applies to linear ramps");
    if (g.ramp.kind != RampKind::piecewise && r.has("ramp.knots"))
        r.errors.push_back("'ramp.knots' only applies to piecewise ramps");

    if (auto v = r.number("evolution.dt")) g.dt = *v;
    if (auto v = r.number("evolution.t_max")) g.t_max = *v;
    else if (!r.has("evolution.t_max")) r.missing("evolution.t_max");

    if (auto v = r.number("initial.theta_a")) g.initial.theta_a = *v;
    if (auto v = r.number("initial.phi_a")) g.initial.phi_a = *v;
    if (auto v = r.number("initial.theta_b")) g.initial.theta_b = *v;
    if (auto v = r.number("initial.phi_b")) g.initial.phi_b = *v;

    if (r.has_section("noise.")) {
        NoiseModel noise;
        if (auto v = r.number("noise.xi")) noise.xi = *v;
        if (auto v = r.number("noise.diffusion_rate")) noise.diffusion_rate = *v;
        else if (!r.has("noise.diffusion_rate")) r.missing("noise.diffusion_rate");
        if (auto v = r.integer<int>("noise.trajectories", "an integer")) noise.n_trajectories = *v;
        else if (!r.has("noise.trajectories")) r.missing("noise.trajectories");
        g.noise = noise;
    }
    if (auto v = r.boolean("global.uncoupled_reference")) g.uncoupled_reference = *v;
}

void read_local(Reader& r, LocalSchemeConfig& l) {
    if (auto v = r.integer<int>("local.n_atoms", "an integer")) l.n_atoms = *v;
    else if (!r.has("local.n_atoms")) r.missing("local.n_atoms");
    if (auto v = r.number("local.chi")) l.chi = *v;
    else if (!r.has("local.chi")) r.missing("local.chi");
    if (auto v = r.number("local.t_hold")) l.t_hold = *v;
    else if (!r.has("local.t_hold")) r.missing("local.t_hold");
    if (auto v = r.integer<std::size_t>("local.scan_points", "a non-negative integer")) l.scan_points = *v;
    for (const char* prefix : {"model.", "ramp.", "evolution.", "initial.", "noise."})
        if (auto k = r.first_key(prefix)) r.errors.push_back("'" + *k + "' is not used by the local scheme");
}

void read_sweep(Reader& r, SweepSettings& s) {
    if (auto a = r.string("sweep.axis")) {
        if (auto axis = sweep_axis_from_string(*a)) s.axis = *axis;
        else r.invalid("sweep.axis", "unknown axis '" + *a + "'");
    } else {
        r.missing("sweep.axis");
    }
    if (auto g = r.number_list("sweep.grid")) s.grid = *g;
    else if (!r.has("sweep.grid")) r.missing("sweep.grid");
    if (auto o = r.string("sweep.objective")) {
        if (auto obj = objective_from_string(*o)) s.objective = *obj;
        else r.invalid("sweep.objective", "expected epr_l or epsilon");
    }
    if (auto v = r.boolean("sweep.per_point_csv")) s.per_point_csv = *v;
    if (auto v = r.boolean("sweep.refine")) s.refine = *v;
}

}  // namespace

std::string_view to_string(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::global: return "global";
        case SchemeKind::local: return "local";
        case SchemeKind::sweep: return "sweep";
    }
    return "unknown";
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec spec;
    spec.axis = sweep.axis;
    spec.grid = sweep.grid;
    spec.base = global;
    spec.objective = sweep.objective;
    spec.keep_rows = sweep.per_point_csv;
    return spec;
}

void RunConfig::set_seed(std::uint64_t value) {
    seed = value;
    if (global.noise) global.noise->master_seed = value;
}

void RunConfig::set_threads(int value) {
    threads = value;
    global.threads = value;
}

RunConfig parse_config(std::string_view text) {
    Reader r;
    int line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        const auto hash = raw.find('#');
        const auto line = trim(raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            r.errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!known_keys().count(key)) {
            r.errors.push_back("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            continue;
        }
        if (r.has(key)) {
            r.errors.push_back("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
            continue;
        }
        if (value.empty()) {
            r.errors.push_back("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
            continue;
        }
        r.values.emplace(key, value);
        r.lines.emplace(key, line_no);
    }

    RunConfig cfg;
    const auto scheme = resolve_scheme(r);
    if (auto v = r.string("run.output")) cfg.output = *v;
    if (auto v = r.integer<std::uint64_t>("run.seed", "an unsigned 64-bit integer")) cfg.seed = *v;
    if (auto v = r.integer<std::size_t>("run.sample_stride", "a positive integer")) cfg.sample_stride = *v;
    if (auto v = r.integer<int>("run.threads", "a positive integer")) cfg.threads = *v;
    if (cfg.sample_stride == 0) r.invalid("run.sample_stride", "must be >= 1");
    if (cfg.threads < 1) r.invalid("run.threads", "must be >= 1");

    if (scheme) {
        cfg.scheme = *scheme;
        if (*scheme == SchemeKind::local) {
            read_local(r, cfg.local);
        } else {
            read_global(r, cfg.global);
            if (*scheme == SchemeKind::sweep) read_sweep(r, cfg.sweep);
        }
    }
    cfg.global.sample_stride = cfg.sample_stride;
    cfg.set_threads(cfg.threads);
    cfg.set_seed(cfg.seed);

    // semantic validation only once the text itself is well formed
    if (r.errors.empty() && scheme) {
        try {
            if (*scheme == SchemeKind::local) {
                cfg.local.validate();
            } else if (*scheme == SchemeKind::global) {
                cfg.global.validate();
                if (!cfg.global.dt) cfg.global.dt = cfg.global.resolved_dt();
                (void)cfg.global.grid();
            } else {
                cfg.sweep_spec().validate();
            }
        } catch (const std::invalid_argument& e) {
            r.errors.emplace_back(e.what());
        }
    }
    if (!r.errors.empty()) throw ConfigError(r.errors);
    return cfg;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    auto put = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    auto num = [&](std::string_view key, double v) { put(key, format_double(v)); };

    put("scheme", std::string(to_string(c.scheme)));
    put("run.output", c.output);
    put("run.seed", std::to_string(c.seed));
    put("run.sample_stride", std::to_string(c.sample_stride));
    put("run.threads", std::to_string(c.threads));

    if (c.scheme == SchemeKind::local) {
        put("local.n_atoms", std::to_string(c.local.n_atoms));
        num("local.chi", c.local.chi);
        num("local.t_hold", c.local.t_hold);
        put("local.scan_points", std::to_string(c.local.scan_points));
        return out.str();
    }

    const auto& g = c.global;
    put("model.n_atoms_a", std::to_string(g.params.n_atoms_a));
    put("model.n_atoms_b", std::to_string(g.params.n_atoms_b));
    num("model.tunneling_j", g.params.tunneling_j);
    num("model.ec_aa", g.params.ec_aa);
    num("model.ec_bb", g.params.ec_bb);
    num("model.ec_ab", g.params.ec_ab);
    put("ramp.kind", std::string(to_string(g.ramp.kind)));
    if (g.ramp.kind == RampKind::linear) {
        if (!std::isnan(g.ramp.j_initial)) num("ramp.j_initial", g.ramp.j_initial);
        num("ramp.duration", g.ramp.duration);
    }
    if (g.ramp.kind == RampKind::piecewise) {
        std::string knots;
        for (std::size_t i = 0; i < g.ramp.knots.size(); ++i)
            knots += (i ? ", " : "") + format_double(g.ramp.knots[i].first) + ":" +
                     format_double(g.ramp.knots[i].second);
        put("ramp.knots", knots);
    }
    if (g.dt) num("evolution.dt", *g.dt);
    num("evolution.t_max", g.t_max);
    num("initial.theta_a", g.initial.theta_a);
    num("initial.phi_a", g.initial.phi_a);
    num("initial.theta_b", g.initial.theta_b);
    num("initial.phi_b", g.initial.phi_b);
    if (g.noise) {
        num("noise.xi", g.noise->xi);
        num("noise.diffusion_rate", g.noise->diffusion_rate);
        put("noise.trajectories", std::to_string(g.noise->n_trajectories));
    }
    if (c.scheme == SchemeKind::global) put("global.uncoupled_reference", g.uncoupled_reference ? "true" : "false");
    if (c.scheme == SchemeKind::sweep) {
        put("sweep.axis", std::string(to_string(c.sweep.axis)));
        std::string grid;
        for (std::size_t i = 0; i < c.sweep.grid.size(); ++i) grid += (i ? ", " : "") + format_double(c.sweep.grid[i]);
        put("sweep.grid", grid);
        put("sweep.objective", std::string(to_string(c.sweep.objective)));
        put("sweep.per_point_csv", c.sweep.per_point_csv ? "true" : "false");
        put("sweep.refine", c.sweep.refine ? "true" : "false");
    }
    return out.str();
}

}  // namespace bjj
