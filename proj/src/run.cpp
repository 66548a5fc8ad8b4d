#include "bjj/run.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bjj/errors.hpp"

namespace bjj {

namespace {

using json = nlohmann::ordered_json;

void write_header(std::ostream& out, const RunConfig& config, std::string_view schema) {
    out << "# schema: " << schema << '/' << kSchemaVersion << '\n';
    out << "# version: " << kVersion << '\n';
    out << "# config_hash: " << config_hash(config) << '\n';
    std::istringstream lines(serialize_config(config));
    for (std::string line; std::getline(lines, line);) out << "# config: " << line << '\n';
}

std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out + '\n';
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

json config_json(const RunConfig& config) {
    json j = json::object();
    std::istringstream lines(serialize_config(config));
    for (std::string line; std::getline(lines, line);) {
        const auto eq = line.find(" = ");
        j[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return j;
}

std::vector<std::string> collect_warnings(const RunConfig& config) {
    std::vector<std::string> w;
    if (config.scheme == SchemeKind::local) return w;
    for (auto& s : config.global.params.warnings()) w.push_back(std::move(s));
    if (config.global.noise)
        for (auto& s : config.global.noise->warnings()) w.push_back(std::move(s));
    return w;
}

}  // namespace

std::string config_hash(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_config(config)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string global_csv(const RunConfig& config, const std::vector<GlobalRow>& rows, std::string_view schema) {
    std::ostringstream out;
    write_header(out, config, schema);
    out << join({"t", "mean_lx", "var_ly_plus", "var_ly_minus", "var_lz_plus", "var_lz_minus", "epr_l_value",
                 "epr_l_branch", "s_l", "product_np", "np_branch", "epsilon", "mean_jz_a", "mean_jz_b", "defined",
                 "se_mean_lx", "se_var_ly_plus", "se_var_ly_minus", "se_var_lz_plus", "se_var_lz_minus",
                 "se_epr_l_value", "se_s_l", "se_product_np", "se_epsilon"});
    for (const auto& row : rows) {
        const auto& r = row.report;
        const auto& e = row.errors;
        const auto f = format_double;
        out << join({f(row.t), f(r.mean_lx), f(r.var_ly_plus), f(r.var_ly_minus), f(r.var_lz_plus),
                     f(r.var_lz_minus), f(r.epr_l_value), row.defined ? std::string(to_string(r.branch)) : "",
                     f(r.s_l), f(r.product_np), row.defined ? std::string(to_string(r.np_branch)) : "",
                     f(r.epsilon), f(row.mean_jz_a), f(row.mean_jz_b), row.defined ? "1" : "0", f(e.mean_lx),
                     f(e.var_ly_plus), f(e.var_ly_minus), f(e.var_lz_plus), f(e.var_lz_minus), f(e.epr_l_value),
                     f(e.s_l), f(e.product_np), f(e.epsilon)});
    }
    return out.str();
}

std::string local_csv(const RunConfig& config, const std::vector<LocalRow>& rows) {
    std::ostringstream out;
    write_header(out, config, "bjj-local");
    out << join({"t", "mean_jx", "var_min", "var_max", "s_single", "var_n_plus", "var_phi_minus",
                 "phase_reference_lost"});
    for (const auto& r : rows) {
        const auto f = format_double;
        out << join({f(r.t), f(r.mean_jx), f(r.var_min), f(r.var_max), f(r.s_single), f(r.var_n_plus),
                     f(r.var_phi_minus), r.phase_reference_lost ? "1" : "0"});
    }
    return out.str();
}

std::string sweep_csv(const RunConfig& config, const SweepResult& result, const std::vector<std::string>& notes) {
    std::ostringstream out;
    write_header(out, config, "bjj-sweep");
    for (const auto& n : notes) out << "# " << n << '\n';
    out << join({"value", "objective", "time_of_optimum", "ideal", "status"});
    for (const auto& p : result.points) {
        std::string status = p.status;
        for (char& c : status)
            if (c == ',' || c == '\n') c = ';';
        out << join({format_double(p.value), format_double(p.objective), format_double(p.time_of_optimum),
                     format_double(p.ideal), status});
    }
    return out.str();
}

RunOutcome run(const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    const std::filesystem::path dir(config.output);
    std::filesystem::create_directories(dir);

    RunOutcome outcome;
    outcome.warnings = collect_warnings(config);
    json meta;
    meta["version"] = kVersion;
    meta["schema"] = kSchemaVersion;
    meta["scheme"] = to_string(config.scheme);
    meta["seed"] = config.seed;
    meta["threads"] = config.threads;
    meta["config_hash"] = config_hash(config);
    meta["config"] = config_json(config);

    auto emit = [&](const std::string& name, const std::string& text) {
        write_file(dir / name, text);
        outcome.files.push_back(dir / name);
    };

    switch (config.scheme) {
        case SchemeKind::global: {
            const auto result = run_global_scheme(config.global);
            emit("global.csv", global_csv(config, result.rows, "bjj-global"));
            if (config.global.uncoupled_reference)
                emit("uncoupled.csv", global_csv(config, result.uncoupled, "bjj-global-uncoupled"));
            const auto [best, when] = minimum_over_time(result.rows, Objective::epr_l);
            meta["min_epr_l_value"] = best;
            meta["time_of_min_epr_l_value"] = when;
            std::size_t undefined = 0;
            for (const auto& r : result.rows) undefined += r.defined ? 0 : 1;
            if (undefined) outcome.warnings.push_back(std::to_string(undefined) + " samples lost the phase reference");
            break;
        }
        case SchemeKind::local: {
            const auto rows = run_local_scheme(config.local);
            emit("local.csv", local_csv(config, rows));
            std::size_t best = 0;
            for (std::size_t i = 1; i < rows.size(); ++i)
                if (rows[i].s_single > rows[best].s_single) best = i;
            meta["max_s_single"] = rows[best].s_single;
            meta["time_of_max_s_single"] = rows[best].t;
            break;
        }
        case SchemeKind::sweep: {
            const auto spec = config.sweep_spec();
            const auto result = run_sweep(spec);
            std::vector<std::string> notes;
            if (result.argmin) {
                const auto& p = result.points[*result.argmin];
                meta["argmin"] = {{"value", p.value}, {"objective", p.objective}};
                notes.push_back("argmin: " + format_double(p.value) + " objective " + format_double(p.objective));
                if (config.sweep.refine) {
                    try {
                        const auto opt = refine_optimum(spec, bracket_from(spec, result));
                        meta["refined_optimum"] = {
                            {"value", opt.x}, {"objective", opt.objective}, {"evaluations", opt.evaluations}};
                        notes.push_back("refined_optimum: " + format_double(opt.x) + " objective " +
                                        format_double(opt.objective));
                    } catch (const InvalidParameter& e) {
                        outcome.warnings.push_back(std::string("refinement skipped: ") + e.what());
                    }
                }
            }
            for (const auto& p : result.points)
                if (p.status != "ok")
                    outcome.warnings.push_back("point " + format_double(p.value) + " failed: " + p.status);
            emit("sweep_summary.csv", sweep_csv(config, result, notes));
            if (config.sweep.per_point_csv) {
                for (std::size_t i = 0; i < result.points.size(); ++i) {
                    char name[32];
                    std::snprintf(name, sizeof name, "point_%03zu.csv", i);
                    emit(name, global_csv(config, result.points[i].rows, "bjj-global"));
                }
            }
            break;
        }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    meta["wall_time_s"] = wall;
    json files = json::array();
    for (const auto& f : outcome.files) files.push_back(f.filename().string());
    files.push_back("metadata.json");
    meta["files"] = files;
    meta["warnings"] = outcome.warnings;
    outcome.metadata_json = meta.dump(2) + "\n";
    write_file(dir / "metadata.json", outcome.metadata_json);
    outcome.files.push_back(dir / "metadata.json");
    return outcome;
}

std::string error_json(std::string_view kind, const std::vector<std::string>& messages) {
    json j;
    j["status"] = "error";
    j["kind"] = kind;
    j["messages"] = messages;
    return j.dump() + "\n";
}

}  // namespace bjj
