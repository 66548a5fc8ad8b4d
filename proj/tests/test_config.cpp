#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bjj/config.hpp"
#include "bjj/errors.hpp"
#include "bjj/run.hpp"

using namespace bjj;

namespace {

const char* kGlobal = R"(
scheme = global
run.seed = 7
model.n_atoms = 4
model.tunneling_j = 1
model.ec_all = 0.1
evolution.dt = 0.01
evolution.t_max = 1   # short
run.sample_stride = 10
)";

std::vector<std::string> errors_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.messages();
    }
    return {};
}

bool mentions(const std::vector<std::string>& errors, const std::string& needle) {
    return std::any_of(errors.begin(), errors.end(),
                       [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("bjj_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("minimal global config") {
    const auto c = parse_config(kGlobal);
    CHECK(c.scheme == SchemeKind::global);
    CHECK(c.seed == 7);
    CHECK(c.global.params == ModelParams{4, 4, 1.0, 0.1, 0.1, 0.1});
    CHECK(c.global.dt == 0.01);
    CHECK(c.global.t_max == 1.0);
    CHECK(c.global.sample_stride == 10);
    CHECK_FALSE(c.global.noise.has_value());
    CHECK(c.global.ramp.kind == RampKind::sudden);
}

TEST_CASE("dt is resolved when omitted") {
    const auto c = parse_config("model.n_atoms = 4\nmodel.tunneling_j = 1\nevolution.t_max = 1\nscheme = global\n");
    REQUIRE(c.global.dt.has_value());
    CHECK(*c.global.dt > 0.0);
}

TEST_CASE("the scheme is inferred from a section") {
    const auto c = parse_config("local.n_atoms = 20\nlocal.chi = 0.1\nlocal.t_hold = 2\n");
    CHECK(c.scheme == SchemeKind::local);
    CHECK(c.local == LocalSchemeConfig{20, 0.1, 2.0, 101});
}

TEST_CASE("conflicts and errors are all reported") {
    auto e = errors_of("local.n_atoms = 20\nlocal.chi = 0.1\nlocal.t_hold = 2\nglobal.uncoupled_reference = true\n");
    CHECK(mentions(e, "conflicting scheme sections"));
    CHECK(mentions(e, "'global.uncoupled_reference'"));
    CHECK(mentions(e, "'local.chi'"));

    e = errors_of("scheme = global\nmodel.n_atoms = four\nmodel.bogus = 1\nmodel.tunneling_j = 1\n"
                  "model.tunneling_j = 2\nevolution.t_max = 1\nmodel.ec_all = 0.1\nmodel.ec_ab = 0.2\n");
    CHECK(mentions(e, "type mismatch for 'model.n_atoms'"));
    CHECK(mentions(e, "unknown key 'model.bogus'"));
    CHECK(mentions(e, "duplicate key 'model.tunneling_j'"));
    CHECK(mentions(e, "'model.ec_all' conflicts"));
    CHECK(e.size() >= 4);

    e = errors_of("scheme = global\nmodel.n_atoms = 4\n");
    CHECK(mentions(e, "missing required key 'model.tunneling_j'"));
    CHECK(mentions(e, "missing required key 'evolution.t_max'"));

    e = errors_of("scheme = global\nmodel.n_atoms = 4\nmodel.tunneling_j = 1\nevolution.t_max = 1\n"
                  "ramp.knots = 0:1\n");
    CHECK(mentions(e, "only applies to piecewise"));

    e = errors_of("scheme = local\nlocal.n_atoms = 10\nlocal.chi = 1\nlocal.t_hold = 1\nmodel.tunneling_j = 1\n");
    CHECK(mentions(e, "not used by the local scheme"));

    e = errors_of("scheme = global\nmodel.n_atoms = 4\nmodel.tunneling_j = -1\nevolution.t_max = 1\n");
    CHECK(e.size() == 1);

    e = errors_of("scheme = sweep\nmodel.n_atoms = 4\nmodel.tunneling_j = 1\nevolution.t_max = 1\n"
                  "sweep.axis = ec_all\nsweep.grid = 0.1, 0.3, 0.2\n");
    CHECK(mentions(e, "monotone"));

    e = errors_of("this line has no equals sign\n");
    CHECK(mentions(e, "line 1"));
}

TEST_CASE("canonical text round-trips") {
    const std::string texts[] = {
        kGlobal,
        "scheme = global\nmodel.n_atoms_a = 4\nmodel.n_atoms_b = 3\nmodel.tunneling_j = 0.5\nmodel.ec_aa = 0.1\n"
        "model.ec_bb = 0.2\nmodel.ec_ab = 0.05\nramp.kind = linear\nramp.duration = 2\nevolution.t_max = 3\n"
        "noise.xi = 0.05\nnoise.diffusion_rate = 0.002\nnoise.trajectories = 16\ninitial.phi_b = 0.3\n"
        "global.uncoupled_reference = true\nrun.threads = 2\n",
        "scheme = global\nmodel.n_atoms = 4\nmodel.tunneling_j = 1\nramp.kind = piecewise\n"
        "ramp.knots = 0:4, 1.5:2, 3:1\nevolution.t_max = 3\n",
        "local.n_atoms = 100\nlocal.chi = 0.01\nlocal.t_hold = 3\nlocal.scan_points = 7\n",
        "sweep.axis = ec_all\nsweep.grid = 0, 0.1, 0.3\nsweep.objective = epsilon\nsweep.refine = true\n"
        "model.n_atoms = 4\nmodel.tunneling_j = 1\nevolution.t_max = 2\n",
    };
    for (const auto& t : texts) {
        const auto c = parse_config(t);
        const auto text = serialize_config(c);
        const auto back = parse_config(text);
        CHECK(back == c);
        CHECK(serialize_config(back) == text);
    }
}

TEST_CASE("seed and thread overrides reach the nested settings") {
    auto c = parse_config(std::string(kGlobal) + "noise.diffusion_rate = 0.01\nnoise.trajectories = 2\n");
    CHECK(c.global.noise->master_seed == 7);
    c.set_seed(11);
    CHECK(c.global.noise->master_seed == 11);
    c.set_threads(3);
    CHECK(c.global.threads == 3);
}

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-10) == "-2.5e-10");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("global run writes csv and metadata deterministically") {
    auto c = parse_config(kGlobal);
    c.output = scratch_dir("global_a").string();
    const auto first = run(c);
    c.output = scratch_dir("global_b").string();
    const auto second = run(c);
    REQUIRE(first.files.size() == 2);
    CHECK(first.files[0].filename() == "global.csv");
    CHECK(first.files[1].filename() == "metadata.json");

    const auto a = slurp(first.files[0]);
    const auto b = slurp(second.files[0]);
    std::size_t data_rows = 0;
    std::istringstream lines(a);
    for (std::string line; std::getline(lines, line);)
        if (!line.empty() && line[0] != '#' && line[0] != 't') ++data_rows;
    CHECK(data_rows == c.global.grid().sample_steps().size());
    CHECK(data_rows == 11);
    // outputs differ only through run.output in the embedded config
    auto strip = [](std::string s) {
        std::string out;
        std::istringstream in(s);
        for (std::string line; std::getline(in, line);)
            if (line.find("run.output") == std::string::npos && line.find("config_hash") == std::string::npos)
                out += line + '\n';
        return out;
    };
    CHECK(strip(a) == strip(b));
    CHECK(a.find("# schema: bjj-global/1") == 0);
    CHECK(second.metadata_json.find("\"config_hash\": \"" + config_hash(c) + "\"") != std::string::npos);
}

TEST_CASE("local and sweep runs write their files") {
    auto local = parse_config("local.n_atoms = 10\nlocal.chi = 0.1\nlocal.t_hold = 1\nlocal.scan_points = 5\n");
    local.output = scratch_dir("local").string();
    const auto lo = run(local);
    CHECK(lo.files[0].filename() == "local.csv");
    CHECK(std::filesystem::exists(lo.files[1]));

    auto sweep = parse_config("sweep.axis = ec_all\nsweep.grid = 0, 0.2, 0.5\nsweep.per_point_csv = true\n"
                              "model.n_atoms = 3\nmodel.tunneling_j = 1\nevolution.t_max = 1\nevolution.dt = 0.01\n");
    sweep.output = scratch_dir("sweep").string();
    const auto sw = run(sweep);
    CHECK(sw.files.size() == 5);
    CHECK(sw.files[0].filename() == "sweep_summary.csv");
    CHECK(sw.files[1].filename() == "point_000.csv");
    CHECK(sw.metadata_json.find("\"argmin\"") != std::string::npos);
}

TEST_CASE("error json") {
    const auto j = error_json("config", {"a", "b \"quoted\""});
    CHECK(j.find("\"status\":\"error\"") != std::string::npos);
    CHECK(j.find("\\\"quoted\\\"") != std::string::npos);
}
