// Command-line front end: global | local | sweep | validate | oracle.
//
// Exit codes: 0 success, 1 I/O or unexpected failure, 2 configuration or
// parameter error, 3 numerical failure. Errors are printed to stderr as JSON.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "bjj/config.hpp"
#include "bjj/errors.hpp"
#include "bjj/run.hpp"
#include "bjj/selftest.hpp"

namespace {

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;
};

bjj::RunConfig load(const Options& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw bjj::ConfigError({"cannot read config file '" + opts.config_path + "'"});
    std::stringstream text;
    text << in.rdbuf();
    auto cfg = bjj::parse_config(text.str());
    if (opts.seed) cfg.set_seed(*opts.seed);
    if (opts.out) cfg.output = *opts.out;
    if (opts.threads) {
        if (*opts.threads < 1) throw bjj::ConfigError({"--threads must be >= 1"});
        cfg.set_threads(*opts.threads);
    }
    return cfg;
}

int run_scheme(const Options& opts, bjj::SchemeKind expected) {
    const auto cfg = load(opts);
    if (cfg.scheme != expected)
        throw bjj::ConfigError({"config describes a " + std::string(bjj::to_string(cfg.scheme)) +
                                " run but the '" + std::string(bjj::to_string(expected)) +
                                "' subcommand was given"});
    const auto outcome = bjj::run(cfg);
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : outcome.files) std::cout << f.string() << '\n';
    return 0;
}

int validate(const Options& opts) {
    const auto cfg = load(opts);
    std::cout << bjj::serialize_config(cfg);
    return 0;
}

int oracle() {
    bool ok = true;
    for (const auto& c : bjj::run_oracle_suite()) {
        std::cout << (c.passed() ? "PASS" : "FAIL") << "  " << c.name << "  error=" << bjj::format_double(c.error)
                  << " tol=" << bjj::format_double(c.tolerance) << '\n';
        ok = ok && c.passed();
    }
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact simulator of two tunnel-coupled two-species condensates"};
    app.require_subcommand(1);
    Options opts;

    auto add_run_flags = [&](CLI::App* sub, bool run_flags) {
        sub->add_option("--config", opts.config_path, "Configuration file")->required()->check(CLI::ExistingFile);
        if (!run_flags) return;
        sub->add_option("--seed", opts.seed, "Master seed (overrides run.seed)");
        sub->add_option("--out", opts.out, "Output directory (overrides run.output)");
        sub->add_option("--threads", opts.threads, "Worker threads (overrides run.threads)");
    };
    auto* global = app.add_subcommand("global", "Run the global-mode scheme");
    auto* local = app.add_subcommand("local", "Run the local-mode scheme");
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    auto* check = app.add_subcommand("validate", "Parse and validate a config, printing its canonical form");
    auto* oracle_cmd = app.add_subcommand("oracle", "Run the dense-oracle self-test suite");
    add_run_flags(global, true);
    add_run_flags(local, true);
    add_run_flags(sweep, true);
    add_run_flags(check, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*global) return run_scheme(opts, bjj::SchemeKind::global);
        if (*local) return run_scheme(opts, bjj::SchemeKind::local);
        if (*sweep) return run_scheme(opts, bjj::SchemeKind::sweep);
        if (*check) return validate(opts);
        if (*oracle_cmd) return oracle();
    } catch (const bjj::ConfigError& e) {
        std::cerr << bjj::error_json("config", e.messages());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << bjj::error_json("invalid_parameter", {e.what()});
        return 2;
    } catch (const bjj::NumericalError& e) {
        std::cerr << bjj::error_json("numerical", {e.what()});
        return 3;
    } catch (const std::exception& e) {
        std::cerr << bjj::error_json("io", {e.what()});
        return 1;
    }
    return 0;
}
