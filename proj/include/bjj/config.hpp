#pragma once

// Run configuration in a flat "key = value" text format with dotted sections:
//
//   scheme = global            # or local / sweep; optional if a scheme section is present
//   run.output = out
//   run.seed = 42
//   model.n_atoms = 10         # or model.n_atoms_a / model.n_atoms_b
//   model.tunneling_j = 1
//   model.ec_all = 0.1         # or model.ec_aa / ec_bb / ec_ab
//   ramp.kind = linear
//   ramp.duration = 5
//   evolution.t_max = 20
//   noise.diffusion_rate = 0.002
//   sweep.axis = ec_all
//   sweep.grid = 0, 0.05, 0.1
//
// '#' starts a comment. All problems are collected and reported together.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bjj/schemes.hpp"
#include "bjj/sweep.hpp"

namespace bjj {

enum class SchemeKind { global, local, sweep };

std::string_view to_string(SchemeKind kind);

struct SweepSettings {
    SweepAxis axis = SweepAxis::ec_all;
    std::vector<double> grid;
    Objective objective = Objective::epr_l;
    bool per_point_csv = false;
    /// Golden-section refinement around the grid minimum.
    bool refine = false;

    bool operator==(const SweepSettings&) const = default;
};

struct RunConfig {
    SchemeKind scheme = SchemeKind::global;
    std::string output = "out";
    std::uint64_t seed = 0;
    std::size_t sample_stride = 1;
    int threads = 1;
    /// Global run, or the per-point template of a sweep.
    GlobalSchemeConfig global;
    LocalSchemeConfig local;
    SweepSettings sweep;

    SweepSpec sweep_spec() const;
    /// Keep the mirrored copies inside `global` in step.
    void set_seed(std::uint64_t value);
    void set_threads(int value);
    bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError listing every problem.
RunConfig parse_config(std::string_view text);

/// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Shortest decimal text that reads back to the same double; "nan", "inf", "-inf".
std::string format_double(double value);

}  // namespace bjj
