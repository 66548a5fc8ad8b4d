#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bjj/schemes.hpp"

namespace bjj {

enum class SweepAxis { ec_all, ec_ab, ec_self, tunneling_j, xi, diffusion_rate, ramp_duration };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> sweep_axis_from_string(std::string_view name);

struct SweepSpec {
    SweepAxis axis = SweepAxis::ec_all;
    std::vector<double> grid;
    /// Per-point template; an unset dt is resolved separately at every point.
    GlobalSchemeConfig base;
    Objective objective = Objective::epr_l;
    /// Keep the full trajectory of every point.
    bool keep_rows = false;

    /// Throws InvalidParameter for an empty or non-monotone grid, or an axis the
    /// template cannot vary (noise axes without noise, ramp_duration without a
    /// linear ramp).
    void validate() const;
    bool operator==(const SweepSpec&) const = default;
};

/// Template with the axis set to `value`.
GlobalSchemeConfig apply_axis(const GlobalSchemeConfig& base, SweepAxis axis, double value);

struct SweepPoint {
    double value = 0.0;
    double objective = 0.0;
    double time_of_optimum = 0.0;
    /// Harmonic ground-state value of the objective (NaN where undefined).
    double ideal = 0.0;
    /// "ok" or the failure message of this point.
    std::string status = "ok";
    std::vector<GlobalRow> rows;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    /// Index of the smallest finite objective.
    std::optional<std::size_t> argmin;
};

/// One global-scheme run per grid point, spread over base.threads workers.
/// Failing points are recorded and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec);

/// Harmonic ground-state value of the objective for a parameter set.
double ideal_objective(const ModelParams& params, Objective objective);

struct Bracket {
    double lo = 0.0;
    double mid = 0.0;
    double hi = 0.0;
    /// Objective at mid if already known; NaN evaluates it.
    double f_mid = std::numeric_limits<double>::quiet_NaN();
};

/// Grid neighbours of the sweep argmin. Throws InvalidParameter when the
/// minimum sits on the grid boundary or no point succeeded.
Bracket bracket_from(const SweepSpec& spec, const SweepResult& result);

struct Optimum {
    double x = 0.0;
    double objective = 0.0;
    int evaluations = 0;
};

/// Golden-section search on [lo, hi] until the bracket is below
/// rel_tol * max(|x|, abs floor). The best point seen (including `mid`) is returned.
/// Throws InvalidParameter unless lo < mid < hi and f(mid) <= min(f(lo), f(hi)).
Optimum golden_section(const std::function<double(double)>& f, const Bracket& bracket, double rel_tol = 1e-3);

/// Refines the sweep optimum along spec.axis.
Optimum refine_optimum(const SweepSpec& spec, const Bracket& bracket, double rel_tol = 1e-3);

}  // namespace bjj
