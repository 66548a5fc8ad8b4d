#include "bjj/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bjj/analytics.hpp"
#include "bjj/errors.hpp"
#include "parallel.hpp"

namespace bjj {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::pair<SweepAxis, std::string_view>, 7> kAxisNames{{
    {SweepAxis::ec_all, "ec_all"},
    {SweepAxis::ec_ab, "ec_ab"},
    {SweepAxis::ec_self, "ec_self"},
    {SweepAxis::tunneling_j, "tunneling_j"},
    {SweepAxis::xi, "xi"},
    {SweepAxis::diffusion_rate, "diffusion_rate"},
    {SweepAxis::ramp_duration, "ramp_duration"},
}};

double objective_at(const SweepSpec& spec, double value) {
    const auto rows = run_global_scheme(apply_axis(spec.base, spec.axis, value)).rows;
    const double v = minimum_over_time(rows, spec.objective).first;
    if (std::isnan(v)) throw PhaseReferenceLost("objective undefined at every sample");
    return v;
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
    for (const auto& [a, name] : kAxisNames)
        if (a == axis) return name;
    return "unknown";
}

std::optional<SweepAxis> sweep_axis_from_string(std::string_view name) {
    for (const auto& [a, n] : kAxisNames)
        if (n == name) return a;
    return std::nullopt;
}

void SweepSpec::validate() const {
    if (grid.empty()) throw InvalidParameter("sweep grid is empty");
    for (double v : grid)
        if (!std::isfinite(v)) throw InvalidParameter("sweep grid values must be finite");
    const bool up = std::adjacent_find(grid.begin(), grid.end(), std::greater_equal<>()) == grid.end();
    const bool down = std::adjacent_find(grid.begin(), grid.end(), std::less_equal<>()) == grid.end();
    if (!up && !down) throw InvalidParameter("sweep grid must be strictly monotone");
    if ((axis == SweepAxis::xi || axis == SweepAxis::diffusion_rate) && !base.noise)
        throw InvalidParameter("noise axes need a noise section");
    if (axis == SweepAxis::ramp_duration && base.ramp.kind != RampKind::linear)
        throw InvalidParameter("ramp_duration axis needs a linear ramp");
    base.validate();
}

GlobalSchemeConfig apply_axis(const GlobalSchemeConfig& base, SweepAxis axis, double value) {
    GlobalSchemeConfig cfg = base;
    switch (axis) {
        case SweepAxis::ec_all: cfg.params.ec_aa = cfg.params.ec_bb = cfg.params.ec_ab = value; break;
        case SweepAxis::ec_ab: cfg.params.ec_ab = value; break;
        case SweepAxis::ec_self: cfg.params.ec_aa = cfg.params.ec_bb = value; break;
        case SweepAxis::tunneling_j: cfg.params.tunneling_j = value; break;
        case SweepAxis::xi:
            if (!cfg.noise) throw InvalidParameter("xi axis needs a noise section");
            cfg.noise->xi = value;
            break;
        case SweepAxis::diffusion_rate:
            if (!cfg.noise) throw InvalidParameter("diffusion_rate axis needs a noise section");
            cfg.noise->diffusion_rate = value;
            break;
        case SweepAxis::ramp_duration:
            if (cfg.ramp.kind != RampKind::linear) throw InvalidParameter("ramp_duration axis needs a linear ramp");
            cfg.ramp.duration = value;
            break;
    }
    return cfg;
}

double ideal_objective(const ModelParams& params, Objective objective) {
    if (params.n_atoms_a != params.n_atoms_b || !(params.tunneling_j > 0.0)) return kNaN;
    const auto c = harmonic_coefficients(params);
    if (!(c.a_plus > 0.0)) return kNaN;
    const auto p = harmonic_prediction(c);
    if (p.diverges) return objective == Objective::epr_l ? 0.0 : -1.0;
    if (objective == Objective::epr_l) return 1.0 / (4.0 * p.s_product);
    // x = Jz / sqrt(N/2), p = Jy / sqrt(N/2) with Jy = (N/2) phi
    const double n = params.n_atoms_a;
    const double pm = 2.0 * p.var_n_minus / n + 0.5 * n * p.var_phi_plus;
    const double mp = 2.0 * p.var_n_plus / n + 0.5 * n * p.var_phi_minus;
    return std::min(pm, mp) - 1.0;
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    result.points.resize(spec.grid.size());
    GlobalSchemeConfig serial = spec.base;
    const int workers = spec.base.threads;
    // parallelism is over points; each point runs its own ensemble serially
    serial.threads = 1;
    detail::parallel_for(spec.grid.size(), workers, [&](std::size_t i) {
        SweepPoint& point = result.points[i];
        point.value = spec.grid[i];
        try {
            const auto cfg = apply_axis(serial, spec.axis, point.value);
            point.ideal = ideal_objective(cfg.params, spec.objective);
            auto rows = run_global_scheme(cfg).rows;
            const auto [best, when] = minimum_over_time(rows, spec.objective);
            point.objective = best;
            point.time_of_optimum = when;
            if (std::isnan(best)) point.status = "phase reference lost at every sample";
            if (spec.keep_rows) point.rows = std::move(rows);
        } catch (const std::exception& e) {
            point.objective = kNaN;
            point.time_of_optimum = kNaN;
            point.status = e.what();
        }
    });
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const double v = result.points[i].objective;
        if (std::isnan(v)) continue;
        if (!result.argmin || v < result.points[*result.argmin].objective) result.argmin = i;
    }
    return result;
}

Bracket bracket_from(const SweepSpec& spec, const SweepResult& result) {
    if (!result.argmin) throw InvalidParameter("no successful sweep point to bracket");
    const std::size_t i = *result.argmin;
    if (i == 0 || i + 1 >= result.points.size())
        throw InvalidParameter("sweep minimum lies on the grid boundary; no interior bracket");
    double lo = spec.grid[i - 1];
    double hi = spec.grid[i + 1];
    if (lo > hi) std::swap(lo, hi);
    return {lo, spec.grid[i], hi, result.points[i].objective};
}

Optimum golden_section(const std::function<double(double)>& f, const Bracket& bracket, double rel_tol) {
    if (!(bracket.lo < bracket.mid && bracket.mid < bracket.hi))
        throw InvalidParameter("bracket must satisfy lo < mid < hi");
    if (!(rel_tol > 0.0)) throw InvalidParameter("rel_tol must be > 0");
    Optimum best{bracket.mid, bracket.f_mid, 0};
    if (std::isnan(best.objective)) {
        best.objective = f(bracket.mid);
        ++best.evaluations;
    }
    auto eval = [&](double x) {
        const double v = f(x);
        ++best.evaluations;
        if (v < best.objective) {
            best.x = x;
            best.objective = v;
        }
        return v;
    };
    const double f_lo = eval(bracket.lo);
    const double f_hi = eval(bracket.hi);
    if (!(best.x != bracket.lo && best.x != bracket.hi) || !(best.objective <= std::min(f_lo, f_hi)))
        throw InvalidParameter("bracket has no interior minimum");

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double scale = std::max({std::abs(bracket.lo), std::abs(bracket.hi), 1e-300});
    double a = bracket.lo, b = bracket.hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = eval(c), fd = eval(d);
    while (b - a > rel_tol * std::max(std::abs(best.x), 1e-3 * scale)) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = eval(d);
        }
    }
    return best;
}

Optimum refine_optimum(const SweepSpec& spec, const Bracket& bracket, double rel_tol) {
    spec.validate();
    return golden_section([&](double x) { return objective_at(spec, x); }, bracket, rel_tol);
}

}  // namespace bjj
