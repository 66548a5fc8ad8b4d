#include "bjj/schemes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "bjj/errors.hpp"

namespace bjj {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_double(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

EprErrors nan_errors() { return {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN}; }

EprReport nan_report() {
    EprReport r;
    r.mean_lx = r.var_ly_plus = r.var_ly_minus = r.var_lz_plus = r.var_lz_minus = kNaN;
    r.epr_l_plus_minus = r.epr_l_minus_plus = r.epr_l_value = r.s_l = r.product_np = r.epsilon = kNaN;
    return r;
}

GlobalRow make_row(double t, const SpinMoments& m) {
    GlobalRow row;
    row.t = t;
    row.errors = nan_errors();
    row.mean_jz_a = m.mean_a[2];
    row.mean_jz_b = m.mean_b[2];
    try {
        row.report = epr_report(m);
    } catch (const PhaseReferenceLost&) {
        row.defined = false;
        row.report = nan_report();
    }
    return row;
}

std::vector<GlobalRow> noiseless_rows(const ModelParams& params, const RampSchedule& ramp, const TimeGrid& grid,
                                      const StateVector& psi0) {
    const MomentEvaluator moments(psi0.basis());
    std::vector<GlobalRow> rows;
    evolve(psi0, params, ramp, grid,
           [&](std::size_t, double t, const Vector& psi) { rows.push_back(make_row(t, moments(psi))); });
    return rows;
}

std::vector<GlobalRow> noisy_rows(const GlobalSchemeConfig& cfg, const ModelParams& params, const RampSchedule& ramp,
                                  const TimeGrid& grid, const StateVector& psi0) {
    const auto ensemble = sample_dephased_moments(psi0, params, ramp, *cfg.noise, grid, cfg.threads);
    using Getter = double (*)(const EprReport&);
    static constexpr std::array<Getter, 9> getters{
        [](const EprReport& r) { return r.mean_lx; },       [](const EprReport& r) { return r.var_ly_plus; },
        [](const EprReport& r) { return r.var_ly_minus; },  [](const EprReport& r) { return r.var_lz_plus; },
        [](const EprReport& r) { return r.var_lz_minus; },  [](const EprReport& r) { return r.epr_l_value; },
        [](const EprReport& r) { return r.s_l; },           [](const EprReport& r) { return r.product_np; },
        [](const EprReport& r) { return r.epsilon; },
    };
    std::vector<GlobalRow> rows;
    for (std::size_t s = 0; s < ensemble.times.size(); ++s) {
        GlobalRow row = make_row(ensemble.times[s], ensemble.mean(s));
        if (row.defined) {
            std::array<double, 9> se{};
            for (std::size_t k = 0; k < getters.size(); ++k)
                se[k] = ensemble.estimate(s, [g = getters[k]](const SpinMoments& m) { return g(epr_report(m)); }).second;
            row.errors = {se[0], se[1], se[2], se[3], se[4], se[5], se[6], se[7], se[8]};
        }
        rows.push_back(row);
    }
    return rows;
}

/// Rotation exp(-i angle Jx) on one spin.
Eigen::MatrixXcd x_rotation(const SparseMatrix& jx, double angle) {
    const Eigen::MatrixXcd dense(jx);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense);
    const Eigen::VectorXcd phases =
        (eig.eigenvalues().cast<cplx>() * cplx(0.0, -angle)).array().exp().matrix();
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

struct TransverseStats {
    double mean_jx, var_yy, var_zz, cov_yz;
};

TransverseStats transverse_stats(const SpinMatrices& s, const Vector& psi) {
    const Vector y = s.jy * psi;
    const Vector z = s.jz * psi;
    const double my = psi.dot(y).real();
    const double mz = psi.dot(z).real();
    // symmetrised <(JyJz + JzJy)/2> = Re <y|z>
    return {psi.dot(s.jx * psi).real(), y.squaredNorm() - my * my, z.squaredNorm() - mz * mz,
            y.dot(z).real() - my * mz};
}

std::pair<double, double> principal_variances(const TransverseStats& t) {
    const double mid = 0.5 * (t.var_yy + t.var_zz);
    const double rad = std::hypot(0.5 * (t.var_yy - t.var_zz), t.cov_yz);
    return {std::max(mid - rad, 0.0), mid + rad};
}

Vector twisted_state(int n_atoms, double chi, double t) {
    Vector psi = coherent_amplitudes(n_atoms, M_PI / 2.0, 0.0);
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        const double m = static_cast<double>(k) - 0.5 * n_atoms;
        psi(k) *= std::polar(1.0, -chi * t * m * m);
    }
    return psi;
}

}  // namespace

// ------------------------------------------------------------------ ramps

RampSchedule RampSpec::schedule(double j_final) const {
    switch (kind) {
        case RampKind::sudden: return RampSchedule::sudden(j_final);
        case RampKind::linear:
            return RampSchedule::linear(std::isnan(j_initial) ? 10.0 * j_final : j_initial, j_final, duration);
        case RampKind::piecewise: {
            auto r = RampSchedule::piecewise(knots);
            if (std::abs(r.j_final() - j_final) > 1e-12 * std::max(1.0, j_final))
                throw InvalidParameter("piecewise ramp must end at model.tunneling_j");
            return r;
        }
    }
    throw InvalidParameter("unknown ramp kind");
}

bool RampSpec::operator==(const RampSpec& o) const {
    return kind == o.kind && same_double(j_initial, o.j_initial) && duration == o.duration && knots == o.knots;
}

std::string_view to_string(RampKind kind) {
    switch (kind) {
        case RampKind::sudden: return "sudden";
        case RampKind::linear: return "linear";
        case RampKind::piecewise: return "piecewise";
    }
    return "unknown";
}

std::optional<RampKind> ramp_kind_from_string(std::string_view name) {
    if (name == "sudden") return RampKind::sudden;
    if (name == "linear") return RampKind::linear;
    if (name == "piecewise") return RampKind::piecewise;
    return std::nullopt;
}

// ----------------------------------------------------------- global scheme

void GlobalSchemeConfig::validate() const {
    params.validate();
    (void)ramp.schedule(params.tunneling_j);
    if (dt && !(std::isfinite(*dt) && *dt > 0.0)) throw InvalidParameter("dt must be > 0");
    if (!std::isfinite(t_max) || t_max < 0.0) throw InvalidParameter("t_max must be >= 0");
    if (sample_stride == 0) throw InvalidParameter("sample_stride must be >= 1");
    if (threads < 1) throw InvalidParameter("threads must be >= 1");
    if (noise) noise->validate();
    for (double a : {initial.theta_a, initial.phi_a, initial.theta_b, initial.phi_b})
        if (!std::isfinite(a)) throw InvalidParameter("initial-state angles must be finite");
}

double GlobalSchemeConfig::resolved_dt() const {
    return dt ? *dt : default_dt(params, ramp.schedule(params.tunneling_j));
}

TimeGrid GlobalSchemeConfig::grid() const { return TimeGrid::make(resolved_dt(), t_max, sample_stride); }

GlobalResult run_global_scheme(const GlobalSchemeConfig& cfg) {
    cfg.validate();
    const auto grid = cfg.grid();
    const TwoSpinBasis basis(cfg.params.n_atoms_a, cfg.params.n_atoms_b);
    const auto psi0 =
        coherent_spin_state(basis, cfg.initial.theta_a, cfg.initial.phi_a, cfg.initial.theta_b, cfg.initial.phi_b);
    const auto ramp = cfg.ramp.schedule(cfg.params.tunneling_j);

    auto run = [&](const ModelParams& params) {
        return cfg.noise ? noisy_rows(cfg, params, ramp, grid, psi0) : noiseless_rows(params, ramp, grid, psi0);
    };
    GlobalResult result;
    result.rows = run(cfg.params);
    if (cfg.uncoupled_reference) {
        ModelParams uncoupled = cfg.params;
        uncoupled.ec_ab = 0.0;
        result.uncoupled = run(uncoupled);
    }
    return result;
}

std::string_view to_string(Objective o) { return o == Objective::epr_l ? "epr_l" : "epsilon"; }

std::optional<Objective> objective_from_string(std::string_view name) {
    if (name == "epr_l") return Objective::epr_l;
    if (name == "epsilon") return Objective::epsilon;
    return std::nullopt;
}

std::pair<double, double> minimum_over_time(const std::vector<GlobalRow>& rows, Objective objective) {
    double best = kNaN;
    double when = kNaN;
    for (const auto& row : rows) {
        if (!row.defined) continue;
        const double v = objective == Objective::epr_l ? row.report.epr_l_value : row.report.epsilon;
        if (std::isnan(best) || v < best) {
            best = v;
            when = row.t;
        }
    }
    return {best, when};
}

// ------------------------------------------------------------ local scheme

void LocalSchemeConfig::validate() const {
    if (n_atoms < 1) throw InvalidParameter("local scheme needs n_atoms >= 1");
    if (!std::isfinite(chi)) throw InvalidParameter("chi must be finite");
    if (!std::isfinite(t_hold) || t_hold < 0.0) throw InvalidParameter("t_hold must be >= 0");
    if (scan_points < 1) throw InvalidParameter("scan_points must be >= 1");
}

double twisting_rate(const ModelParams& params) { return params.ec_aa + params.ec_bb - 2.0 * params.ec_ab; }

std::vector<LocalRow> run_local_scheme(const LocalSchemeConfig& cfg) {
    cfg.validate();
    const auto spins = spin_matrices(cfg.n_atoms);
    const double n = cfg.n_atoms;
    std::vector<LocalRow> rows;
    for (std::size_t k = 0; k < cfg.scan_points; ++k) {
        const double t = cfg.scan_points == 1
                             ? cfg.t_hold
                             : cfg.t_hold * static_cast<double>(k) / static_cast<double>(cfg.scan_points - 1);
        // the x-polarised state keeps <J> along x under chi Jz^2
        const auto stats = transverse_stats(spins, twisted_state(cfg.n_atoms, cfg.chi, t));
        const auto [vmin, vmax] = principal_variances(stats);
        LocalRow row;
        row.t = t;
        row.mean_jx = stats.mean_jx;
        row.var_min = vmin;
        row.var_max = vmax;
        row.s_single = vmin > 0.0 ? (n / 4.0) / vmin : std::numeric_limits<double>::infinity();
        row.var_n_plus = (n / 4.0) / row.s_single;
        row.var_phi_minus = (1.0 / n) / row.s_single;
        row.phase_reference_lost = std::abs(stats.mean_jx) < 1e-9 * n;
        rows.push_back(row);
    }
    return rows;
}

// ------------------------------------------------------- initial states

std::string_view to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::coherent: return "coherent";
        case InitialKind::same_quadrature_squeezed: return "same_quadrature";
        case InitialKind::cross_quadrature_squeezed: return "cross_quadrature";
    }
    return "unknown";
}

void SqueezedInputConfig::validate() const {
    if (n_atoms < 1) throw InvalidParameter("n_atoms must be >= 1");
    if (!std::isfinite(chi) || !std::isfinite(t_squeeze) || t_squeeze < 0.0)
        throw InvalidParameter("squeezing chi and t_squeeze must be finite, t_squeeze >= 0");
}

Vector squeezed_spin_state(int n_atoms, double chi, double t_squeeze, bool number_squeezed) {
    const auto spins = spin_matrices(n_atoms);
    const Vector twisted = twisted_state(n_atoms, chi, t_squeeze);
    const auto stats = transverse_stats(spins, twisted);
    // direction of the narrow axis in the (y, z) plane
    const double beta = 0.5 * std::atan2(2.0 * stats.cov_yz, stats.var_yy - stats.var_zz) + M_PI / 2.0;
    const double target = number_squeezed ? M_PI / 2.0 : 0.0;
    // try both senses of rotation and keep the one that narrows the target axis
    Vector best;
    double best_var = std::numeric_limits<double>::infinity();
    for (double sign : {1.0, -1.0}) {
        const Vector rotated = x_rotation(spins.jx, sign * (target - beta)) * twisted;
        const auto s = transverse_stats(spins, rotated);
        const double v = number_squeezed ? s.var_zz : s.var_yy;
        if (v < best_var) {
            best_var = v;
            best = rotated;
        }
    }
    return best;
}

StateVector initial_state(InitialKind kind, const SqueezedInputConfig& cfg) {
    cfg.validate();
    const TwoSpinBasis basis(cfg.n_atoms, cfg.n_atoms);
    if (kind == InitialKind::coherent) return coherent_spin_state(basis, M_PI / 2.0, 0.0, M_PI / 2.0, 0.0);
    const Vector a = squeezed_spin_state(cfg.n_atoms, cfg.chi, cfg.t_squeeze, true);
    const Vector b =
        squeezed_spin_state(cfg.n_atoms, cfg.chi, cfg.t_squeeze, kind == InitialKind::same_quadrature_squeezed);
    Vector joint(static_cast<Eigen::Index>(basis.dimension()));
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j)
            joint(static_cast<Eigen::Index>(basis.index(static_cast<int>(i), static_cast<int>(j)))) = a(i) * b(j);
    return StateVector::normalized(basis, joint);
}

InitialComparison compare_initial_states(const SqueezedInputConfig& cfg) {
    InitialComparison out;
    out.coherent = epr_l_criterion(initial_state(InitialKind::coherent, cfg)).epr_l_value;
    out.same_quadrature = epr_l_criterion(initial_state(InitialKind::same_quadrature_squeezed, cfg)).epr_l_value;
    out.cross_quadrature = epr_l_criterion(initial_state(InitialKind::cross_quadrature_squeezed, cfg)).epr_l_value;
    out.coherent_not_above_same = out.coherent <= out.same_quadrature + 1e-9;
    out.coherent_below_cross = out.coherent < out.cross_quadrature;
    return out;
}

}  // namespace bjj
