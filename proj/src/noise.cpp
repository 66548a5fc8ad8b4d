#include "bjj/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "bjj/errors.hpp"
#include "parallel.hpp"

namespace bjj {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::pair<Quantity, std::string_view>, 16> kQuantityNames{{
    {Quantity::mean_lx, "mean_lx"},
    {Quantity::var_ly_plus, "var_ly_plus"},
    {Quantity::var_ly_minus, "var_ly_minus"},
    {Quantity::var_lz_plus, "var_lz_plus"},
    {Quantity::var_lz_minus, "var_lz_minus"},
    {Quantity::epr_l_value, "epr_l_value"},
    {Quantity::product_np, "product_np"},
    {Quantity::epsilon, "epsilon"},
    {Quantity::var_n_plus, "var_n_plus"},
    {Quantity::var_n_minus, "var_n_minus"},
    {Quantity::var_phi_plus, "var_phi_plus"},
    {Quantity::var_phi_minus, "var_phi_minus"},
    {Quantity::mean_jx_a, "mean_jx_a"},
    {Quantity::mean_jx_b, "mean_jx_b"},
    {Quantity::mean_jz_a, "mean_jz_a"},
    {Quantity::mean_jz_b, "mean_jz_b"},
}};

}  // namespace

void NoiseModel::validate() const {
    if (!std::isfinite(xi) || xi < 0.0) throw InvalidParameter("noise xi must be finite and >= 0");
    if (!std::isfinite(diffusion_rate) || diffusion_rate < 0.0)
        throw InvalidParameter("noise diffusion_rate must be finite and >= 0");
    if (n_trajectories < 1) throw InvalidParameter("noise needs at least one trajectory");
}

std::vector<std::string> NoiseModel::warnings() const {
    std::vector<std::string> out;
    if (xi >= 0.2) out.emplace_back("noise xi >= 0.2 is outside the symmetrised-environment regime xi << 1");
    return out;
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t z = master_seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

NoiseShifts sample_noise_step(const NoiseModel& model, NoiseStream& rng, double dt) {
    if (!(dt > 0.0)) throw InvalidParameter("noise step needs dt > 0");
    if (model.diffusion_rate == 0.0) return {};
    const double sigma = std::sqrt(model.diffusion_rate / dt);
    const double eta_l = sigma * rng.standard_normal();
    const double eta_r = sigma * rng.standard_normal();
    return {(1.0 - model.xi) * eta_l, (1.0 + model.xi) * eta_l, (1.0 - model.xi) * eta_r, (1.0 + model.xi) * eta_r};
}

std::string_view to_string(Quantity q) {
    for (const auto& [value, name] : kQuantityNames)
        if (value == q) return name;
    return "unknown";
}

std::optional<Quantity> quantity_from_string(std::string_view name) {
    for (const auto& [value, n] : kQuantityNames)
        if (n == name) return value;
    return std::nullopt;
}

double evaluate(Quantity q, const SpinMoments& m) {
    switch (q) {
        case Quantity::mean_jx_a: return m.mean_a[0];
        case Quantity::mean_jx_b: return m.mean_b[0];
        case Quantity::mean_jz_a: return m.mean_a[2];
        case Quantity::mean_jz_b: return m.mean_b[2];
        case Quantity::var_n_plus: return number_phase_variances(m).var_n_plus;
        case Quantity::var_n_minus: return number_phase_variances(m).var_n_minus;
        case Quantity::var_phi_plus: return number_phase_variances(m).var_phi_plus;
        case Quantity::var_phi_minus: return number_phase_variances(m).var_phi_minus;
        default: break;
    }
    const auto r = epr_report(m);
    switch (q) {
        case Quantity::mean_lx: return r.mean_lx;
        case Quantity::var_ly_plus: return r.var_ly_plus;
        case Quantity::var_ly_minus: return r.var_ly_minus;
        case Quantity::var_lz_plus: return r.var_lz_plus;
        case Quantity::var_lz_minus: return r.var_lz_minus;
        case Quantity::epr_l_value: return r.epr_l_value;
        case Quantity::product_np: return r.product_np;
        case Quantity::epsilon: return r.epsilon;
        default: return kNaN;
    }
}

// ---------------------------------------------------------------- ensemble

SpinMoments MomentEnsemble::mean(std::size_t sample) const {
    std::array<double, SpinMoments::field_count> sum{};
    for (const auto& traj : samples)
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += traj[sample][k];
    for (auto& v : sum) v /= static_cast<double>(samples.size());
    return SpinMoments::from_array(n_atoms_a, n_atoms_b, sum);
}

std::pair<double, double> MomentEnsemble::estimate(std::size_t sample,
                                                   const std::function<double(const SpinMoments&)>& f) const {
    const std::size_t count = samples.size();
    double value = kNaN;
    try {
        value = f(mean(sample));
    } catch (const PhaseReferenceLost&) {
        return {kNaN, kNaN};
    }
    if (count < 2) return {value, kNaN};

    std::array<double, SpinMoments::field_count> sum{};
    for (const auto& traj : samples)
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += traj[sample][k];

    std::vector<double> loo(count);
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        std::array<double, SpinMoments::field_count> reduced{};
        for (std::size_t k = 0; k < sum.size(); ++k) reduced[k] = (sum[k] - samples[i][sample][k]) / denom;
        try {
            loo[i] = f(SpinMoments::from_array(n_atoms_a, n_atoms_b, reduced));
        } catch (const PhaseReferenceLost&) {
            return {value, kNaN};
        }
    }
    double avg = 0.0;
    for (double v : loo) avg += v;
    avg /= static_cast<double>(count);
    double ss = 0.0;
    for (double v : loo) ss += (v - avg) * (v - avg);
    return {value, std::sqrt(ss * denom / static_cast<double>(count))};
}

MomentEnsemble sample_dephased_moments(const StateVector& psi0, const ModelParams& params, const RampSchedule& ramp,
                                       const NoiseModel& model, const TimeGrid& grid, int threads) {
    model.validate();
    const TwoSpinBasis& basis = psi0.basis();
    auto terms = std::make_shared<const HamiltonianTerms>(build_hamiltonian_terms(params, basis));
    const MomentEvaluator moments(basis);
    const auto sample_steps = grid.sample_steps();

    MomentEnsemble out;
    out.n_atoms_a = basis.n_atoms_a();
    out.n_atoms_b = basis.n_atoms_b();
    for (auto s : sample_steps) out.times.push_back(grid.time(s));
    out.samples.resize(static_cast<std::size_t>(model.n_trajectories));

    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    Eigen::VectorXd m_a(dim), m_b(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        m_a(i) = basis.m_a(static_cast<std::size_t>(i));
        m_b(i) = basis.m_b(static_cast<std::size_t>(i));
    }

    detail::parallel_for(out.samples.size(), threads, [&](std::size_t traj) {
        Evolver evolver(terms, ramp);
        NoiseStream rng(trajectory_seed(model.master_seed, traj));
        Vector psi = psi0.amplitudes();
        Eigen::VectorXd diagonal(dim);
        auto& record = out.samples[traj];
        record.reserve(sample_steps.size());
        std::size_t next = 0;
        for (std::size_t step = 0;; ++step) {
            if (next < sample_steps.size() && sample_steps[next] == step) {
                record.push_back(moments(psi).as_array());
                ++next;
            }
            if (step == grid.n_steps) break;
            if (model.diffusion_rate > 0.0) {
                const auto e = sample_noise_step(model, rng, grid.dt);
                diagonal = (e.eps_al - e.eps_ar) * m_a + (e.eps_bl - e.eps_br) * m_b;
                evolver.step(psi, grid.time(step), grid.dt, &diagonal);
            } else {
                evolver.step(psi, grid.time(step), grid.dt);
            }
        }
    });
    return out;
}

const std::vector<double>& EnsembleTrajectory::series(Quantity q) const {
    const auto it = std::find(quantities.begin(), quantities.end(), q);
    if (it == quantities.end()) throw InvalidParameter("quantity was not requested: " + std::string(to_string(q)));
    return mean[static_cast<std::size_t>(it - quantities.begin())];
}

const std::vector<double>& EnsembleTrajectory::errors(Quantity q) const {
    const auto it = std::find(quantities.begin(), quantities.end(), q);
    if (it == quantities.end()) throw InvalidParameter("quantity was not requested: " + std::string(to_string(q)));
    return std_error[static_cast<std::size_t>(it - quantities.begin())];
}

EnsembleTrajectory evolve_dephased(const StateVector& psi0, const ModelParams& params, const RampSchedule& ramp,
                                   const NoiseModel& model, const TimeGrid& grid,
                                   const std::vector<Quantity>& quantities, int threads) {
    const auto ensemble = sample_dephased_moments(psi0, params, ramp, model, grid, threads);
    EnsembleTrajectory out;
    out.times = ensemble.times;
    out.quantities = quantities;
    out.n_trajectories = model.n_trajectories;
    for (Quantity q : quantities) {
        std::vector<double> mean, err;
        for (std::size_t s = 0; s < ensemble.times.size(); ++s) {
            const auto [v, e] = ensemble.estimate(s, [q](const SpinMoments& m) { return evaluate(q, m); });
            mean.push_back(v);
            err.push_back(e);
        }
        out.mean.push_back(std::move(mean));
        out.std_error.push_back(std::move(err));
    }
    return out;
}

}  // namespace bjj
