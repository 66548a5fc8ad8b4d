#include "bjj/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "bjj/errors.hpp"

namespace bjj {

// ---------------------------------------------------------------- ramps

RampSchedule::RampSchedule(RampKind kind, std::vector<std::pair<double, double>> knots)
    : kind_(kind), knots_(std::move(knots)) {}

RampSchedule RampSchedule::sudden(double j_final) {
    if (!std::isfinite(j_final) || j_final < 0.0) throw InvalidParameter("ramp J must be finite and >= 0");
    return RampSchedule(RampKind::sudden, {{0.0, j_final}});
}

RampSchedule RampSchedule::linear(double j_initial, double j_final, double duration) {
    if (!std::isfinite(j_initial) || !std::isfinite(j_final) || j_initial < 0.0 || j_final < 0.0)
        throw InvalidParameter("ramp J must be finite and >= 0");
    if (!std::isfinite(duration) || duration <= 0.0)
        throw InvalidParameter("linear ramp needs a positive duration (use a sudden ramp for 0)");
    return RampSchedule(RampKind::linear, {{0.0, j_initial}, {duration, j_final}});
}

RampSchedule RampSchedule::piecewise(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw InvalidParameter("piecewise ramp needs at least two knots");
    if (knots.front().first != 0.0) throw InvalidParameter("piecewise ramp must start at t = 0");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second) || knots[i].second < 0.0)
            throw InvalidParameter("piecewise ramp knots must be finite with J >= 0");
        if (i > 0 && !(knots[i].first > knots[i - 1].first))
            throw InvalidParameter("piecewise ramp knot times must be strictly increasing");
    }
    return RampSchedule(RampKind::piecewise, std::move(knots));
}

double RampSchedule::max_abs_j() const {
    double out = 0.0;
    for (const auto& [t, j] : knots_) out = std::max(out, std::abs(j));
    return out;
}

double RampSchedule::j_of_t(double t) const {
    if (t <= knots_.front().first) return knots_.front().second;
    if (t >= knots_.back().first) return knots_.back().second;
    const auto upper = std::upper_bound(knots_.begin(), knots_.end(), t,
                                        [](double value, const auto& knot) { return value < knot.first; });
    const auto lower = upper - 1;
    const double w = (t - lower->first) / (upper->first - lower->first);
    return lower->second + w * (upper->second - lower->second);
}

double default_dt(const ModelParams& params, const RampSchedule& ramp) {
    const double ec_max = std::max({std::abs(params.ec_aa), std::abs(params.ec_bb), std::abs(params.ec_ab)});
    const double n_max = std::max(params.n_atoms_a, params.n_atoms_b);
    const double rate = std::max({ramp.max_abs_j(), std::abs(params.tunneling_j), n_max * ec_max});
    return rate > 0.0 ? 0.01 / rate : 0.01;
}

// ---------------------------------------------------------------- grid

TimeGrid TimeGrid::make(double dt, double t_max, std::size_t stride) {
    if (!std::isfinite(dt) || dt <= 0.0) throw InvalidParameter("dt must be > 0");
    if (!std::isfinite(t_max) || t_max < 0.0) throw InvalidParameter("t_max must be >= 0");
    if (stride == 0) throw InvalidParameter("sample stride must be >= 1");
    TimeGrid grid;
    grid.stride = stride;
    if (t_max == 0.0) {
        grid.dt = dt;
        grid.n_steps = 0;
        return grid;
    }
    if (t_max < dt * (1.0 - 1e-9)) throw InvalidParameter("t_max must be >= dt");
    grid.n_steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    grid.dt = t_max / static_cast<double>(grid.n_steps);
    return grid;
}

std::vector<std::size_t> TimeGrid::sample_steps() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s <= n_steps; s += stride) out.push_back(s);
    if (out.back() != n_steps) out.push_back(n_steps);
    return out;
}

// ---------------------------------------------------------------- kernels

GroundState ground_state(const HermitianOperator& h, const LanczosOptions& options) {
    if (h.dimension() < 2) throw InvalidParameter("ground state needs dimension >= 2");
    LinearOperator op;
    op.base = &h.matrix();
    auto pair = lanczos_ground_state(op, options);
    return {pair.value, StateVector::normalized(h.basis(), std::move(pair.vector))};
}

StateVector propagator_step(const HermitianOperator& h, const StateVector& psi, double dt,
                            const KrylovOptions& options) {
    if (!(h.basis() == psi.basis())) throw InvalidParameter("operator and state live on different bases");
    const SparseMatrix& m = h.matrix();
    bool diagonal = true;
    for (Eigen::Index r = 0; r < m.outerSize() && diagonal; ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it)
            if (it.row() != it.col()) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        Vector out = psi.amplitudes();
        for (Eigen::Index i = 0; i < out.size(); ++i) out(i) *= std::exp(cplx(0.0, -dt * m.coeff(i, i).real()));
        return StateVector(psi.basis(), std::move(out));
    }
    KrylovWorkspace ws(options);
    LinearOperator op;
    op.base = &m;
    auto result = ws.apply_exponential(op, psi.amplitudes(), dt);
    return StateVector(psi.basis(), std::move(result.state));
}

Evolver::Evolver(std::shared_ptr<const HamiltonianTerms> terms, RampSchedule ramp, KrylovOptions options)
    : terms_(std::move(terms)), ramp_(std::move(ramp)), workspace_(options) {
    if (!terms_) throw InvalidParameter("evolver needs Hamiltonian terms");
}

void Evolver::step(Vector& psi, double t, double dt, const Eigen::VectorXd* extra_diagonal) {
    const double j_mid = ramp_.j_of_t(t + 0.5 * dt);
    const bool constant = t >= ramp_.ramp_duration();
    const auto dim = static_cast<std::size_t>(psi.size());

    if (constant && extra_diagonal == nullptr && dim < dense_limit) {
        const std::pair<double, double> key{j_mid, dt};
        if (!cached_key_ || *cached_key_ != key) {
            const Eigen::MatrixXcd h = terms_->at(j_mid).dense();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
            const Eigen::VectorXcd phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, -dt)).array().exp().matrix();
            cached_unitary_ = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
            cached_key_ = key;
        }
        psi = cached_unitary_ * psi;
        return;
    }

    LinearOperator op;
    op.base = &terms_->interaction.matrix();
    op.scaled = &terms_->tunneling_unit.matrix();
    op.scale = j_mid;
    if (extra_diagonal) {
        op.diagonal = extra_diagonal;
        op.diagonal_scale = 1.0;
    }
    psi = workspace_.apply_exponential(op, psi, dt).state;
}

void evolve(const StateVector& psi0, const ModelParams& params, const RampSchedule& ramp, const TimeGrid& grid,
            const StepObserver& observe) {
    auto terms = std::make_shared<const HamiltonianTerms>(build_hamiltonian_terms(params, psi0.basis()));
    Evolver evolver(std::move(terms), ramp);
    Vector psi = psi0.amplitudes();
    const auto samples = grid.sample_steps();
    std::size_t next = 0;
    for (std::size_t step = 0;; ++step) {
        if (next < samples.size() && samples[next] == step) {
            observe(step, grid.time(step), psi);
            ++next;
        }
        if (step == grid.n_steps) break;
        evolver.step(psi, grid.time(step), grid.dt);
    }
}

Trajectory<StateVector> evolve(const StateVector& psi0, const ModelParams& params, const RampSchedule& ramp,
                               double dt, double t_max, std::size_t stride) {
    const auto grid = TimeGrid::make(dt, t_max, stride);
    Trajectory<StateVector> out;
    evolve(psi0, params, ramp, grid, [&](std::size_t, double t, const Vector& psi) {
        out.times.push_back(t);
        out.samples.emplace_back(psi0.basis(), psi);
    });
    return out;
}

}  // namespace bjj
