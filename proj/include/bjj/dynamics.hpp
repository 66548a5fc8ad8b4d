#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "bjj/basis.hpp"
#include "bjj/krylov.hpp"
#include "bjj/model.hpp"

namespace bjj {

enum class RampKind { sudden, linear, piecewise };

/// Tunneling schedule J(t). After ramp_duration J stays at j_final.
class RampSchedule {
public:
    static RampSchedule sudden(double j_final);
    /// Linear interpolation from j_initial to j_final over duration > 0.
    static RampSchedule linear(double j_initial, double j_final, double duration);
    /// Piecewise-linear through (t, J) knots; first knot at t = 0, times strictly increasing.
    static RampSchedule piecewise(std::vector<std::pair<double, double>> knots);

    RampKind kind() const noexcept { return kind_; }
    double j_initial() const noexcept { return knots_.front().second; }
    double j_final() const noexcept { return knots_.back().second; }
    double ramp_duration() const noexcept { return knots_.back().first; }
    const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }
    /// Largest |J| reached anywhere on the schedule.
    double max_abs_j() const;

    double j_of_t(double t) const;

    bool operator==(const RampSchedule&) const = default;

private:
    RampSchedule(RampKind kind, std::vector<std::pair<double, double>> knots);

    RampKind kind_;
    std::vector<std::pair<double, double>> knots_;
};

/// 0.01 / max(max|J(t)|, N_max * max|E_c|), or 0.01 when both vanish.
double default_dt(const ModelParams& params, const RampSchedule& ramp);

/// Uniform grid of n_steps steps of size dt, sampled every `stride` steps
/// plus the final step.
struct TimeGrid {
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::size_t stride = 1;

    /// dt is shrunk slightly so that n_steps * dt == t_max exactly.
    static TimeGrid make(double dt, double t_max, std::size_t stride = 1);

    std::vector<std::size_t> sample_steps() const;
    double time(std::size_t step) const { return static_cast<double>(step) * dt; }
    double t_max() const { return time(n_steps); }
};

template <class Sample>
struct Trajectory {
    std::vector<double> times;
    std::vector<Sample> samples;

    std::size_t size() const noexcept { return times.size(); }
};

struct GroundState {
    double energy = 0.0;
    StateVector state;
};

/// Lowest eigenpair; residual |H psi - E psi| below 1e-9.
GroundState ground_state(const HermitianOperator& h, const LanczosOptions& options = {});

/// exp(-i dt h) psi by short-iteration Krylov (exact phases when h is diagonal).
StateVector propagator_step(const HermitianOperator& h, const StateVector& psi, double dt,
                            const KrylovOptions& options = {});

/// Steps a state under H(t) = interaction + J(t_mid) tunneling_unit [+ noise diagonal].
/// Constant segments on small bases reuse a cached dense propagator.
/// Not thread-safe; create one per worker (the Hamiltonian terms may be shared).
class Evolver {
public:
    static constexpr std::size_t dense_limit = 200;

    Evolver(std::shared_ptr<const HamiltonianTerms> terms, RampSchedule ramp, KrylovOptions options = {});

    const HamiltonianTerms& terms() const noexcept { return *terms_; }
    const RampSchedule& ramp() const noexcept { return ramp_; }

    /// Advances psi from t to t + dt. `extra_diagonal` (if given) is added to
    /// the Hamiltonian for this step only.
    void step(Vector& psi, double t, double dt, const Eigen::VectorXd* extra_diagonal = nullptr);

private:
    std::shared_ptr<const HamiltonianTerms> terms_;
    RampSchedule ramp_;
    KrylovWorkspace workspace_;
    std::optional<std::pair<double, double>> cached_key_;  // (J, dt)
    Eigen::MatrixXcd cached_unitary_;
};

using StepObserver = std::function<void(std::size_t step, double t, const Vector& psi)>;

/// Propagates psi0 across the grid, calling `observe` at every sampled step
/// (including step 0).
void evolve(const StateVector& psi0, const ModelParams& params, const RampSchedule& ramp, const TimeGrid& grid,
            const StepObserver& observe);

/// Convenience form storing every sampled state.
Trajectory<StateVector> evolve(const StateVector& psi0, const ModelParams& params, const RampSchedule& ramp,
                               double dt, double t_max, std::size_t stride = 1);

}  // namespace bjj
