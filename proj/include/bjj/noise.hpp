#pragma once

// Proper dephasing from stochastic level shifts of each species in each well.
// The four shifts are driven by two independent white processes eta_L, eta_R
// (variance diffusion_rate/dt per step) with the symmetrised-environment ratio
//   eps_A,w = (1 - xi) eta_w,  eps_B,w = (1 + xi) eta_w.
// Up to a c-number the per-step Hamiltonian gains
//   (eta_L - eta_R) [(1 - xi) Jz_A + (1 + xi) Jz_B].

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bjj/criteria.hpp"
#include "bjj/dynamics.hpp"

namespace bjj {

struct NoiseModel {
    double xi = 0.0;
    double diffusion_rate = 0.0;
    int n_trajectories = 1;
    std::uint64_t master_seed = 0;

    void validate() const;
    std::vector<std::string> warnings() const;

    bool operator==(const NoiseModel&) const = default;
};

struct NoiseShifts {
    double eps_al = 0.0;
    double eps_bl = 0.0;
    double eps_ar = 0.0;
    double eps_br = 0.0;
};

/// Seed of trajectory `index`, derived from the master seed by a splitmix64
/// counter so streams do not depend on how trajectories are scheduled.
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed) : engine_(seed) {}
    double standard_normal() { return normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

NoiseShifts sample_noise_step(const NoiseModel& model, NoiseStream& rng, double dt);

/// Derived quantities that can be averaged over an ensemble of trajectories.
enum class Quantity {
    mean_lx,
    var_ly_plus,
    var_ly_minus,
    var_lz_plus,
    var_lz_minus,
    epr_l_value,
    product_np,
    epsilon,
    var_n_plus,
    var_n_minus,
    var_phi_plus,
    var_phi_minus,
    mean_jx_a,
    mean_jx_b,
    mean_jz_a,
    mean_jz_b,
};

std::string_view to_string(Quantity q);
std::optional<Quantity> quantity_from_string(std::string_view name);
/// May throw PhaseReferenceLost for phase-referenced quantities.
double evaluate(Quantity q, const SpinMoments& m);

/// Per-trajectory moments on the sample grid; samples[trajectory][sample].
struct MomentEnsemble {
    int n_atoms_a = 0;
    int n_atoms_b = 0;
    std::vector<double> times;
    std::vector<std::vector<std::array<double, SpinMoments::field_count>>> samples;

    std::size_t n_trajectories() const noexcept { return samples.size(); }
    /// Moments of the ensemble-averaged (mixed) state, summed in trajectory order.
    SpinMoments mean(std::size_t sample) const;
    /// f(mean moments) and its jackknife standard error (NaN for one trajectory
    /// or where a leave-one-out evaluation is undefined).
    std::pair<double, double> estimate(std::size_t sample, const std::function<double(const SpinMoments&)>& f) const;
};

MomentEnsemble sample_dephased_moments(const StateVector& psi0, const ModelParams& params, const RampSchedule& ramp,
                                       const NoiseModel& model, const TimeGrid& grid, int threads = 1);

struct EnsembleTrajectory {
    std::vector<double> times;
    std::vector<Quantity> quantities;
    std::vector<std::vector<double>> mean;       // [quantity][sample]
    std::vector<std::vector<double>> std_error;  // [quantity][sample]
    int n_trajectories = 0;

    const std::vector<double>& series(Quantity q) const;
    const std::vector<double>& errors(Quantity q) const;
};

/// Ensemble averages of the requested quantities (mixed-state moments, so
/// variances include the trajectory-to-trajectory spread).
EnsembleTrajectory evolve_dephased(const StateVector& psi0, const ModelParams& params, const RampSchedule& ramp,
                                   const NoiseModel& model, const TimeGrid& grid,
                                   const std::vector<Quantity>& quantities, int threads = 1);

}  // namespace bjj
