#pragma once

// End-to-end protocols.
//
// Global scheme: both species start in the theta = pi/2 coherent state (split
// condensate after a perfect pi/2 pulse) and evolve under the coupled-pendula
// Hamiltonian while the barrier is raised (J(t) from the ramp).
//
// Local scheme: each vibrational mode is a single spin-N/2 twisted by
// chi Jz^2; the beam-splitter projection maps single-mode squeezing s onto the
// two-mode variances var(n_+) = (N/4)/s and var(phi_-) = (1/N)/s.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bjj/criteria.hpp"
#include "bjj/dynamics.hpp"
#include "bjj/model.hpp"
#include "bjj/noise.hpp"

namespace bjj {

/// Ramp description relative to the final tunneling model.tunneling_j.
struct RampSpec {
    RampKind kind = RampKind::sudden;
    /// Linear ramps only; NaN selects 10 * j_final.
    double j_initial = std::numeric_limits<double>::quiet_NaN();
    double duration = 0.0;
    /// Piecewise ramps only; the last knot must end at j_final.
    std::vector<std::pair<double, double>> knots;

    RampSchedule schedule(double j_final) const;

    bool operator==(const RampSpec& o) const;
};

std::string_view to_string(RampKind kind);
std::optional<RampKind> ramp_kind_from_string(std::string_view name);

struct InitialStateSpec {
    double theta_a = 1.5707963267948966;
    double phi_a = 0.0;
    double theta_b = 1.5707963267948966;
    double phi_b = 0.0;

    bool operator==(const InitialStateSpec&) const = default;
};

struct GlobalSchemeConfig {
    ModelParams params;
    RampSpec ramp;
    /// Unset: default_dt(params, ramp).
    std::optional<double> dt;
    double t_max = 0.0;
    std::size_t sample_stride = 1;
    std::optional<NoiseModel> noise;
    InitialStateSpec initial;
    /// Also run the same protocol with ec_ab = 0.
    bool uncoupled_reference = false;
    int threads = 1;

    void validate() const;
    double resolved_dt() const;
    TimeGrid grid() const;
    bool operator==(const GlobalSchemeConfig&) const = default;
};

/// Standard errors of the ensemble (NaN without noise).
struct EprErrors {
    double mean_lx, var_ly_plus, var_ly_minus, var_lz_plus, var_lz_minus, epr_l_value, s_l, product_np, epsilon;
};

struct GlobalRow {
    double t = 0.0;
    /// False when the phase reference was lost; the report then holds NaN.
    bool defined = true;
    EprReport report;
    EprErrors errors;
    double mean_jz_a = 0.0;
    double mean_jz_b = 0.0;
};

struct GlobalResult {
    std::vector<GlobalRow> rows;
    std::vector<GlobalRow> uncoupled;  // empty unless requested
};

GlobalResult run_global_scheme(const GlobalSchemeConfig& cfg);

enum class Objective { epr_l, epsilon };

std::string_view to_string(Objective o);
std::optional<Objective> objective_from_string(std::string_view name);

/// Minimum over defined rows of the objective and the time it is reached;
/// (NaN, NaN) if no row is defined.
std::pair<double, double> minimum_over_time(const std::vector<GlobalRow>& rows, Objective objective);

struct LocalSchemeConfig {
    int n_atoms = 100;
    double chi = 0.0;
    double t_hold = 0.0;
    /// Samples on [0, t_hold]; 1 evaluates t_hold only.
    std::size_t scan_points = 101;

    void validate() const;
    bool operator==(const LocalSchemeConfig&) const = default;
};

struct LocalRow {
    double t = 0.0;
    double mean_jx = 0.0;
    double var_min = 0.0;  // transverse variance along the optimal quadrature
    double var_max = 0.0;
    double s_single = 1.0;
    double var_n_plus = 0.0;
    double var_phi_minus = 0.0;
    bool phase_reference_lost = false;
};

std::vector<LocalRow> run_local_scheme(const LocalSchemeConfig& cfg);

/// chi = E_aa + E_bb - 2 E_ab.
double twisting_rate(const ModelParams& params);

enum class InitialKind { coherent, same_quadrature_squeezed, cross_quadrature_squeezed };

std::string_view to_string(InitialKind kind);

struct SqueezedInputConfig {
    int n_atoms = 10;
    double chi = 0.1;
    double t_squeeze = 1.0;

    void validate() const;
};

/// Single-species x-polarised state twisted for t_squeeze and rotated about x
/// so that its narrow quadrature lies along z (number-squeezed) or y
/// (phase-squeezed).
Vector squeezed_spin_state(int n_atoms, double chi, double t_squeeze, bool number_squeezed);

/// Two-species input of the given kind: same-quadrature squeezes both species in
/// number, cross-quadrature squeezes A in number and B in phase.
StateVector initial_state(InitialKind kind, const SqueezedInputConfig& cfg);

struct InitialComparison {
    double coherent = 0.0;
    double same_quadrature = 0.0;
    double cross_quadrature = 0.0;
    bool coherent_not_above_same = false;
    bool coherent_below_cross = false;
};

/// Angular-momentum criterion values of the three inputs at t = 0.
InitialComparison compare_initial_states(const SqueezedInputConfig& cfg);

}  // namespace bjj
