#pragma once

#include <vector>

#include "bjj/model.hpp"

namespace bjj {

/// Ground-state predictions of H = a_+ n_+^2 + b phi_+^2 + a_- n_-^2 + b phi_-^2
/// with [phi, n] = i.
struct HarmonicPrediction {
    double var_n_plus = 0.0;
    double var_n_minus = 0.0;
    double var_phi_plus = 0.0;
    double var_phi_minus = 0.0;
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    /// a_+ / a_-, the ratio quoted for the dynamically reachable squeezing.
    double s_ratio = 0.0;
    /// 1 / (4 var_n_+ var_phi_-) = sqrt(a_+ / a_-) for the ground state.
    double s_product = 0.0;
    /// The minus mode is unstable (a_- <= 0); minus-mode fields and both s are +inf.
    bool diverges = false;
};

/// Throws InvalidParameter when a_+ <= 0 or b <= 0.
HarmonicPrediction harmonic_prediction(const HarmonicCoefficients& coeffs);

struct HarmonicComparisonRow {
    int n_atoms = 0;
    double s_exact = 0.0;    // from the exact ground state, number-phase criterion
    double s_l_exact = 0.0;  // from the exact ground state, angular-momentum criterion
    double s_product = 0.0;
    double s_ratio = 0.0;
};

/// Exact-vs-harmonic squeezing for N = n_min, n_min + step, ..., n_max with the
/// energies of `params` held fixed (N_A = N_B = N at each row).
std::vector<HarmonicComparisonRow> harmonic_vs_exact_report(const ModelParams& params, int n_max, int n_min = 2,
                                                            int step = 2);

}  // namespace bjj
