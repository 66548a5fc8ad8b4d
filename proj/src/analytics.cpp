#include "bjj/analytics.hpp"

#include <cmath>
#include <limits>

#include "bjj/criteria.hpp"
#include "bjj/dynamics.hpp"
#include "bjj/errors.hpp"

namespace bjj {

HarmonicPrediction harmonic_prediction(const HarmonicCoefficients& c) {
    if (!(c.a_plus > 0.0) || !(c.b > 0.0))
        throw InvalidParameter("harmonic prediction needs a_plus > 0 and b > 0");
    HarmonicPrediction p;
    p.var_n_plus = 0.5 * std::sqrt(c.b / c.a_plus);
    p.var_phi_plus = 0.5 * std::sqrt(c.a_plus / c.b);
    p.omega_plus = 2.0 * std::sqrt(c.a_plus * c.b);
    if (!(c.a_minus > 0.0)) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        p.diverges = true;
        p.var_n_minus = inf;
        p.var_phi_minus = 0.0;
        p.omega_minus = 0.0;
        p.s_ratio = inf;
        p.s_product = inf;
        return p;
    }
    p.var_n_minus = 0.5 * std::sqrt(c.b / c.a_minus);
    p.var_phi_minus = 0.5 * std::sqrt(c.a_minus / c.b);
    p.omega_minus = 2.0 * std::sqrt(c.a_minus * c.b);
    p.s_ratio = c.a_plus / c.a_minus;
    p.s_product = 1.0 / (4.0 * p.var_n_plus * p.var_phi_minus);
    return p;
}

std::vector<HarmonicComparisonRow> harmonic_vs_exact_report(const ModelParams& params, int n_max, int n_min,
                                                            int step) {
    if (n_min < 1 || n_max < n_min || step < 1) throw InvalidParameter("invalid atom-number range");
    std::vector<HarmonicComparisonRow> rows;
    for (int n = n_min; n <= n_max; n += step) {
        ModelParams p = params;
        p.n_atoms_a = n;
        p.n_atoms_b = n;
        const TwoSpinBasis basis(n, n);
        const auto gs = ground_state(build_exact_hamiltonian(p, basis));
        const auto report = epr_l_criterion(gs.state);
        const auto prediction = harmonic_prediction(harmonic_coefficients(p));
        rows.push_back({n, 1.0 / (4.0 * report.product_np), report.s_l, prediction.s_product, prediction.s_ratio});
    }
    return rows;
}

}  // namespace bjj
