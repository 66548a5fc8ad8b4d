#pragma once

// EPR correlation measures on a state of the two-species system.
//
// Angular-momentum criterion:
//   V = var(L_y+-) var(L_z-+) / <L_x>^2 = 1/(4 s_L), entangled iff V < 1/4,
// with unnormalised sums L_y+- = Jy_A +- Jy_B etc.
// Number-phase criterion:
//   var(n_+-) var(phi_-+) with n_+- = (n_A +- n_B)/sqrt2, phi_+- likewise, and
//   the linearised phase proxy phi_a = Jy_a / |<Jx_a>|.
// Inseparability:
//   eps = var(x_+-) + var(p_-+) - 1 with x_a = Jz_a/sqrt|<Jx_a>|,
//   p_a = Jy_a/sqrt|<Jx_a>| so a coherent state gives exactly 0.
// Every measure evaluates both pairings and keeps the smaller one.

#include <array>
#include <string_view>

#include "bjj/basis.hpp"

namespace bjj {

/// Which pairing of sum/difference variables attained the minimum.
/// plus_minus: (L_y+, L_z-) or (n_-, phi_+); minus_plus: (L_y-, L_z+) or (n_+, phi_-).
enum class Branch { plus_minus, minus_plus };

std::string_view to_string(Branch b);

/// First and second moments sufficient for every criterion. Averaging moments
/// over stochastic trajectories gives the moments of the mixed state.
struct SpinMoments {
    int n_atoms_a = 0;
    int n_atoms_b = 0;
    std::array<double, 3> mean_a{};  // <Jx_A>, <Jy_A>, <Jz_A>
    std::array<double, 3> mean_b{};
    double yy_aa = 0.0, yy_bb = 0.0, yy_ab = 0.0;  // <Jy_A^2>, <Jy_B^2>, <Jy_A Jy_B>
    double zz_aa = 0.0, zz_bb = 0.0, zz_ab = 0.0;

    static constexpr std::size_t field_count = 12;
    std::array<double, field_count> as_array() const;
    static SpinMoments from_array(int n_a, int n_b, const std::array<double, field_count>& values);
};

/// Caches the single-species operators of a basis for repeated moment evaluation.
class MomentEvaluator {
public:
    explicit MomentEvaluator(const TwoSpinBasis& basis);

    SpinMoments operator()(const Vector& psi) const;
    const TwoSpinBasis& basis() const noexcept { return basis_; }

private:
    TwoSpinBasis basis_;
    SparseMatrix jx_a_, jy_a_, jx_b_, jy_b_;
    Eigen::VectorXd m_a_, m_b_;
};

SpinMoments spin_moments(const StateVector& psi);

struct EprReport {
    double mean_lx = 0.0;
    double var_ly_plus = 0.0;
    double var_ly_minus = 0.0;
    double var_lz_plus = 0.0;
    double var_lz_minus = 0.0;
    double epr_l_plus_minus = 0.0;  // var(Ly+) var(Lz-) / <Lx>^2
    double epr_l_minus_plus = 0.0;  // var(Ly-) var(Lz+) / <Lx>^2
    double epr_l_value = 0.0;       // min of the two = 1/(4 s_L)
    double s_l = 0.0;
    Branch branch = Branch::plus_minus;
    double product_np = 0.0;
    Branch np_branch = Branch::minus_plus;
    double epsilon = 0.0;

    bool entangled() const { return epr_l_value < 0.25; }
};

/// Number-phase variances in the (1/sqrt2) collective convention.
struct NumberPhaseVariances {
    double var_n_plus = 0.0;
    double var_n_minus = 0.0;
    double var_phi_plus = 0.0;
    double var_phi_minus = 0.0;
};

struct CollectiveOperators {
    HermitianOperator lx;
    HermitianOperator ly_plus;
    HermitianOperator ly_minus;
    HermitianOperator lz_plus;
    HermitianOperator lz_minus;
};

CollectiveOperators collective_operators(const TwoSpinBasis& basis);

/// <op^2> - <op>^2, clamped at 0.
double variance(const StateVector& psi, const HermitianOperator& op);

/// Throw PhaseReferenceLost when |<Lx>| (or a species' |<Jx>|) drops below
/// 1e-9 N.
EprReport epr_report(const SpinMoments& m);
NumberPhaseVariances number_phase_variances(const SpinMoments& m);

EprReport epr_l_criterion(const StateVector& psi);
double epr_number_phase(const StateVector& psi);
double inseparability_epsilon(const StateVector& psi);

}  // namespace bjj
