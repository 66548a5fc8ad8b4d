#include "bjj/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "bjj/errors.hpp"

namespace bjj {

namespace {

// second-moment round-off can leave tiny negatives
double clamp_variance(double v) { return std::max(v, 0.0); }

struct PairCovariance {
    double var_a, var_b, cov;
};

PairCovariance covariance_y(const SpinMoments& m) {
    return {clamp_variance(m.yy_aa - m.mean_a[1] * m.mean_a[1]), clamp_variance(m.yy_bb - m.mean_b[1] * m.mean_b[1]),
            m.yy_ab - m.mean_a[1] * m.mean_b[1]};
}

PairCovariance covariance_z(const SpinMoments& m) {
    return {clamp_variance(m.zz_aa - m.mean_a[2] * m.mean_a[2]), clamp_variance(m.zz_bb - m.mean_b[2] * m.mean_b[2]),
            m.zz_ab - m.mean_a[2] * m.mean_b[2]};
}

/// var(w_a X_a + sign w_b X_b)
double combined(const PairCovariance& c, double wa, double wb, double sign) {
    return clamp_variance(wa * wa * c.var_a + wb * wb * c.var_b + 2.0 * sign * wa * wb * c.cov);
}

std::pair<double, double> species_reference(const SpinMoments& m) {
    const double xa = std::abs(m.mean_a[0]);
    const double xb = std::abs(m.mean_b[0]);
    if (xa < 1e-9 * m.n_atoms_a || xb < 1e-9 * m.n_atoms_b)
        throw PhaseReferenceLost("|<Jx>| of a species vanished; phase proxy undefined");
    return {xa, xb};
}

}  // namespace

std::string_view to_string(Branch b) { return b == Branch::plus_minus ? "+-" : "-+"; }

std::array<double, SpinMoments::field_count> SpinMoments::as_array() const {
    return {mean_a[0], mean_a[1], mean_a[2], mean_b[0], mean_b[1], mean_b[2],
            yy_aa,     yy_bb,     yy_ab,     zz_aa,     zz_bb,     zz_ab};
}

SpinMoments SpinMoments::from_array(int n_a, int n_b, const std::array<double, field_count>& v) {
    SpinMoments m;
    m.n_atoms_a = n_a;
    m.n_atoms_b = n_b;
    m.mean_a = {v[0], v[1], v[2]};
    m.mean_b = {v[3], v[4], v[5]};
    m.yy_aa = v[6];
    m.yy_bb = v[7];
    m.yy_ab = v[8];
    m.zz_aa = v[9];
    m.zz_bb = v[10];
    m.zz_ab = v[11];
    return m;
}

MomentEvaluator::MomentEvaluator(const TwoSpinBasis& basis) : basis_(basis) {
    const auto a = spin_operators(basis, Species::A);
    const auto b = spin_operators(basis, Species::B);
    jx_a_ = a.jx.matrix();
    jy_a_ = a.jy.matrix();
    jx_b_ = b.jx.matrix();
    jy_b_ = b.jy.matrix();
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    m_a_.resize(dim);
    m_b_.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        m_a_(i) = basis.m_a(static_cast<std::size_t>(i));
        m_b_(i) = basis.m_b(static_cast<std::size_t>(i));
    }
}

SpinMoments MomentEvaluator::operator()(const Vector& psi) const {
    if (static_cast<std::size_t>(psi.size()) != basis_.dimension())
        throw InvalidParameter("state size does not match basis dimension");
    SpinMoments m;
    m.n_atoms_a = basis_.n_atoms_a();
    m.n_atoms_b = basis_.n_atoms_b();
    const Vector ya = jy_a_ * psi;
    const Vector yb = jy_b_ * psi;
    const Eigen::VectorXd prob = psi.cwiseAbs2();
    m.mean_a = {psi.dot(jx_a_ * psi).real(), psi.dot(ya).real(), prob.dot(m_a_)};
    m.mean_b = {psi.dot(jx_b_ * psi).real(), psi.dot(yb).real(), prob.dot(m_b_)};
    m.yy_aa = ya.squaredNorm();
    m.yy_bb = yb.squaredNorm();
    m.yy_ab = ya.dot(yb).real();
    m.zz_aa = prob.dot(m_a_.cwiseAbs2());
    m.zz_bb = prob.dot(m_b_.cwiseAbs2());
    m.zz_ab = prob.dot(m_a_.cwiseProduct(m_b_));
    return m;
}

SpinMoments spin_moments(const StateVector& psi) { return MomentEvaluator(psi.basis())(psi.amplitudes()); }

CollectiveOperators collective_operators(const TwoSpinBasis& basis) {
    const auto a = spin_operators(basis, Species::A);
    const auto b = spin_operators(basis, Species::B);
    return {a.jx + b.jx, a.jy + b.jy, a.jy - b.jy, a.jz + b.jz, a.jz - b.jz};
}

double variance(const StateVector& psi, const HermitianOperator& op) {
    if (!(psi.basis() == op.basis())) throw InvalidParameter("operator and state live on different bases");
    const Vector applied = op.matrix() * psi.amplitudes();
    const double mean = psi.amplitudes().dot(applied).real();
    return clamp_variance(applied.squaredNorm() - mean * mean);
}

NumberPhaseVariances number_phase_variances(const SpinMoments& m) {
    const auto [xa, xb] = species_reference(m);
    const auto cy = covariance_y(m);
    const auto cz = covariance_z(m);
    const double r = std::sqrt(0.5);
    NumberPhaseVariances v;
    v.var_n_plus = combined(cz, r, r, +1.0);
    v.var_n_minus = combined(cz, r, r, -1.0);
    v.var_phi_plus = combined(cy, r / xa, r / xb, +1.0);
    v.var_phi_minus = combined(cy, r / xa, r / xb, -1.0);
    return v;
}

EprReport epr_report(const SpinMoments& m) {
    const double n_total = m.n_atoms_a + m.n_atoms_b;
    EprReport r;
    r.mean_lx = m.mean_a[0] + m.mean_b[0];
    if (std::abs(r.mean_lx) < 1e-9 * n_total)
        throw PhaseReferenceLost("|<Lx>| vanished; angular-momentum criterion undefined");

    const auto cy = covariance_y(m);
    const auto cz = covariance_z(m);
    r.var_ly_plus = combined(cy, 1.0, 1.0, +1.0);
    r.var_ly_minus = combined(cy, 1.0, 1.0, -1.0);
    r.var_lz_plus = combined(cz, 1.0, 1.0, +1.0);
    r.var_lz_minus = combined(cz, 1.0, 1.0, -1.0);

    const double lx2 = r.mean_lx * r.mean_lx;
    r.epr_l_plus_minus = r.var_ly_plus * r.var_lz_minus / lx2;
    r.epr_l_minus_plus = r.var_ly_minus * r.var_lz_plus / lx2;
    r.branch = r.epr_l_plus_minus <= r.epr_l_minus_plus ? Branch::plus_minus : Branch::minus_plus;
    r.epr_l_value = std::min(r.epr_l_plus_minus, r.epr_l_minus_plus);
    r.s_l = 1.0 / (4.0 * r.epr_l_value);

    const auto np = number_phase_variances(m);
    const double np_pm = np.var_n_minus * np.var_phi_plus;
    const double np_mp = np.var_n_plus * np.var_phi_minus;
    r.np_branch = np_pm < np_mp ? Branch::plus_minus : Branch::minus_plus;
    r.product_np = std::min(np_pm, np_mp);

    const auto [xa, xb] = species_reference(m);
    const double r2 = std::sqrt(0.5);
    const double wa = r2 / std::sqrt(xa);
    const double wb = r2 / std::sqrt(xb);
    const double eps_pm = combined(cz, wa, wb, -1.0) + combined(cy, wa, wb, +1.0);
    const double eps_mp = combined(cz, wa, wb, +1.0) + combined(cy, wa, wb, -1.0);
    r.epsilon = std::min(eps_pm, eps_mp) - 1.0;
    return r;
}

EprReport epr_l_criterion(const StateVector& psi) { return epr_report(spin_moments(psi)); }

double epr_number_phase(const StateVector& psi) {
    const auto np = number_phase_variances(spin_moments(psi));
    return std::min(np.var_n_minus * np.var_phi_plus, np.var_n_plus * np.var_phi_minus);
}

double inseparability_epsilon(const StateVector& psi) { return epr_l_criterion(psi).epsilon; }

}  // namespace bjj
