#include "bjj/basis.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "bjj/errors.hpp"

namespace bjj {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& triplets) {
    SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

double max_abs(const SparseMatrix& m) {
    double out = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : std::runtime_error([&] {
          std::string joined = "invalid configuration";
          for (const auto& m : messages) joined += "\n  " + m;
          return joined;
      }()),
      messages_(std::move(messages)) {}

// ---------------------------------------------------------------- basis

TwoSpinBasis::TwoSpinBasis(int n_atoms_a, int n_atoms_b) : n_atoms_a_(n_atoms_a), n_atoms_b_(n_atoms_b) {
    if (n_atoms_a < 1 || n_atoms_b < 1)
        throw InvalidParameter("atom numbers must be >= 1 (got N_A=" + std::to_string(n_atoms_a) +
                               ", N_B=" + std::to_string(n_atoms_b) + ")");
}

std::size_t TwoSpinBasis::dimension() const noexcept {
    return factor_dimension(Species::A) * factor_dimension(Species::B);
}

std::size_t TwoSpinBasis::index(int level_a, int level_b) const {
    if (level_a < 0 || level_a > n_atoms_a_ || level_b < 0 || level_b > n_atoms_b_)
        throw std::out_of_range("basis level out of range");
    return static_cast<std::size_t>(level_a) * factor_dimension(Species::B) + static_cast<std::size_t>(level_b);
}

std::pair<int, int> TwoSpinBasis::levels(std::size_t index) const {
    if (index >= dimension()) throw std::out_of_range("basis index out of range");
    const auto db = factor_dimension(Species::B);
    return {static_cast<int>(index / db), static_cast<int>(index % db)};
}

double TwoSpinBasis::m_a(std::size_t index) const { return levels(index).first - 0.5 * n_atoms_a_; }
double TwoSpinBasis::m_b(std::size_t index) const { return levels(index).second - 0.5 * n_atoms_b_; }

// ---------------------------------------------------------------- operators

HermitianOperator::HermitianOperator(TwoSpinBasis basis, const SparseMatrix& matrix) : basis_(basis) {
    const auto dim = static_cast<Eigen::Index>(basis_.dimension());
    if (matrix.rows() != dim || matrix.cols() != dim)
        throw InvalidParameter("operator shape " + std::to_string(matrix.rows()) + "x" +
                               std::to_string(matrix.cols()) + " does not match basis dimension " +
                               std::to_string(dim));
    const SparseMatrix adj = matrix.adjoint();
    const double scale = std::max(1.0, max_abs(matrix));
    if (max_abs(matrix - adj) > 1e-12 * scale) throw InvalidParameter("operator is not Hermitian");
    matrix_ = 0.5 * (matrix + adj);
    matrix_.prune(cplx(0.0));
    matrix_.makeCompressed();
}

HermitianOperator HermitianOperator::zero(const TwoSpinBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    return HermitianOperator(basis, SparseMatrix(dim, dim));
}

HermitianOperator HermitianOperator::identity(const TwoSpinBasis& basis) {
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    SparseMatrix id(dim, dim);
    id.setIdentity();
    return HermitianOperator(basis, id);
}

cplx HermitianOperator::entry(std::size_t row, std::size_t col) const {
    if (row >= dimension() || col >= dimension()) throw std::out_of_range("operator entry out of range");
    return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& rhs) const {
    if (!(basis_ == rhs.basis_)) throw InvalidParameter("operators live on different bases");
    return HermitianOperator(basis_, SparseMatrix(matrix_ + rhs.matrix_));
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& rhs) const {
    if (!(basis_ == rhs.basis_)) throw InvalidParameter("operators live on different bases");
    return HermitianOperator(basis_, SparseMatrix(matrix_ - rhs.matrix_));
}

HermitianOperator HermitianOperator::operator*(double scale) const {
    return HermitianOperator(basis_, SparseMatrix(matrix_ * cplx(scale)));
}

HermitianOperator HermitianOperator::squared() const {
    return HermitianOperator(basis_, SparseMatrix(matrix_ * matrix_));
}

// ---------------------------------------------------------------- states

StateVector::StateVector(TwoSpinBasis basis, Vector amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_.dimension())
        throw InvalidParameter("state size does not match basis dimension");
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-9) throw InvalidParameter("state is not normalized");
}

StateVector StateVector::normalized(TwoSpinBasis basis, Vector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidParameter("cannot normalize a zero or non-finite vector");
    amplitudes /= n;
    return StateVector(basis, std::move(amplitudes));
}

StateVector StateVector::basis_state(const TwoSpinBasis& basis, int level_a, int level_b) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    v(static_cast<Eigen::Index>(basis.index(level_a, level_b))) = 1.0;
    return StateVector(basis, std::move(v));
}

cplx StateVector::overlap(const StateVector& other) const {
    if (!(basis_ == other.basis_)) throw InvalidParameter("states live on different bases");
    return amplitudes_.dot(other.amplitudes_);
}

double StateVector::expectation(const HermitianOperator& op) const {
    if (!(basis_ == op.basis())) throw InvalidParameter("operator and state live on different bases");
    return amplitudes_.dot(op.matrix() * amplitudes_).real();
}

// ---------------------------------------------------------------- spin algebra

SpinMatrices spin_matrices(int n_atoms) {
    if (n_atoms < 1) throw InvalidParameter("spin factor needs at least one atom");
    const double j = 0.5 * n_atoms;
    const auto dim = static_cast<std::size_t>(n_atoms) + 1;
    std::vector<Triplet> tx, ty, tz;
    for (int level = 0; level <= n_atoms; ++level) {
        const double m = level - j;
        tz.emplace_back(level, level, m);
        if (level < n_atoms) {
            // <m+1|J+|m>
            const double jp = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
            tx.emplace_back(level + 1, level, 0.5 * jp);
            tx.emplace_back(level, level + 1, 0.5 * jp);
            ty.emplace_back(level + 1, level, cplx(0.0, -0.5 * jp));
            ty.emplace_back(level, level + 1, cplx(0.0, 0.5 * jp));
        }
    }
    return {from_triplets(dim, tx), from_triplets(dim, ty), from_triplets(dim, tz)};
}

Vector coherent_amplitudes(int n_atoms, double theta, double phi) {
    if (n_atoms < 1) throw InvalidParameter("spin factor needs at least one atom");
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw InvalidParameter("coherent-state angles must be finite");
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const double log_n_fact = std::lgamma(n_atoms + 1.0);
    Vector out(n_atoms + 1);
    for (int k = 0; k <= n_atoms; ++k) {
        // k atoms in the left well: m = k - N/2
        const int rest = n_atoms - k;
        double magnitude;
        if ((k > 0 && c == 0.0) || (rest > 0 && s == 0.0)) {
            magnitude = 0.0;
        } else {
            const double log_binom = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(rest + 1.0);
            const double log_mag = 0.5 * log_binom + (k > 0 ? k * std::log(std::abs(c)) : 0.0) +
                                   (rest > 0 ? rest * std::log(std::abs(s)) : 0.0);
            magnitude = std::exp(log_mag);
            if (c < 0.0 && (k % 2 == 1)) magnitude = -magnitude;
            if (s < 0.0 && (rest % 2 == 1)) magnitude = -magnitude;
        }
        out(k) = magnitude * std::polar(1.0, rest * phi);
    }
    return out / out.norm();
}

SparseMatrix embed(const TwoSpinBasis& basis, Species species, const SparseMatrix& factor) {
    const auto da = static_cast<Eigen::Index>(basis.factor_dimension(Species::A));
    const auto db = static_cast<Eigen::Index>(basis.factor_dimension(Species::B));
    const auto expected = species == Species::A ? da : db;
    if (factor.rows() != expected || factor.cols() != expected)
        throw InvalidParameter("factor matrix does not match species dimension");
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(factor.nonZeros() * (species == Species::A ? db : da)));
    for (Eigen::Index r = 0; r < factor.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(factor, r); it; ++it) {
            if (species == Species::A) {
                for (Eigen::Index b = 0; b < db; ++b) trips.emplace_back(it.row() * db + b, it.col() * db + b, it.value());
            } else {
                for (Eigen::Index a = 0; a < da; ++a) trips.emplace_back(a * db + it.row(), a * db + it.col(), it.value());
            }
        }
    }
    return from_triplets(basis.dimension(), trips);
}

SpinOperators spin_operators(const TwoSpinBasis& basis, Species species) {
    const auto m = spin_matrices(basis.n_atoms(species));
    return {HermitianOperator(basis, embed(basis, species, m.jx)),
            HermitianOperator(basis, embed(basis, species, m.jy)),
            HermitianOperator(basis, embed(basis, species, m.jz))};
}

StateVector coherent_spin_state(const TwoSpinBasis& basis, double theta_a, double phi_a, double theta_b,
                                double phi_b) {
    const Vector a = coherent_amplitudes(basis.n_atoms_a(), theta_a, phi_a);
    const Vector b = coherent_amplitudes(basis.n_atoms_b(), theta_b, phi_b);
    Vector v(static_cast<Eigen::Index>(basis.dimension()));
    for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a(i) * b;
    return StateVector::normalized(basis, std::move(v));
}

}  // namespace bjj
