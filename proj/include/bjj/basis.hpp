#pragma once

// Joint number-difference basis of two pseudo-spin species and the
// angular-momentum operators acting on it.
//
// Each species alpha holds N_alpha atoms distributed over a left and a right
// well. In the Schwinger picture the pair of modes is a spin of length
// N_alpha/2 with Jz = (n_L - n_R)/2 and tunneling -J(a_L^+ a_R + h.c.) = -2J Jx.
// Basis states |m_a, m_b> are stored row-major over (m_a, m_b), m ascending.

#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bjj {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;

enum class Species { A, B };

class TwoSpinBasis {
public:
    /// Throws InvalidParameter unless both atom numbers are >= 1.
    TwoSpinBasis(int n_atoms_a, int n_atoms_b);

    int n_atoms_a() const noexcept { return n_atoms_a_; }
    int n_atoms_b() const noexcept { return n_atoms_b_; }
    int n_atoms(Species s) const noexcept { return s == Species::A ? n_atoms_a_ : n_atoms_b_; }

    std::size_t dimension() const noexcept;
    std::size_t factor_dimension(Species s) const noexcept {
        return static_cast<std::size_t>(n_atoms(s)) + 1;
    }

    /// Levels run 0..N_alpha and correspond to m = level - N_alpha/2.
    std::size_t index(int level_a, int level_b) const;
    std::pair<int, int> levels(std::size_t index) const;
    double m_a(std::size_t index) const;
    double m_b(std::size_t index) const;

    bool operator==(const TwoSpinBasis&) const = default;

private:
    int n_atoms_a_;
    int n_atoms_b_;
};

/// Sparse Hermitian operator on a TwoSpinBasis. The stored matrix is exactly
/// Hermitian: the constructor checks Hermiticity to a relative 1e-12 and then
/// keeps (M + M^+)/2, whose mirrored entries are bitwise conjugate.
class HermitianOperator {
public:
    HermitianOperator(TwoSpinBasis basis, const SparseMatrix& matrix);

    static HermitianOperator zero(const TwoSpinBasis& basis);
    static HermitianOperator identity(const TwoSpinBasis& basis);

    const TwoSpinBasis& basis() const noexcept { return basis_; }
    const SparseMatrix& matrix() const noexcept { return matrix_; }
    std::size_t dimension() const noexcept { return basis_.dimension(); }

    cplx entry(std::size_t row, std::size_t col) const;
    Vector apply(const Vector& v) const { return matrix_ * v; }
    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }

    HermitianOperator operator+(const HermitianOperator& rhs) const;
    HermitianOperator operator-(const HermitianOperator& rhs) const;
    HermitianOperator operator*(double scale) const;
    /// O^2, Hermitian again.
    HermitianOperator squared() const;

private:
    TwoSpinBasis basis_;
    SparseMatrix matrix_;
};

inline HermitianOperator operator*(double scale, const HermitianOperator& op) { return op * scale; }

/// Complex amplitudes on a TwoSpinBasis with unit norm (to 1e-9).
class StateVector {
public:
    /// Throws InvalidParameter if the size mismatches or |norm - 1| > 1e-9.
    StateVector(TwoSpinBasis basis, Vector amplitudes);

    /// Rescales a nonzero vector to unit norm.
    static StateVector normalized(TwoSpinBasis basis, Vector amplitudes);
    static StateVector basis_state(const TwoSpinBasis& basis, int level_a, int level_b);

    const TwoSpinBasis& basis() const noexcept { return basis_; }
    const Vector& amplitudes() const noexcept { return amplitudes_; }
    std::size_t dimension() const noexcept { return basis_.dimension(); }
    double norm() const { return amplitudes_.norm(); }

    cplx overlap(const StateVector& other) const;
    double expectation(const HermitianOperator& op) const;

private:
    TwoSpinBasis basis_;
    Vector amplitudes_;
};

/// Spin-(N/2) matrices on the (N+1)-dimensional single-species space,
/// rows ordered by ascending m.
struct SpinMatrices {
    SparseMatrix jx;
    SparseMatrix jy;
    SparseMatrix jz;
};

SpinMatrices spin_matrices(int n_atoms);

/// Single-species SU(2) coherent state |theta, phi> with
/// <J> = (N/2)(sin theta cos phi, sin theta sin phi, cos theta).
Vector coherent_amplitudes(int n_atoms, double theta, double phi);

struct SpinOperators {
    HermitianOperator jx;
    HermitianOperator jy;
    HermitianOperator jz;
};

/// Jx, Jy, Jz of one species embedded as (op (x) 1) or (1 (x) op).
SpinOperators spin_operators(const TwoSpinBasis& basis, Species species);

/// Embeds a single-species matrix into the joint basis.
SparseMatrix embed(const TwoSpinBasis& basis, Species species, const SparseMatrix& factor);

/// Product of two SU(2) coherent states.
StateVector coherent_spin_state(const TwoSpinBasis& basis, double theta_a, double phi_a,
                                double theta_b, double phi_b);

}  // namespace bjj
