#include "bjj/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "bjj/errors.hpp"

namespace bjj {

namespace {

/// Two passes of classical Gram-Schmidt against the first `count` columns.
void orthogonalize(const Eigen::MatrixXcd& basis, Eigen::Index count, Vector& w) {
    if (count == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
        const Vector coeffs = basis.leftCols(count).adjoint() * w;
        w.noalias() -= basis.leftCols(count) * coeffs;
    }
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tridiagonal_eigen(const std::vector<double>& alpha,
                                                                 const std::vector<double>& beta,
                                                                 Eigen::Index k) {
    Eigen::VectorXd diag(k), sub(std::max<Eigen::Index>(k - 1, 0));
    for (Eigen::Index i = 0; i < k; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < k; ++i) sub(i) = beta[static_cast<std::size_t>(i + 1)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (k == 1) {
        Eigen::MatrixXd t(1, 1);
        t(0, 0) = diag(0);
        es.compute(t);
    } else {
        es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    }
    return es;
}

}  // namespace

Eigen::Index LinearOperator::dimension() const {
    if (base) return base->rows();
    if (scaled) return scaled->rows();
    if (diagonal) return diagonal->size();
    return 0;
}

void LinearOperator::apply(const Vector& in, Vector& out) const {
    if (base) {
        out.noalias() = (*base) * in;
    } else {
        out.setZero(in.size());
    }
    if (scaled && scale != 0.0) out.noalias() += cplx(scale) * ((*scaled) * in);
    if (diagonal && diagonal_scale != 0.0)
        out.array() += diagonal_scale * diagonal->array().cast<cplx>() * in.array();
}

// ---------------------------------------------------------------- propagation

KrylovWorkspace::KrylovWorkspace(KrylovOptions options) : options_(options) {
    if (options_.max_dimension < 2) throw InvalidParameter("Krylov subspace must allow at least 2 vectors");
}

KrylovResult KrylovWorkspace::apply_exponential(const LinearOperator& h, const Vector& v, double dt) {
    const Eigen::Index dim = v.size();
    if (h.dimension() != dim) throw InvalidParameter("operator and vector dimensions differ");
    const double v_norm = v.norm();
    if (v_norm == 0.0 || dt == 0.0) return {v, 0, 0.0};

    const Eigen::Index m_max = std::min<Eigen::Index>(options_.max_dimension, dim);
    if (basis_.rows() != dim || basis_.cols() < m_max + 1) basis_.resize(dim, m_max + 1);
    work_.resize(dim);

    std::vector<double> alpha, beta{0.0};
    basis_.col(0) = v / v_norm;
    double scale_estimate = 0.0;

    for (Eigen::Index k = 0; k < m_max; ++k) {
        h.apply(basis_.col(k), work_);
        const double a = basis_.col(k).dot(work_).real();
        alpha.push_back(a);
        orthogonalize(basis_, k + 1, work_);
        const double b = work_.norm();
        beta.push_back(b);
        scale_estimate = std::max({scale_estimate, std::abs(a), b});

        const Eigen::Index size = k + 1;
        const auto es = tridiagonal_eigen(alpha, beta, size);
        const Eigen::VectorXcd phases =
            (es.eigenvalues().cast<cplx>() * cplx(0.0, -dt)).array().exp().matrix();
        const Eigen::VectorXcd y = es.eigenvectors().cast<cplx>() *
                                   (phases.asDiagonal() * es.eigenvectors().row(0).transpose().cast<cplx>());

        const bool invariant = b <= 1e-14 * std::max(1.0, scale_estimate);
        const double error = invariant ? 0.0 : b * std::abs(y(size - 1));
        if (invariant || error < options_.tolerance || size == dim) {
            KrylovResult out;
            out.state = v_norm * (basis_.leftCols(size) * y);
            out.subspace_dimension = static_cast<int>(size);
            out.error_estimate = error;
            return out;
        }
        if (k + 1 < m_max) basis_.col(k + 1) = work_ / b;
    }
    throw StepRejected("Krylov propagation did not reach tolerance with " + std::to_string(m_max) +
                       " vectors; reduce dt (currently " + std::to_string(dt) + ")");
}

// ---------------------------------------------------------------- ground state

Eigenpair lanczos_ground_state(const LinearOperator& h, const LanczosOptions& options) {
    const Eigen::Index dim = h.dimension();
    if (dim < 1) throw InvalidParameter("empty operator");
    const Eigen::Index m = std::min<Eigen::Index>(std::max(options.subspace, 2), dim);

    std::mt19937_64 engine(options.seed);
    std::normal_distribution<double> normal;
    auto random_vector = [&] {
        Vector r(dim);
        for (Eigen::Index i = 0; i < dim; ++i) r(i) = cplx(normal(engine), normal(engine));
        return r;
    };

    Eigen::MatrixXcd basis(dim, m);
    Vector w(dim);
    Vector start = random_vector();
    start /= start.norm();

    Eigenpair best;
    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        std::vector<double> alpha, beta{0.0};
        basis.col(0) = start;
        double scale_estimate = 0.0;
        Eigen::Index size = 0;
        for (Eigen::Index k = 0; k < m; ++k) {
            h.apply(basis.col(k), w);
            alpha.push_back(basis.col(k).dot(w).real());
            orthogonalize(basis, k + 1, w);
            double b = w.norm();
            scale_estimate = std::max({scale_estimate, std::abs(alpha.back()), b});
            size = k + 1;
            if (k + 1 == m) break;
            if (b <= 1e-12 * std::max(1.0, scale_estimate)) {
                // invariant subspace: continue with a fresh orthogonal direction
                w = random_vector();
                orthogonalize(basis, k + 1, w);
                basis.col(k + 1) = w / w.norm();
                beta.push_back(0.0);
                continue;
            }
            beta.push_back(b);
            basis.col(k + 1) = w / b;
        }

        const auto es = tridiagonal_eigen(alpha, beta, size);
        Vector psi = basis.leftCols(size) * es.eigenvectors().col(0).cast<cplx>();
        psi /= psi.norm();
        h.apply(psi, w);
        const double theta = psi.dot(w).real();
        const double residual = (w - theta * psi).norm();

        best.value = theta;
        best.vector = psi;
        best.residual = residual;
        best.restarts = restart;
        if (residual < options.residual_tolerance || size == dim) {
            Eigen::Index arg = 0;
            best.vector.cwiseAbs().maxCoeff(&arg);
            best.vector *= std::conj(best.vector(arg)) / std::abs(best.vector(arg));
            return best;
        }
        start = psi;
    }
    throw ConvergenceError("Lanczos ground state did not converge after " + std::to_string(options.max_restarts) +
                           " restarts (residual " + std::to_string(best.residual) + ")");
}

}  // namespace bjj
