#pragma once

// Lanczos-based kernels: short-iteration Krylov propagation exp(-i dt H) v and
// an explicitly restarted ground-state solver. Both work on a matrix-free
// operator so that time-dependent tunneling and per-step diagonal noise never
// require rebuilding a sparse matrix.

#include <cstdint>

#include "bjj/basis.hpp"

namespace bjj {

/// H = base + scale * scaled + diagonal_scale * diag(diagonal).
/// Unused parts are left null. All parts must be Hermitian.
struct LinearOperator {
    const SparseMatrix* base = nullptr;
    const SparseMatrix* scaled = nullptr;
    double scale = 0.0;
    const Eigen::VectorXd* diagonal = nullptr;
    double diagonal_scale = 0.0;

    Eigen::Index dimension() const;
    void apply(const Vector& in, Vector& out) const;
};

struct KrylovOptions {
    int max_dimension = 64;
    /// Bound on the a-posteriori error estimate, relative to |v|.
    double tolerance = 1e-13;
};

struct KrylovResult {
    Vector state;
    int subspace_dimension = 0;
    double error_estimate = 0.0;
};

/// Reusable buffers for repeated Krylov steps of one dimension.
/// Not thread-safe; use one workspace per worker.
class KrylovWorkspace {
public:
    explicit KrylovWorkspace(KrylovOptions options = {});

    /// Computes exp(-i dt H) v. Throws StepRejected when the estimate still
    /// exceeds tolerance at the maximal subspace size.
    KrylovResult apply_exponential(const LinearOperator& h, const Vector& v, double dt);

    const KrylovOptions& options() const noexcept { return options_; }

private:
    KrylovOptions options_;
    Eigen::MatrixXcd basis_;
    Vector work_;
};

struct LanczosOptions {
    int subspace = 120;
    int max_restarts = 400;
    double residual_tolerance = 1e-9;
    std::uint64_t seed = 0x5eed;
};

struct Eigenpair {
    double value = 0.0;
    Vector vector;
    double residual = 0.0;
    int restarts = 0;
};

/// Lowest eigenpair by restarted Lanczos with full reorthogonalisation.
/// The phase of the returned vector is fixed so that its largest component is
/// real and positive. Throws ConvergenceError after max_restarts.
Eigenpair lanczos_ground_state(const LinearOperator& h, const LanczosOptions& options = {});

}  // namespace bjj
