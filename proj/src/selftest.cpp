#include "bjj/selftest.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "bjj/criteria.hpp"
#include "bjj/dynamics.hpp"
#include "bjj/krylov.hpp"
#include "bjj/model.hpp"

namespace bjj {

namespace {

Eigen::MatrixXcd dense_propagator(const Eigen::MatrixXcd& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const Eigen::VectorXcd phases = (eig.eigenvalues().cast<cplx>() * cplx(0.0, -dt)).array().exp().matrix();
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

SparseMatrix random_sparse_hermitian(int dim, double density, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution keep(density);
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (int i = 0; i < dim; ++i) {
        triplets.emplace_back(i, i, cplx(u(rng), 0.0));
        for (int j = i + 1; j < dim; ++j) {
            if (!keep(rng)) continue;
            const cplx z(u(rng), u(rng));
            triplets.emplace_back(i, j, z);
            triplets.emplace_back(j, i, std::conj(z));
        }
    }
    SparseMatrix m(dim, dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

OracleCheck krylov_vs_dense(int dim) {
    std::mt19937_64 rng(1234 + dim);
    const SparseMatrix h = random_sparse_hermitian(dim, 0.1, rng);
    std::normal_distribution<double> g;
    Vector v(dim);
    for (auto& x : v) x = cplx(g(rng), g(rng));
    v.normalize();
    LinearOperator op;
    op.base = &h;
    KrylovWorkspace ws;
    const auto result = ws.apply_exponential(op, v, 0.1);
    const Vector reference = dense_propagator(Eigen::MatrixXcd(h), 0.1) * v;
    return {"krylov step vs dense exponential, dim " + std::to_string(dim), (result.state - reference).norm(), 1e-10};
}

OracleCheck ground_state_vs_dense() {
    const ModelParams p{6, 6, 1.0, 0.3, 0.3, 0.3};
    const TwoSpinBasis basis(6, 6);
    const auto h = build_exact_hamiltonian(p, basis);
    const double lanczos = ground_state(h).energy;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.dense(), Eigen::EigenvaluesOnly);
    return {"Lanczos ground energy vs dense spectrum, N=6", std::abs(lanczos - eig.eigenvalues()(0)), 1e-9};
}

OracleCheck coherent_binomial() {
    const Vector psi = coherent_amplitudes(2, M_PI / 2.0, 0.0);
    Vector expected(3);
    expected << 0.5, std::sqrt(0.5), 0.5;
    return {"coherent N=2 amplitudes vs binomial expansion", (psi - expected).norm(), 1e-12};
}

OracleCheck one_axis_twisting() {
    const int n = 10;
    const double chi = 0.37;
    const TwoSpinBasis basis(n, 1);
    const ModelParams p{n, 1, 0.0, chi, 0.0, 0.0};
    const auto psi0 = coherent_spin_state(basis, M_PI / 2.0, 0.0, M_PI / 2.0, 0.0);
    double worst = 0.0;
    const auto traj = evolve(psi0, p, RampSchedule::sudden(0.0), 0.01, 3.0, 30);
    const auto jx = spin_operators(basis, Species::A).jx;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double exact = 0.5 * n * std::pow(std::cos(chi * traj.times[k]), n - 1);
        worst = std::max(worst, std::abs(traj.samples[k].expectation(jx) - exact));
    }
    return {"one-axis twisting <Jx>(t) vs closed form, N=10", worst, 1e-6};
}

OracleCheck commutator() {
    const auto s = spin_matrices(20);
    const SparseMatrix xy = s.jx * s.jy;
    const SparseMatrix yx = s.jy * s.jx;
    const SparseMatrix c = xy - yx - cplx(0.0, 1.0) * s.jz;
    return {"[Jx, Jy] = i Jz, N=20", Eigen::MatrixXcd(c).cwiseAbs().maxCoeff(), 1e-12};
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite() {
    return {commutator(), coherent_binomial(), krylov_vs_dense(50), krylov_vs_dense(100), ground_state_vs_dense(),
            one_axis_twisting()};
}

}  // namespace bjj
