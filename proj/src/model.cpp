#include "bjj/model.hpp"

#include <cmath>
#include <string>

#include "bjj/errors.hpp"

namespace bjj {

namespace {

void check_basis(const ModelParams& params, const TwoSpinBasis& basis) {
    if (basis.n_atoms_a() != params.n_atoms_a || basis.n_atoms_b() != params.n_atoms_b)
        throw InvalidParameter("basis (" + std::to_string(basis.n_atoms_a()) + ", " +
                               std::to_string(basis.n_atoms_b()) + ") does not match model atom numbers (" +
                               std::to_string(params.n_atoms_a) + ", " + std::to_string(params.n_atoms_b) + ")");
}

}  // namespace

void ModelParams::validate() const {
    if (n_atoms_a < 1 || n_atoms_b < 1) throw InvalidParameter("atom numbers must be >= 1");
    if (!std::isfinite(tunneling_j) || tunneling_j < 0.0)
        throw InvalidParameter("tunneling_j must be finite and >= 0");
    if (!std::isfinite(ec_aa) || !std::isfinite(ec_bb) || !std::isfinite(ec_ab))
        throw InvalidParameter("charging energies must be finite");
}

std::vector<std::string> ModelParams::warnings() const {
    std::vector<std::string> out;
    if (ec_aa < 0.0) out.emplace_back("ec_aa is negative (attractive intra-species interaction)");
    if (ec_bb < 0.0) out.emplace_back("ec_bb is negative (attractive intra-species interaction)");
    if (ec_ab < 0.0) out.emplace_back("ec_ab is negative (attractive inter-species interaction)");
    return out;
}

HamiltonianTerms build_hamiltonian_terms(const ModelParams& params, const TwoSpinBasis& basis) {
    params.validate();
    check_basis(params, basis);
    const auto a = spin_operators(basis, Species::A);
    const auto b = spin_operators(basis, Species::B);

    const SparseMatrix& za = a.jz.matrix();
    const SparseMatrix& zb = b.jz.matrix();
    SparseMatrix interaction = cplx(params.ec_aa) * SparseMatrix(za * za) +
                               cplx(params.ec_bb) * SparseMatrix(zb * zb) +
                               cplx(2.0 * params.ec_ab) * SparseMatrix(za * zb);
    SparseMatrix tunnel = cplx(-2.0) * SparseMatrix(a.jx.matrix() + b.jx.matrix());
    return {HermitianOperator(basis, interaction), HermitianOperator(basis, tunnel)};
}

HermitianOperator build_exact_hamiltonian(const ModelParams& params, const TwoSpinBasis& basis) {
    return build_hamiltonian_terms(params, basis).at(params.tunneling_j);
}

PhaseHamiltonian build_phase_hamiltonian(const ModelParams& params, int phase_grid_size) {
    params.validate();
    if (phase_grid_size < 3)
        throw InvalidParameter("phase grid needs at least 3 number states per species (got " +
                               std::to_string(phase_grid_size) + ")");
    for (int n : {params.n_atoms_a, params.n_atoms_b}) {
        if (phase_grid_size > n + 1)
            throw InvalidParameter("phase grid of " + std::to_string(phase_grid_size) +
                                   " states exceeds the physical range of N=" + std::to_string(n));
        if ((phase_grid_size - 1 - n) % 2 != 0)
            throw InvalidParameter("phase grid size must have the parity of N+1 so that m values align");
    }

    const TwoSpinBasis window(phase_grid_size - 1, phase_grid_size - 1);
    const int levels = phase_grid_size;
    const double centre = 0.5 * (phase_grid_size - 1);
    const double j = params.tunneling_j;

    // single-species blocks on the window, then the cross term
    std::vector<Eigen::Triplet<cplx>> a_trips, b_trips;
    auto add_species = [&](std::vector<Eigen::Triplet<cplx>>& out, double n_atoms, double e_self) {
        for (int l = 0; l < levels; ++l) {
            const double m = l - centre;
            out.emplace_back(l, l, e_self * m * m);
            if (l + 1 < levels) {
                const double m1 = m + 1.0;
                // <m+1| -J N cos(phi) + (J/N)(n^2 cos + cos n^2) |m>
                const double hop = -0.5 * j * n_atoms + 0.5 * (j / n_atoms) * (m * m + m1 * m1);
                out.emplace_back(l + 1, l, hop);
                out.emplace_back(l, l + 1, hop);
            }
        }
    };
    add_species(a_trips, params.n_atoms_a, params.ec_aa);
    add_species(b_trips, params.n_atoms_b, params.ec_bb);

    SparseMatrix ha(levels, levels), hb(levels, levels);
    ha.setFromTriplets(a_trips.begin(), a_trips.end());
    hb.setFromTriplets(b_trips.begin(), b_trips.end());

    const auto spins = spin_matrices(phase_grid_size - 1);
    SparseMatrix h = embed(window, Species::A, ha) + embed(window, Species::B, hb) +
                     cplx(2.0 * params.ec_ab) *
                         SparseMatrix(embed(window, Species::A, spins.jz) * embed(window, Species::B, spins.jz));
    return {window, HermitianOperator(window, h)};
}

HarmonicCoefficients harmonic_coefficients(const ModelParams& params) {
    params.validate();
    if (params.n_atoms_a != params.n_atoms_b)
        throw UnsupportedConfiguration("harmonic coefficients assume N_A == N_B");
    const double n = params.n_atoms_a;
    const double ec = 0.5 * (params.ec_aa + params.ec_bb);
    const double correction = 2.0 * params.tunneling_j / n;
    return {ec + params.ec_ab + correction, ec - params.ec_ab + correction, 0.5 * params.tunneling_j * n};
}

}  // namespace bjj
