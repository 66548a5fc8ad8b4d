#pragma once

#include <string>
#include <vector>

#include "bjj/basis.hpp"

namespace bjj {

/// Physical parameters of the coupled double-well system, hbar = 1.
struct ModelParams {
    int n_atoms_a = 1;
    int n_atoms_b = 1;
    double tunneling_j = 0.0;
    double ec_aa = 0.0;
    double ec_bb = 0.0;
    double ec_ab = 0.0;

    /// Throws InvalidParameter for J < 0, non-finite energies or N < 1.
    void validate() const;
    /// Non-fatal remarks (negative charging energies).
    std::vector<std::string> warnings() const;

    bool operator==(const ModelParams&) const = default;
};

/// Coefficients of H = a_+ n_+^2 + b phi_+^2 + a_- n_-^2 + b phi_-^2.
struct HarmonicCoefficients {
    double a_plus = 0.0;
    double a_minus = 0.0;
    double b = 0.0;
};

/// Exact Hamiltonian split as H(J) = interaction + J * tunneling_unit so that
/// ramped or noisy evolutions can rescale the tunneling term without rebuilding.
struct HamiltonianTerms {
    HermitianOperator interaction;     // sum_a E_aa Jz_a^2 + 2 E_ab Jz_A Jz_B
    HermitianOperator tunneling_unit;  // -2 (Jx_A + Jx_B)

    HermitianOperator at(double tunneling_j) const { return interaction + tunneling_unit * tunneling_j; }
};

HamiltonianTerms build_hamiltonian_terms(const ModelParams& params, const TwoSpinBasis& basis);

/// H = sum_a [-2J Jx_a + E_aa Jz_a^2] + 2 E_ab Jz_A Jz_B.
HermitianOperator build_exact_hamiltonian(const ModelParams& params, const TwoSpinBasis& basis);

/// Number-phase form
///   E_aa n_a^2 - J N_a cos(phi_a) + (J/N_a)(n_a^2 cos(phi_a) + cos(phi_a) n_a^2) + 2 E_ab n_A n_B
/// on a window of `phase_grid_size` number states per species centred on n = 0.
/// The returned basis is the truncated one: TwoSpinBasis(M-1, M-1) reproduces
/// exactly the retained m values.
struct PhaseHamiltonian {
    TwoSpinBasis basis;
    HermitianOperator hamiltonian;
};

PhaseHamiltonian build_phase_hamiltonian(const ModelParams& params, int phase_grid_size);

/// Requires N_A == N_B; E_c is the mean of ec_aa and ec_bb.
HarmonicCoefficients harmonic_coefficients(const ModelParams& params);

}  // namespace bjj
