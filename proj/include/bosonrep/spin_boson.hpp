#ifndef BOSONREP_SPIN_BOSON_HPP
#define BOSONREP_SPIN_BOSON_HPP

#include <optional>
#include <vector>

#include "bosonrep/fock.hpp"

namespace bosonrep {

/// One 2-local coefficient c * sigma_i^mu (x) sigma_j^nu. Pauli indices:
/// 0 = identity, 1 = x, 2 = y, 3 = z. Single-site terms carry nu = 0 and
/// site_j = 0; pure constants have mu = nu = 0.
struct PauliTerm {
    int site_i = 0;
    int mu = 0;
    int site_j = 0;
    int nu = 0;
    double coeff = 0.0;
};

enum class Adjacency { Arbitrary, NearestNeighbor2D };

struct QubitHamiltonian {
    int qubits = 0;
    std::vector<PauliTerm> terms;
    Adjacency adjacency = Adjacency::Arbitrary;
    int grid_rows = 0;  // used only when adjacency is NearestNeighbor2D
    int grid_cols = 0;

    /// Throws on out-of-range sites, i == j two-site terms, or (when the
    /// grid flag is set) couplings between non-neighboring grid sites.
    void validate() const;

    double coefficient_l1() const;
};

/// Dual-rail layout: qubit i owns modes (a_i, b_i) = (2i-1, 2i).
struct DualRailEncoding {
    int qubits = 0;
    int modes() const { return 2 * qubits; }
    int mode_a(int qubit) const { return 2 * qubit - 1; }
    int mode_b(int qubit) const { return 2 * qubit; }
};

/// Qubit Pauli matrices in the convention where the a-mode-occupied
/// dual-rail state is the +1 eigenvector of sigma^z (basis order |0>, |1>).
MatrixXcd pauli_matrix(int mu);

/// Dense 2^n matrix of the qubit Hamiltonian (qubit 1 = most significant).
MatrixXcd qubit_matrix(const QubitHamiltonian& h);

/// Occupation vector of the encoded computational-basis state |z_1..z_n>.
std::vector<int> encoded_occupation(const std::vector<int>& bits, const DualRailEncoding& enc);

/// Isometry from the 2^n qubit space into the N = n boson sector, columns
/// indexed by computational-basis states.
MatrixXcd encoding_isometry(const QubitHamiltonian& h, const FockBasis& basis);

/// Schwinger image of one Pauli factor (a sum of one-body monomials, or a
/// constant for the identity).
std::vector<BosonTerm> pauli_image(int qubit, int mu, const DualRailEncoding& enc);

/// Eq.-by-eq substitution of the Schwinger correspondence into a 2-local
/// qubit Hamiltonian; the result acts on m = 2n modes and agrees with the
/// qubit matrix on the dual-rail subspace.
BosonHamiltonian schwinger_map(const QubitHamiltonian& h);

/// Sum over qubit pairs of (n_a + n_b - 1)^2, expanded into normal-ordered
/// monomials. Zero exactly on one-boson-per-pair states.
BosonHamiltonian penalty_hamiltonian(int qubits);

/// Paper bound for the projector weight: (sum_t |c_t|) * N(N-1)/2.
double penalty_weight(const QubitHamiltonian& h, int particles);

struct EquivalenceReport {
    double qubit_energy = 0.0;
    double boson_energy = 0.0;
    double energy_gap = 0.0;               // |difference|
    double penalty_weight_used = 0.0;
    std::vector<double> penalty_expectations;  // <P_i> in the bosonic ground state
    double max_penalty_expectation = 0.0;
};

/// Diagonalize both sides of the reduction (qubit matrix vs. lifted bosonic
/// Hamiltonian with penalties) and report the spectral comparison.
EquivalenceReport assemble_and_verify(const QubitHamiltonian& h,
                                      std::optional<double> weight_override = std::nullopt,
                                      int dense_cap = kDefaultDenseCap);

/// Seeded random 2-local instance on n qubits: Gaussian coefficients on
/// every site pair and every single-site Pauli.
QubitHamiltonian random_qubit_hamiltonian(int qubits, Rng& rng, double amplitude = 1.0);

}  // namespace bosonrep

#endif  // BOSONREP_SPIN_BOSON_HPP
