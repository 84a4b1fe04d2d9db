#ifndef BOSONREP_IO_HPP
#define BOSONREP_IO_HPP

#include <string>
#include <vector>

#include "bosonrep/diag_reduction.hpp"
#include "bosonrep/nrep.hpp"
#include "bosonrep/spin_boson.hpp"

namespace bosonrep {

/// All formats are whitespace-separated plain text with `#` comments.
/// Parse errors carry file:line:token positions.

std::string format_double(double value);  // shortest round-trip decimal

/// State file: one amplitude per line, `occ_1 ... occ_m re im`.
struct StateFile {
    int particles = 0;
    int modes = 0;
    VectorXcd amplitudes;  // in enumerate_basis order
};

StateFile read_state_file(const std::string& path);
void write_state_file(const std::string& path, const FockBasis& basis, const VectorXcd& amplitudes,
                      const std::vector<std::string>& comments = {});

/// Ensemble file: `w <weight>` lines introduce components, each followed by
/// state lines in the state-file format.
void write_ensemble_file(const std::string& path, const FockBasis& basis,
                         const WitnessEnsemble& ensemble,
                         const std::vector<std::string>& comments = {});

/// Hamiltonian term file: `c i j k l re im` for (re+i im) a_i^dag a_j^dag a_l a_k,
/// index 0 when an operator is absent; optional `m <modes>` header line.
BosonHamiltonian read_boson_hamiltonian(const std::string& path);
void write_boson_hamiltonian(const std::string& path, const BosonHamiltonian& h,
                             const std::vector<std::string>& comments = {});

/// Qubit Hamiltonian file: `i mu j nu coeff` with mu, nu in 0..3 (0 = identity).
QubitHamiltonian read_qubit_hamiltonian(const std::string& path);
void write_qubit_hamiltonian(const std::string& path, const QubitHamiltonian& h,
                             const std::vector<std::string>& comments = {});

/// RDM file: header `m M`, then `rowPair colPair re im` over 0-based ranks.
TwoBodyRdm read_rdm_file(const std::string& path);
void write_rdm_file(const std::string& path, const TwoBodyRdm& rdm,
                    const std::vector<std::string>& comments = {});

/// Alpha file: one real per line in the fixed [Z..., X..., Y...] order.
VectorXd read_alpha_file(const std::string& path);
void write_alpha_file(const std::string& path, const VectorXd& alpha,
                      const std::vector<std::string>& comments = {});

/// Ising file: `i j J` coupling lines and `i h` field lines.
ClassicalIsing read_ising_file(const std::string& path);
void write_ising_file(const std::string& path, const ClassicalIsing& h,
                      const std::vector<std::string>& comments = {});

}  // namespace bosonrep

#endif  // BOSONREP_IO_HPP
