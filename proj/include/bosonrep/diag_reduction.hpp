#ifndef BOSONREP_DIAG_REDUCTION_HPP
#define BOSONREP_DIAG_REDUCTION_HPP

#include <vector>

#include "bosonrep/spin_boson.hpp"

namespace bosonrep {

/// Unnormalized diagonal two-body data D_ij = <a_i^dag a_j^dag a_j a_i>.
struct DiagonalData {
    MatrixXd d;

    double sum() const { return d.sum(); }
};

DiagonalData diagonal_of(const VectorXcd& state, const FockBasis& basis);

/// Classical Ising instance: sum J_ij s_i s_j + sum h_i s_i over s = +-1.
struct ClassicalIsing {
    int spins = 0;
    std::vector<std::tuple<int, int, double>> couplings;  // (i, j, J), i < j
    std::vector<std::pair<int, double>> fields;           // (i, h)

    void validate() const;
};

/// Affine functional of D reproducing the Ising energy on dual-rail encoded
/// states (field terms use the one-boson-per-pair constraint, so they need
/// n >= 2 spins). Evaluation walks the instance term by term so that on
/// encoded states it performs the same arithmetic as the direct energy;
/// `weights` carries the equivalent assembled form sum_pq W_pq D_pq.
struct DiagFunctional {
    int spins = 0;
    std::vector<std::tuple<int, int, double>> couplings;
    std::vector<std::pair<int, double>> fields;
    MatrixXd weights;

    double value(const DiagonalData& data) const;
};

DiagFunctional diag_functional(const ClassicalIsing& h);

struct DiagEnergyReport {
    double energy = 0.0;             // min of the functional over encoded states
    double brute_force_energy = 0.0; // min over the 2^n spin configurations
    bool exact_match = false;
    std::vector<int> best_configuration;  // z bits of the minimizer
    long configurations = 0;
};

/// Minimize the D-functional over computational-basis encoded states and
/// compare against direct enumeration; the two traversals use identical
/// arithmetic so agreement is exact.
DiagEnergyReport ising_energy_via_diag(const ClassicalIsing& h, int spin_cap = 20);

/// Seeded random instance with couplings on every pair plus fields.
ClassicalIsing random_ising(int spins, Rng& rng, double amplitude = 1.0);

}  // namespace bosonrep

#endif  // BOSONREP_DIAG_REDUCTION_HPP
