#ifndef BOSONREP_HP_VERIFIER_HPP
#define BOSONREP_HP_VERIFIER_HPP

#include <string>
#include <vector>

#include "bosonrep/rdm.hpp"

namespace bosonrep {

/// Truncated bosonic annihilator on a d-level qudit: A|n> = sqrt(n)|n-1>,
/// the spin-s Holstein-Primakoff realization with d = 2s + 1.
MatrixXcd hp_annihilator(int dim);

/// S^z of the spin-s system in the |n> <-> |s - n> correspondence.
MatrixXcd hp_sz(int dim);

/// Dense matrix of a monomial list on the m-qudit register (dimension d^m).
MatrixXcd lift_to_qudits(const std::vector<BosonTerm>& terms, int modes, int dim);

/// Largest number of distinct modes touched by any single monomial.
int max_touched_modes(const std::vector<BosonTerm>& terms);

/// Total-number operator sum_k A_k^dag A_k on the register.
MatrixXcd qudit_number_operator(int modes, int dim);

/// Map an N-boson sector state into the qudit register (occupation ->
/// qudit level, mode 1 = most significant slot). Requires dim >= N + 1.
VectorXcd encode_fock_state(const VectorXcd& amplitudes, const FockBasis& basis, int dim);

/// Run-length list of qudit blocks (the prover's witness).
struct WitnessBlocks {
    int modes = 0;
    int dim = 0;
    std::vector<std::pair<VectorXcd, long>> runs;  // state, copy count

    long total_blocks() const;
};

WitnessBlocks honest_witness(const VectorXcd& sigma, const FockBasis& basis, long blocks, int dim);

struct VerifierConfig {
    double beta = 0.1;
    long samples_per_observable = 0;  // 0 = auto from the Hoeffding bound
    double threshold = 0.0;           // 0 = auto: beta / 4
    double failure_budget = 0.05;     // delta
    bool deterministic = false;       // exact expectations instead of sampling
    std::uint64_t seed = 1;
};

long hoeffding_samples(double threshold, double failure_budget, std::size_t observable_count);

struct ObservableReport {
    std::string label;
    double target = 0.0;
    double mean = 0.0;
    double deviation = 0.0;
    long samples = 0;
};

struct VerifierTranscript {
    bool accepted = false;
    std::string reason;
    int particles = 0;
    long blocks_used = 0;
    long number_checks = 0;
    long number_failures = 0;
    double threshold = 0.0;
    std::vector<ObservableReport> observables;
};

/// The QMA verifier at desk scale: number check on every block (projecting
/// it onto the measured sector), then per-observable sampling against the
/// alpha coordinates of rho; YES iff every empirical mean lands within the
/// threshold.
VerifierTranscript run_verifier(const TwoBodyRdm& rho, int particles, const WitnessBlocks& witness,
                                const VerifierConfig& config);

}  // namespace bosonrep

#endif  // BOSONREP_HP_VERIFIER_HPP
