#ifndef BOSONREP_RDM_HPP
#define BOSONREP_RDM_HPP

#include <string>
#include <vector>

#include "bosonrep/fock.hpp"

namespace bosonrep {

/// Unordered mode pair (i1 <= i2, 1-based) with its normalization factor:
/// n = 2 for a doubly occupied mode, 1 otherwise.
struct PairIndex {
    int i1 = 0;
    int i2 = 0;
    int norm() const { return i1 == i2 ? 2 : 1; }
    bool operator==(const PairIndex&) const = default;
};

PairIndex make_pair_index(int a, int b);

/// All pairs for m modes in the fixed total order: lexicographic on (i1, i2).
/// The last pair (m, m) plays the distinguished role L.
struct PairBasis {
    int modes = 0;
    std::vector<PairIndex> pairs;

    std::size_t size() const { return pairs.size(); }
    std::size_t rank(const PairIndex& p) const;
    const PairIndex& pair(std::size_t r) const { return pairs[r]; }
};

PairBasis pair_basis(int modes);

/// Two-boson reduced density matrix on the pair basis. Entry (I, J) is
/// 2 <a_J^dag a_I> / (sqrt(n_I n_J) N(N-1)), which makes it Hermitian, PSD
/// and unit-trace for any N-boson state.
struct TwoBodyRdm {
    int modes = 0;
    MatrixXcd mat;

    std::size_t dim() const { return static_cast<std::size_t>(mat.rows()); }
    /// 4-index tensor element rho^(2)_{ijkl} (1-based mode indices).
    Complex four_index(int i, int j, int k, int l) const;
    /// max violation over {hermiticity, trace-one, PSD} conventions.
    void validate(double psd_tol = 1e-10, double trace_tol = 1e-10) const;
};

/// Partial trace of an N-boson pure state down to two bosons.
TwoBodyRdm two_rdm(const VectorXcd& state, const FockBasis& basis);
/// Same for a density matrix on the sector.
TwoBodyRdm two_rdm(const MatrixXcd& density, const FockBasis& basis);

/// One-boson RDM recovered from the two-boson one (unit trace, m x m).
MatrixXcd one_rdm_from_two(const TwoBodyRdm& rdm);

enum class ObservableFamily { Z, X, Y };

/// One element of the orthogonal observable set: its matrix on the pair
/// space and its second-quantized form (sum of c * a_I^dag a_J monomials,
/// I/J given as pair-basis ranks).
struct Observable {
    ObservableFamily family{};
    PairIndex first{};   // I
    PairIndex second{};  // J (unused for Z)
    MatrixXcd mat;
    struct PairMonomial {
        std::size_t row_pair;  // I in a_I^dag a_J
        std::size_t col_pair;  // J
        Complex coeff;
    };
    std::vector<PairMonomial> monomials;
    std::string label() const;
};

/// The l = M^2 - 1 observables ordered [Z_I (I < L), X_IJ, Y_IJ] plus the
/// distinguished Z_L kept separately.
struct ObservableBasis {
    PairBasis pairs;
    std::vector<Observable> observables;
    Observable z_last;

    std::size_t count() const { return observables.size(); }  // l
};

ObservableBasis observable_basis(int modes);

/// alpha_Q = Tr(Q rho) in the fixed observable order.
VectorXd alpha_from_rdm(const TwoBodyRdm& rdm);
/// Inverse expansion; Z_L absorbs the unit-trace constraint.
TwoBodyRdm rdm_from_alpha(const VectorXd& alpha, int modes);

/// N-sector operator whose expectation on any N-boson state equals alpha_Q.
SectorOperator alpha_observable_lift(const Observable& obs, const PairBasis& pairs,
                                     int particles, int modes);
/// Same for a direction sum_Q g_Q Q (one lift, one eigensolve).
SectorOperator alpha_direction_lift(const VectorXd& direction, const ObservableBasis& basis,
                                    int particles);

/// Second-quantized monomial list of an observable (for qudit lifting):
/// expectation of the returned terms on an N-boson state equals alpha_Q
/// after multiplying by 2/(N(N-1)).
std::vector<BosonTerm> observable_monomials(const Observable& obs, const PairBasis& pairs);

/// Energy as an affine function of alpha: Tr(H rho^(N)) = c0 + gamma . alpha.
struct EnergyFunctional {
    double c0 = 0.0;
    VectorXd gamma;

    double value(const VectorXd& alpha) const { return c0 + gamma.dot(alpha); }
};

EnergyFunctional energy_functional(const BosonHamiltonian& h, int particles, int modes);

}  // namespace bosonrep

#endif  // BOSONREP_RDM_HPP
