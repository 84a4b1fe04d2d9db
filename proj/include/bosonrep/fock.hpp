#ifndef BOSONREP_FOCK_HPP
#define BOSONREP_FOCK_HPP

#include <cstddef>
#include <vector>

#include "bosonrep/common.hpp"

namespace bosonrep {

inline constexpr std::size_t kDefaultBasisCap = 200000;
inline constexpr int kDefaultDenseCap = 2000;
inline constexpr double kHermTol = 1e-10;

/// Ordered basis of the fixed-particle-number sector: every way to place
/// `particles` bosons in `modes` modes, reverse-lexicographic (first mode
/// most significant, descending).
struct FockBasis {
    int particles = 0;
    int modes = 0;
    std::vector<std::vector<int>> states;

    std::size_t size() const { return states.size(); }
    const std::vector<int>& occupation(std::size_t k) const { return states[k]; }

    /// Combinatorial rank of an occupation vector in this ordering.
    std::size_t index_of(const std::vector<int>& occ) const;
};

FockBasis enumerate_basis(int particles, int modes, std::size_t basis_cap = kDefaultBasisCap);

/// Dimension of the (particles, modes) sector without building it.
std::uint64_t sector_dimension(int particles, int modes);

enum class Ladder { Create, Annihilate };

/// Linear map between fixed-particle-number sectors. Rows index the target
/// sector basis, columns the source sector basis.
struct SectorOperator {
    int modes = 0;
    int particles_in = 0;
    int particles_out = 0;
    SpMat matrix;

    bool is_endomorphism() const { return particles_in == particles_out; }
    std::size_t rows() const { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(matrix.cols()); }

    SectorOperator adjoint() const;
    MatrixXcd dense() const { return MatrixXcd(matrix); }
    double hermiticity_defect() const;
};

SectorOperator operator*(const SectorOperator& a, const SectorOperator& b);
SectorOperator operator+(const SectorOperator& a, const SectorOperator& b);
SectorOperator operator-(const SectorOperator& a, const SectorOperator& b);
SectorOperator operator*(Complex scale, const SectorOperator& a);

SectorOperator sector_identity(int particles, int modes);

/// a_mode or a_mode^dagger acting on the `particles` sector (modes 1-based).
SectorOperator ladder_operator(int mode, Ladder kind, int particles, int modes);

/// Normal-ordered second-quantized monomial: product of creations, then
/// annihilations, times a complex coefficient. Mode indices are 1-based;
/// empty index lists give a constant term.
struct BosonTerm {
    std::vector<int> create;
    std::vector<int> annihilate;
    Complex coeff{0.0, 0.0};

    bool particle_conserving() const { return create.size() == annihilate.size(); }
};

struct BosonHamiltonian {
    int modes = 0;
    std::vector<BosonTerm> terms;

    void append(const BosonHamiltonian& other, Complex scale = 1.0);
    /// Merge duplicate monomials and drop negligible coefficients;
    /// leaves a deterministic term order.
    void canonicalize(double drop_tol = 1e-14);
};

/// Every term's conjugate-transpose partner present with conjugate coefficient.
bool is_conjugate_closed(const BosonHamiltonian& h, double tol = 1e-12);

/// Matrix of a particle-conserving Hamiltonian on the N-boson sector.
SectorOperator lift_hamiltonian(const BosonHamiltonian& h, int particles,
                                std::size_t basis_cap = kDefaultBasisCap);

/// Matrix of one (not necessarily conserving) monomial between sectors:
/// maps `particles` to `particles - annihilate + create`.
SectorOperator lift_monomial(const BosonTerm& term, int particles, int modes,
                             std::size_t basis_cap = kDefaultBasisCap);

struct Eigenpair {
    double value = 0.0;
    VectorXcd vector;
    double residual = 0.0;
};

/// Lowest eigenpair of a Hermitian endomorphism (dense solve below the cap).
Eigenpair ground_state(const SectorOperator& op, double herm_tol = kHermTol,
                       int dense_cap = kDefaultDenseCap);

/// Extreme eigenpair of a dense Hermitian matrix.
Eigenpair extreme_eigenpair(const MatrixXcd& mat, bool largest);

/// Full spectrum of a Hermitian endomorphism (test oracle / small instances).
VectorXd full_spectrum(const SectorOperator& op, double herm_tol = kHermTol,
                       int dense_cap = kDefaultDenseCap);

/// Seeded random unit vector on the sector (deterministic across runs).
VectorXcd random_sector_state(const FockBasis& basis, Rng& rng);

}  // namespace bosonrep

#endif  // BOSONREP_FOCK_HPP
