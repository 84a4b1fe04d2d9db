#include "bosonrep/fock.hpp"

#include <algorithm>
#include <map>

#include <Eigen/Eigenvalues>

namespace bosonrep {

std::uint64_t sector_dimension(int particles, int modes) {
    return binomial_capped(particles + modes - 1, particles);
}

FockBasis enumerate_basis(int particles, int modes, std::size_t basis_cap) {
    if (particles < 0) throw ValidationError("enumerate_basis: negative particle number");
    if (modes < 1) throw ValidationError("enumerate_basis: need at least one mode");
    const std::uint64_t dim = sector_dimension(particles, modes);
    if (dim > basis_cap)
        throw ValidationError("enumerate_basis: sector dimension " + std::to_string(dim) +
                              " exceeds cap " + std::to_string(basis_cap));

    FockBasis basis;
    basis.particles = particles;
    basis.modes = modes;
    basis.states.reserve(static_cast<std::size_t>(dim));

    std::vector<int> occ(static_cast<std::size_t>(modes), 0);
    // Depth-first, placing the largest count in the leftmost mode first.
    auto fill = [&](auto&& self, int mode, int remaining) -> void {
        if (mode == modes - 1) {
            occ[static_cast<std::size_t>(mode)] = remaining;
            basis.states.push_back(occ);
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            occ[static_cast<std::size_t>(mode)] = k;
            self(self, mode + 1, remaining - k);
        }
        occ[static_cast<std::size_t>(mode)] = 0;
    };
    fill(fill, 0, particles);
    return basis;
}

std::size_t FockBasis::index_of(const std::vector<int>& occ) const {
    if (occ.size() != static_cast<std::size_t>(modes))
        throw ValidationError("index_of: wrong mode count");
    std::uint64_t rank = 0;
    int remaining = particles;
    for (int mode = 0; mode < modes - 1; ++mode) {
        const int n = occ[static_cast<std::size_t>(mode)];
        if (n < 0 || n > remaining) throw ValidationError("index_of: invalid occupation vector");
        // states with a larger count in this mode come first
        for (int v = remaining; v > n; --v)
            rank += binomial_capped(remaining - v + modes - mode - 2, modes - mode - 2);
        remaining -= n;
    }
    if (occ[static_cast<std::size_t>(modes - 1)] != remaining)
        throw ValidationError("index_of: occupation does not sum to the sector particle number");
    return static_cast<std::size_t>(rank);
}

SectorOperator SectorOperator::adjoint() const {
    SectorOperator out;
    out.modes = modes;
    out.particles_in = particles_out;
    out.particles_out = particles_in;
    out.matrix = matrix.adjoint();
    return out;
}

double SectorOperator::hermiticity_defect() const {
    if (!is_endomorphism()) return std::numeric_limits<double>::infinity();
    SpMat diff = SpMat(matrix.adjoint()) - matrix;
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SpMat::InnerIterator it(diff, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

SectorOperator operator*(const SectorOperator& a, const SectorOperator& b) {
    if (a.modes != b.modes || a.particles_in != b.particles_out)
        throw ValidationError("sector operator product: sector mismatch");
    SectorOperator out;
    out.modes = a.modes;
    out.particles_in = b.particles_in;
    out.particles_out = a.particles_out;
    out.matrix = a.matrix * b.matrix;
    return out;
}

SectorOperator operator+(const SectorOperator& a, const SectorOperator& b) {
    if (a.modes != b.modes || a.particles_in != b.particles_in || a.particles_out != b.particles_out)
        throw ValidationError("sector operator sum: sector mismatch");
    SectorOperator out = a;
    out.matrix = a.matrix + b.matrix;
    return out;
}

SectorOperator operator-(const SectorOperator& a, const SectorOperator& b) {
    if (a.modes != b.modes || a.particles_in != b.particles_in || a.particles_out != b.particles_out)
        throw ValidationError("sector operator difference: sector mismatch");
    SectorOperator out = a;
    out.matrix = a.matrix - b.matrix;
    return out;
}

SectorOperator operator*(Complex scale, const SectorOperator& a) {
    SectorOperator out = a;
    out.matrix = scale * a.matrix;
    return out;
}

SectorOperator sector_identity(int particles, int modes) {
    const auto dim = static_cast<Eigen::Index>(sector_dimension(particles, modes));
    SectorOperator op;
    op.modes = modes;
    op.particles_in = particles;
    op.particles_out = particles;
    op.matrix = SpMat(dim, dim);
    op.matrix.setIdentity();
    return op;
}

SectorOperator ladder_operator(int mode, Ladder kind, int particles, int modes) {
    if (mode < 1 || mode > modes) throw ValidationError("ladder_operator: mode index out of range");
    if (kind == Ladder::Annihilate && particles < 1)
        throw ValidationError("ladder_operator: cannot annihilate on the vacuum sector");

    const FockBasis source = enumerate_basis(particles, modes);
    const int target_particles = particles + (kind == Ladder::Create ? 1 : -1);
    const FockBasis target = enumerate_basis(target_particles, modes);

    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(source.size());
    const std::size_t k = static_cast<std::size_t>(mode - 1);
    for (std::size_t col = 0; col < source.size(); ++col) {
        std::vector<int> occ = source.occupation(col);
        const int n = occ[k];
        if (kind == Ladder::Annihilate) {
            if (n == 0) continue;
            occ[k] = n - 1;
            entries.emplace_back(static_cast<int>(target.index_of(occ)), static_cast<int>(col),
                                 Complex(std::sqrt(static_cast<double>(n)), 0.0));
        } else {
            occ[k] = n + 1;
            entries.emplace_back(static_cast<int>(target.index_of(occ)), static_cast<int>(col),
                                 Complex(std::sqrt(static_cast<double>(n + 1)), 0.0));
        }
    }

    SectorOperator op;
    op.modes = modes;
    op.particles_in = particles;
    op.particles_out = target_particles;
    op.matrix = SpMat(static_cast<Eigen::Index>(target.size()), static_cast<Eigen::Index>(source.size()));
    op.matrix.setFromTriplets(entries.begin(), entries.end());
    return op;
}

void BosonHamiltonian::append(const BosonHamiltonian& other, Complex scale) {
    if (modes == 0) modes = other.modes;
    if (other.modes != modes)
        throw ValidationError("BosonHamiltonian::append: mode count mismatch");
    for (const auto& t : other.terms) {
        BosonTerm scaled = t;
        scaled.coeff *= scale;
        terms.push_back(std::move(scaled));
    }
}

void BosonHamiltonian::canonicalize(double drop_tol) {
    std::map<std::pair<std::vector<int>, std::vector<int>>, Complex> merged;
    for (const auto& t : terms) {
        auto c = t.create;
        auto a = t.annihilate;
        std::sort(c.begin(), c.end());
        std::sort(a.begin(), a.end());
        merged[{std::move(c), std::move(a)}] += t.coeff;
    }
    terms.clear();
    for (const auto& [key, coeff] : merged) {
        if (std::abs(coeff) <= drop_tol) continue;
        terms.push_back(BosonTerm{key.first, key.second, coeff});
    }
}

bool is_conjugate_closed(const BosonHamiltonian& h, double tol) {
    std::map<std::pair<std::vector<int>, std::vector<int>>, Complex> merged;
    for (const auto& t : h.terms) {
        auto c = t.create;
        auto a = t.annihilate;
        std::sort(c.begin(), c.end());
        std::sort(a.begin(), a.end());
        merged[{std::move(c), std::move(a)}] += t.coeff;
    }
    for (const auto& [key, coeff] : merged) {
        const auto conj_key = std::make_pair(key.second, key.first);
        const auto partner = merged.find(conj_key);
        const Complex partner_coeff = partner == merged.end() ? Complex{0, 0} : partner->second;
        if (std::abs(std::conj(coeff) - partner_coeff) > tol) return false;
    }
    return true;
}

SectorOperator lift_monomial(const BosonTerm& term, int particles, int modes,
                             std::size_t basis_cap) {
    if (term.create.size() > 2 || term.annihilate.size() > 2)
        throw ValidationError("lift_monomial: more than two-body term");
    for (int mode : term.create)
        if (mode < 1 || mode > modes) throw ValidationError("lift_monomial: mode index out of range");
    for (int mode : term.annihilate)
        if (mode < 1 || mode > modes) throw ValidationError("lift_monomial: mode index out of range");

    const int target = particles - static_cast<int>(term.annihilate.size()) +
                       static_cast<int>(term.create.size());
    SectorOperator op;
    if (particles < static_cast<int>(term.annihilate.size()) || target < 0) {
        // annihilates below the vacuum: the zero map
        op.modes = modes;
        op.particles_in = particles;
        op.particles_out = std::max(target, 0);
        op.matrix = SpMat(static_cast<Eigen::Index>(sector_dimension(op.particles_out, modes)),
                          static_cast<Eigen::Index>(sector_dimension(particles, modes)));
        return op;
    }
    (void)basis_cap;
    op = sector_identity(particles, modes);
    int level = particles;
    for (int mode : term.annihilate) {
        op = ladder_operator(mode, Ladder::Annihilate, level, modes) * op;
        --level;
    }
    for (auto it = term.create.rbegin(); it != term.create.rend(); ++it) {
        op = ladder_operator(*it, Ladder::Create, level, modes) * op;
        ++level;
    }
    op = term.coeff * op;
    return op;
}

SectorOperator lift_hamiltonian(const BosonHamiltonian& h, int particles, std::size_t basis_cap) {
    const std::uint64_t dim = sector_dimension(particles, h.modes);
    if (dim > basis_cap)
        throw ValidationError("lift_hamiltonian: sector dimension exceeds cap");

    SectorOperator total;
    total.modes = h.modes;
    total.particles_in = particles;
    total.particles_out = particles;
    total.matrix = SpMat(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& term : h.terms) {
        if (!term.particle_conserving())
            throw ValidationError("lift_hamiltonian: non-particle-conserving term");
        if (term.create.empty()) {
            SectorOperator id = sector_identity(particles, h.modes);
            total.matrix += term.coeff * id.matrix;
            continue;
        }
        total.matrix += lift_monomial(term, particles, h.modes, basis_cap).matrix;
    }
    return total;
}

Eigenpair extreme_eigenpair(const MatrixXcd& mat, bool largest) {
    MatrixXcd sym = 0.5 * (mat + mat.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(sym);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("extreme_eigenpair: eigensolver failed");
    const Eigen::Index idx = largest ? sym.rows() - 1 : 0;
    Eigenpair pair;
    pair.value = solver.eigenvalues()(idx);
    pair.vector = solver.eigenvectors().col(idx);
    pair.residual = (mat * pair.vector - pair.value * pair.vector).norm();
    return pair;
}

namespace {

MatrixXcd dense_hermitian_checked(const SectorOperator& op, double herm_tol, int dense_cap) {
    if (!op.is_endomorphism())
        throw ValidationError("eigensolve: operator is not an endomorphism");
    if (op.matrix.rows() > dense_cap)
        throw ValidationError("eigensolve: dimension " + std::to_string(op.matrix.rows()) +
                              " above dense cap " + std::to_string(dense_cap));
    if (op.hermiticity_defect() > herm_tol)
        throw ValidationError("eigensolve: operator is not Hermitian within tolerance");
    return op.dense();
}

}  // namespace

Eigenpair ground_state(const SectorOperator& op, double herm_tol, int dense_cap) {
    return extreme_eigenpair(dense_hermitian_checked(op, herm_tol, dense_cap), false);
}

VectorXd full_spectrum(const SectorOperator& op, double herm_tol, int dense_cap) {
    MatrixXcd dense = dense_hermitian_checked(op, herm_tol, dense_cap);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(0.5 * (dense + dense.adjoint()));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("full_spectrum: eigensolver failed");
    return solver.eigenvalues();
}

VectorXcd random_sector_state(const FockBasis& basis, Rng& rng) {
    VectorXcd v(static_cast<Eigen::Index>(basis.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.cnormal();
    v.normalize();
    return v;
}

}  // namespace bosonrep
