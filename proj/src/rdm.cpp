#include "bosonrep/rdm.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

namespace bosonrep {

PairIndex make_pair_index(int a, int b) {
    if (a > b) std::swap(a, b);
    return PairIndex{a, b};
}

PairBasis pair_basis(int modes) {
    if (modes < 1) throw ValidationError("pair_basis: need at least one mode");
    PairBasis basis;
    basis.modes = modes;
    basis.pairs.reserve(static_cast<std::size_t>(modes) * (modes + 1) / 2);
    for (int i = 1; i <= modes; ++i)
        for (int j = i; j <= modes; ++j) basis.pairs.push_back(PairIndex{i, j});
    return basis;
}

std::size_t PairBasis::rank(const PairIndex& p) const {
    if (p.i1 < 1 || p.i1 > p.i2 || p.i2 > modes)
        throw ValidationError("PairBasis::rank: invalid pair");
    const std::size_t q = static_cast<std::size_t>(p.i1 - 1);
    return q * static_cast<std::size_t>(modes) - q * (q - 1) / 2 +
           static_cast<std::size_t>(p.i2 - p.i1);
}

Complex TwoBodyRdm::four_index(int i, int j, int k, int l) const {
    const PairBasis pairs = pair_basis(modes);
    const PairIndex row = make_pair_index(i, j);
    const PairIndex col = make_pair_index(k, l);
    const double scale = 0.5 * std::sqrt(static_cast<double>(row.norm() * col.norm()));
    return scale * mat(static_cast<Eigen::Index>(pairs.rank(row)),
                       static_cast<Eigen::Index>(pairs.rank(col)));
}

void TwoBodyRdm::validate(double psd_tol, double trace_tol) const {
    if (mat.rows() != mat.cols()) throw ValidationError("TwoBodyRdm: matrix not square");
    const auto expected = static_cast<Eigen::Index>(pair_basis(modes).size());
    if (mat.rows() != expected) throw ValidationError("TwoBodyRdm: size does not match mode count");
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("TwoBodyRdm: not Hermitian");
    if (std::abs(mat.trace() - Complex{1.0, 0.0}) > trace_tol)
        throw ValidationError("TwoBodyRdm: trace differs from one");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(0.5 * (mat + mat.adjoint()),
                                                    Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -psd_tol)
        throw ValidationError("TwoBodyRdm: negative eigenvalue beyond tolerance");
}

namespace {

std::vector<SpMat> pair_annihilators(const FockBasis& basis, const PairBasis& pairs) {
    std::vector<SpMat> maps;
    maps.reserve(pairs.size());
    for (const auto& p : pairs.pairs) {
        BosonTerm term;
        term.annihilate = {p.i1, p.i2};
        term.coeff = 1.0;
        maps.push_back(lift_monomial(term, basis.particles, basis.modes).matrix);
    }
    return maps;
}

double rdm_scale(int particles) {
    return static_cast<double>(particles) * static_cast<double>(particles - 1);
}

}  // namespace

TwoBodyRdm two_rdm(const VectorXcd& state, const FockBasis& basis) {
    if (basis.particles < 2) throw ValidationError("two_rdm: need at least two bosons");
    if (state.size() != static_cast<Eigen::Index>(basis.size()))
        throw ValidationError("two_rdm: state dimension does not match basis");
    if (std::abs(state.norm() - 1.0) > 1e-9)
        throw ValidationError("two_rdm: state is not normalized");

    const PairBasis pairs = pair_basis(basis.modes);
    const auto maps = pair_annihilators(basis, pairs);
    std::vector<VectorXcd> reduced(pairs.size());
    for (std::size_t r = 0; r < pairs.size(); ++r) reduced[r] = maps[r] * state;

    const std::size_t dim = pairs.size();
    TwoBodyRdm rdm;
    rdm.modes = basis.modes;
    rdm.mat = MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            const double norm = std::sqrt(
                static_cast<double>(pairs.pair(a).norm() * pairs.pair(b).norm()));
            // <a_J^dag a_I> with I = row, J = column
            const Complex expect = reduced[b].dot(reduced[a]);
            rdm.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                2.0 * expect / (norm * rdm_scale(basis.particles));
        }
    }
    return rdm;
}

TwoBodyRdm two_rdm(const MatrixXcd& density, const FockBasis& basis) {
    if (basis.particles < 2) throw ValidationError("two_rdm: need at least two bosons");
    if (density.rows() != density.cols() ||
        density.rows() != static_cast<Eigen::Index>(basis.size()))
        throw ValidationError("two_rdm: density dimension does not match basis");

    const PairBasis pairs = pair_basis(basis.modes);
    const auto maps = pair_annihilators(basis, pairs);
    std::vector<MatrixXcd> moved(pairs.size());
    for (std::size_t r = 0; r < pairs.size(); ++r) moved[r] = maps[r] * density;

    const std::size_t dim = pairs.size();
    TwoBodyRdm rdm;
    rdm.modes = basis.modes;
    rdm.mat = MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < dim; ++b) {
            // Tr(P_b^dag P_a rho) accumulated over the sparse entries of P_b
            Complex expect{0.0, 0.0};
            const SpMat& pb = maps[b];
            for (int k = 0; k < pb.outerSize(); ++k)
                for (SpMat::InnerIterator it(pb, k); it; ++it)
                    expect += std::conj(it.value()) * moved[a](it.row(), it.col());
            const double norm = std::sqrt(
                static_cast<double>(pairs.pair(a).norm() * pairs.pair(b).norm()));
            rdm.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                2.0 * expect / (norm * rdm_scale(basis.particles));
        }
    }
    return rdm;
}

MatrixXcd one_rdm_from_two(const TwoBodyRdm& rdm) {
    const int m = rdm.modes;
    MatrixXcd one = MatrixXcd::Zero(m, m);
    for (int i = 1; i <= m; ++i)
        for (int k = 1; k <= m; ++k) {
            Complex sum{0.0, 0.0};
            for (int l = 1; l <= m; ++l) sum += rdm.four_index(i, l, k, l);
            one(i - 1, k - 1) = sum;
        }
    return one;
}

std::string Observable::label() const {
    auto pair_str = [](const PairIndex& p) {
        return "(" + std::to_string(p.i1) + "," + std::to_string(p.i2) + ")";
    };
    switch (family) {
        case ObservableFamily::Z: return "Z" + pair_str(first);
        case ObservableFamily::X: return "X" + pair_str(first) + pair_str(second);
        case ObservableFamily::Y: return "Y" + pair_str(first) + pair_str(second);
    }
    return "?";
}

ObservableBasis observable_basis(int modes) {
    if (modes < 2) throw ValidationError("observable_basis: need at least two modes");
    ObservableBasis basis;
    basis.pairs = pair_basis(modes);
    const std::size_t dim = basis.pairs.size();
    const auto M = static_cast<Eigen::Index>(dim);

    auto unit = [&](std::size_t r, std::size_t c) {
        MatrixXcd e = MatrixXcd::Zero(M, M);
        e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 1.0;
        return e;
    };

    // Z_I for I before L
    for (std::size_t r = 0; r + 1 < dim; ++r) {
        Observable z;
        z.family = ObservableFamily::Z;
        z.first = basis.pairs.pair(r);
        z.mat = unit(r, r);
        z.monomials = {{r, r, Complex(1.0 / z.first.norm(), 0.0)}};
        basis.observables.push_back(std::move(z));
    }
    // X_IJ then Y_IJ, I < J in the pair order
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r + 1; c < dim; ++c) {
            const double norm = std::sqrt(
                static_cast<double>(basis.pairs.pair(r).norm() * basis.pairs.pair(c).norm()));
            Observable x;
            x.family = ObservableFamily::X;
            x.first = basis.pairs.pair(r);
            x.second = basis.pairs.pair(c);
            x.mat = unit(r, c) + unit(c, r);
            x.monomials = {{r, c, Complex(1.0 / norm, 0.0)}, {c, r, Complex(1.0 / norm, 0.0)}};
            basis.observables.push_back(std::move(x));
        }
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r + 1; c < dim; ++c) {
            const double norm = std::sqrt(
                static_cast<double>(basis.pairs.pair(r).norm() * basis.pairs.pair(c).norm()));
            Observable y;
            y.family = ObservableFamily::Y;
            y.first = basis.pairs.pair(r);
            y.second = basis.pairs.pair(c);
            y.mat = Complex(0.0, -1.0) * (unit(r, c) - unit(c, r));
            y.monomials = {{r, c, Complex(0.0, -1.0 / norm)}, {c, r, Complex(0.0, 1.0 / norm)}};
            basis.observables.push_back(std::move(y));
        }

    basis.z_last.family = ObservableFamily::Z;
    basis.z_last.first = basis.pairs.pair(dim - 1);
    basis.z_last.mat = unit(dim - 1, dim - 1);
    basis.z_last.monomials = {{dim - 1, dim - 1, Complex(1.0 / basis.z_last.first.norm(), 0.0)}};
    return basis;
}

VectorXd alpha_from_rdm(const TwoBodyRdm& rdm) {
    const std::size_t dim = pair_basis(rdm.modes).size();
    const std::size_t count = dim * dim - 1;
    VectorXd alpha(static_cast<Eigen::Index>(count));
    Eigen::Index at = 0;
    for (std::size_t r = 0; r + 1 < dim; ++r)
        alpha(at++) = rdm.mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)).real();
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r + 1; c < dim; ++c)
            alpha(at++) =
                2.0 * rdm.mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).real();
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r + 1; c < dim; ++c)
            alpha(at++) =
                -2.0 * rdm.mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).imag();
    return alpha;
}

TwoBodyRdm rdm_from_alpha(const VectorXd& alpha, int modes) {
    const std::size_t dim = pair_basis(modes).size();
    if (alpha.size() != static_cast<Eigen::Index>(dim * dim - 1))
        throw ValidationError("rdm_from_alpha: coordinate count does not match mode count");
    TwoBodyRdm rdm;
    rdm.modes = modes;
    rdm.mat = MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    Eigen::Index at = 0;
    double diag_sum = 0.0;
    for (std::size_t r = 0; r + 1 < dim; ++r) {
        rdm.mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = alpha(at);
        diag_sum += alpha(at++);
    }
    rdm.mat(static_cast<Eigen::Index>(dim - 1), static_cast<Eigen::Index>(dim - 1)) =
        1.0 - diag_sum;
    const Eigen::Index x_base = at;
    Eigen::Index off = 0;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r + 1; c < dim; ++c) {
            const double re = 0.5 * alpha(x_base + off);
            const double im = -0.5 * alpha(x_base + static_cast<Eigen::Index>(dim * (dim - 1) / 2) + off);
            rdm.mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(re, im);
            rdm.mat(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = Complex(re, -im);
            ++off;
        }
    return rdm;
}

std::vector<BosonTerm> observable_monomials(const Observable& obs, const PairBasis& pairs) {
    std::vector<BosonTerm> terms;
    terms.reserve(obs.monomials.size());
    for (const auto& mono : obs.monomials) {
        const PairIndex& row = pairs.pair(mono.row_pair);
        const PairIndex& col = pairs.pair(mono.col_pair);
        BosonTerm term;
        term.create = {row.i1, row.i2};
        term.annihilate = {col.i1, col.i2};
        term.coeff = mono.coeff;
        terms.push_back(std::move(term));
    }
    return terms;
}

SectorOperator alpha_observable_lift(const Observable& obs, const PairBasis& pairs,
                                     int particles, int modes) {
    if (particles < 2) throw ValidationError("alpha_observable_lift: need at least two bosons");
    BosonHamiltonian h;
    h.modes = modes;
    h.terms = observable_monomials(obs, pairs);
    SectorOperator lift = lift_hamiltonian(h, particles);
    return Complex(2.0 / rdm_scale(particles), 0.0) * lift;
}

SectorOperator alpha_direction_lift(const VectorXd& direction, const ObservableBasis& basis,
                                    int particles) {
    if (particles < 2) throw ValidationError("alpha_direction_lift: need at least two bosons");
    if (direction.size() != static_cast<Eigen::Index>(basis.count()))
        throw ValidationError("alpha_direction_lift: direction length mismatch");
    BosonHamiltonian h;
    h.modes = basis.pairs.modes;
    for (std::size_t q = 0; q < basis.count(); ++q) {
        const double weight = direction(static_cast<Eigen::Index>(q));
        if (weight == 0.0) continue;
        for (auto term : observable_monomials(basis.observables[q], basis.pairs)) {
            term.coeff *= weight;
            h.terms.push_back(std::move(term));
        }
    }
    h.canonicalize();
    SectorOperator lift = lift_hamiltonian(h, particles);
    return Complex(2.0 / rdm_scale(particles), 0.0) * lift;
}

EnergyFunctional energy_functional(const BosonHamiltonian& h, int particles, int modes) {
    if (particles < 2) throw ValidationError("energy_functional: need at least two bosons");
    if (h.modes != modes) throw ValidationError("energy_functional: mode count mismatch");
    const PairBasis pairs = pair_basis(modes);
    const std::size_t dim = pairs.size();
    const auto M = static_cast<Eigen::Index>(dim);
    const double scale = rdm_scale(particles);

    MatrixXcd compressed = MatrixXcd::Zero(M, M);
    Complex constant{0.0, 0.0};
    for (const auto& term : h.terms) {
        if (!term.particle_conserving())
            throw ValidationError("energy_functional: non-particle-conserving term");
        if (term.create.size() > 2)
            throw ValidationError("energy_functional: term beyond two-body");
        if (term.create.empty()) {
            constant += term.coeff;
        } else if (term.create.size() == 1) {
            const int i = term.create[0];
            const int k = term.annihilate[0];
            for (int l = 1; l <= modes; ++l) {
                const PairIndex row = make_pair_index(k, l);
                const PairIndex col = make_pair_index(i, l);
                const double w = 0.5 * particles *
                                 std::sqrt(static_cast<double>(row.norm() * col.norm()));
                compressed(static_cast<Eigen::Index>(pairs.rank(col)),
                           static_cast<Eigen::Index>(pairs.rank(row))) += term.coeff * w;
            }
        } else {
            const PairIndex row = make_pair_index(term.create[0], term.create[1]);
            const PairIndex col = make_pair_index(term.annihilate[0], term.annihilate[1]);
            const double w = 0.5 * scale * std::sqrt(static_cast<double>(row.norm() * col.norm()));
            compressed(static_cast<Eigen::Index>(pairs.rank(row)),
                       static_cast<Eigen::Index>(pairs.rank(col))) += term.coeff * w;
        }
    }
    const double defect = (compressed - compressed.adjoint()).cwiseAbs().maxCoeff();
    const double magnitude = std::max(1.0, compressed.cwiseAbs().maxCoeff());
    if (defect > 1e-9 * magnitude || std::abs(constant.imag()) > 1e-9)
        throw ValidationError("energy_functional: Hamiltonian is not conjugate-closed");

    EnergyFunctional functional;
    functional.gamma = VectorXd(M * M - 1);
    const Complex g_last = compressed(M - 1, M - 1);
    functional.c0 = constant.real() + g_last.real();
    Eigen::Index at = 0;
    for (Eigen::Index r = 0; r + 1 < M; ++r)
        functional.gamma(at++) = (compressed(r, r) - g_last).real();
    for (Eigen::Index r = 0; r < M; ++r)
        for (Eigen::Index c = r + 1; c < M; ++c) functional.gamma(at++) = compressed(r, c).real();
    for (Eigen::Index r = 0; r < M; ++r)
        for (Eigen::Index c = r + 1; c < M; ++c) functional.gamma(at++) = -compressed(r, c).imag();
    return functional;
}

}  // namespace bosonrep
