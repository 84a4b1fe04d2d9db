#ifndef BOSONREP_TESTS_DENSE_ORACLE_HPP
#define BOSONREP_TESTS_DENSE_ORACLE_HPP

// Test-only independent oracle: minimize ||L(sigma) - rho||_1 over the
// N-boson spectrahedron by projected subgradient, with the partial-trace
// map assembled directly from ladder maps. Shares no code with the
// conditional-gradient solver it cross-checks.

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "bosonrep/rdm.hpp"

namespace bosonrep::testing {

inline double trace_norm_distance_oracle(const TwoBodyRdm& rho, int particles, int modes,
                                         int iterations = 40000) {
    const FockBasis basis = enumerate_basis(particles, modes);
    const PairBasis pairs = pair_basis(modes);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    const auto pair_count = pairs.size();

    std::vector<MatrixXcd> kmap(pair_count * pair_count);
    for (std::size_t a = 0; a < pair_count; ++a)
        for (std::size_t b = 0; b < pair_count; ++b) {
            BosonTerm ta;
            ta.annihilate = {pairs.pair(a).i1, pairs.pair(a).i2};
            ta.coeff = 1.0;
            BosonTerm tb;
            tb.annihilate = {pairs.pair(b).i1, pairs.pair(b).i2};
            tb.coeff = 1.0;
            const MatrixXcd pa = MatrixXcd(lift_monomial(ta, particles, modes).matrix);
            const MatrixXcd pb = MatrixXcd(lift_monomial(tb, particles, modes).matrix);
            const double norm =
                std::sqrt(static_cast<double>(pairs.pair(a).norm() * pairs.pair(b).norm()));
            kmap[a * pair_count + b] =
                2.0 / (norm * particles * (particles - 1)) * (pb.adjoint() * pa);
        }
    auto forward = [&](const MatrixXcd& sigma) {
        MatrixXcd out(static_cast<Eigen::Index>(pair_count),
                      static_cast<Eigen::Index>(pair_count));
        for (std::size_t a = 0; a < pair_count; ++a)
            for (std::size_t b = 0; b < pair_count; ++b)
                out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    (sigma * kmap[a * pair_count + b]).trace();
        return out;
    };
    auto adjoint = [&](const MatrixXcd& g) {
        MatrixXcd out = MatrixXcd::Zero(dim, dim);
        for (std::size_t a = 0; a < pair_count; ++a)
            for (std::size_t b = 0; b < pair_count; ++b)
                out += g(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) *
                       kmap[a * pair_count + b];
        return out;
    };
    auto project = [&](MatrixXcd sigma) {
        sigma = 0.5 * (sigma + sigma.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(sigma);
        VectorXd lam = eig.eigenvalues();
        VectorXd sorted = lam;
        std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<double>());
        double cumulative = 0.0, theta = 0.0;
        for (Eigen::Index i = 0; i < sorted.size(); ++i) {
            cumulative += sorted(i);
            const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
            if (candidate < sorted(i)) theta = candidate;
        }
        for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::max(0.0, lam(i) - theta);
        return MatrixXcd(eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint());
    };

    double best = std::numeric_limits<double>::infinity();
    Rng rng(11);
    for (int start = 0; start < 3; ++start) {
        MatrixXcd sigma;
        if (start == 0) {
            sigma = MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
        } else {
            VectorXcd v(dim);
            for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.cnormal();
            v.normalize();
            sigma = v * v.adjoint();
        }
        for (int iter = 1; iter <= iterations; ++iter) {
            const MatrixXcd delta = forward(sigma) - rho.mat;
            Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(0.5 * (delta + delta.adjoint()));
            best = std::min(best, eig.eigenvalues().cwiseAbs().sum());
            MatrixXcd sign = MatrixXcd::Zero(delta.rows(), delta.cols());
            for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
                sign += (eig.eigenvalues()(i) >= 0.0 ? 1.0 : -1.0) * eig.eigenvectors().col(i) *
                        eig.eigenvectors().col(i).adjoint();
            sigma = project(sigma - (0.25 / std::sqrt(static_cast<double>(iter))) * adjoint(sign));
        }
    }
    return best;
}

}  // namespace bosonrep::testing

#endif  // BOSONREP_TESTS_DENSE_ORACLE_HPP
