#include <doctest.h>

#include "bosonrep/diag_reduction.hpp"

using namespace bosonrep;

namespace {

VectorXcd basis_state(const FockBasis& basis, const std::vector<int>& occ) {
    VectorXcd v = VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    v(static_cast<Eigen::Index>(basis.index_of(occ))) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("diagonal data of the doubly occupied mode") {
    const FockBasis basis = enumerate_basis(2, 2);
    const DiagonalData data = diagonal_of(basis_state(basis, {2, 0}), basis);
    CHECK(data.d(0, 0) == doctest::Approx(2.0));
    CHECK(data.d.sum() == doctest::Approx(2.0));
    CHECK(data.d(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("diagonal data of one boson per mode") {
    const FockBasis basis = enumerate_basis(2, 2);
    const DiagonalData data = diagonal_of(basis_state(basis, {1, 1}), basis);
    CHECK(data.d(0, 1) == doctest::Approx(1.0));
    CHECK(data.d(1, 0) == doctest::Approx(1.0));
    CHECK(data.d(0, 0) == doctest::Approx(0.0));
    CHECK(data.d(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("the sum rule holds on random states") {
    Rng rng(3);
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {4, 3}}) {
        const FockBasis basis = enumerate_basis(n, m);
        const DiagonalData data = diagonal_of(random_sector_state(basis, rng), basis);
        CHECK(data.sum() == doctest::Approx(static_cast<double>(n) * (n - 1)).epsilon(1e-10));
        CHECK((data.d - data.d.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(data.d.diagonal().minCoeff() >= -1e-12);
    }
}

TEST_CASE("antiferromagnetic pair reaches -1 through the diagonal functional") {
    ClassicalIsing h;
    h.spins = 2;
    h.couplings.emplace_back(1, 2, 1.0);
    const DiagEnergyReport report = ising_energy_via_diag(h);
    CHECK(report.energy == -1.0);
    CHECK(report.brute_force_energy == -1.0);
    CHECK(report.exact_match);
}

TEST_CASE("a single spin in a field is handled by the degenerate path") {
    ClassicalIsing h;
    h.spins = 1;
    h.fields.emplace_back(1, 1.0);
    const DiagEnergyReport report = ising_energy_via_diag(h);
    CHECK(report.energy == -1.0);
    CHECK(report.exact_match);
}

TEST_CASE("the functional agrees with direct energies on every encoded state") {
    Rng rng(7);
    const ClassicalIsing h = random_ising(4, rng);
    const DiagFunctional functional = diag_functional(h);
    const DualRailEncoding enc{4};
    const FockBasis basis = enumerate_basis(4, 8);
    for (long config = 0; config < 16; ++config) {
        std::vector<int> bits(4);
        for (int q = 0; q < 4; ++q) bits[q] = static_cast<int>((config >> q) & 1);
        // encoded state -> diagonal data -> functional
        std::vector<int> occ(8, 0);
        for (int q = 1; q <= 4; ++q)
            occ[static_cast<std::size_t>((bits[q - 1] ? enc.mode_a(q) : enc.mode_b(q)) - 1)] = 1;
        const DiagonalData data = diagonal_of(basis_state(basis, occ), basis);
        double direct = 0.0;
        for (const auto& [i, j, coupling] : h.couplings)
            direct += coupling * ((bits[i - 1] ? 1.0 : -1.0) * (bits[j - 1] ? 1.0 : -1.0));
        for (const auto& [i, field] : h.fields) direct += field * (bits[i - 1] ? 1.0 : -1.0);
        CHECK(functional.value(data) == direct);

        // the assembled weight matrix is the same affine form
        const double assembled = (functional.weights.array() * data.d.array()).sum();
        CHECK(assembled == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("random instances match exhaustive brute force exactly") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const ClassicalIsing h = random_ising(10, rng);
        const DiagEnergyReport report = ising_energy_via_diag(h);
        CHECK(report.exact_match);
        CHECK(report.energy == report.brute_force_energy);
        CHECK(report.configurations == 1024);
    }
}

TEST_CASE("validation and caps") {
    ClassicalIsing bad;
    bad.spins = 2;
    bad.couplings.emplace_back(2, 1, 1.0);  // i >= j
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    Rng rng(13);
    const ClassicalIsing big = random_ising(21, rng);
    CHECK_THROWS_AS(ising_energy_via_diag(big), ValidationError);
}
