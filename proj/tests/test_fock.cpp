#include <doctest.h>

#include "bosonrep/fock.hpp"

using namespace bosonrep;

namespace {

MatrixXcd dense_commutator(int i, int j, int particles, int modes) {
    const SectorOperator ai = ladder_operator(i, Ladder::Annihilate, particles + 1, modes);
    const SectorOperator cj = ladder_operator(j, Ladder::Create, particles, modes);
    const SectorOperator ai_low = ladder_operator(i, Ladder::Annihilate, particles, modes);
    const SectorOperator cj_high = ladder_operator(j, Ladder::Create, particles - 1, modes);
    return (ai * cj - cj_high * ai_low).dense();
}

BosonHamiltonian random_two_body(int modes, Rng& rng, int pair_terms) {
    BosonHamiltonian h;
    h.modes = modes;
    for (int t = 0; t < pair_terms; ++t) {
        BosonTerm term;
        term.create = {1 + static_cast<int>(rng.below(static_cast<std::size_t>(modes))),
                       1 + static_cast<int>(rng.below(static_cast<std::size_t>(modes)))};
        term.annihilate = {1 + static_cast<int>(rng.below(static_cast<std::size_t>(modes))),
                           1 + static_cast<int>(rng.below(static_cast<std::size_t>(modes)))};
        term.coeff = rng.cnormal();
        BosonTerm conj;
        conj.create = term.annihilate;
        conj.annihilate = term.create;
        conj.coeff = std::conj(term.coeff);
        h.terms.push_back(term);
        h.terms.push_back(conj);
    }
    h.canonicalize();
    return h;
}

}  // namespace

TEST_CASE("basis enumeration matches the closed-form sizes and ordering") {
    const FockBasis two_two = enumerate_basis(2, 2);
    REQUIRE(two_two.size() == 3);
    CHECK(two_two.occupation(0) == std::vector<int>{2, 0});
    CHECK(two_two.occupation(1) == std::vector<int>{1, 1});
    CHECK(two_two.occupation(2) == std::vector<int>{0, 2});

    CHECK(enumerate_basis(3, 6).size() == 56);

    const FockBasis vacuum = enumerate_basis(0, 4);
    REQUIRE(vacuum.size() == 1);
    CHECK(vacuum.occupation(0) == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("basis cap rejects oversized sectors") {
    CHECK_THROWS_AS(enumerate_basis(40, 20), ValidationError);
    CHECK_THROWS_AS(enumerate_basis(-1, 2), ValidationError);
    CHECK_THROWS_AS(enumerate_basis(2, 0), ValidationError);
}

TEST_CASE("ranking round-trips for every basis state") {
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 2}, {3, 4}, {4, 3}, {1, 5}}) {
        const FockBasis basis = enumerate_basis(n, m);
        for (std::size_t k = 0; k < basis.size(); ++k)
            CHECK(basis.index_of(basis.occupation(k)) == k);
    }
}

TEST_CASE("ladder operators carry the square-root matrix elements") {
    const FockBasis two = enumerate_basis(2, 2);
    const FockBasis one = enumerate_basis(1, 2);

    const SectorOperator annihilate_1 = ladder_operator(1, Ladder::Annihilate, 2, 2);
    const Eigen::Index from = static_cast<Eigen::Index>(two.index_of({2, 0}));
    const Eigen::Index to = static_cast<Eigen::Index>(one.index_of({1, 0}));
    CHECK(std::abs(MatrixXcd(annihilate_1.matrix)(to, from) - std::sqrt(2.0)) < 1e-14);

    const SectorOperator create_2 = ladder_operator(2, Ladder::Create, 1, 2);
    CHECK(std::abs(MatrixXcd(create_2.matrix)(
              static_cast<Eigen::Index>(two.index_of({1, 1})),
              static_cast<Eigen::Index>(one.index_of({1, 0}))) -
          1.0) < 1e-14);

    // create is the adjoint of the matching annihilate
    const SectorOperator annihilate_2 = ladder_operator(2, Ladder::Annihilate, 2, 2);
    CHECK((create_2.matrix - SpMat(annihilate_2.matrix.adjoint())).norm() < 1e-14);

    CHECK_THROWS_AS(ladder_operator(3, Ladder::Create, 1, 2), ValidationError);
    CHECK_THROWS_AS(ladder_operator(1, Ladder::Annihilate, 0, 2), ValidationError);
}

TEST_CASE("commutation relations hold exactly on small sectors") {
    for (int modes = 2; modes <= 4; ++modes)
        for (int particles = 1; particles <= 3; ++particles)
            for (int i = 1; i <= modes; ++i)
                for (int j = 1; j <= modes; ++j) {
                    const MatrixXcd commutator = dense_commutator(i, j, particles, modes);
                    MatrixXcd expected = MatrixXcd::Zero(commutator.rows(), commutator.cols());
                    if (i == j) expected.setIdentity();
                    CHECK((commutator - expected).cwiseAbs().maxCoeff() < 1e-12);
                }
}

TEST_CASE("annihilators and creators commute among themselves") {
    const int modes = 3, particles = 3;
    for (int i = 1; i <= modes; ++i)
        for (int j = 1; j <= modes; ++j) {
            const SectorOperator a_then_b = ladder_operator(j, Ladder::Annihilate, particles - 1, modes) *
                                            ladder_operator(i, Ladder::Annihilate, particles, modes);
            const SectorOperator b_then_a = ladder_operator(i, Ladder::Annihilate, particles - 1, modes) *
                                            ladder_operator(j, Ladder::Annihilate, particles, modes);
            CHECK((a_then_b.matrix - b_then_a.matrix).norm() < 1e-13);

            const SectorOperator c_ab = ladder_operator(j, Ladder::Create, particles + 1, modes) *
                                        ladder_operator(i, Ladder::Create, particles, modes);
            const SectorOperator c_ba = ladder_operator(i, Ladder::Create, particles + 1, modes) *
                                        ladder_operator(j, Ladder::Create, particles, modes);
            CHECK((c_ab.matrix - c_ba.matrix).norm() < 1e-13);
        }
}

TEST_CASE("lifted number operator is diagonal in the enumeration order") {
    BosonHamiltonian h;
    h.modes = 2;
    h.terms.push_back(BosonTerm{{1}, {1}, 1.0});
    const MatrixXcd lifted = lift_hamiltonian(h, 2).dense();
    CHECK(std::abs(lifted(0, 0) - 2.0) < 1e-14);
    CHECK(std::abs(lifted(1, 1) - 1.0) < 1e-14);
    CHECK(std::abs(lifted(2, 2) - 0.0) < 1e-14);
    CHECK(lifted.cwiseAbs().sum() - lifted.diagonal().cwiseAbs().sum() < 1e-14);
}

TEST_CASE("lifted hopping term reproduces the two-level spectrum") {
    BosonHamiltonian h;
    h.modes = 2;
    h.terms.push_back(BosonTerm{{1}, {2}, 1.0});
    h.terms.push_back(BosonTerm{{2}, {1}, 1.0});
    const SectorOperator lifted = lift_hamiltonian(h, 1);
    const VectorXd spectrum = full_spectrum(lifted);
    CHECK(std::abs(spectrum(0) + 1.0) < 1e-12);
    CHECK(std::abs(spectrum(1) - 1.0) < 1e-12);
    CHECK(ground_state(lifted).value == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("non-conserving terms are rejected by the lift") {
    BosonHamiltonian h;
    h.modes = 2;
    h.terms.push_back(BosonTerm{{1}, {}, 1.0});
    CHECK_THROWS_AS(lift_hamiltonian(h, 2), ValidationError);
}

TEST_CASE("conjugate-closed term lists lift to Hermitian operators") {
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const BosonHamiltonian h = random_two_body(3, rng, 4);
        REQUIRE(is_conjugate_closed(h));
        const SectorOperator lifted = lift_hamiltonian(h, 3);
        CHECK(lifted.hermiticity_defect() < 1e-12);
    }
}

TEST_CASE("conjugate closure detects a missing partner") {
    BosonHamiltonian h;
    h.modes = 2;
    h.terms.push_back(BosonTerm{{1}, {2}, Complex{0.0, 1.0}});
    CHECK_FALSE(is_conjugate_closed(h));
    h.terms.push_back(BosonTerm{{2}, {1}, Complex{0.0, -1.0}});
    CHECK(is_conjugate_closed(h));
}

TEST_CASE("ground state matches a full-spectrum dense solve") {
    Rng rng(17);
    for (int trial = 0; trial < 4; ++trial) {
        const BosonHamiltonian h = random_two_body(3, rng, 5);
        const SectorOperator lifted = lift_hamiltonian(h, 2);
        const Eigenpair ground = ground_state(lifted);
        const VectorXd spectrum = full_spectrum(lifted);
        CHECK(std::abs(ground.value - spectrum.minCoeff()) < 1e-11);
        CHECK(ground.residual <= 1e-9);
        CHECK(std::abs(ground.vector.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("eigensolver rejects non-Hermitian and oversized inputs") {
    BosonHamiltonian h;
    h.modes = 2;
    h.terms.push_back(BosonTerm{{1}, {2}, Complex{0.0, 1.0}});  // no conjugate partner
    const SectorOperator skew = lift_hamiltonian(h, 1);
    CHECK_THROWS_AS(ground_state(skew), ValidationError);

    BosonHamiltonian number;
    number.modes = 2;
    number.terms.push_back(BosonTerm{{1}, {1}, 1.0});
    const SectorOperator big = lift_hamiltonian(number, 60);
    CHECK_THROWS_AS(ground_state(big, kHermTol, 10), ValidationError);
}

TEST_CASE("monomials that annihilate below the vacuum lift to the zero map") {
    BosonTerm term;
    term.create = {1, 1};
    term.annihilate = {1, 1};
    term.coeff = 1.0;
    const SectorOperator lifted = lift_monomial(term, 1, 2);
    CHECK(lifted.matrix.norm() == 0.0);
    CHECK(lifted.is_endomorphism());
}
