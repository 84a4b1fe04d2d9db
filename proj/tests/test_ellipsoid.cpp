#include <doctest.h>

#include <Eigen/Cholesky>

#include "bosonrep/ellipsoid.hpp"

using namespace bosonrep;

namespace {

BosonHamiltonian small_test_hamiltonian() {
    BosonHamiltonian h;
    h.modes = 2;
    h.terms.push_back(BosonTerm{{1}, {2}, 1.0});
    h.terms.push_back(BosonTerm{{2}, {1}, 1.0});
    h.terms.push_back(BosonTerm{{1, 1}, {1, 1}, 0.4});
    h.terms.push_back(BosonTerm{{2, 2}, {2, 2}, -0.3});
    return h;
}

}  // namespace

TEST_CASE("central cut on the unit disk matches the textbook update") {
    EllipsoidState e = initial_ball(VectorXd::Zero(2), 1.0);
    CutSpec cut;
    cut.direction = VectorXd::Zero(2);
    cut.direction(0) = 1.0;  // keep {x_1 <= 0}
    const UpdateResult result = ellipsoid_update(e, cut);
    CHECK_FALSE(result.degenerate);
    CHECK(result.state.center(0) == doctest::Approx(-1.0 / 3.0));
    CHECK(result.state.center(1) == doctest::Approx(0.0));
    CHECK(result.state.shape(0, 0) == doctest::Approx(4.0 / 9.0));
    CHECK(result.state.shape(1, 1) == doctest::Approx(4.0 / 3.0));
    CHECK(std::abs(result.state.shape(0, 1)) < 1e-14);
}

TEST_CASE("the update is invariant under rescaling the cut direction") {
    EllipsoidState e = initial_ball(VectorXd::Ones(3), 2.0);
    CutSpec cut;
    cut.direction = VectorXd::Zero(3);
    cut.direction << 1.0, -0.5, 0.25;
    const EllipsoidState a = ellipsoid_update(e, cut).state;
    cut.direction *= 7.5;
    const EllipsoidState b = ellipsoid_update(e, cut).state;
    CHECK((a.center - b.center).norm() < 1e-12);
    CHECK((a.shape - b.shape).norm() < 1e-12);
}

TEST_CASE("boundary depth is flagged degenerate, deep cuts still shrink") {
    const int l = 4;
    EllipsoidState e = initial_ball(VectorXd::Zero(l), 1.0);
    CutSpec cut;
    cut.direction = VectorXd::Zero(l);
    cut.direction(2) = 1.0;

    cut.depth = -1.0 / l;
    const UpdateResult degenerate = ellipsoid_update(e, cut);
    CHECK(degenerate.degenerate);
    CHECK((degenerate.state.center - e.center).norm() == 0.0);

    cut.depth = 1.0 / l;  // a valid deep cut
    const UpdateResult deep = ellipsoid_update(e, cut);
    CHECK_FALSE(deep.degenerate);
    CHECK(deep.state.log_det < e.log_det);

    cut.depth = -2.0 / l;
    CHECK_THROWS_AS(ellipsoid_update(e, cut), ValidationError);
    cut.depth = 1.5;
    CHECK_THROWS_AS(ellipsoid_update(e, cut), ValidationError);
}

TEST_CASE("log-det decreases strictly for random shapes and cuts") {
    Rng rng(3);
    const int l = 6;
    MatrixXd root = MatrixXd::Zero(l, l);
    for (int r = 0; r < l; ++r)
        for (int c = 0; c < l; ++c) root(r, c) = rng.normal();
    EllipsoidState e;
    e.center = VectorXd::Zero(l);
    e.shape = root * root.transpose() + 0.1 * MatrixXd::Identity(l, l);
    e.log_det = std::log(e.shape.determinant());

    for (int trial = 0; trial < 20; ++trial) {
        CutSpec cut;
        cut.direction = VectorXd::Zero(l);
        for (int i = 0; i < l; ++i) cut.direction(i) = rng.normal();
        cut.depth = trial % 2 == 0 ? 0.0 : 0.2;
        const UpdateResult result = ellipsoid_update(e, cut);
        CHECK(result.state.log_det < e.log_det - 1e-12);
        Eigen::LLT<MatrixXd> chol(result.state.shape);
        CHECK(chol.info() == Eigen::Success);
        const double direct = std::log(result.state.shape.determinant());
        CHECK(result.state.log_det == doctest::Approx(direct).epsilon(1e-8));
        e = result.state;
    }
}

TEST_CASE("a constant objective returns any feasible point") {
    NrepSeparationOracle oracle{NrepOracle(2, 2)};
    EnergyFunctional f;
    f.c0 = 1.25;
    f.gamma = VectorXd::Zero(8);
    const MinimizeResult result = minimize_energy(f, oracle, std::sqrt(8.0), 0.05);
    CHECK(result.converged);
    CHECK(result.value == doctest::Approx(1.25));
    CHECK(result.found_feasible);
}

TEST_CASE("oracle-driven minimization brackets the exact sector energy") {
    const BosonHamiltonian h = small_test_hamiltonian();
    const double exact = ground_state(lift_hamiltonian(h, 2)).value;

    MinimizeOptions options;
    const AlphaPointCloud cloud = extremal_alpha_points(2, 2);
    options.audit_cloud = &cloud;  // every feasibility cut must keep the cloud
    const OracleEnergyReport report = ground_energy_via_oracle(h, 2, 2, 0.05, options);
    CHECK(report.minimize.converged);
    CHECK(std::abs(report.energy - exact) <= 0.05);
    CHECK(report.minimize.lower_bound <= exact + 1e-6);
    CHECK(report.energy >= exact - 5e-3);  // feasibility tolerance slack only
}

TEST_CASE("central and shallow cut modes agree") {
    const BosonHamiltonian h = small_test_hamiltonian();
    MinimizeOptions central;
    central.mode = CutMode::Central;
    MinimizeOptions shallow;
    shallow.mode = CutMode::Shallow;
    const OracleEnergyReport a = ground_energy_via_oracle(h, 2, 2, 0.05, central);
    const OracleEnergyReport b = ground_energy_via_oracle(h, 2, 2, 0.05, shallow);
    CHECK(a.minimize.converged);
    CHECK(b.minimize.converged);
    CHECK(std::abs(a.energy - b.energy) <= 0.1);
    CHECK(b.minimize.iterations > a.minimize.iterations);  // shallow cuts shrink slower
}

TEST_CASE("the trace records every cut when requested") {
    const BosonHamiltonian h = small_test_hamiltonian();
    MinimizeOptions options;
    options.keep_trace = true;
    const OracleEnergyReport report = ground_energy_via_oracle(h, 2, 2, 0.1, options);
    REQUIRE(!report.minimize.trace.empty());
    CHECK(report.minimize.trace.size() == static_cast<std::size_t>(report.minimize.iterations));
    bool saw_objective = false, saw_feasibility = false;
    double previous_logdet = std::numeric_limits<double>::infinity();
    for (const auto& row : report.minimize.trace) {
        if (row.kind == CutKind::Objective) saw_objective = true;
        if (row.kind == CutKind::Feasibility) saw_feasibility = true;
        CHECK(row.log_det <= previous_logdet + 1e-12);
        previous_logdet = row.log_det;
    }
    CHECK(saw_objective);
    CHECK(saw_feasibility);
}

TEST_CASE("single-qubit pipeline falls back to the exact one-boson sector") {
    QubitHamiltonian h;
    h.qubits = 1;
    h.terms.push_back(PauliTerm{1, 1, 0, 0, 1.0});
    const OracleEnergyReport report = ground_energy_via_oracle(h, 0.05);
    CHECK(std::abs(report.energy + 1.0) <= 0.05);
    CHECK(report.qubit_energy == doctest::Approx(-1.0));
}

TEST_CASE("the Heisenberg coupling lands on the singlet energy") {
    QubitHamiltonian h;
    h.qubits = 2;
    for (int mu = 1; mu <= 3; ++mu) h.terms.push_back(PauliTerm{1, mu, 2, mu, 1.0});
    const OracleEnergyReport report = ground_energy_via_oracle(h, 0.05);
    CHECK(report.qubit_energy == doctest::Approx(-3.0).epsilon(1e-10));
    CHECK(std::abs(report.energy - (-3.0)) <= 0.1);
}

TEST_CASE("invalid minimization inputs are rejected") {
    NrepSeparationOracle oracle{NrepOracle(2, 2)};
    EnergyFunctional f;
    f.gamma = VectorXd::Ones(8);
    CHECK_THROWS_AS(minimize_energy(f, oracle, std::sqrt(8.0), -1.0), ValidationError);
    CHECK_THROWS_AS(initial_ball(VectorXd::Zero(3), 0.0), ValidationError);
}
