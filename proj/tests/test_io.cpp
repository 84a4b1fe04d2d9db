#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bosonrep/io.hpp"

using namespace bosonrep;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("bosonrep_io_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("state files round-trip through write and read") {
    TempDir dir;
    const FockBasis basis = enumerate_basis(2, 3);
    Rng rng(3);
    const VectorXcd state = random_sector_state(basis, rng);
    write_state_file(dir.file("state.txt"), basis, state, {"round trip"});
    const StateFile back = read_state_file(dir.file("state.txt"));
    CHECK(back.particles == 2);
    CHECK(back.modes == 3);
    CHECK((back.amplitudes - state).norm() < 1e-15);
}

TEST_CASE("state files reject inconsistent occupation sums") {
    TempDir dir;
    write_text(dir.file("bad.txt"), "2 0 1 0\n1 0 0.5 0\n");
    try {
        read_state_file(dir.file("bad.txt"));
        FAIL("expected a parse error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
}

TEST_CASE("state files report the offending token") {
    TempDir dir;
    write_text(dir.file("bad.txt"), "1 1 0.5 zero\n");
    try {
        read_state_file(dir.file("bad.txt"));
        FAIL("expected a parse error");
    } catch (const ValidationError& e) {
        const std::string message = e.what();
        CHECK(message.find(":1:4:") != std::string::npos);
        CHECK(message.find("zero") != std::string::npos);
    }
}

TEST_CASE("boson Hamiltonian files round-trip") {
    TempDir dir;
    BosonHamiltonian h;
    h.modes = 4;
    h.terms.push_back(BosonTerm{{1, 2}, {3, 4}, Complex{0.5, -0.25}});
    h.terms.push_back(BosonTerm{{3, 4}, {1, 2}, Complex{0.5, 0.25}});
    h.terms.push_back(BosonTerm{{2}, {2}, Complex{-1.0, 0.0}});
    h.terms.push_back(BosonTerm{{}, {}, Complex{2.0, 0.0}});
    write_boson_hamiltonian(dir.file("h.txt"), h);
    const BosonHamiltonian back = read_boson_hamiltonian(dir.file("h.txt"));
    REQUIRE(back.terms.size() == h.terms.size());
    CHECK(back.modes == 4);
    for (std::size_t t = 0; t < h.terms.size(); ++t) {
        CHECK(back.terms[t].create == h.terms[t].create);
        CHECK(back.terms[t].annihilate == h.terms[t].annihilate);
        CHECK(back.terms[t].coeff == h.terms[t].coeff);
    }
}

TEST_CASE("boson Hamiltonian files reject unknown tags with a position") {
    TempDir dir;
    write_text(dir.file("bad.txt"), "c 1 0 1 0 1 0\nq 1 0 1 0 1 0\n");
    try {
        read_boson_hamiltonian(dir.file("bad.txt"));
        FAIL("expected a parse error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
}

TEST_CASE("qubit Hamiltonian files round-trip and infer the qubit count") {
    TempDir dir;
    QubitHamiltonian h;
    h.qubits = 3;
    h.terms.push_back(PauliTerm{1, 3, 2, 3, 0.5});
    h.terms.push_back(PauliTerm{3, 1, 0, 0, -0.25});
    write_qubit_hamiltonian(dir.file("q.txt"), h);
    const QubitHamiltonian back = read_qubit_hamiltonian(dir.file("q.txt"));
    CHECK(back.qubits == 3);
    REQUIRE(back.terms.size() == 2);
    CHECK(back.terms[0].coeff == 0.5);
    CHECK(back.terms[1].mu == 1);
}

TEST_CASE("rdm files round-trip including complex off-diagonals") {
    TempDir dir;
    TwoBodyRdm rdm;
    rdm.modes = 2;
    rdm.mat = MatrixXcd::Zero(3, 3);
    rdm.mat(0, 0) = 0.25;
    rdm.mat(1, 1) = 0.75;
    rdm.mat(0, 1) = Complex{0.1, -0.2};
    rdm.mat(1, 0) = Complex{0.1, 0.2};
    write_rdm_file(dir.file("r.txt"), rdm);
    const TwoBodyRdm back = read_rdm_file(dir.file("r.txt"));
    CHECK(back.modes == 2);
    CHECK((back.mat - rdm.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("alpha files preserve the fixed coordinate order") {
    TempDir dir;
    VectorXd alpha(4);
    alpha << 0.5, -0.25, 1.0 / 3.0, 1e-17;
    write_alpha_file(dir.file("a.txt"), alpha);
    const VectorXd back = read_alpha_file(dir.file("a.txt"));
    REQUIRE(back.size() == 4);
    CHECK((back - alpha).norm() == 0.0);
}

TEST_CASE("ising files accept both line shapes") {
    TempDir dir;
    write_text(dir.file("i.txt"), "# instance\n1 2 0.7\n2 3 -0.4\n1 -0.3\n3 1.1\n");
    const ClassicalIsing h = read_ising_file(dir.file("i.txt"));
    CHECK(h.spins == 3);
    CHECK(h.couplings.size() == 2);
    CHECK(h.fields.size() == 2);
    write_ising_file(dir.file("i2.txt"), h);
    const ClassicalIsing back = read_ising_file(dir.file("i2.txt"));
    CHECK(back.couplings == h.couplings);
    CHECK(back.fields == h.fields);
}

TEST_CASE("missing files raise a readable error") {
    CHECK_THROWS_AS(read_state_file("/nonexistent/state.txt"), ValidationError);
}
