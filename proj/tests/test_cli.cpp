#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bosonrep/io.hpp"

using namespace bosonrep;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("bosonrep_cli_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& stdout_file = "/dev/null") {
    const std::string command =
        std::string(BOSONREP_CLI_PATH) + " " + args + " > " + stdout_file + " 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("map appends penalties and records the paper weight") {
    TempDir dir;
    write_text(dir.file("zz.qh"), "1 3 2 3 1.0\n");
    REQUIRE(run("map --in " + dir.file("zz.qh") + " --out " + dir.file("zz.bh"),
                dir.file("map.out")) == 0);
    const std::string report = slurp(dir.file("map.out"));
    CHECK(report.find("penalty_weight = 1") != std::string::npos);
    const std::string mapped = slurp(dir.file("zz.bh"));
    CHECK(mapped.find("penalty weight c = 1") != std::string::npos);

    // the mapped file solves to the qubit ground energy
    REQUIRE(run("solve --in " + dir.file("zz.bh") + " --N 2 --via exact",
                dir.file("solve.out")) == 0);
    CHECK(slurp(dir.file("solve.out")).find("energy = -1\n") != std::string::npos);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    TempDir dir;
    std::string state_first, rdm_first, gen_first, rdm_report_first;
    for (int round = 0; round < 2; ++round) {
        REQUIRE(run("gen --kind state --N 2 --m 3 --seed 9 --out " + dir.file("state.txt"),
                    dir.file("gen.out")) == 0);
        REQUIRE(run("rdm --in " + dir.file("state.txt") + " --out " + dir.file("rdm.txt"),
                    dir.file("rdm.out")) == 0);
        if (round == 0) {
            state_first = slurp(dir.file("state.txt"));
            rdm_first = slurp(dir.file("rdm.txt"));
            gen_first = slurp(dir.file("gen.out"));
            rdm_report_first = slurp(dir.file("rdm.out"));
        }
    }
    CHECK(slurp(dir.file("state.txt")) == state_first);
    CHECK(slurp(dir.file("rdm.txt")) == rdm_first);
    CHECK(slurp(dir.file("gen.out")) == gen_first);
    CHECK(slurp(dir.file("rdm.out")) == rdm_report_first);
}

TEST_CASE("a generated state round-trips through rdm and nrep as YES") {
    TempDir dir;
    REQUIRE(run("gen --kind state --N 3 --m 2 --seed 4 --out " + dir.file("s.txt")) == 0);
    REQUIRE(run("rdm --in " + dir.file("s.txt") + " --out " + dir.file("s.rdm")) == 0);
    REQUIRE(run("nrep --in " + dir.file("s.rdm") + " --N 3 --beta 0.1",
                dir.file("nrep.out")) == 0);
    CHECK(slurp(dir.file("nrep.out")).find("decision = YES") != std::string::npos);
}

TEST_CASE("solve via exact and via oracle agree within eps") {
    TempDir dir;
    write_text(dir.file("h.bh"), "m 2\nc 1 0 2 0 1 0\nc 2 0 1 0 1 0\nc 1 1 1 1 0.4 0\n");
    REQUIRE(run("solve --in " + dir.file("h.bh") + " --N 2 --via exact",
                dir.file("exact.out")) == 0);
    REQUIRE(run("solve --in " + dir.file("h.bh") + " --N 2 --via oracle --eps 0.05",
                dir.file("oracle.out")) == 0);
    double exact = 0.0, via_oracle = 0.0;
    std::istringstream exact_lines(slurp(dir.file("exact.out")));
    std::istringstream oracle_lines(slurp(dir.file("oracle.out")));
    for (std::string line; std::getline(exact_lines, line);)
        if (line.rfind("energy = ", 0) == 0) exact = std::stod(line.substr(9));
    for (std::string line; std::getline(oracle_lines, line);)
        if (line.rfind("energy = ", 0) == 0) via_oracle = std::stod(line.substr(9));
    CHECK(std::abs(exact - via_oracle) <= 0.05);
}

TEST_CASE("verify accepts an honest witness in deterministic mode") {
    TempDir dir;
    REQUIRE(run("gen --kind state --N 2 --m 2 --seed 12 --out " + dir.file("w.txt")) == 0);
    REQUIRE(run("rdm --in " + dir.file("w.txt") + " --out " + dir.file("w.rdm")) == 0);
    REQUIRE(run("verify --rho " + dir.file("w.rdm") + " --witness " + dir.file("w.txt") +
                    " --N 2 --beta 0.2 --deterministic",
                dir.file("verify.out")) == 0);
    CHECK(slurp(dir.file("verify.out")).find("decision = YES") != std::string::npos);
}

TEST_CASE("diag-nrep reports an exact brute-force match") {
    TempDir dir;
    REQUIRE(run("gen --kind ising --n 6 --seed 3 --out " + dir.file("i.txt")) == 0);
    REQUIRE(run("diag-nrep --in " + dir.file("i.txt"), dir.file("diag.out")) == 0);
    CHECK(slurp(dir.file("diag.out")).find("exact_match = 1") != std::string::npos);
}

TEST_CASE("malformed input exits with the validation code and a position") {
    TempDir dir;
    write_text(dir.file("bad.qh"), "1 3 2 9 1.0\n");
    CHECK(run("map --in " + dir.file("bad.qh") + " --out " + dir.file("x.bh"),
              dir.file("err.out")) == 2);
    const std::string message = slurp(dir.file("err.out"));
    CHECK(message.find(":1:") != std::string::npos);

    CHECK(run("map --in " + dir.file("missing.qh") + " --out " + dir.file("x.bh")) == 2);
    CHECK(run("frobnicate") != 0);
}

TEST_CASE("solve reports the budget exit code when iterations run out") {
    TempDir dir;
    write_text(dir.file("h.bh"), "m 2\nc 1 0 2 0 1 0\nc 2 0 1 0 1 0\n");
    CHECK(run("solve --in " + dir.file("h.bh") +
              " --N 2 --via oracle --eps 0.0001 --max-iter 3") == 3);
}
