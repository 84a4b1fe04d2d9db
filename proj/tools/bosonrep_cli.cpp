// Command-line front end for the bosonic N-representability toolkit.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bosonrep/ellipsoid.hpp"
#include "bosonrep/hp_verifier.hpp"
#include "bosonrep/io.hpp"

namespace {

using namespace bosonrep;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

/// Deterministic key-value report, echoed to stdout and optionally a file.
class Report {
public:
    void add(const std::string& key, const std::string& value) {
        lines_.push_back(key + " = " + value);
    }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
    void add(const std::string& key, long value) { add(key, std::to_string(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }

    void emit(const std::string& path) const {
        std::ostringstream text;
        for (const auto& line : lines_) text << line << "\n";
        std::cout << text.str();
        if (!path.empty()) {
            std::ofstream out(path);
            if (!out) throw ValidationError(path + ": cannot open report file");
            out << text.str();
        }
    }

private:
    std::vector<std::string> lines_;
};

int run_gen(const std::string& kind, int n, int particles, int modes, std::uint64_t seed,
            const std::string& out, const std::string& report_path) {
    Rng rng(seed);
    Report report;
    report.add("command", "gen");
    report.add("kind", kind);
    report.add("seed", static_cast<long>(seed));
    report.add("out", out);
    if (kind == "qubit") {
        if (n < 1) throw ValidationError("gen qubit: --n must be at least 1");
        const QubitHamiltonian h = random_qubit_hamiltonian(n, rng);
        write_qubit_hamiltonian(out, h, {"random 2-local instance, seed " + std::to_string(seed)});
        report.add("qubits", n);
        report.add("terms", static_cast<long>(h.terms.size()));
    } else if (kind == "state") {
        if (particles < 0 || modes < 1)
            throw ValidationError("gen state: need --N >= 0 and --m >= 1");
        const FockBasis basis = enumerate_basis(particles, modes);
        const VectorXcd state = random_sector_state(basis, rng);
        write_state_file(out, basis, state, {"random sector state, seed " + std::to_string(seed)});
        report.add("N", particles);
        report.add("m", modes);
        report.add("dimension", static_cast<long>(basis.size()));
    } else if (kind == "ising") {
        if (n < 1) throw ValidationError("gen ising: --n must be at least 1");
        const ClassicalIsing h = random_ising(n, rng);
        write_ising_file(out, h, {"random spin-glass instance, seed " + std::to_string(seed)});
        report.add("spins", n);
        report.add("couplings", static_cast<long>(h.couplings.size()));
        report.add("fields", static_cast<long>(h.fields.size()));
    } else {
        throw ValidationError("gen: unknown kind '" + kind + "'");
    }
    report.emit(report_path);
    return kExitOk;
}

int run_map(const std::string& in, const std::string& out, double weight_override,
            bool no_penalty, const std::string& report_path) {
    const QubitHamiltonian h = read_qubit_hamiltonian(in);
    BosonHamiltonian bose = schwinger_map(h);
    const double weight =
        weight_override >= 0.0 ? weight_override : penalty_weight(h, h.qubits);
    if (!no_penalty) bose.append(penalty_hamiltonian(h.qubits), weight);
    bose.canonicalize();
    write_boson_hamiltonian(out, bose,
                            {"schwinger map of " + in,
                             "qubits " + std::to_string(h.qubits),
                             "penalty weight c = " + format_double(no_penalty ? 0.0 : weight)});
    Report report;
    report.add("command", "map");
    report.add("in", in);
    report.add("out", out);
    report.add("qubits", h.qubits);
    report.add("modes", bose.modes);
    report.add("penalty_weight", no_penalty ? 0.0 : weight);
    report.add("terms", static_cast<long>(bose.terms.size()));
    report.emit(report_path);
    return kExitOk;
}

int run_diag(const std::string& in, int particles, int modes, const std::string& state_out,
             const std::string& report_path) {
    BosonHamiltonian h = read_boson_hamiltonian(in);
    if (modes > 0) {
        if (modes < h.modes) throw ValidationError("diag: --m below the largest mode index");
        h.modes = modes;
    }
    const SectorOperator lifted = lift_hamiltonian(h, particles);
    const Eigenpair ground = bosonrep::ground_state(lifted);
    Report report;
    report.add("command", "diag");
    report.add("in", in);
    report.add("N", particles);
    report.add("m", h.modes);
    report.add("dimension", static_cast<long>(lifted.rows()));
    report.add("energy", ground.value);
    report.add("residual", ground.residual);
    if (!state_out.empty()) {
        write_state_file(state_out, enumerate_basis(particles, h.modes), ground.vector,
                         {"ground state of " + in});
        report.add("state_out", state_out);
    }
    report.emit(report_path);
    return kExitOk;
}

int run_rdm(const std::string& in, const std::string& out, const std::string& report_path) {
    const StateFile state = read_state_file(in);
    const FockBasis basis = enumerate_basis(state.particles, state.modes);
    VectorXcd normalized = state.amplitudes;
    const double norm = normalized.norm();
    if (norm <= 0.0) throw ValidationError("rdm: state file has zero norm");
    normalized /= norm;
    const TwoBodyRdm rdm = two_rdm(normalized, basis);
    write_rdm_file(out, rdm, {"two-boson RDM of " + in,
                              "N " + std::to_string(state.particles)});
    Report report;
    report.add("command", "rdm");
    report.add("in", in);
    report.add("out", out);
    report.add("N", state.particles);
    report.add("m", state.modes);
    report.add("pair_dimension", static_cast<long>(rdm.dim()));
    report.emit(report_path);
    return kExitOk;
}

int run_nrep(const std::string& in, int particles, double beta, int budget,
             const std::string& witness_out, const std::string& nearest_out,
             const std::string& report_path) {
    const TwoBodyRdm rho = read_rdm_file(in);
    rho.validate();
    ProjectionBudget projection{budget, 1e-12};
    const MembershipVerdict verdict = decide_membership(rho, particles, rho.modes, beta, projection);

    Report report;
    report.add("command", "nrep");
    report.add("in", in);
    report.add("N", particles);
    report.add("m", rho.modes);
    report.add("beta", beta);
    report.add("budget", budget);
    report.add("yes_threshold", verdict.yes_threshold);
    report.add("no_threshold", verdict.no_threshold);
    const char* decision = verdict.decision == Membership::Yes   ? "YES"
                           : verdict.decision == Membership::No ? "NO"
                                                                : "INDETERMINATE";
    report.add("decision", decision);
    report.add("trace_distance", verdict.trace_distance);
    report.add("dual_gap", verdict.dual_gap);
    if (verdict.decision == Membership::No) report.add("margin", verdict.margin);
    if (!verdict.note.empty()) report.add("note", verdict.note);
    if (!witness_out.empty()) {
        write_ensemble_file(witness_out, enumerate_basis(particles, rho.modes), verdict.witness,
                            {"nearest-witness ensemble for " + in});
        report.add("witness_out", witness_out);
    }
    if (!nearest_out.empty()) {
        write_rdm_file(nearest_out, verdict.nearest, {"nearest representable RDM for " + in});
        report.add("nearest_out", nearest_out);
    }
    report.emit(report_path);
    return kExitOk;
}

int run_solve(const std::string& in, int particles, int modes, const std::string& via, double eps,
              int max_iter, const std::string& mode, const std::string& trace_path,
              const std::string& report_path) {
    BosonHamiltonian h = read_boson_hamiltonian(in);
    if (modes > 0) {
        if (modes < h.modes) throw ValidationError("solve: --m below the largest mode index");
        h.modes = modes;
    }
    Report report;
    report.add("command", "solve");
    report.add("in", in);
    report.add("N", particles);
    report.add("m", h.modes);
    report.add("via", via);
    report.add("eps", eps);

    if (via == "exact") {
        const Eigenpair ground = bosonrep::ground_state(lift_hamiltonian(h, particles));
        report.add("energy", ground.value);
        report.add("residual", ground.residual);
        report.emit(report_path);
        return kExitOk;
    }
    if (via != "oracle") throw ValidationError("solve: --via must be 'exact' or 'oracle'");

    MinimizeOptions options;
    options.max_iterations = max_iter;
    options.keep_trace = !trace_path.empty();
    if (mode == "central")
        options.mode = CutMode::Central;
    else if (mode == "shallow")
        options.mode = CutMode::Shallow;
    else
        throw ValidationError("solve: --mode must be 'central' or 'shallow'");

    const OracleEnergyReport result = ground_energy_via_oracle(h, particles, h.modes, eps, options);
    report.add("mode", mode);
    report.add("max_iter", max_iter);
    report.add("energy", result.energy);
    report.add("lower_bound", result.minimize.lower_bound);
    report.add("iterations", result.minimize.iterations);
    report.add("oracle_calls", result.minimize.oracle_calls);
    report.add("status", result.minimize.status);
    if (sector_dimension(particles, h.modes) <= kDefaultDenseCap)
        report.add("exact_energy", result.exact_energy);

    if (!trace_path.empty()) {
        std::ofstream trace(trace_path);
        if (!trace) throw ValidationError(trace_path + ": cannot open trace file");
        trace << "# iteration kind center_value log_det feasible distance\n";
        for (const auto& row : result.minimize.trace)
            trace << row.iteration << " "
                  << (row.kind == CutKind::Objective ? "objective" : "feasibility") << " "
                  << format_double(row.center_value) << " " << format_double(row.log_det) << " "
                  << (row.feasible ? 1 : 0) << " " << format_double(row.distance) << "\n";
    }
    report.emit(report_path);
    if (!result.minimize.converged) return kExitBudget;
    return kExitOk;
}

int run_verify(const std::string& rho_path, const std::string& witness_path, int particles,
               double beta, long samples, long blocks, bool deterministic, std::uint64_t seed,
               const std::string& report_path) {
    const TwoBodyRdm rho = read_rdm_file(rho_path);
    const StateFile witness_state = read_state_file(witness_path);
    if (witness_state.modes != rho.modes)
        throw ValidationError("verify: witness mode count does not match rho");

    const FockBasis basis = enumerate_basis(witness_state.particles, witness_state.modes);
    VectorXcd amplitudes = witness_state.amplitudes;
    const double norm = amplitudes.norm();
    if (norm <= 0.0) throw ValidationError("verify: witness state has zero norm");
    amplitudes /= norm;

    VerifierConfig config;
    config.beta = beta;
    config.samples_per_observable = samples;
    config.deterministic = deterministic;
    config.seed = seed;

    const std::size_t l = observable_basis(rho.modes).count();
    const long per_observable =
        deterministic ? 1
                      : (samples > 0 ? samples : hoeffding_samples(0.25 * beta, 0.05, l));
    const long needed = static_cast<long>(l) * per_observable;
    const long supply = blocks > 0 ? blocks : needed;
    const int dim = std::max(particles, witness_state.particles) + 1;
    const WitnessBlocks witness = honest_witness(amplitudes, basis, supply, dim);

    const VerifierTranscript transcript = run_verifier(rho, particles, witness, config);

    Report report;
    report.add("command", "verify");
    report.add("rho", rho_path);
    report.add("witness", witness_path);
    report.add("N", particles);
    report.add("witness_N", witness_state.particles);
    report.add("beta", beta);
    report.add("threshold", transcript.threshold);
    report.add("deterministic", deterministic ? 1 : 0);
    report.add("seed", static_cast<long>(seed));
    report.add("qudit_dim", dim);
    report.add("blocks_used", transcript.blocks_used);
    report.add("number_checks", transcript.number_checks);
    report.add("number_failures", transcript.number_failures);
    for (const auto& obs : transcript.observables)
        report.add("observable " + obs.label,
                   "mean " + format_double(obs.mean) + " target " + format_double(obs.target) +
                       " deviation " + format_double(obs.deviation));
    report.add("decision", transcript.accepted ? "YES" : "NO");
    report.add("reason", transcript.reason);
    report.emit(report_path);
    return kExitOk;
}

int run_diag_nrep(const std::string& in, const std::string& report_path) {
    const ClassicalIsing h = read_ising_file(in);
    const DiagEnergyReport result = ising_energy_via_diag(h);
    Report report;
    report.add("command", "diag-nrep");
    report.add("in", in);
    report.add("spins", h.spins);
    report.add("configurations", result.configurations);
    report.add("energy", result.energy);
    report.add("brute_force_energy", result.brute_force_energy);
    report.add("exact_match", result.exact_match ? 1 : 0);
    std::string bits;
    for (int b : result.best_configuration) bits += std::to_string(b);
    report.add("best_configuration", bits);
    report.emit(report_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bosonic N-representability toolkit"};
    app.require_subcommand(1);

    std::string in, out, report_path, trace_path, witness_out, nearest_out;
    std::string kind = "qubit", via = "oracle", mode = "central";
    std::string rho_path, witness_path;
    int n = 0, particles = 0, modes = 0;
    std::uint64_t seed = 1;
    double beta = 0.1, eps = 0.05;
    double weight_override = -1.0;
    bool no_penalty = false, deterministic = false;
    int budget = 20000, max_iter = 400000;
    long samples = 0, blocks = 0;

    auto* gen = app.add_subcommand("gen", "generate a seeded random instance");
    gen->add_option("--kind", kind, "qubit | state | ising")->required();
    gen->add_option("--n", n, "qubit / spin count");
    gen->add_option("--N", particles, "boson count (state)");
    gen->add_option("--m", modes, "mode count (state)");
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--out", out, "output file")->required();
    gen->add_option("--report", report_path, "also write the report here");

    auto* map = app.add_subcommand("map", "Schwinger-map a qubit Hamiltonian to bosons");
    map->add_option("--in", in, "qubit Hamiltonian file")->required();
    map->add_option("--out", out, "boson Hamiltonian file")->required();
    map->add_option("--penalty-weight", weight_override,
                    "override the paper bound for the projector weight");
    map->add_flag("--no-penalty", no_penalty, "emit the bare map without penalties");
    map->add_option("--report", report_path);

    auto* diag = app.add_subcommand("diag", "exact diagonalization on a boson sector");
    diag->add_option("--in", in, "boson Hamiltonian file")->required();
    diag->add_option("--N", particles, "boson count")->required();
    diag->add_option("--m", modes, "mode count (default: from the file)");
    diag->add_option("--state-out", out, "write the ground state here");
    diag->add_option("--report", report_path);

    auto* rdm = app.add_subcommand("rdm", "two-boson RDM of a sector state");
    rdm->add_option("--in", in, "state file")->required();
    rdm->add_option("--out", out, "RDM file")->required();
    rdm->add_option("--report", report_path);

    auto* nrep = app.add_subcommand("nrep", "decide bosonic N-representability");
    nrep->add_option("--in", in, "RDM file")->required();
    nrep->add_option("--N", particles, "boson count")->required();
    nrep->add_option("--beta", beta, "promise gap")->required();
    nrep->add_option("--budget", budget, "projection iteration budget");
    nrep->add_option("--witness-out", witness_out, "write the witness ensemble here");
    nrep->add_option("--nearest-out", nearest_out, "write the nearest RDM here");
    nrep->add_option("--report", report_path);

    auto* solve = app.add_subcommand("solve", "ground energy, exact or oracle-driven");
    solve->add_option("--in", in, "boson Hamiltonian file")->required();
    solve->add_option("--N", particles, "boson count")->required();
    solve->add_option("--m", modes, "mode count (default: from the file)");
    solve->add_option("--via", via, "exact | oracle");
    solve->add_option("--eps", eps, "target accuracy");
    solve->add_option("--max-iter", max_iter, "ellipsoid iteration cap");
    solve->add_option("--mode", mode, "central | shallow");
    solve->add_option("--trace", trace_path, "write the per-iteration trace here");
    solve->add_option("--report", report_path);

    auto* verify = app.add_subcommand("verify", "simulate the QMA verifier");
    verify->add_option("--rho", rho_path, "RDM file")->required();
    verify->add_option("--witness", witness_path, "witness state file")->required();
    verify->add_option("--N", particles, "claimed boson count")->required();
    verify->add_option("--beta", beta, "promise gap");
    verify->add_option("--samples", samples, "samples per observable (0 = Hoeffding bound)");
    verify->add_option("--blocks", blocks, "witness blocks supplied (0 = exactly as needed)");
    verify->add_flag("--deterministic", deterministic, "exact expectations instead of sampling");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--report", report_path);

    auto* diag_nrep = app.add_subcommand("diag-nrep", "diagonal-data spin-glass reduction");
    diag_nrep->add_option("--in", in, "Ising file")->required();
    diag_nrep->add_option("--report", report_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (gen->parsed()) return run_gen(kind, n, particles, modes, seed, out, report_path);
        if (map->parsed()) return run_map(in, out, weight_override, no_penalty, report_path);
        if (diag->parsed()) return run_diag(in, particles, modes, out, report_path);
        if (rdm->parsed()) return run_rdm(in, out, report_path);
        if (nrep->parsed())
            return run_nrep(in, particles, beta, budget, witness_out, nearest_out, report_path);
        if (solve->parsed())
            return run_solve(in, particles, modes, via, eps, max_iter, mode, trace_path,
                             report_path);
        if (verify->parsed())
            return run_verify(rho_path, witness_path, particles, beta, samples, blocks,
                              deterministic, seed, report_path);
        if (diag_nrep->parsed()) return run_diag_nrep(in, report_path);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
