#include "bosonrep/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bosonrep {

namespace {

struct Line {
    long number = 0;
    std::vector<std::string> tokens;
};

std::vector<Line> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open file");
    std::vector<Line> lines;
    std::string raw;
    long number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::istringstream stream(raw);
        Line line;
        line.number = number;
        std::string token;
        while (stream >> token) line.tokens.push_back(token);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

[[noreturn]] void fail(const std::string& path, const Line& line, std::size_t token,
                       const std::string& message) {
    throw ValidationError(path + ":" + std::to_string(line.number) + ":" +
                          std::to_string(token + 1) + ": " + message);
}

long parse_int(const std::string& path, const Line& line, std::size_t token) {
    if (token >= line.tokens.size()) fail(path, line, token, "missing integer field");
    try {
        std::size_t used = 0;
        const long value = std::stol(line.tokens[token], &used);
        if (used != line.tokens[token].size()) throw std::invalid_argument("trailing");
        return value;
    } catch (const std::exception&) {
        fail(path, line, token, "expected integer, found '" + line.tokens[token] + "'");
    }
}

double parse_real(const std::string& path, const Line& line, std::size_t token) {
    if (token >= line.tokens.size()) fail(path, line, token, "missing real field");
    try {
        std::size_t used = 0;
        const double value = std::stod(line.tokens[token], &used);
        if (used != line.tokens[token].size()) throw std::invalid_argument("trailing");
        return value;
    } catch (const std::exception&) {
        fail(path, line, token, "expected real number, found '" + line.tokens[token] + "'");
    }
}

void check_token_count(const std::string& path, const Line& line, std::size_t expected) {
    if (line.tokens.size() != expected)
        fail(path, line, line.tokens.size(),
             "expected " + std::to_string(expected) + " fields, found " +
                 std::to_string(line.tokens.size()));
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError(path + ": cannot open file for writing");
    return out;
}

void write_comments(std::ofstream& out, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << "\n";
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

StateFile read_state_file(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ValidationError(path + ": empty state file");
    StateFile file;
    file.modes = static_cast<int>(lines[0].tokens.size()) - 2;
    if (file.modes < 1) fail(path, lines[0], 0, "state line needs occupations plus re im");

    std::vector<std::pair<std::vector<int>, Complex>> entries;
    for (const auto& line : lines) {
        check_token_count(path, line, static_cast<std::size_t>(file.modes) + 2);
        std::vector<int> occ(static_cast<std::size_t>(file.modes));
        int total = 0;
        for (int k = 0; k < file.modes; ++k) {
            const long value = parse_int(path, line, static_cast<std::size_t>(k));
            if (value < 0) fail(path, line, static_cast<std::size_t>(k), "negative occupation");
            occ[static_cast<std::size_t>(k)] = static_cast<int>(value);
            total += static_cast<int>(value);
        }
        const double re = parse_real(path, line, static_cast<std::size_t>(file.modes));
        const double im = parse_real(path, line, static_cast<std::size_t>(file.modes) + 1);
        if (entries.empty()) file.particles = total;
        if (total != file.particles)
            fail(path, line, 0, "occupation sums differ between lines");
        entries.emplace_back(std::move(occ), Complex{re, im});
    }

    const FockBasis basis = enumerate_basis(file.particles, file.modes);
    file.amplitudes = VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (const auto& [occ, amp] : entries)
        file.amplitudes(static_cast<Eigen::Index>(basis.index_of(occ))) += amp;
    return file;
}

void write_state_file(const std::string& path, const FockBasis& basis, const VectorXcd& amplitudes,
                      const std::vector<std::string>& comments) {
    if (amplitudes.size() != static_cast<Eigen::Index>(basis.size()))
        throw ValidationError("write_state_file: amplitude count does not match basis");
    auto out = open_out(path);
    write_comments(out, comments);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const Complex amp = amplitudes(static_cast<Eigen::Index>(k));
        if (amp == Complex{0.0, 0.0}) continue;
        for (int occ : basis.occupation(k)) out << occ << " ";
        out << format_double(amp.real()) << " " << format_double(amp.imag()) << "\n";
    }
}

void write_ensemble_file(const std::string& path, const FockBasis& basis,
                         const WitnessEnsemble& ensemble,
                         const std::vector<std::string>& comments) {
    auto out = open_out(path);
    write_comments(out, comments);
    for (std::size_t c = 0; c < ensemble.states.size(); ++c) {
        out << "w " << format_double(ensemble.weights[c]) << "\n";
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const Complex amp = ensemble.states[c](static_cast<Eigen::Index>(k));
            if (amp == Complex{0.0, 0.0}) continue;
            for (int occ : basis.occupation(k)) out << occ << " ";
            out << format_double(amp.real()) << " " << format_double(amp.imag()) << "\n";
        }
    }
}

BosonHamiltonian read_boson_hamiltonian(const std::string& path) {
    const auto lines = read_lines(path);
    BosonHamiltonian h;
    int max_mode = 0;
    for (const auto& line : lines) {
        if (line.tokens[0] == "m") {
            check_token_count(path, line, 2);
            h.modes = static_cast<int>(parse_int(path, line, 1));
            continue;
        }
        if (line.tokens[0] != "c")
            fail(path, line, 0, "expected term tag 'c' or header 'm'");
        check_token_count(path, line, 7);
        BosonTerm term;
        const long i = parse_int(path, line, 1);
        const long j = parse_int(path, line, 2);
        const long k = parse_int(path, line, 3);
        const long l = parse_int(path, line, 4);
        for (long idx : {i, j, k, l})
            if (idx < 0) fail(path, line, 1, "negative mode index");
        if (i > 0) term.create.push_back(static_cast<int>(i));
        if (j > 0) term.create.push_back(static_cast<int>(j));
        if (k > 0) term.annihilate.push_back(static_cast<int>(k));
        if (l > 0) term.annihilate.push_back(static_cast<int>(l));
        term.coeff = Complex{parse_real(path, line, 5), parse_real(path, line, 6)};
        for (int mode : term.create) max_mode = std::max(max_mode, mode);
        for (int mode : term.annihilate) max_mode = std::max(max_mode, mode);
        h.terms.push_back(std::move(term));
    }
    if (h.modes == 0) h.modes = max_mode;
    if (h.modes < max_mode)
        throw ValidationError(path + ": declared mode count below the largest index used");
    if (h.modes == 0) throw ValidationError(path + ": no terms and no mode header");
    return h;
}

void write_boson_hamiltonian(const std::string& path, const BosonHamiltonian& h,
                             const std::vector<std::string>& comments) {
    auto out = open_out(path);
    write_comments(out, comments);
    out << "m " << h.modes << "\n";
    for (const auto& term : h.terms) {
        if (term.create.size() > 2 || term.annihilate.size() > 2)
            throw ValidationError("write_boson_hamiltonian: term beyond two-body");
        const int i = term.create.size() > 0 ? term.create[0] : 0;
        const int j = term.create.size() > 1 ? term.create[1] : 0;
        const int k = term.annihilate.size() > 0 ? term.annihilate[0] : 0;
        const int l = term.annihilate.size() > 1 ? term.annihilate[1] : 0;
        out << "c " << i << " " << j << " " << k << " " << l << " "
            << format_double(term.coeff.real()) << " " << format_double(term.coeff.imag()) << "\n";
    }
}

QubitHamiltonian read_qubit_hamiltonian(const std::string& path) {
    const auto lines = read_lines(path);
    QubitHamiltonian h;
    for (const auto& line : lines) {
        check_token_count(path, line, 5);
        PauliTerm term;
        term.site_i = static_cast<int>(parse_int(path, line, 0));
        term.mu = static_cast<int>(parse_int(path, line, 1));
        term.site_j = static_cast<int>(parse_int(path, line, 2));
        term.nu = static_cast<int>(parse_int(path, line, 3));
        term.coeff = parse_real(path, line, 4);
        if (term.mu < 0 || term.mu > 3 || term.nu < 0 || term.nu > 3)
            fail(path, line, 1, "Pauli index outside 0..3");
        h.qubits = std::max({h.qubits, term.site_i, term.site_j});
        h.terms.push_back(term);
    }
    if (h.qubits == 0) throw ValidationError(path + ": no terms");
    h.validate();
    return h;
}

void write_qubit_hamiltonian(const std::string& path, const QubitHamiltonian& h,
                             const std::vector<std::string>& comments) {
    auto out = open_out(path);
    write_comments(out, comments);
    for (const auto& term : h.terms)
        out << term.site_i << " " << term.mu << " " << term.site_j << " " << term.nu << " "
            << format_double(term.coeff) << "\n";
}

TwoBodyRdm read_rdm_file(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw ValidationError(path + ": empty RDM file");
    check_token_count(path, lines[0], 2);
    const int modes = static_cast<int>(parse_int(path, lines[0], 0));
    const long pair_count = parse_int(path, lines[0], 1);
    const PairBasis pairs = pair_basis(modes);
    if (pair_count != static_cast<long>(pairs.size()))
        fail(path, lines[0], 1, "pair count does not equal m(m+1)/2");

    TwoBodyRdm rdm;
    rdm.modes = modes;
    rdm.mat = MatrixXcd::Zero(pair_count, pair_count);
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const Line& line = lines[n];
        check_token_count(path, line, 4);
        const long row = parse_int(path, line, 0);
        const long col = parse_int(path, line, 1);
        if (row < 0 || row >= pair_count || col < 0 || col >= pair_count)
            fail(path, line, 0, "pair rank out of range");
        rdm.mat(row, col) = Complex{parse_real(path, line, 2), parse_real(path, line, 3)};
    }
    return rdm;
}

void write_rdm_file(const std::string& path, const TwoBodyRdm& rdm,
                    const std::vector<std::string>& comments) {
    auto out = open_out(path);
    write_comments(out, comments);
    out << rdm.modes << " " << rdm.mat.rows() << "\n";
    for (Eigen::Index r = 0; r < rdm.mat.rows(); ++r)
        for (Eigen::Index c = 0; c < rdm.mat.cols(); ++c) {
            const Complex value = rdm.mat(r, c);
            if (value == Complex{0.0, 0.0}) continue;
            out << r << " " << c << " " << format_double(value.real()) << " "
                << format_double(value.imag()) << "\n";
        }
}

VectorXd read_alpha_file(const std::string& path) {
    const auto lines = read_lines(path);
    VectorXd alpha(static_cast<Eigen::Index>(lines.size()));
    for (std::size_t n = 0; n < lines.size(); ++n) {
        check_token_count(path, lines[n], 1);
        alpha(static_cast<Eigen::Index>(n)) = parse_real(path, lines[n], 0);
    }
    return alpha;
}

void write_alpha_file(const std::string& path, const VectorXd& alpha,
                      const std::vector<std::string>& comments) {
    auto out = open_out(path);
    write_comments(out, comments);
    for (Eigen::Index i = 0; i < alpha.size(); ++i) out << format_double(alpha(i)) << "\n";
}

ClassicalIsing read_ising_file(const std::string& path) {
    const auto lines = read_lines(path);
    ClassicalIsing h;
    for (const auto& line : lines) {
        if (line.tokens.size() == 3) {
            const int i = static_cast<int>(parse_int(path, line, 0));
            const int j = static_cast<int>(parse_int(path, line, 1));
            h.couplings.emplace_back(std::min(i, j), std::max(i, j), parse_real(path, line, 2));
            h.spins = std::max({h.spins, i, j});
        } else if (line.tokens.size() == 2) {
            const int i = static_cast<int>(parse_int(path, line, 0));
            h.fields.emplace_back(i, parse_real(path, line, 1));
            h.spins = std::max(h.spins, i);
        } else {
            fail(path, line, 0, "expected `i j J` or `i h`");
        }
    }
    if (h.spins == 0) throw ValidationError(path + ": no terms");
    h.validate();
    return h;
}

void write_ising_file(const std::string& path, const ClassicalIsing& h,
                      const std::vector<std::string>& comments) {
    auto out = open_out(path);
    write_comments(out, comments);
    for (const auto& [i, j, coupling] : h.couplings)
        out << i << " " << j << " " << format_double(coupling) << "\n";
    for (const auto& [i, field] : h.fields) out << i << " " << format_double(field) << "\n";
}

}  // namespace bosonrep
