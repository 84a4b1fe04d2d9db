#include "bosonrep/spin_boson.hpp"

#include <algorithm>

#include <unsupported/Eigen/KroneckerProduct>

namespace bosonrep {

void QubitHamiltonian::validate() const {
    if (qubits < 1) throw ValidationError("QubitHamiltonian: need at least one qubit");
    for (const auto& t : terms) {
        if (t.mu < 0 || t.mu > 3 || t.nu < 0 || t.nu > 3)
            throw ValidationError("QubitHamiltonian: Pauli index out of range");
        if (!std::isfinite(t.coeff)) throw ValidationError("QubitHamiltonian: non-finite coefficient");
        const bool two_site = t.mu != 0 && t.nu != 0;
        if (t.mu != 0 && (t.site_i < 1 || t.site_i > qubits))
            throw ValidationError("QubitHamiltonian: site index out of range");
        if (t.nu != 0 && (t.site_j < 1 || t.site_j > qubits))
            throw ValidationError("QubitHamiltonian: site index out of range");
        if (two_site && t.site_i == t.site_j)
            throw ValidationError("QubitHamiltonian: two-site term with equal sites");
        if (two_site && adjacency == Adjacency::NearestNeighbor2D) {
            if (grid_rows * grid_cols != qubits)
                throw ValidationError("QubitHamiltonian: grid shape does not cover the qubits");
            const int ri = (t.site_i - 1) / grid_cols, ci = (t.site_i - 1) % grid_cols;
            const int rj = (t.site_j - 1) / grid_cols, cj = (t.site_j - 1) % grid_cols;
            if (std::abs(ri - rj) + std::abs(ci - cj) != 1)
                throw ValidationError("QubitHamiltonian: non-nearest-neighbor term under grid flag");
        }
    }
}

double QubitHamiltonian::coefficient_l1() const {
    double sum = 0.0;
    for (const auto& t : terms) sum += std::abs(t.coeff);
    return sum;
}

MatrixXcd pauli_matrix(int mu) {
    MatrixXcd p(2, 2);
    const Complex i{0.0, 1.0};
    switch (mu) {
        case 0: p << 1, 0, 0, 1; break;
        case 1: p << 0, 1, 1, 0; break;
        case 2: p << 0, i, -i, 0; break;
        case 3: p << -1, 0, 0, 1; break;
        default: throw ValidationError("pauli_matrix: index out of range");
    }
    return p;
}

MatrixXcd qubit_matrix(const QubitHamiltonian& h) {
    h.validate();
    const auto dim = static_cast<Eigen::Index>(1) << h.qubits;
    MatrixXcd total = MatrixXcd::Zero(dim, dim);
    for (const auto& t : h.terms) {
        MatrixXcd term = MatrixXcd::Identity(1, 1);
        for (int q = 1; q <= h.qubits; ++q) {
            int mu = 0;
            if (t.mu != 0 && q == t.site_i) mu = t.mu;
            if (t.nu != 0 && q == t.site_j) mu = t.nu;
            term = Eigen::kroneckerProduct(term, pauli_matrix(mu)).eval();
        }
        total += t.coeff * term;
    }
    return total;
}

std::vector<int> encoded_occupation(const std::vector<int>& bits, const DualRailEncoding& enc) {
    if (static_cast<int>(bits.size()) != enc.qubits)
        throw ValidationError("encoded_occupation: bit count mismatch");
    std::vector<int> occ(static_cast<std::size_t>(enc.modes()), 0);
    for (int q = 1; q <= enc.qubits; ++q) {
        const int z = bits[static_cast<std::size_t>(q - 1)];
        if (z != 0 && z != 1) throw ValidationError("encoded_occupation: bits must be 0/1");
        occ[static_cast<std::size_t>((z ? enc.mode_a(q) : enc.mode_b(q)) - 1)] = 1;
    }
    return occ;
}

MatrixXcd encoding_isometry(const QubitHamiltonian& h, const FockBasis& basis) {
    const DualRailEncoding enc{h.qubits};
    if (basis.modes != enc.modes() || basis.particles != h.qubits)
        throw ValidationError("encoding_isometry: basis does not match the dual-rail sector");
    const auto dim = static_cast<Eigen::Index>(1) << h.qubits;
    MatrixXcd iso = MatrixXcd::Zero(static_cast<Eigen::Index>(basis.size()), dim);
    for (Eigen::Index z = 0; z < dim; ++z) {
        std::vector<int> bits(static_cast<std::size_t>(h.qubits));
        for (int q = 0; q < h.qubits; ++q)
            bits[static_cast<std::size_t>(q)] = static_cast<int>((z >> (h.qubits - 1 - q)) & 1);
        iso(static_cast<Eigen::Index>(basis.index_of(encoded_occupation(bits, enc))), z) = 1.0;
    }
    return iso;
}

std::vector<BosonTerm> pauli_image(int qubit, int mu, const DualRailEncoding& enc) {
    const int a = enc.mode_a(qubit);
    const int b = enc.mode_b(qubit);
    const Complex i{0.0, 1.0};
    switch (mu) {
        case 0: return {BosonTerm{{}, {}, 1.0}};
        case 1: return {BosonTerm{{a}, {b}, 1.0}, BosonTerm{{b}, {a}, 1.0}};
        case 2: return {BosonTerm{{b}, {a}, i}, BosonTerm{{a}, {b}, -i}};
        case 3: return {BosonTerm{{a}, {a}, 1.0}, BosonTerm{{b}, {b}, -1.0}};
        default: throw ValidationError("pauli_image: index out of range");
    }
}

BosonHamiltonian schwinger_map(const QubitHamiltonian& h) {
    h.validate();
    const DualRailEncoding enc{h.qubits};
    BosonHamiltonian mapped;
    mapped.modes = enc.modes();
    for (const auto& t : h.terms) {
        std::vector<BosonTerm> left = t.mu != 0 ? pauli_image(t.site_i, t.mu, enc)
                                                : std::vector<BosonTerm>{BosonTerm{{}, {}, 1.0}};
        std::vector<BosonTerm> right = t.nu != 0 ? pauli_image(t.site_j, t.nu, enc)
                                                 : std::vector<BosonTerm>{BosonTerm{{}, {}, 1.0}};
        for (const auto& lt : left)
            for (const auto& rt : right) {
                BosonTerm product;
                product.create = lt.create;
                product.create.insert(product.create.end(), rt.create.begin(), rt.create.end());
                product.annihilate = lt.annihilate;
                product.annihilate.insert(product.annihilate.end(), rt.annihilate.begin(),
                                          rt.annihilate.end());
                product.coeff = t.coeff * lt.coeff * rt.coeff;
                mapped.terms.push_back(std::move(product));
            }
    }
    mapped.canonicalize();
    return mapped;
}

BosonHamiltonian penalty_hamiltonian(int qubits) {
    if (qubits < 1) throw ValidationError("penalty_hamiltonian: need at least one qubit");
    const DualRailEncoding enc{qubits};
    BosonHamiltonian penalty;
    penalty.modes = enc.modes();
    for (int q = 1; q <= qubits; ++q) {
        const int a = enc.mode_a(q);
        const int b = enc.mode_b(q);
        // (n_a + n_b - 1)^2 in normal order
        penalty.terms.push_back(BosonTerm{{a, a}, {a, a}, 1.0});
        penalty.terms.push_back(BosonTerm{{a, b}, {a, b}, 2.0});
        penalty.terms.push_back(BosonTerm{{b, b}, {b, b}, 1.0});
        penalty.terms.push_back(BosonTerm{{a}, {a}, -1.0});
        penalty.terms.push_back(BosonTerm{{b}, {b}, -1.0});
        penalty.terms.push_back(BosonTerm{{}, {}, 1.0});
    }
    return penalty;
}

double penalty_weight(const QubitHamiltonian& h, int particles) {
    if (particles != h.qubits)
        throw ValidationError("penalty_weight: particle number must equal the qubit count");
    return h.coefficient_l1() * particles * (particles - 1) / 2.0;
}

EquivalenceReport assemble_and_verify(const QubitHamiltonian& h,
                                      std::optional<double> weight_override, int dense_cap) {
    h.validate();
    const int n = h.qubits;
    if ((std::int64_t{1} << n) > dense_cap)
        throw ValidationError("assemble_and_verify: qubit dimension above cap");

    EquivalenceReport report;
    report.qubit_energy = extreme_eigenpair(qubit_matrix(h), false).value;
    report.penalty_weight_used = weight_override.value_or(penalty_weight(h, n));

    BosonHamiltonian bose = schwinger_map(h);
    bose.append(penalty_hamiltonian(n), report.penalty_weight_used);
    bose.canonicalize();

    const SectorOperator lifted = lift_hamiltonian(bose, n);
    if (lifted.matrix.rows() > dense_cap)
        throw ValidationError("assemble_and_verify: boson sector dimension above cap");
    const Eigenpair ground = ground_state(lifted, kHermTol, dense_cap);
    report.boson_energy = ground.value;
    report.energy_gap = std::abs(report.qubit_energy - report.boson_energy);

    BosonHamiltonian site_penalty;
    const BosonHamiltonian all_penalties = penalty_hamiltonian(n);
    for (int q = 0; q < n; ++q) {
        site_penalty.modes = all_penalties.modes;
        site_penalty.terms.assign(all_penalties.terms.begin() + 6 * q,
                                  all_penalties.terms.begin() + 6 * (q + 1));
        const SectorOperator p = lift_hamiltonian(site_penalty, n);
        const double expectation = (ground.vector.adjoint() * p.matrix * ground.vector)(0).real();
        report.penalty_expectations.push_back(expectation);
        report.max_penalty_expectation = std::max(report.max_penalty_expectation,
                                                  std::abs(expectation));
    }
    return report;
}

QubitHamiltonian random_qubit_hamiltonian(int qubits, Rng& rng, double amplitude) {
    QubitHamiltonian h;
    h.qubits = qubits;
    for (int i = 1; i <= qubits; ++i)
        for (int mu = 1; mu <= 3; ++mu)
            h.terms.push_back(PauliTerm{i, mu, 0, 0, amplitude * rng.normal()});
    for (int i = 1; i <= qubits; ++i)
        for (int j = i + 1; j <= qubits; ++j)
            for (int mu = 1; mu <= 3; ++mu)
                for (int nu = 1; nu <= 3; ++nu)
                    h.terms.push_back(PauliTerm{i, mu, j, nu, amplitude * rng.normal()});
    return h;
}

}  // namespace bosonrep
