#include "bosonrep/hp_verifier.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace bosonrep {

namespace {

constexpr long kQuditDimCap = 1 << 14;

long register_dimension(int modes, int dim) {
    long total = 1;
    for (int k = 0; k < modes; ++k) {
        total *= dim;
        if (total > kQuditDimCap)
            throw ValidationError("qudit register dimension exceeds the desk-scale cap");
    }
    return total;
}

int digit_sum(long index, int modes, int dim) {
    int sum = 0;
    for (int k = 0; k < modes; ++k) {
        sum += static_cast<int>(index % dim);
        index /= dim;
    }
    return sum;
}

}  // namespace

MatrixXcd hp_annihilator(int dim) {
    if (dim < 2) throw ValidationError("hp_annihilator: need at least two levels");
    MatrixXcd a = MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

MatrixXcd hp_sz(int dim) {
    const double s = 0.5 * (dim - 1);
    MatrixXcd sz = MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) sz(n, n) = s - n;
    return sz;
}

int max_touched_modes(const std::vector<BosonTerm>& terms) {
    int worst = 0;
    for (const auto& t : terms) {
        std::vector<int> modes = t.create;
        modes.insert(modes.end(), t.annihilate.begin(), t.annihilate.end());
        std::sort(modes.begin(), modes.end());
        modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
        worst = std::max(worst, static_cast<int>(modes.size()));
    }
    return worst;
}

MatrixXcd lift_to_qudits(const std::vector<BosonTerm>& terms, int modes, int dim) {
    const long total = register_dimension(modes, dim);
    const MatrixXcd a = hp_annihilator(dim);
    const MatrixXcd adag = a.adjoint();
    MatrixXcd result = MatrixXcd::Zero(total, total);
    for (const auto& term : terms) {
        MatrixXcd lifted = MatrixXcd::Identity(1, 1);
        for (int mode = 1; mode <= modes; ++mode) {
            const long creations = std::count(term.create.begin(), term.create.end(), mode);
            const long annihilations =
                std::count(term.annihilate.begin(), term.annihilate.end(), mode);
            MatrixXcd slot = MatrixXcd::Identity(dim, dim);
            for (long k = 0; k < annihilations; ++k) slot = a * slot;
            for (long k = 0; k < creations; ++k) slot = adag * slot;
            lifted = Eigen::kroneckerProduct(lifted, slot).eval();
        }
        result += term.coeff * lifted;
    }
    return result;
}

MatrixXcd qudit_number_operator(int modes, int dim) {
    const long total = register_dimension(modes, dim);
    MatrixXcd number = MatrixXcd::Zero(total, total);
    for (long idx = 0; idx < total; ++idx) number(idx, idx) = digit_sum(idx, modes, dim);
    return number;
}

VectorXcd encode_fock_state(const VectorXcd& amplitudes, const FockBasis& basis, int dim) {
    if (dim < basis.particles + 1)
        throw ValidationError("encode_fock_state: qudit dimension below N + 1");
    if (amplitudes.size() != static_cast<Eigen::Index>(basis.size()))
        throw ValidationError("encode_fock_state: amplitude count does not match basis");
    const long total = register_dimension(basis.modes, dim);
    VectorXcd encoded = VectorXcd::Zero(total);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        long idx = 0;
        for (int mode = 0; mode < basis.modes; ++mode)
            idx = idx * dim + basis.occupation(k)[static_cast<std::size_t>(mode)];
        encoded(idx) = amplitudes(static_cast<Eigen::Index>(k));
    }
    return encoded;
}

long WitnessBlocks::total_blocks() const {
    long total = 0;
    for (const auto& [state, count] : runs) total += count;
    return total;
}

WitnessBlocks honest_witness(const VectorXcd& sigma, const FockBasis& basis, long blocks, int dim) {
    if (blocks < 1) throw ValidationError("honest_witness: need at least one block");
    WitnessBlocks witness;
    witness.modes = basis.modes;
    witness.dim = dim;
    witness.runs.emplace_back(encode_fock_state(sigma, basis, dim), blocks);
    return witness;
}

long hoeffding_samples(double threshold, double failure_budget, std::size_t observable_count) {
    if (threshold <= 0.0 || failure_budget <= 0.0)
        throw ValidationError("hoeffding_samples: positive threshold and budget required");
    const double needed = 8.0 *
                          std::log(4.0 * static_cast<double>(observable_count) / failure_budget) /
                          (threshold * threshold);
    return static_cast<long>(std::ceil(needed));
}

namespace {

struct PreparedRun {
    VectorXcd projected;      // renormalized onto the N sector
    double sector_weight = 0.0;  // probability the number check reads N
};

long draw_from_cumulative(const std::vector<double>& cumulative, double u) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<long>(static_cast<long>(it - cumulative.begin()),
                          static_cast<long>(cumulative.size()) - 1);
}

}  // namespace

VerifierTranscript run_verifier(const TwoBodyRdm& rho, int particles, const WitnessBlocks& witness,
                                const VerifierConfig& config) {
    if (witness.modes != rho.modes)
        throw ValidationError("run_verifier: witness mode count does not match rho");
    if (witness.dim < particles + 1)
        throw ValidationError("run_verifier: qudit dimension below N + 1");
    rho.validate();

    const ObservableBasis obs_basis = observable_basis(rho.modes);
    const std::size_t l = obs_basis.count();
    const VectorXd targets = alpha_from_rdm(rho);

    VerifierTranscript transcript;
    transcript.particles = particles;
    transcript.threshold = config.threshold > 0.0 ? config.threshold : 0.25 * config.beta;
    const long samples = config.deterministic ? 1
                         : config.samples_per_observable > 0
                             ? config.samples_per_observable
                             : hoeffding_samples(transcript.threshold, config.failure_budget, l);
    const long blocks_needed = static_cast<long>(l) * samples;
    if (witness.total_blocks() < blocks_needed)
        throw ValidationError("run_verifier: " + std::to_string(blocks_needed) +
                              " blocks required, witness supplies " +
                              std::to_string(witness.total_blocks()));
    transcript.blocks_used = blocks_needed;

    Rng rng(config.seed);

    // number check per run state (projection onto the measured sector)
    const long reg_dim = register_dimension(witness.modes, witness.dim);
    std::vector<PreparedRun> prepared(witness.runs.size());
    for (std::size_t r = 0; r < witness.runs.size(); ++r) {
        const VectorXcd& state = witness.runs[r].first;
        if (state.size() != reg_dim)
            throw ValidationError("run_verifier: block state has the wrong register dimension");
        PreparedRun prep;
        prep.projected = VectorXcd::Zero(reg_dim);
        for (long idx = 0; idx < reg_dim; ++idx)
            if (digit_sum(idx, witness.modes, witness.dim) == particles)
                prep.projected(idx) = state(idx);
        prep.sector_weight = prep.projected.squaredNorm() / state.squaredNorm();
        if (prep.sector_weight > 0.0)
            prep.projected /= prep.projected.norm();
        prepared[r] = std::move(prep);
    }

    // assign blocks to observables; only non-iid witnesses need the shuffle
    std::vector<std::size_t> block_run;
    if (witness.runs.size() > 1) {
        block_run.reserve(static_cast<std::size_t>(witness.total_blocks()));
        for (std::size_t r = 0; r < witness.runs.size(); ++r)
            for (long c = 0; c < witness.runs[r].second; ++c) block_run.push_back(r);
        for (std::size_t i = block_run.size(); i > 1; --i)
            std::swap(block_run[i - 1], block_run[rng.below(i)]);
    }
    auto run_of_block = [&](long block) -> std::size_t {
        return block_run.empty() ? 0 : block_run[static_cast<std::size_t>(block)];
    };

    // number check on every consumed block
    bool number_ok = true;
    for (long block = 0; block < blocks_needed && number_ok; ++block) {
        const PreparedRun& prep = prepared[run_of_block(block)];
        ++transcript.number_checks;
        if (config.deterministic) {
            if (prep.sector_weight < 1.0 - 1e-12) {
                ++transcript.number_failures;
                number_ok = false;
            }
        } else if (prep.sector_weight < 1.0 - 1e-15 && rng.uniform() >= prep.sector_weight) {
            ++transcript.number_failures;
            number_ok = false;
        }
    }
    if (!number_ok) {
        transcript.accepted = false;
        transcript.reason = "particle-number check failed";
        return transcript;
    }

    // per-observable measurement on the projected states
    const double alpha_scale = 2.0 / (static_cast<double>(particles) * (particles - 1));
    std::vector<std::vector<long>> counts(l, std::vector<long>(witness.runs.size(), 0));
    for (std::size_t q = 0; q < l; ++q)
        for (long s = 0; s < samples; ++s)
            ++counts[q][run_of_block(static_cast<long>(q) * samples + s)];

    bool all_within = true;
    for (std::size_t q = 0; q < l; ++q) {
        const Observable& obs = obs_basis.observables[q];
        const MatrixXcd lifted =
            alpha_scale *
            lift_to_qudits(observable_monomials(obs, obs_basis.pairs), witness.modes, witness.dim);

        ObservableReport report;
        report.label = obs.label();
        report.target = targets(static_cast<Eigen::Index>(q));
        report.samples = config.deterministic ? 0 : samples;

        if (config.deterministic) {
            double mean = 0.0;
            long total = 0;
            for (std::size_t r = 0; r < witness.runs.size(); ++r) {
                if (counts[q][r] == 0) continue;
                const VectorXcd& psi = prepared[r].projected;
                mean += static_cast<double>(counts[q][r]) *
                        (psi.adjoint() * lifted * psi)(0).real();
                total += counts[q][r];
            }
            report.mean = mean / static_cast<double>(total);
        } else {
            Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(0.5 * (lifted + lifted.adjoint()));
            double sum = 0.0;
            for (std::size_t r = 0; r < witness.runs.size(); ++r) {
                if (counts[q][r] == 0) continue;
                const VectorXcd overlaps = eig.eigenvectors().adjoint() * prepared[r].projected;
                std::vector<double> cumulative(static_cast<std::size_t>(reg_dim));
                double acc = 0.0;
                for (long j = 0; j < reg_dim; ++j) {
                    acc += std::norm(overlaps(j));
                    cumulative[static_cast<std::size_t>(j)] = acc;
                }
                for (long s = 0; s < counts[q][r]; ++s) {
                    const long outcome = draw_from_cumulative(cumulative, rng.uniform() * acc);
                    sum += eig.eigenvalues()(outcome);
                }
            }
            report.mean = sum / static_cast<double>(samples);
        }
        report.deviation = std::abs(report.mean - report.target);
        if (report.deviation > transcript.threshold) all_within = false;
        transcript.observables.push_back(std::move(report));
    }

    transcript.accepted = all_within;
    transcript.reason = all_within ? "all observables within threshold"
                                   : "an observable deviates beyond the threshold";
    return transcript;
}

}  // namespace bosonrep
