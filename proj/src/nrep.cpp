#include "bosonrep/nrep.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace bosonrep {

namespace {

double hs_inner(const MatrixXcd& a, const MatrixXcd& b) {
    return a.cwiseProduct(b.conjugate()).sum().real();
}

double trace_norm(const MatrixXcd& mat) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(0.5 * (mat + mat.adjoint()),
                                                    Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
}

/// Everything reusable about the (N, m) sector: pair maps, the compressed
/// lifts K_IJ realizing L(sigma)_IJ = Tr(sigma K_IJ), and the lifted alpha
/// observables.
struct SectorContext {
    int particles = 0;
    int modes = 0;
    FockBasis basis;
    PairBasis pairs;
    ObservableBasis observables;
    std::size_t pair_count = 0;     // M
    std::size_t sector_dim = 0;     // D
    std::vector<SpMat> pair_maps;   // P_I: N -> N-2
    std::vector<MatrixXcd> transfer;  // K_IJ, row-major over (I, J)
    std::vector<MatrixXcd> alpha_lifts;  // expectation = alpha_Q

    SectorContext(int n, int m) : particles(n), modes(m) {
        if (n < 2) throw ValidationError("sector context: need at least two bosons");
        basis = enumerate_basis(n, m);
        pairs = pair_basis(m);
        observables = observable_basis(m);
        pair_count = pairs.size();
        sector_dim = basis.size();

        pair_maps.reserve(pair_count);
        for (const auto& p : pairs.pairs) {
            BosonTerm term;
            term.annihilate = {p.i1, p.i2};
            term.coeff = 1.0;
            pair_maps.push_back(lift_monomial(term, n, m).matrix);
        }

        const double scale = static_cast<double>(n) * (n - 1);
        transfer.resize(pair_count * pair_count);
        for (std::size_t a = 0; a < pair_count; ++a)
            for (std::size_t b = 0; b < pair_count; ++b) {
                const double norm = std::sqrt(
                    static_cast<double>(pairs.pair(a).norm() * pairs.pair(b).norm()));
                transfer[a * pair_count + b] =
                    (2.0 / (norm * scale)) * (MatrixXcd(pair_maps[b].adjoint()) * pair_maps[a]);
            }

        alpha_lifts.reserve(observables.count());
        const Complex i{0.0, 1.0};
        for (const auto& obs : observables.observables) {
            const std::size_t r = pairs.rank(obs.first);
            if (obs.family == ObservableFamily::Z) {
                alpha_lifts.push_back(transfer[r * pair_count + r]);
                continue;
            }
            const std::size_t c = pairs.rank(obs.second);
            const MatrixXcd& k_rc = transfer[r * pair_count + c];
            const MatrixXcd& k_cr = transfer[c * pair_count + r];
            if (obs.family == ObservableFamily::X)
                alpha_lifts.push_back(k_rc + k_cr);
            else
                alpha_lifts.push_back(i * (k_rc - k_cr));
        }
    }

    /// L(|v><v|) on the pair basis.
    MatrixXcd atom_image(const VectorXcd& v) const {
        const auto M = static_cast<Eigen::Index>(pair_count);
        std::vector<VectorXcd> reduced(pair_count);
        for (std::size_t r = 0; r < pair_count; ++r) reduced[r] = pair_maps[r] * v;
        const double scale = static_cast<double>(particles) * (particles - 1);
        MatrixXcd image(M, M);
        for (std::size_t a = 0; a < pair_count; ++a)
            for (std::size_t b = 0; b < pair_count; ++b) {
                const double norm = std::sqrt(
                    static_cast<double>(pairs.pair(a).norm() * pairs.pair(b).norm()));
                image(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    2.0 * reduced[b].dot(reduced[a]) / (norm * scale);
            }
        return image;
    }

    /// Adjoint map: Hermitian G on pairs -> Hermitian operator on the sector.
    MatrixXcd adjoint_map(const MatrixXcd& g) const {
        const auto D = static_cast<Eigen::Index>(sector_dim);
        MatrixXcd lifted = MatrixXcd::Zero(D, D);
        for (std::size_t a = 0; a < pair_count; ++a)
            for (std::size_t b = 0; b < pair_count; ++b) {
                const Complex w = g(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a));
                if (w != Complex{0.0, 0.0}) lifted += w * transfer[a * pair_count + b];
            }
        return lifted;
    }

    /// Functional form of Tr(Delta rho') as c + g . alpha(rho').
    VectorXd functional_direction(const MatrixXcd& delta) const {
        const auto M = static_cast<Eigen::Index>(pair_count);
        VectorXd g(M * M - 1);
        Eigen::Index at = 0;
        const double d_last = delta(M - 1, M - 1).real();
        for (Eigen::Index r = 0; r + 1 < M; ++r) g(at++) = delta(r, r).real() - d_last;
        for (Eigen::Index r = 0; r < M; ++r)
            for (Eigen::Index c = r + 1; c < M; ++c) g(at++) = delta(r, c).real();
        for (Eigen::Index r = 0; r < M; ++r)
            for (Eigen::Index c = r + 1; c < M; ++c) g(at++) = -delta(r, c).imag();
        return g;
    }

    VectorXd alpha_of_matrix(const MatrixXcd& rdm_mat) const {
        TwoBodyRdm rdm;
        rdm.modes = modes;
        rdm.mat = rdm_mat;
        return alpha_from_rdm(rdm);
    }
};

/// Atom pool with incremental Gram matrix for the fully-corrective step.
struct AtomPool {
    std::vector<VectorXcd> states;
    std::vector<MatrixXcd> images;
    std::vector<double> weights;
    MatrixXd gram;

    std::size_t size() const { return states.size(); }

    void add(const VectorXcd& v, const MatrixXcd& image) {
        const auto k = static_cast<Eigen::Index>(size());
        MatrixXd grown(k + 1, k + 1);
        grown.topLeftCorner(k, k) = gram;
        for (Eigen::Index i = 0; i < k; ++i) {
            const double inner = hs_inner(images[static_cast<std::size_t>(i)], image);
            grown(i, k) = inner;
            grown(k, i) = inner;
        }
        grown(k, k) = hs_inner(image, image);
        gram = std::move(grown);
        states.push_back(v);
        images.push_back(image);
        weights.push_back(0.0);
    }

    void prune(double weight_floor) {
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < size(); ++i)
            if (weights[i] > weight_floor) keep.push_back(i);
        if (keep.size() == size()) return;
        if (keep.empty()) keep.push_back(0);
        std::vector<VectorXcd> new_states;
        std::vector<MatrixXcd> new_images;
        std::vector<double> new_weights;
        MatrixXd new_gram(static_cast<Eigen::Index>(keep.size()),
                          static_cast<Eigen::Index>(keep.size()));
        for (std::size_t a = 0; a < keep.size(); ++a) {
            new_states.push_back(states[keep[a]]);
            new_images.push_back(images[keep[a]]);
            new_weights.push_back(weights[keep[a]]);
            for (std::size_t b = 0; b < keep.size(); ++b)
                new_gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    gram(static_cast<Eigen::Index>(keep[a]), static_cast<Eigen::Index>(keep[b]));
        }
        states = std::move(new_states);
        images = std::move(new_images);
        weights = std::move(new_weights);
        gram = std::move(new_gram);
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (total > 0.0)
            for (auto& w : weights) w /= total;
        else
            weights[0] = 1.0;
    }

    MatrixXcd combination() const {
        MatrixXcd y = MatrixXcd::Zero(images[0].rows(), images[0].cols());
        for (std::size_t i = 0; i < size(); ++i)
            if (weights[i] != 0.0) y += weights[i] * images[i];
        return y;
    }
};

/// min over the simplex of 1/2 w^T G w - b . w, solved to machine precision
/// by an active-set method on the support (Lawson-Hanson style with the
/// sum-to-one constraint handled through the bordered KKT system).
void solve_restricted_qp(const MatrixXd& gram, const VectorXd& b, VectorXd& w) {
    const Eigen::Index n = w.size();
    if (n == 1) {
        w(0) = 1.0;
        return;
    }
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < n; ++i)
        if (w(i) > 1e-12) support.push_back(i);
    if (support.empty()) {
        Eigen::Index seed = 0;
        b.maxCoeff(&seed);
        support.push_back(seed);
    }

    auto kkt_solve = [&](const std::vector<Eigen::Index>& s, VectorXd& weights, double& lambda) {
        const auto k = static_cast<Eigen::Index>(s.size());
        MatrixXd kkt = MatrixXd::Zero(k + 1, k + 1);
        VectorXd rhs(k + 1);
        for (Eigen::Index r = 0; r < k; ++r) {
            for (Eigen::Index c = 0; c < k; ++c)
                kkt(r, c) = gram(s[static_cast<std::size_t>(r)], s[static_cast<std::size_t>(c)]);
            kkt(r, r) += 1e-13;  // ridge against rank-deficient atom sets
            kkt(r, k) = 1.0;
            kkt(k, r) = 1.0;
            rhs(r) = b(s[static_cast<std::size_t>(r)]);
        }
        rhs(k) = 1.0;
        const VectorXd solution = kkt.ldlt().solve(rhs);
        weights = solution.head(k);
        lambda = solution(k);
    };

    for (int round = 0; round < 200; ++round) {
        VectorXd weights;
        double lambda = 0.0;
        kkt_solve(support, weights, lambda);

        Eigen::Index most_negative = -1;
        double worst = -1e-12;
        for (Eigen::Index r = 0; r < weights.size(); ++r)
            if (weights(r) < worst) {
                worst = weights(r);
                most_negative = r;
            }
        if (most_negative >= 0) {
            support.erase(support.begin() + most_negative);
            if (support.empty()) {
                Eigen::Index seed = 0;
                b.maxCoeff(&seed);
                support.push_back(seed);
            }
            continue;
        }

        w.setZero();
        for (Eigen::Index r = 0; r < weights.size(); ++r)
            w(support[static_cast<std::size_t>(r)]) = std::max(0.0, weights(r));

        // KKT check for the inactive atoms: the bordered system returns the
        // negated equality multiplier, so optimality is gradient(i) + lambda >= 0
        const VectorXd gradient = gram * w - b;
        Eigen::Index entering = -1;
        double violation = -1e-11;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (w(i) > 0.0) continue;
            const double slack = gradient(i) + lambda;
            if (slack < violation) {
                violation = slack;
                entering = i;
            }
        }
        if (entering < 0) return;
        support.push_back(entering);
    }
}

struct SolveStats {
    double frobenius_sq = 0.0;
    double gap = 0.0;
    double separation_margin = 0.0;  // lambda_min - <Delta, rho>
    MatrixXcd residual;
    int iterations = 0;
    bool converged = false;
    long eigensolves = 0;
};

/// Fully-corrective conditional gradient on the sector spectrahedron.
/// `stop_below_trace` ends the run early once the residual trace norm is
/// that small (the caller only needed a feasibility check).
SolveStats project_onto_kn(const SectorContext& ctx, AtomPool& pool, const MatrixXcd& rho_mat,
                           const ProjectionBudget& budget, bool stop_when_separated,
                           double separation_floor, double stop_below_trace = -1.0) {
    SolveStats stats;
    if (pool.size() == 0) {
        const Eigenpair seed = extreme_eigenpair(ctx.adjoint_map(rho_mat), true);
        ++stats.eigensolves;
        pool.add(seed.vector, ctx.atom_image(seed.vector));
        pool.weights[0] = 1.0;
    }

    auto correction = [&]() {
        const auto k = static_cast<Eigen::Index>(pool.size());
        VectorXd b(k);
        for (Eigen::Index i = 0; i < k; ++i)
            b(i) = hs_inner(pool.images[static_cast<std::size_t>(i)], rho_mat);
        VectorXd w = Eigen::Map<VectorXd>(pool.weights.data(), k);
        const double total = w.sum();
        if (total <= 0.0)
            w.setConstant(1.0 / static_cast<double>(k));
        else
            w /= total;
        solve_restricted_qp(pool.gram, b, w);
        for (Eigen::Index i = 0; i < k; ++i) pool.weights[static_cast<std::size_t>(i)] = w(i);
    };

    correction();
    double previous_gap = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int iter = 1; iter <= budget.max_iterations; ++iter) {
        stats.iterations = iter;
        const MatrixXcd y = pool.combination();
        const MatrixXcd delta = y - rho_mat;
        stats.residual = delta;
        stats.frobenius_sq = hs_inner(delta, delta);

        const Eigenpair lmo = extreme_eigenpair(ctx.adjoint_map(delta), false);
        ++stats.eigensolves;
        const double inner_y = hs_inner(delta, y);
        stats.gap = inner_y - lmo.value;
        stats.separation_margin = lmo.value - hs_inner(delta, rho_mat);

        if (stats.gap <= budget.target_gap) {
            stats.converged = true;
            break;
        }
        if (stop_below_trace > 0.0 && stats.frobenius_sq <= stop_below_trace * stop_below_trace &&
            trace_norm(delta) <= stop_below_trace) {
            stats.converged = true;
            break;
        }
        if (stop_when_separated && stats.separation_margin > separation_floor) break;

        // add the LMO atom unless it is already in the pool
        bool known = false;
        for (const auto& s : pool.states)
            if (std::abs(s.dot(lmo.vector)) > 1.0 - 1e-12) {
                known = true;
                break;
            }
        // with exact corrections a repeatedly known atom and a stagnant gap
        // mean the numerical floor has been hit
        stalled = known && stats.gap > 0.9 * previous_gap ? stalled + 1 : 0;
        if (stalled >= 5) break;
        previous_gap = stats.gap;
        if (!known) pool.add(lmo.vector, ctx.atom_image(lmo.vector));
        correction();
    }
    return stats;
}

ProjectionResult finish_projection(const SectorContext& ctx, AtomPool& pool,
                                   const SolveStats& stats) {
    ProjectionResult result;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool.weights[i] <= 1e-13) continue;
        result.witness.weights.push_back(pool.weights[i]);
        result.witness.states.push_back(pool.states[i]);
    }
    result.nearest.modes = ctx.modes;
    result.nearest.mat = pool.combination();
    result.frobenius_distance = std::sqrt(std::max(0.0, stats.frobenius_sq));
    result.trace_distance = trace_norm(stats.residual);
    result.dual_gap = stats.gap;
    result.iterations = stats.iterations;
    result.converged = stats.converged;
    return result;
}

}  // namespace

MatrixXcd WitnessEnsemble::density() const {
    if (states.empty()) throw ValidationError("WitnessEnsemble: empty ensemble");
    MatrixXcd rho = MatrixXcd::Zero(states[0].size(), states[0].size());
    for (std::size_t i = 0; i < states.size(); ++i)
        rho += weights[i] * (states[i] * states[i].adjoint());
    return rho;
}

ProjectionResult nearest_representable(const TwoBodyRdm& rho, int particles, int modes,
                                       const ProjectionBudget& budget, bool stop_when_separated) {
    if (rho.modes != modes) throw ValidationError("nearest_representable: mode count mismatch");
    SectorContext ctx(particles, modes);
    AtomPool pool;
    const SolveStats stats =
        project_onto_kn(ctx, pool, rho.mat, budget, stop_when_separated, 1e-12);
    return finish_projection(ctx, pool, stats);
}

MembershipVerdict decide_membership(const TwoBodyRdm& rho, int particles, int modes, double beta,
                                    const ProjectionBudget& budget) {
    if (beta <= 0.0) throw ValidationError("decide_membership: beta must be positive");
    if (rho.modes != modes) throw ValidationError("decide_membership: mode count mismatch");
    SectorContext ctx(particles, modes);
    AtomPool pool;
    const SolveStats stats = project_onto_kn(ctx, pool, rho.mat, budget, false, 0.0);
    ProjectionResult projection = finish_projection(ctx, pool, stats);

    MembershipVerdict verdict;
    verdict.beta = beta;
    verdict.yes_threshold = 0.5 * beta;
    verdict.no_threshold = beta;
    verdict.trace_distance = projection.trace_distance;
    verdict.dual_gap = projection.dual_gap;
    verdict.nearest = projection.nearest;
    verdict.witness = std::move(projection.witness);

    if (!stats.converged && verdict.trace_distance > verdict.yes_threshold &&
        verdict.trace_distance < verdict.no_threshold) {
        verdict.decision = Membership::Indeterminate;
        verdict.note = "budget exhausted inside the promise band";
        return verdict;
    }
    if (verdict.trace_distance <= verdict.yes_threshold) {
        verdict.decision = Membership::Yes;
        return verdict;
    }
    if (verdict.trace_distance >= verdict.no_threshold) {
        // residual direction in alpha coordinates, certified by one exact
        // eigensolve over the sector
        const VectorXd alpha_rho = ctx.alpha_of_matrix(rho.mat);
        VectorXd g = ctx.alpha_of_matrix(verdict.nearest.mat) - alpha_rho;
        double margin = -1.0;
        if (g.norm() > 0.0) {
            g.normalize();
            MatrixXcd lift = MatrixXcd::Zero(static_cast<Eigen::Index>(ctx.sector_dim),
                                             static_cast<Eigen::Index>(ctx.sector_dim));
            for (Eigen::Index q = 0; q < g.size(); ++q)
                if (g(q) != 0.0) lift += g(q) * ctx.alpha_lifts[static_cast<std::size_t>(q)];
            margin = extreme_eigenpair(lift, false).value - g.dot(alpha_rho);
        }
        if (margin <= 0.0) {
            // fall back to the trace-pairing functional of the residual
            VectorXd g_func = ctx.functional_direction(stats.residual);
            const double scale = g_func.norm();
            if (scale > 0.0) {
                g_func /= scale;
                const double lifted_min =
                    extreme_eigenpair(ctx.adjoint_map(stats.residual), false).value;
                const double func_margin =
                    (lifted_min - hs_inner(stats.residual, rho.mat)) / scale;
                if (func_margin > 0.0) {
                    g = g_func;
                    margin = func_margin;
                    verdict.note = "separating direction from the trace-pairing functional";
                }
            }
        }
        if (margin > 0.0) {
            verdict.decision = Membership::No;
            verdict.margin = margin;
            verdict.separating_direction = g;
            return verdict;
        }
        verdict.decision = Membership::Indeterminate;
        verdict.note = "distance beyond beta but separation not certified at this budget";
        return verdict;
    }
    verdict.decision = Membership::Indeterminate;
    verdict.note = "distance inside the promise band (" + std::to_string(verdict.yes_threshold) +
                   ", " + std::to_string(verdict.no_threshold) + ")";
    return verdict;
}

AlphaPointCloud extremal_alpha_points(int particles, int modes, int augment_random,
                                      std::uint64_t seed) {
    SectorContext ctx(particles, modes);
    AlphaPointCloud cloud;
    cloud.particles = particles;
    cloud.modes = modes;

    auto push_state = [&](const VectorXcd& v) {
        cloud.generators.push_back(v);
        cloud.points.push_back(ctx.alpha_of_matrix(ctx.atom_image(v)));
    };

    for (const auto& lift : ctx.alpha_lifts) {
        push_state(extreme_eigenpair(lift, false).vector);
        push_state(extreme_eigenpair(lift, true).vector);
    }
    cloud.core_count = cloud.points.size();

    const Eigen::Index l = static_cast<Eigen::Index>(ctx.observables.count());
    cloud.axis_spread = VectorXd::Zero(l);
    for (Eigen::Index q = 0; q < l; ++q) {
        double lo = cloud.points[0](q), hi = cloud.points[0](q);
        for (const auto& p : cloud.points) {
            lo = std::min(lo, p(q));
            hi = std::max(hi, p(q));
        }
        cloud.axis_spread(q) = hi - lo;
    }

    Rng rng(seed);
    for (int extra = 0; extra < augment_random; ++extra)
        push_state(random_sector_state(ctx.basis, rng));

    cloud.center_of_mass = VectorXd::Zero(l);
    for (const auto& p : cloud.points) cloud.center_of_mass += p;
    cloud.center_of_mass /= static_cast<double>(cloud.points.size());
    return cloud;
}

namespace {

struct Facet {
    VectorXd normal;  // unit, oriented so normal . x <= offset on the hull
    double offset = 0.0;
};

double min_slack(const std::vector<Facet>& facets, const VectorXd& x) {
    double slack = std::numeric_limits<double>::infinity();
    for (const auto& f : facets) slack = std::min(slack, f.offset - f.normal.dot(x));
    return slack;
}

/// Maximize the minimum facet slack by subgradient ascent; the returned
/// radius is the exact minimum distance at the best center found.
std::pair<VectorXd, double> maximin_ascent(const std::vector<Facet>& facets, VectorXd x,
                                           int iterations) {
    VectorXd best_x = x;
    double best = min_slack(facets, x);
    double step = 0.5;
    for (int t = 1; t <= iterations; ++t) {
        const double current = min_slack(facets, x);
        VectorXd direction = VectorXd::Zero(x.size());
        int active = 0;
        for (const auto& f : facets)
            if (f.offset - f.normal.dot(x) <= current + 1e-12) {
                direction -= f.normal;
                ++active;
            }
        if (active == 0) break;
        direction /= static_cast<double>(active);
        if (direction.norm() < 1e-14) break;
        x += (step / std::sqrt(static_cast<double>(t))) * direction;
        const double moved = min_slack(facets, x);
        if (moved > best) {
            best = moved;
            best_x = x;
        }
    }
    return {best_x, best};
}

std::vector<Facet> enumerate_hull_facets(const std::vector<VectorXd>& points, Eigen::Index l) {
    const std::size_t count = points.size();
    std::vector<std::size_t> subset(static_cast<std::size_t>(l));
    std::vector<Facet> facets;

    auto consider = [&]() {
        MatrixXd edges(l, l - 1);
        for (Eigen::Index c = 0; c + 1 < l; ++c)
            edges.col(c) = points[subset[static_cast<std::size_t>(c + 1)]] - points[subset[0]];
        Eigen::HouseholderQR<MatrixXd> qr(edges);
        MatrixXd q = qr.householderQ();
        VectorXd normal = q.col(l - 1);
        if (normal.norm() < 0.5) return;
        // rank check of the spanning edges
        const MatrixXd r = qr.matrixQR().topRows(l - 1).triangularView<Eigen::Upper>();
        for (Eigen::Index d = 0; d + 1 < l; ++d)
            if (std::abs(r(d, d)) < 1e-10) return;
        const double offset = normal.dot(points[subset[0]]);
        bool above = false, below = false;
        for (std::size_t p = 0; p < count; ++p) {
            const double s = normal.dot(points[p]) - offset;
            if (s > 1e-10) above = true;
            if (s < -1e-10) below = true;
            if (above && below) return;
        }
        Facet f;
        f.normal = above ? -normal : normal;
        f.offset = above ? -offset : offset;
        facets.push_back(std::move(f));
    };

    auto recurse = [&](auto&& self, std::size_t next, Eigen::Index depth) -> void {
        if (depth == l) {
            consider();
            return;
        }
        for (std::size_t p = next; p + static_cast<std::size_t>(l - depth) <= count; ++p) {
            subset[static_cast<std::size_t>(depth)] = p;
            self(self, p + 1, depth + 1);
        }
    };
    recurse(recurse, 0, 0);
    return facets;
}

std::vector<Facet> simplex_facets(const std::vector<VectorXd>& vertices) {
    const Eigen::Index l = vertices[0].size();
    std::vector<Facet> facets;
    for (std::size_t opposite = 0; opposite < vertices.size(); ++opposite) {
        std::size_t base = opposite == 0 ? 1 : 0;
        MatrixXd edges(l, l - 1);
        Eigen::Index c = 0;
        for (std::size_t v = 0; v < vertices.size(); ++v) {
            if (v == opposite || v == base) continue;
            edges.col(c++) = vertices[v] - vertices[base];
        }
        Eigen::HouseholderQR<MatrixXd> qr(edges);
        VectorXd normal = MatrixXd(qr.householderQ()).col(l - 1);
        double offset = normal.dot(vertices[base]);
        if (normal.dot(vertices[opposite]) - offset > 0.0) {
            normal = -normal;
            offset = -offset;
        }
        facets.push_back(Facet{std::move(normal), offset});
    }
    return facets;
}

}  // namespace

InnerBall inner_ball_estimate(const AlphaPointCloud& cloud) {
    if (cloud.points.empty()) throw ValidationError("inner_ball_estimate: empty cloud");
    const Eigen::Index l = cloud.points[0].size();
    const auto count = static_cast<Eigen::Index>(cloud.points.size());
    if (count < l + 1)
        throw ValidationError("inner_ball_estimate: degenerate cloud (fewer than l+1 points)");

    MatrixXd centered(l, count);
    for (Eigen::Index c = 0; c < count; ++c)
        centered.col(c) = cloud.points[static_cast<std::size_t>(c)] - cloud.center_of_mass;
    Eigen::JacobiSVD<MatrixXd> svd(centered);
    const double tol = 1e-9 * std::max(1.0, svd.singularValues()(0));
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++rank;
    if (rank < l)
        throw ValidationError("inner_ball_estimate: degenerate cloud (affine rank " +
                              std::to_string(rank) + " < " + std::to_string(l) + ")");

    InnerBall ball;
    ball.outer_radius_bound = std::sqrt(static_cast<double>(l));
    for (const auto& p : cloud.points) ball.max_point_norm = std::max(ball.max_point_norm, p.norm());

    if (l <= 10 && count <= 24) {
        const auto facets = enumerate_hull_facets(cloud.points, l);
        auto [center, radius] = maximin_ascent(facets, cloud.center_of_mass, 3000);
        ball.center = std::move(center);
        ball.radius = radius;
        ball.method = "facet-chebyshev";
        return ball;
    }

    // well-conditioned vertex simplex via pivoted QR on the centered points
    Eigen::ColPivHouseholderQR<MatrixXd> qr(centered);
    std::vector<VectorXd> vertices;
    vertices.reserve(static_cast<std::size_t>(l) + 1);
    for (Eigen::Index i = 0; i < l; ++i)
        vertices.push_back(cloud.points[static_cast<std::size_t>(qr.colsPermutation().indices()(i))]);
    // farthest remaining point from the face centroid completes the simplex
    VectorXd face_centroid = VectorXd::Zero(l);
    for (const auto& v : vertices) face_centroid += v;
    face_centroid /= static_cast<double>(vertices.size());
    double best = -1.0;
    std::size_t best_idx = 0;
    for (std::size_t p = 0; p < cloud.points.size(); ++p) {
        const double dist = (cloud.points[p] - face_centroid).norm();
        bool used = false;
        for (Eigen::Index i = 0; i < l; ++i)
            if (static_cast<std::size_t>(qr.colsPermutation().indices()(i)) == p) used = true;
        if (!used && dist > best) {
            best = dist;
            best_idx = p;
        }
    }
    vertices.push_back(cloud.points[best_idx]);

    const auto facets = simplex_facets(vertices);
    VectorXd centroid = VectorXd::Zero(l);
    for (const auto& v : vertices) centroid += v;
    centroid /= static_cast<double>(vertices.size());
    auto [center, radius] = maximin_ascent(facets, centroid, 4000);
    ball.center = std::move(center);
    ball.radius = radius;
    ball.method = "simplex-incenter";
    return ball;
}

struct NrepOracle::Impl {
    SectorContext ctx;
    AtomPool pool;
    Impl(int n, int m) : ctx(n, m) {}
};

NrepOracle::NrepOracle(int particles, int modes, double feasibility_tolerance,
                       ProjectionBudget budget)
    : impl_(std::make_shared<Impl>(particles, modes)),
      particles_(particles),
      modes_(modes),
      feas_tol_(feasibility_tolerance),
      budget_(budget) {}

NrepOracle::Reply NrepOracle::query(const VectorXd& alpha) {
    ++queries_;
    const TwoBodyRdm rho = rdm_from_alpha(alpha, modes_);

    // run until either the residual is small enough to accept the point or
    // a robust separation certificate appears
    ProjectionBudget chunk = budget_;
    const double frob_needed = feas_tol_ / std::sqrt(static_cast<double>(impl_->ctx.pair_count));
    chunk.target_gap = std::min(budget_.target_gap, 0.1 * frob_needed * frob_needed);

    const SolveStats stats =
        project_onto_kn(impl_->ctx, impl_->pool, rho.mat, chunk, true,
                        std::max(1e-12, 0.25 * feas_tol_ * feas_tol_), feas_tol_);
    eigensolves_ += stats.eigensolves;
    impl_->pool.prune(1e-13);

    Reply reply;
    reply.trace_distance = trace_norm(stats.residual);
    if (reply.trace_distance <= feas_tol_) {
        reply.feasible = true;
        return reply;
    }
    // separating functional of the residual, certified by the last LMO solve
    VectorXd g = impl_->ctx.functional_direction(stats.residual);
    const double scale = g.norm();
    if (stats.separation_margin > 0.0 && scale > 0.0) {
        reply.feasible = false;
        reply.direction = g / scale;
        reply.margin = stats.separation_margin / scale;
    } else {
        // no certified cut at this budget: accept at tolerance
        reply.feasible = true;
    }
    return reply;
}

}  // namespace bosonrep
