#include "bosonrep/ellipsoid.hpp"

#include <algorithm>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace bosonrep {

EllipsoidState initial_ball(const VectorXd& center, double radius) {
    if (radius <= 0.0) throw ValidationError("initial_ball: radius must be positive");
    EllipsoidState e;
    e.center = center;
    e.shape = radius * radius * MatrixXd::Identity(center.size(), center.size());
    e.log_det = 2.0 * static_cast<double>(center.size()) * std::log(radius);
    return e;
}

UpdateResult ellipsoid_update(const EllipsoidState& e, const CutSpec& cut) {
    const auto l = static_cast<double>(e.center.size());
    if (cut.direction.size() != e.center.size())
        throw ValidationError("ellipsoid_update: direction dimension mismatch");
    const double t = cut.depth;
    if (t < -1.0 / l - 1e-12 || t > 1.0 + 1e-12)
        throw ValidationError("ellipsoid_update: depth outside [-1/l, 1]");

    UpdateResult result;
    result.state = e;
    result.state.iteration = e.iteration + 1;
    if (t <= -1.0 / l + 1e-12) {
        // no-progress boundary: new ellipsoid equals the old one
        result.degenerate = true;
        return result;
    }

    const VectorXd pg = e.shape * cut.direction;
    const double gpg = cut.direction.dot(pg);
    if (!(gpg > 0.0))
        throw ValidationError("ellipsoid_update: direction annihilated by the shape matrix");
    const VectorXd scaled = pg / std::sqrt(gpg);  // shape . g for the normalized cut

    const double tau = (1.0 + l * t) / (l + 1.0);
    const double delta = l * l * (1.0 - t * t) / (l * l - 1.0);
    const double sigma = 2.0 * (1.0 + l * t) / ((l + 1.0) * (1.0 + t));

    result.state.center = e.center - tau * scaled;
    result.state.shape = delta * (e.shape - sigma * (scaled * scaled.transpose()));
    result.state.shape = 0.5 * (result.state.shape + result.state.shape.transpose());
    result.state.log_det = e.log_det + l * std::log(delta) + std::log1p(-sigma);

    Eigen::LLT<MatrixXd> chol(result.state.shape);
    if (chol.info() != Eigen::Success) {
        // numerical loss of definiteness: floor the spectrum and recompute
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(result.state.shape);
        VectorXd values = eig.eigenvalues().cwiseMax(1e-14);
        result.state.shape =
            eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
        result.state.log_det = values.array().log().sum();
        result.pd_rescued = true;
    }
    return result;
}

namespace {

double ellipsoid_width(const EllipsoidState& e, const VectorXd& direction) {
    return std::sqrt(std::max(0.0, direction.dot(e.shape * direction)));
}

void audit_cut(const AlphaPointCloud& cloud, const VectorXd& keep_direction,
               const VectorXd& center) {
    // the discarded half-space {keep . x < keep . center} must avoid the cloud
    const double threshold = keep_direction.dot(center);
    for (const auto& p : cloud.points)
        if (keep_direction.dot(p) < threshold - 1e-9)
            throw std::runtime_error("minimize_energy: feasibility cut discards a cloud point");
}

}  // namespace

MinimizeResult minimize_energy(const EnergyFunctional& f, SeparationOracle& oracle, double radius,
                               double eps, const MinimizeOptions& options) {
    const Eigen::Index l = f.gamma.size();
    if (l < 2) throw ValidationError("minimize_energy: need at least two coordinates");
    if (eps <= 0.0) throw ValidationError("minimize_energy: eps must be positive");

    MinimizeResult result;
    result.lower_bound = -std::numeric_limits<double>::infinity();
    double best_value = std::numeric_limits<double>::infinity();
    VectorXd best_alpha;

    EllipsoidState e = initial_ball(VectorXd::Zero(l), radius);
    const double gamma_norm = f.gamma.norm();
    if (gamma_norm == 0.0) {
        // constant objective: any feasible point answers the query
        for (int iter = 0; iter < options.max_iterations; ++iter) {
            const auto reply = oracle.query(e.center);
            ++result.oracle_calls;
            result.iterations = iter + 1;
            if (reply.feasible) {
                result.alpha = e.center;
                result.value = f.c0;
                result.lower_bound = f.c0;
                result.converged = true;
                result.found_feasible = true;
                result.status = "constant objective at a feasible point";
                return result;
            }
            CutSpec cut{-reply.direction, 0.0, CutKind::Feasibility};
            e = ellipsoid_update(e, cut).state;
        }
        result.status = "no feasible point found";
        return result;
    }

    const double shallow_depth = -options.shallow_depth_scale / (static_cast<double>(l) + 1.0);
    const double depth = options.mode == CutMode::Shallow ? shallow_depth : 0.0;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        result.iterations = iter + 1;
        const auto reply = oracle.query(e.center);
        ++result.oracle_calls;

        CutSpec cut;
        cut.depth = depth;
        bool feasible_center = reply.feasible;
        if (feasible_center) {
            const double value = f.value(e.center);
            if (value < best_value) {
                best_value = value;
                best_alpha = e.center;
                result.found_feasible = true;
            }
            cut.kind = CutKind::Objective;
            cut.direction = f.gamma;
        } else {
            cut.kind = CutKind::Feasibility;
            cut.direction = -reply.direction;  // keep the side containing K_N
            if (options.audit_cloud != nullptr)
                audit_cut(*options.audit_cloud, reply.direction, e.center);
        }

        // any center certifies f(center) - width as a bound on the optimum
        const double width = ellipsoid_width(e, f.gamma);
        result.lower_bound = std::max(result.lower_bound, f.value(e.center) - width);

        if (options.keep_trace)
            result.trace.push_back(TraceRow{iter, cut.kind, f.value(e.center), e.log_det,
                                            feasible_center, reply.distance});

        if (result.found_feasible && best_value - result.lower_bound <= eps) {
            result.converged = true;
            result.status = "bracket closed";
            break;
        }
        if (e.log_det < options.logdet_floor) {
            result.status = "log-det floor reached";
            break;
        }

        const UpdateResult update = ellipsoid_update(e, cut);
        if (update.degenerate) {
            result.status = "degenerate cut";
            break;
        }
        e = update.state;
    }

    if (result.status.empty()) result.status = "iteration budget exhausted";
    if (result.found_feasible) {
        result.alpha = best_alpha;
        result.value = best_value;
    }
    return result;
}

OracleEnergyReport ground_energy_via_oracle(const BosonHamiltonian& h, int particles, int modes,
                                            double eps, const MinimizeOptions& options) {
    OracleEnergyReport report;
    if (particles < 2) {
        // no two-boson sector to constrain: the one-boson problem is solved
        // exactly on its m-dimensional sector
        report.energy = ground_state(lift_hamiltonian(h, particles)).value;
        report.exact_energy = report.energy;
        report.minimize.value = report.energy;
        report.minimize.lower_bound = report.energy;
        report.minimize.converged = true;
        report.minimize.found_feasible = true;
        report.minimize.status = "single-boson sector solved exactly";
        return report;
    }
    const EnergyFunctional functional = energy_functional(h, particles, modes);
    report.alpha_dimension = static_cast<int>(functional.gamma.size());

    NrepSeparationOracle oracle{NrepOracle(particles, modes)};
    const double radius = std::sqrt(static_cast<double>(functional.gamma.size()));
    report.minimize = minimize_energy(functional, oracle, radius, eps, options);
    report.energy = report.minimize.value;

    if (sector_dimension(particles, modes) <= kDefaultDenseCap)
        report.exact_energy = ground_state(lift_hamiltonian(h, particles)).value;
    return report;
}

OracleEnergyReport ground_energy_via_oracle(const QubitHamiltonian& h, double eps,
                                            const MinimizeOptions& options) {
    h.validate();
    const int n = h.qubits;
    BosonHamiltonian bose = schwinger_map(h);
    const double weight = penalty_weight(h, n);
    bose.append(penalty_hamiltonian(n), weight);
    bose.canonicalize();

    OracleEnergyReport report = ground_energy_via_oracle(bose, n, 2 * n, eps, options);
    report.penalty_weight = weight;
    report.qubit_energy = extreme_eigenpair(qubit_matrix(h), false).value;
    return report;
}

}  // namespace bosonrep
