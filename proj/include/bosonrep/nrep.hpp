#ifndef BOSONREP_NREP_HPP
#define BOSONREP_NREP_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bosonrep/rdm.hpp"

namespace bosonrep {

struct ProjectionBudget {
    int max_iterations = 20000;
    double target_gap = 1e-12;  // conditional-gradient duality gap on 1/2 ||L(s) - rho||_F^2
};

/// Eigen-ensemble of a density matrix on the N-boson sector.
struct WitnessEnsemble {
    std::vector<double> weights;
    std::vector<VectorXcd> states;

    MatrixXcd density() const;
};

struct ProjectionResult {
    WitnessEnsemble witness;      // sigma minimizing the Frobenius distance
    TwoBodyRdm nearest;           // L(sigma)
    double frobenius_distance = 0.0;
    double trace_distance = 0.0;  // ||L(sigma) - rho||_1
    double dual_gap = 0.0;
    int iterations = 0;
    bool converged = false;       // reached target_gap within budget
};

/// Conditional-gradient projection of rho onto the set of two-boson RDMs of
/// N-boson states. The linear subproblem is a ground-state eigensolve of the
/// adjoint-mapped residual; `stop_when_separated` permits early exit once
/// the residual certifies a separating hyperplane (used by the optimizer).
ProjectionResult nearest_representable(const TwoBodyRdm& rho, int particles, int modes,
                                       const ProjectionBudget& budget = {},
                                       bool stop_when_separated = false);

enum class Membership { Yes, No, Indeterminate };

struct MembershipVerdict {
    Membership decision = Membership::Indeterminate;
    double beta = 0.0;
    double yes_threshold = 0.0;  // beta / 2
    double no_threshold = 0.0;   // beta
    double trace_distance = 0.0;
    double dual_gap = 0.0;
    double margin = 0.0;  // certified separation margin on NO
    TwoBodyRdm nearest;
    WitnessEnsemble witness;
    std::optional<VectorXd> separating_direction;
    std::string note;
};

/// YES / NO with the promise-gap thresholds; NO verdicts carry a separating
/// direction certified by an exact eigensolve over the sector.
MembershipVerdict decide_membership(const TwoBodyRdm& rho, int particles, int modes, double beta,
                                    const ProjectionBudget& budget = {});

/// Extremal alpha points: top and bottom eigenvectors of every lifted basis
/// observable, plus optional seeded random-state points to fatten the hull.
struct AlphaPointCloud {
    int particles = 0;
    int modes = 0;
    std::vector<VectorXd> points;
    std::vector<VectorXcd> generators;  // N-boson state behind each point
    VectorXd center_of_mass;
    VectorXd axis_spread;  // max - min along each coordinate, core points only
    std::size_t core_count = 0;  // the 2l eigen-extremal points come first
};

AlphaPointCloud extremal_alpha_points(int particles, int modes, int augment_random = 0,
                                      std::uint64_t seed = 1);

struct InnerBall {
    VectorXd center;
    double radius = 0.0;
    double outer_radius_bound = 0.0;  // sqrt(l)
    double max_point_norm = 0.0;
    std::string method;  // "facet-chebyshev" or "simplex-incenter"
};

/// Certified radius of a ball inside the convex hull of the cloud: exact
/// facet description plus maximin ascent at small l, incenter of a
/// well-conditioned vertex simplex otherwise.
InnerBall inner_ball_estimate(const AlphaPointCloud& cloud);

/// Membership/separation oracle over K_N with a persistent atom cache so
/// consecutive nearby queries warm-start each other.
class NrepOracle {
public:
    NrepOracle(int particles, int modes, double feasibility_tolerance = 1e-4,
               ProjectionBudget budget = {.max_iterations = 5000, .target_gap = 1e-12});

    struct Reply {
        bool feasible = false;
        double trace_distance = 0.0;
        VectorXd direction;  // on infeasible: g with g.alpha(K) >= g.alpha + margin
        double margin = 0.0;
    };

    Reply query(const VectorXd& alpha);

    int particles() const { return particles_; }
    int modes() const { return modes_; }
    double feasibility_tolerance() const { return feas_tol_; }
    long queries() const { return queries_; }
    long eigensolves() const { return eigensolves_; }

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    int particles_;
    int modes_;
    double feas_tol_;
    ProjectionBudget budget_;
    long queries_ = 0;
    long eigensolves_ = 0;
};

}  // namespace bosonrep

#endif  // BOSONREP_NREP_HPP
