#ifndef BOSONREP_ELLIPSOID_HPP
#define BOSONREP_ELLIPSOID_HPP

#include <functional>
#include <string>
#include <vector>

#include "bosonrep/nrep.hpp"
#include "bosonrep/spin_boson.hpp"

namespace bosonrep {

/// Search ellipsoid {x : (x-center)^T shape^-1 (x-center) <= 1}.
struct EllipsoidState {
    VectorXd center;
    MatrixXd shape;
    int iteration = 0;
    double log_det = 0.0;
};

EllipsoidState initial_ball(const VectorXd& center, double radius);

enum class CutKind { Feasibility, Objective };

/// Half-space cut {x : g.x <= g.center - depth * sqrt(g^T shape g)}.
/// depth 0 is the central cut; depth in (-1/l, 0) keeps more than half
/// (shallow); depth -1/l leaves the ellipsoid unchanged (degenerate).
struct CutSpec {
    VectorXd direction;
    double depth = 0.0;
    CutKind kind = CutKind::Feasibility;
};

struct UpdateResult {
    EllipsoidState state;
    bool degenerate = false;   // no-progress boundary depth
    bool pd_rescued = false;   // shape needed an eigenvalue floor
};

UpdateResult ellipsoid_update(const EllipsoidState& e, const CutSpec& cut);

/// Abstract membership/separation interface the optimizer drives.
struct SeparationOracle {
    struct Reply {
        bool feasible = false;
        double distance = 0.0;
        VectorXd direction;  // points toward the feasible set when infeasible
        double margin = 0.0;
    };
    virtual Reply query(const VectorXd& alpha) = 0;
    virtual ~SeparationOracle() = default;
};

/// Adapter over the K_N projection oracle.
class NrepSeparationOracle : public SeparationOracle {
public:
    explicit NrepSeparationOracle(NrepOracle oracle) : oracle_(std::move(oracle)) {}
    Reply query(const VectorXd& alpha) override {
        const NrepOracle::Reply r = oracle_.query(alpha);
        return Reply{r.feasible, r.trace_distance, r.direction, r.margin};
    }
    NrepOracle& inner() { return oracle_; }

private:
    NrepOracle oracle_;
};

enum class CutMode { Central, Shallow };

struct MinimizeOptions {
    int max_iterations = 400000;
    CutMode mode = CutMode::Central;
    double shallow_depth_scale = 0.5;  // depth = -scale/(l+1) in shallow mode
    bool keep_trace = false;
    // optional audit: every feasibility cut must keep these points
    const AlphaPointCloud* audit_cloud = nullptr;
    double logdet_floor = -1e9;
};

struct TraceRow {
    int iteration = 0;
    CutKind kind = CutKind::Feasibility;
    double center_value = 0.0;
    double log_det = 0.0;
    bool feasible = false;
    double distance = 0.0;
};

struct MinimizeResult {
    VectorXd alpha;          // best feasible center seen
    double value = 0.0;      // c0 + gamma . alpha
    double lower_bound = 0.0;
    int iterations = 0;
    long oracle_calls = 0;
    bool converged = false;  // value - lower_bound <= eps
    bool found_feasible = false;
    std::string status;
    std::vector<TraceRow> trace;
};

/// Minimize c0 + gamma . alpha over the oracle's feasible set inside the
/// ball of radius R, to additive accuracy eps (bracketed by objective cuts).
MinimizeResult minimize_energy(const EnergyFunctional& f, SeparationOracle& oracle, double radius,
                               double eps, const MinimizeOptions& options = {});

struct OracleEnergyReport {
    double energy = 0.0;
    double exact_energy = 0.0;       // exact diagonalization cross-check
    double qubit_energy = 0.0;       // for the qubit pipeline
    double penalty_weight = 0.0;
    MinimizeResult minimize;
    int alpha_dimension = 0;
};

/// Full reduction: Schwinger map + penalties -> energy functional ->
/// oracle-driven ellipsoid minimization, cross-checked against exact
/// diagonalization when the sector fits under the cap.
OracleEnergyReport ground_energy_via_oracle(const QubitHamiltonian& h, double eps,
                                            const MinimizeOptions& options = {});

/// Same reduction for a bosonic Hamiltonian given directly on (N, m).
OracleEnergyReport ground_energy_via_oracle(const BosonHamiltonian& h, int particles, int modes,
                                            double eps, const MinimizeOptions& options = {});

}  // namespace bosonrep

#endif  // BOSONREP_ELLIPSOID_HPP
