#pragma once

#include <Eigen/Core>
#include <vector>

#include "gamefit/dataset.hpp"
#include "gamefit/features.hpp"
#include "gamefit/forward.hpp"
#include "gamefit/lp.hpp"
#include "gamefit/polytope.hpp"

namespace gamefit {

// How a dynamic revision is compared against its baseline.
//   FixedOpponent: opponents held at the baseline in both terms (the
//     literal error function; certificates are stated in these terms).
//   JointProfile: the candidate is the full successor profile, so the
//     opponents' concurrent moves enter the row. For advertising data this
//     keeps the opponent-effectiveness belief identifiable; under
//     FixedOpponent it cancels from every row.
// Static observations are identical under both modes.
enum class ComparisonMode { FixedOpponent, JointProfile };

struct ConstraintRowMeta {
    int context_index = 0;
    int point_index = 0;
    Provenance provenance = Provenance::Static;
};

/// Stacked error rows over all data points of all contexts, so that the
/// error of point (k, j) at parameters theta is rows.row(m) . theta.
struct ConstraintSystem {
    int player = 0;
    ComparisonMode mode = ComparisonMode::FixedOpponent;
    Eigen::MatrixXd rows;  // (sum_k m^k) x p_i
    std::vector<ConstraintRowMeta> row_meta;

    int num_rows() const { return static_cast<int>(rows.rows()); }
    int param_dim() const { return static_cast<int>(rows.cols()); }
};

ConstraintSystem build_constraints(const LinearUtilityModel& model, const ContextualDataset& data,
                                   ComparisonMode mode = ComparisonMode::FixedOpponent);

/// max(0, max over rows of <row, theta>): the worst rationality violation.
double irrationality_loss(const ConstraintSystem& system, const Eigen::VectorXd& theta);

/// Positive part of every row's error, in row order (one value per data point).
Eigen::VectorXd pointwise_errors(const ConstraintSystem& system, const Eigen::VectorXd& theta);

/// All parameters attaining the optimal irrationality: the rows of
/// {theta in Theta : <row_jk, theta> <= epsilon_hat} merged with Theta's
/// own description.
struct SolutionPolyhedron {
    int dim = 0;
    Eigen::MatrixXd rows;
    Eigen::VectorXd bounds;
    Eigen::MatrixXd eq_rows;
    Eigen::VectorXd eq_values;
    bool bounded = false;
    bool vertices_enumerated = false;
    std::vector<Eigen::VectorXd> vertices;

    bool contains(const Eigen::VectorXd& theta, double tol = 1e-9) const;
};

struct EstimationResult {
    double epsilon_hat = 0;
    Eigen::VectorXd theta_hat;
    SolutionPolyhedron polyhedron;
};

/// Solves the epigraph LP  min eps  s.t. <row, theta> <= eps, eps >= 0,
/// theta in Theta. Never infeasible or unbounded for a valid (nonempty)
/// parameter space; such an outcome is an InternalError.
EstimationResult estimate_linf(const ConstraintSystem& system, const ParameterSpace& space,
                               const SimplexOptions& options = {});

SolutionPolyhedron solution_polyhedron(const ConstraintSystem& system, const ParameterSpace& space,
                                       double epsilon_hat, const SimplexOptions& options = {});

/// Vertices of the solution polyhedron (guarded to dim <= 6); an unbounded
/// polyhedron is reported as such, never truncated.
VertexEnumeration enumerate_vertices(const SolutionPolyhedron& polyhedron,
                                     const PolytopeOptions& opts = {});

struct Certificate {
    enum class Kind { BetterResponseDynamics, NashEquilibriumOnGrid, Mixed };

    double epsilon_bar = 0;
    int worst_context = -1;
    int worst_point = -1;
    Kind kind = Kind::Mixed;
};

/// epsilon_bar = irrationality loss of theta on the system, plus the argmax
/// data point. For purely dynamic data this certifies the trajectory as an
/// epsilon_bar-better-response dynamics; for purely static data built from
/// an exhaustive alternative grid it certifies the profile as an
/// epsilon_bar-Nash equilibrium over that grid.
Certificate certify(const ConstraintSystem& system, const Eigen::VectorXd& theta);

struct L2Options {
    double tol = 1e-8;
    long max_iterations = 50000;
};

struct L2Estimate {
    Eigen::VectorXd theta;
    double loss = 0;  // sqrt(mean of squared positive errors)
    bool converged = false;
    long iterations = 0;
};

/// Minimizes the pooled L2 irrationality loss over Theta by accelerated
/// projected gradient descent (the loss is convex and C^1). A result with
/// converged=false carries the best iterate.
L2Estimate estimate_l2(const ConstraintSystem& system, const ParameterSpace& space,
                       const L2Options& options = {});

struct OlsMarketShareFit {
    double k1 = 0;
    double k2 = 0;
    double residual = 0;  // RMS residual of the one-step share regression
    bool clipped = false;  // negative coefficient clipped to zero
};

/// Ordinary least squares on the observed one-step share increments, which
/// are linear in (k1, k2) for both share models. Requires the observed
/// state column and at least 3 time steps.
OlsMarketShareFit estimate_ols_market_share(const TrajectoryData& data, MarketShareKind kind);

}  // namespace gamefit
