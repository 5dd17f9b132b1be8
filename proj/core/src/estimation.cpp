#include "gamefit/estimation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace gamefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

ConstraintSystem build_constraints(const LinearUtilityModel& model, const ContextualDataset& data,
                                   ComparisonMode mode) {
    if (data.batches.empty()) throw DataError("build_constraints: empty dataset");
    const int total = data.num_points(model.player());
    if (total == 0) throw DataError("build_constraints: dataset has no points for this player");

    ConstraintSystem system;
    system.player = model.player();
    system.mode = mode;
    system.rows.resize(total, model.param_dim());
    system.row_meta.reserve(static_cast<std::size_t>(total));

    int m = 0;
    for (int k = 0; k < data.num_batches(); ++k) {
        const ObservationSet* obs = data.find(k, model.player());
        if (obs == nullptr)
            throw DataError("build_constraints: batch " + std::to_string(k) +
                            " does not cover player " + std::to_string(model.player()));
        const Context& xi = data.batches[static_cast<std::size_t>(k)].context;
        for (int j = 0; j < obs->size(); ++j) {
            const DataPoint& pt = obs->points[static_cast<std::size_t>(j)];
            Eigen::VectorXd row;
            if (mode == ComparisonMode::JointProfile && pt.candidate_profile) {
                row = model.profile_error_row(*pt.candidate_profile, pt.baseline_profile, xi);
            } else {
                row = model.error_row(pt.chosen_action, pt.baseline_profile, xi);
            }
            system.rows.row(m) = row.transpose();
            system.row_meta.push_back({k, j, obs->provenance});
            ++m;
        }
    }
    return system;
}

double irrationality_loss(const ConstraintSystem& system, const Eigen::VectorXd& theta) {
    if (theta.size() != system.param_dim())
        throw InputError("irrationality_loss: theta has wrong dimension");
    if (system.num_rows() == 0) return 0.0;
    return std::max(0.0, (system.rows * theta).maxCoeff());
}

Eigen::VectorXd pointwise_errors(const ConstraintSystem& system, const Eigen::VectorXd& theta) {
    if (theta.size() != system.param_dim())
        throw InputError("pointwise_errors: theta has wrong dimension");
    return (system.rows * theta).cwiseMax(0.0);
}

bool SolutionPolyhedron::contains(const Eigen::VectorXd& theta, double tol) const {
    if (theta.size() != dim) return false;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        if (rows.row(i).dot(theta) > bounds(i) + tol) return false;
    }
    for (Eigen::Index i = 0; i < eq_rows.rows(); ++i) {
        if (std::abs(eq_rows.row(i).dot(theta) - eq_values(i)) > tol) return false;
    }
    return true;
}

SolutionPolyhedron solution_polyhedron(const ConstraintSystem& system, const ParameterSpace& space,
                                       double epsilon_hat, const SimplexOptions& options) {
    if (space.dim() != system.param_dim())
        throw InputError("solution_polyhedron: space dimension mismatch");
    SolutionPolyhedron poly;
    poly.dim = space.dim();
    const Eigen::Index md = system.rows.rows();
    const Eigen::Index ms = space.inequality_rows().rows();
    poly.rows.resize(md + ms, poly.dim);
    poly.bounds.resize(md + ms);
    poly.rows.topRows(md) = system.rows;
    poly.bounds.head(md).setConstant(epsilon_hat);
    poly.rows.bottomRows(ms) = space.inequality_rows();
    poly.bounds.tail(ms) = space.inequality_bounds();
    poly.eq_rows = space.equality_rows();
    poly.eq_values = space.equality_values();

    if (poly.dim <= 6) {
        VertexEnumeration ve = enumerate_vertices(poly, PolytopeOptions{options.feasibility_tol, 6});
        poly.bounded = ve.bounded;
        poly.vertices_enumerated = ve.bounded;
        poly.vertices = std::move(ve.vertices);
    } else {
        // Boundedness only, via coordinate-range LPs.
        poly.bounded = true;
        for (int j = 0; j < poly.dim && poly.bounded; ++j) {
            for (int sign : {+1, -1}) {
                StandardLP lp;
                lp.objective = Eigen::VectorXd::Zero(poly.dim);
                lp.objective(j) = sign;
                lp.ineq_matrix = poly.rows;
                lp.ineq_bounds = poly.bounds;
                lp.eq_matrix = poly.eq_rows;
                lp.eq_values = poly.eq_values;
                if (solve_lp(lp, options).status == LpStatus::Unbounded) {
                    poly.bounded = false;
                    break;
                }
            }
        }
    }
    return poly;
}

VertexEnumeration enumerate_vertices(const SolutionPolyhedron& polyhedron,
                                     const PolytopeOptions& opts) {
    return enumerate_polytope_vertices(polyhedron.rows, polyhedron.bounds, polyhedron.eq_rows,
                                       polyhedron.eq_values, opts);
}

EstimationResult estimate_linf(const ConstraintSystem& system, const ParameterSpace& space,
                               const SimplexOptions& options) {
    if (space.dim() != system.param_dim())
        throw InputError("estimate_linf: space dimension mismatch");
    const int p = space.dim();
    const Eigen::Index md = system.rows.rows();
    const Eigen::Index ms = space.inequality_rows().rows();

    StandardLP lp;
    lp.objective = Eigen::VectorXd::Zero(p + 1);
    lp.objective(p) = 1.0;
    lp.ineq_matrix = Eigen::MatrixXd::Zero(md + ms, p + 1);
    lp.ineq_bounds = Eigen::VectorXd::Zero(md + ms);
    lp.ineq_matrix.topLeftCorner(md, p) = system.rows;
    lp.ineq_matrix.col(p).head(md).setConstant(-1.0);
    lp.ineq_matrix.bottomLeftCorner(ms, p) = space.inequality_rows();
    lp.ineq_bounds.tail(ms) = space.inequality_bounds();
    lp.eq_matrix = Eigen::MatrixXd::Zero(space.equality_rows().rows(), p + 1);
    lp.eq_matrix.leftCols(p) = space.equality_rows();
    lp.eq_values = space.equality_values();
    lp.var_bounds.assign(static_cast<std::size_t>(p) + 1, VariableBounds{-kInf, kInf});
    lp.var_bounds.back() = VariableBounds{0.0, kInf};

    LpSolution sol = solve_lp(lp, options);
    if (sol.status != LpStatus::Optimal)
        throw InternalError(
            "estimate_linf: the epigraph LP is feasible and bounded for a nonempty parameter "
            "space, yet the solver reported otherwise");

    EstimationResult result;
    result.theta_hat = sol.x.head(p);
    // Pin epsilon_hat to the loss of the returned vertex: it differs from the
    // LP objective only within solver tolerance and makes theta_hat a member
    // of its own solution polyhedron by construction.
    result.epsilon_hat = irrationality_loss(system, result.theta_hat);
    result.polyhedron = solution_polyhedron(system, space, result.epsilon_hat, options);
    return result;
}

Certificate certify(const ConstraintSystem& system, const Eigen::VectorXd& theta) {
    if (theta.size() != system.param_dim())
        throw InputError("certify: theta has wrong dimension");
    Certificate cert;
    Eigen::VectorXd raw = system.rows * theta;
    Eigen::Index worst = 0;
    raw.maxCoeff(&worst);
    cert.epsilon_bar = std::max(0.0, raw(worst));
    cert.worst_context = system.row_meta[static_cast<std::size_t>(worst)].context_index;
    cert.worst_point = system.row_meta[static_cast<std::size_t>(worst)].point_index;

    bool any_dynamic = false, any_static = false;
    for (const auto& meta : system.row_meta) {
        (meta.provenance == Provenance::Dynamic ? any_dynamic : any_static) = true;
    }
    cert.kind = any_dynamic && any_static ? Certificate::Kind::Mixed
                : any_dynamic             ? Certificate::Kind::BetterResponseDynamics
                                          : Certificate::Kind::NashEquilibriumOnGrid;
    return cert;
}

namespace {

// Dykstra's alternating projection onto the intersection of Theta's
// halfspaces and hyperplanes. Rows are normalized once up front.
class PolyhedronProjector {
public:
    explicit PolyhedronProjector(const ParameterSpace& space) {
        for (Eigen::Index i = 0; i < space.inequality_rows().rows(); ++i) {
            Eigen::VectorXd g = space.inequality_rows().row(i).transpose();
            double n = g.norm();
            if (n <= 0) continue;
            halfspaces_.emplace_back(g / n, space.inequality_bounds()(i) / n);
        }
        for (Eigen::Index i = 0; i < space.equality_rows().rows(); ++i) {
            Eigen::VectorXd g = space.equality_rows().row(i).transpose();
            double n = g.norm();
            if (n <= 0) continue;
            hyperplanes_.emplace_back(g / n, space.equality_values()(i) / n);
        }
    }

    Eigen::VectorXd project(const Eigen::VectorXd& x0) const {
        const std::size_t sets = halfspaces_.size() + hyperplanes_.size();
        if (sets == 0) return x0;
        Eigen::VectorXd x = x0;
        std::vector<Eigen::VectorXd> corrections(sets, Eigen::VectorXd::Zero(x0.size()));
        const double scale = 1.0 + x0.norm();
        for (int cycle = 0; cycle < 2000; ++cycle) {
            double moved = 0;
            for (std::size_t s = 0; s < sets; ++s) {
                Eigen::VectorXd z = x + corrections[s];
                Eigen::VectorXd projected = project_one(s, z);
                corrections[s] = z - projected;
                moved = std::max(moved, (projected - x).lpNorm<Eigen::Infinity>());
                x = std::move(projected);
            }
            if (moved <= 1e-13 * scale) break;
        }
        return x;
    }

private:
    Eigen::VectorXd project_one(std::size_t s, const Eigen::VectorXd& z) const {
        if (s < halfspaces_.size()) {
            const auto& [g, h] = halfspaces_[s];
            double v = g.dot(z) - h;
            return v > 0 ? Eigen::VectorXd(z - v * g) : z;
        }
        const auto& [g, h] = hyperplanes_[s - halfspaces_.size()];
        return z - (g.dot(z) - h) * g;
    }

    std::vector<std::pair<Eigen::VectorXd, double>> halfspaces_;
    std::vector<std::pair<Eigen::VectorXd, double>> hyperplanes_;
};

}  // namespace

L2Estimate estimate_l2(const ConstraintSystem& system, const ParameterSpace& space,
                       const L2Options& options) {
    if (space.dim() != system.param_dim())
        throw InputError("estimate_l2: space dimension mismatch");
    const Eigen::MatrixXd& R = system.rows;
    const double m = static_cast<double>(R.rows());

    auto value = [&](const Eigen::VectorXd& th) {
        return (R * th).cwiseMax(0.0).squaredNorm() / m;
    };
    auto gradient = [&](const Eigen::VectorXd& th) {
        Eigen::VectorXd pos = (R * th).cwiseMax(0.0);
        return Eigen::VectorXd(2.0 / m * (R.transpose() * pos));
    };

    // Gradient Lipschitz bound: (2/m) * sum of squared row norms.
    double lipschitz = 2.0 / m * R.squaredNorm();
    if (lipschitz <= 0) lipschitz = 1.0;
    const double step = 1.0 / lipschitz;

    PolyhedronProjector projector(space);
    Eigen::VectorXd x = projector.project(Eigen::VectorXd::Zero(space.dim()));
    Eigen::VectorXd y = x;
    double t = 1.0;
    double fx = value(x);

    L2Estimate est;
    est.converged = false;
    for (long it = 0; it < options.max_iterations; ++it) {
        Eigen::VectorXd x_next = projector.project(y - step * gradient(y));
        double f_next = value(x_next);
        if (f_next > fx) {  // adaptive restart of the momentum
            y = x;
            t = 1.0;
            x_next = projector.project(x - step * gradient(x));
            f_next = value(x_next);
        }
        double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        Eigen::VectorXd y_next = x_next + ((t - 1.0) / t_next) * (x_next - x);
        double moved = (x_next - x).lpNorm<Eigen::Infinity>();
        x = std::move(x_next);
        y = std::move(y_next);
        t = t_next;
        fx = f_next;
        est.iterations = it + 1;
        if (moved <= options.tol * std::max(1.0, x.lpNorm<Eigen::Infinity>())) {
            est.converged = true;
            break;
        }
    }
    est.theta = x;
    est.loss = std::sqrt(value(x));
    return est;
}

OlsMarketShareFit estimate_ols_market_share(const TrajectoryData& data, MarketShareKind kind) {
    if (!data.state) throw DataError("OLS share regression requires the state column");
    const std::size_t T = data.profiles.size();
    if (T < 3) throw DataError("OLS share regression requires at least 3 time steps");

    const std::vector<double>& M = *data.state;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(T - 1), 2);
    Eigen::VectorXd y(static_cast<Eigen::Index>(T - 1));
    for (std::size_t s = 0; s + 1 < T; ++s) {
        double a1 = data.profiles[s + 1].of(0)(0);
        double a2 = data.profiles[s + 1].of(1)(0);
        if (a1 < 0 || a2 < 0) throw DataError("OLS share regression: negative advertising");
        double gain_state = 1.0 - M[s];
        double loss_state = M[s];
        if (kind == MarketShareKind::Sorger) {
            gain_state = std::sqrt(gain_state);
            loss_state = std::sqrt(loss_state);
        }
        X(static_cast<Eigen::Index>(s), 0) = std::sqrt(a1) * gain_state;
        X(static_cast<Eigen::Index>(s), 1) = -std::sqrt(a2) * loss_state;
        y(static_cast<Eigen::Index>(s)) = M[s + 1] - M[s];
    }

    Eigen::Matrix2d xtx = X.transpose() * X;
    double det = xtx.determinant();
    double scale = xtx(0, 0) * xtx(1, 1);
    if (std::abs(det) <= 1e-12 * std::max(1e-12, scale))
        throw DataError("OLS share regression: rank-deficient regressors");

    Eigen::Vector2d beta = xtx.inverse() * (X.transpose() * y);
    OlsMarketShareFit fit;
    fit.k1 = beta(0);
    fit.k2 = beta(1);
    if (fit.k1 < 0) {
        fit.k1 = 0;
        fit.clipped = true;
    }
    if (fit.k2 < 0) {
        fit.k2 = 0;
        fit.clipped = true;
    }
    Eigen::Vector2d clipped(fit.k1, fit.k2);
    fit.residual = std::sqrt((y - X * clipped).squaredNorm() / static_cast<double>(T - 1));
    return fit;
}

}  // namespace gamefit
