#pragma once

#include <Eigen/Core>
#include <vector>

#include "gamefit/game.hpp"

namespace gamefit {

// Feature maps are built from a small closed set of primitives so that a
// utility model round-trips through JSON scenario files. Each feature
// component is a sum of terms; each term is a coefficient times a product
// of factors.
//
//   action       : scale * a_{player}[dim] + offset
//   sqrt_action  : sqrt(scale * a_{player}[dim] + offset)
//   context      : scale * xi[dim] + offset
//   sqrt_context : sqrt(scale * xi[dim] + offset)
//   indicator    : 1 if a_{player}[dim] >= threshold else 0
//
// Square roots of negative arguments are rejected (InputError): silently
// producing NaN would corrupt every constraint row built downstream.
struct FeatureFactor {
    enum class Kind { Action, SqrtAction, Context, SqrtContext, Indicator };

    Kind kind = Kind::Action;
    int player = 0;       // Action/SqrtAction/Indicator
    int dim = 0;          // action or context dimension
    double scale = 1.0;   // unused by Indicator
    double offset = 0.0;  // unused by Indicator
    double threshold = 0.0;  // Indicator only

    double evaluate(const ActionProfile& a, const Context& xi) const;

    static FeatureFactor action(int player, int dim = 0, double scale = 1.0, double offset = 0.0);
    static FeatureFactor sqrt_action(int player, int dim = 0, double scale = 1.0, double offset = 0.0);
    static FeatureFactor context(int dim = 0, double scale = 1.0, double offset = 0.0);
    static FeatureFactor sqrt_context(int dim = 0, double scale = 1.0, double offset = 0.0);
    static FeatureFactor indicator(int player, int dim, double threshold);
};

struct FeatureTerm {
    double coefficient = 1.0;
    std::vector<FeatureFactor> factors;  // empty product = 1 (constant term)

    double evaluate(const ActionProfile& a, const Context& xi) const;
};

// One entry of the feature vector: sum of terms.
using FeatureComponent = std::vector<FeatureTerm>;
using FeatureMap = std::vector<FeatureComponent>;

Eigen::VectorXd evaluate_features(const FeatureMap& map, const ActionProfile& a, const Context& xi);

/// Player i's utility U_i(a; theta, xi) = <theta, phi_i(a, xi)> with the
/// feature map phi_i declared from the primitives above.
class LinearUtilityModel {
public:
    LinearUtilityModel(int player, FeatureMap feature_map);

    int player() const { return player_; }
    int param_dim() const { return static_cast<int>(map_.size()); }
    const FeatureMap& feature_map() const { return map_; }

    Eigen::VectorXd features(const ActionProfile& a, const Context& xi) const;

    /// <theta, phi(a, xi)>. Throws InputError on dimension mismatch.
    double utility(const Eigen::VectorXd& theta, const ActionProfile& a, const Context& xi) const;

    /// Error function of a revision: utility shortfall of `chosen_own`
    /// against the baseline's own action, opponents held at the baseline.
    /// Positive iff the chosen action is worse than the baseline action.
    double utility_difference(const Eigen::VectorXd& theta, const Action& chosen_own,
                              const ActionProfile& baseline, const Context& xi) const;

    /// Feature-difference row r with <theta, r> = utility_difference(theta, ...)
    /// for every theta. This is what makes the estimation constraints linear.
    Eigen::VectorXd error_row(const Action& chosen_own, const ActionProfile& baseline,
                              const Context& xi) const;

    /// Generalization where the revision may move every player:
    /// r = phi(baseline) - phi(candidate).
    Eigen::VectorXd profile_error_row(const ActionProfile& candidate, const ActionProfile& baseline,
                                      const Context& xi) const;

private:
    int player_;
    FeatureMap map_;
};

/// The admissible parameter set Theta_i: {theta : G theta <= h, E theta = f}.
/// Construction runs a feasibility LP and rejects empty sets.
class ParameterSpace {
public:
    ParameterSpace(int dim, Eigen::MatrixXd inequality_rows, Eigen::VectorXd inequality_bounds,
                   Eigen::MatrixXd equality_rows = {}, Eigen::VectorXd equality_values = {});

    /// Unconstrained space of the given dimension.
    static ParameterSpace unconstrained(int dim);
    /// Box lower <= theta <= upper (componentwise).
    static ParameterSpace box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

    /// Returns a copy with one extra inequality g . theta <= h.
    ParameterSpace with_inequality(const Eigen::VectorXd& g, double h) const;
    /// Returns a copy with one extra equality g . theta = v.
    ParameterSpace with_equality(const Eigen::VectorXd& g, double v) const;

    int dim() const { return dim_; }
    const Eigen::MatrixXd& inequality_rows() const { return ineq_rows_; }
    const Eigen::VectorXd& inequality_bounds() const { return ineq_bounds_; }
    const Eigen::MatrixXd& equality_rows() const { return eq_rows_; }
    const Eigen::VectorXd& equality_values() const { return eq_values_; }

    bool contains(const Eigen::VectorXd& theta, double tol = 1e-9) const;

private:
    ParameterSpace() = default;

    int dim_ = 0;
    Eigen::MatrixXd ineq_rows_;
    Eigen::VectorXd ineq_bounds_;
    Eigen::MatrixXd eq_rows_;
    Eigen::VectorXd eq_values_;

    void check_nonempty() const;
};

}  // namespace gamefit
