#include "gamefit/features.hpp"

#include <cmath>

#include "gamefit/lp.hpp"

namespace gamefit {

namespace {

double checked_sqrt(double v) {
    if (v < 0.0) {
        if (v > -1e-12) return 0.0;  // absorb roundoff at the boundary
        throw InputError("feature map: square root of negative value");
    }
    return std::sqrt(v);
}

}  // namespace

double FeatureFactor::evaluate(const ActionProfile& a, const Context& xi) const {
    switch (kind) {
        case Kind::Action:
            return scale * a.of(player)(dim) + offset;
        case Kind::SqrtAction:
            return checked_sqrt(scale * a.of(player)(dim) + offset);
        case Kind::Context:
            return scale * xi.values(dim) + offset;
        case Kind::SqrtContext:
            return checked_sqrt(scale * xi.values(dim) + offset);
        case Kind::Indicator:
            return a.of(player)(dim) >= threshold ? 1.0 : 0.0;
    }
    throw InternalError("unreachable feature factor kind");
}

FeatureFactor FeatureFactor::action(int player, int dim, double scale, double offset) {
    return {Kind::Action, player, dim, scale, offset, 0.0};
}
FeatureFactor FeatureFactor::sqrt_action(int player, int dim, double scale, double offset) {
    return {Kind::SqrtAction, player, dim, scale, offset, 0.0};
}
FeatureFactor FeatureFactor::context(int dim, double scale, double offset) {
    return {Kind::Context, 0, dim, scale, offset, 0.0};
}
FeatureFactor FeatureFactor::sqrt_context(int dim, double scale, double offset) {
    return {Kind::SqrtContext, 0, dim, scale, offset, 0.0};
}
FeatureFactor FeatureFactor::indicator(int player, int dim, double threshold) {
    return {Kind::Indicator, player, dim, 1.0, 0.0, threshold};
}

double FeatureTerm::evaluate(const ActionProfile& a, const Context& xi) const {
    double v = coefficient;
    for (const auto& factor : factors) v *= factor.evaluate(a, xi);
    return v;
}

Eigen::VectorXd evaluate_features(const FeatureMap& map, const ActionProfile& a, const Context& xi) {
    Eigen::VectorXd phi(static_cast<Eigen::Index>(map.size()));
    for (std::size_t c = 0; c < map.size(); ++c) {
        double v = 0;
        for (const auto& term : map[c]) v += term.evaluate(a, xi);
        phi(static_cast<Eigen::Index>(c)) = v;
    }
    return phi;
}

LinearUtilityModel::LinearUtilityModel(int player, FeatureMap feature_map)
    : player_(player), map_(std::move(feature_map)) {
    if (player_ < 0) throw InputError("LinearUtilityModel: bad player index");
    if (map_.empty()) throw InputError("LinearUtilityModel: empty feature map");
}

Eigen::VectorXd LinearUtilityModel::features(const ActionProfile& a, const Context& xi) const {
    return evaluate_features(map_, a, xi);
}

double LinearUtilityModel::utility(const Eigen::VectorXd& theta, const ActionProfile& a,
                                   const Context& xi) const {
    if (theta.size() != param_dim())
        throw InputError("utility: theta has wrong dimension");
    return theta.dot(features(a, xi));
}

double LinearUtilityModel::utility_difference(const Eigen::VectorXd& theta, const Action& chosen_own,
                                              const ActionProfile& baseline, const Context& xi) const {
    if (theta.size() != param_dim())
        throw InputError("utility_difference: theta has wrong dimension");
    return theta.dot(error_row(chosen_own, baseline, xi));
}

Eigen::VectorXd LinearUtilityModel::error_row(const Action& chosen_own, const ActionProfile& baseline,
                                              const Context& xi) const {
    if (chosen_own.size() != baseline.of(player_).size())
        throw InputError("error_row: chosen action has wrong dimension");
    return profile_error_row(baseline.with_action(player_, chosen_own), baseline, xi);
}

Eigen::VectorXd LinearUtilityModel::profile_error_row(const ActionProfile& candidate,
                                                      const ActionProfile& baseline,
                                                      const Context& xi) const {
    if (candidate.num_players() != baseline.num_players())
        throw InputError("profile_error_row: player count mismatch");
    return features(baseline, xi) - features(candidate, xi);
}

ParameterSpace::ParameterSpace(int dim, Eigen::MatrixXd inequality_rows,
                               Eigen::VectorXd inequality_bounds, Eigen::MatrixXd equality_rows,
                               Eigen::VectorXd equality_values)
    : dim_(dim),
      ineq_rows_(std::move(inequality_rows)),
      ineq_bounds_(std::move(inequality_bounds)),
      eq_rows_(std::move(equality_rows)),
      eq_values_(std::move(equality_values)) {
    if (dim_ <= 0) throw InputError("ParameterSpace: dim must be positive");
    if (ineq_rows_.size() == 0) ineq_rows_.resize(0, dim_);
    if (eq_rows_.size() == 0) eq_rows_.resize(0, dim_);
    if (ineq_rows_.cols() != dim_ || ineq_rows_.rows() != ineq_bounds_.size() ||
        eq_rows_.cols() != dim_ || eq_rows_.rows() != eq_values_.size())
        throw InputError("ParameterSpace: inconsistent row dimensions");
    check_nonempty();
}

ParameterSpace ParameterSpace::unconstrained(int dim) {
    ParameterSpace s;
    s.dim_ = dim;
    if (dim <= 0) throw InputError("ParameterSpace: dim must be positive");
    s.ineq_rows_.resize(0, dim);
    s.ineq_bounds_.resize(0);
    s.eq_rows_.resize(0, dim);
    s.eq_values_.resize(0);
    return s;
}

ParameterSpace ParameterSpace::box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    if (lower.size() != upper.size() || lower.size() == 0)
        throw InputError("ParameterSpace::box: bad bounds");
    const int d = static_cast<int>(lower.size());
    Eigen::MatrixXd rows(2 * d, d);
    Eigen::VectorXd b(2 * d);
    rows.setZero();
    for (int j = 0; j < d; ++j) {
        rows(2 * j, j) = 1.0;
        b(2 * j) = upper(j);
        rows(2 * j + 1, j) = -1.0;
        b(2 * j + 1) = -lower(j);
    }
    return ParameterSpace(d, std::move(rows), std::move(b));
}

ParameterSpace ParameterSpace::with_inequality(const Eigen::VectorXd& g, double h) const {
    if (g.size() != dim_) throw InputError("with_inequality: wrong row length");
    ParameterSpace s = *this;
    s.ineq_rows_.conservativeResize(ineq_rows_.rows() + 1, dim_);
    s.ineq_rows_.row(s.ineq_rows_.rows() - 1) = g.transpose();
    s.ineq_bounds_.conservativeResize(ineq_bounds_.size() + 1);
    s.ineq_bounds_(s.ineq_bounds_.size() - 1) = h;
    s.check_nonempty();
    return s;
}

ParameterSpace ParameterSpace::with_equality(const Eigen::VectorXd& g, double v) const {
    if (g.size() != dim_) throw InputError("with_equality: wrong row length");
    ParameterSpace s = *this;
    s.eq_rows_.conservativeResize(eq_rows_.rows() + 1, dim_);
    s.eq_rows_.row(s.eq_rows_.rows() - 1) = g.transpose();
    s.eq_values_.conservativeResize(eq_values_.size() + 1);
    s.eq_values_(s.eq_values_.size() - 1) = v;
    s.check_nonempty();
    return s;
}

bool ParameterSpace::contains(const Eigen::VectorXd& theta, double tol) const {
    if (theta.size() != dim_) return false;
    for (Eigen::Index i = 0; i < ineq_rows_.rows(); ++i) {
        if (ineq_rows_.row(i).dot(theta) > ineq_bounds_(i) + tol) return false;
    }
    for (Eigen::Index i = 0; i < eq_rows_.rows(); ++i) {
        if (std::abs(eq_rows_.row(i).dot(theta) - eq_values_(i)) > tol) return false;
    }
    return true;
}

void ParameterSpace::check_nonempty() const {
    if (!check_feasible(ineq_rows_, ineq_bounds_, eq_rows_, eq_values_))
        throw InputError("ParameterSpace: empty parameter set");
}

}  // namespace gamefit
