#include "gamefit/forward.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace gamefit {

BertrandDuopoly::BertrandDuopoly(const Eigen::Vector4d& t1, const Eigen::Vector4d& t2,
                                 ActionInterval bounds)
    : theta1(t1), theta2(t2), price_bounds(bounds) {
    if (theta1(1) > 0 || theta2(2) > 0)
        throw InputError("BertrandDuopoly: own-price coefficients must be <= 0");
    if (theta1(2) < 0 || theta2(1) < 0)
        throw InputError("BertrandDuopoly: cross-price coefficients must be >= 0");
    if (!(price_bounds.lower <= price_bounds.upper))
        throw InputError("BertrandDuopoly: bad price bounds");
}

GameDefinition BertrandDuopoly::game() const {
    return GameDefinition(2, {{price_bounds}, {price_bounds}});
}

const Eigen::Vector4d& BertrandDuopoly::theta(int firm) const {
    if (firm == 0) return theta1;
    if (firm == 1) return theta2;
    throw InputError("BertrandDuopoly: firm index must be 0 or 1");
}

LinearUtilityModel BertrandDuopoly::revenue_model(int firm) {
    if (firm != 0 && firm != 1) throw InputError("revenue_model: firm index must be 0 or 1");
    FeatureMap map(4);
    map[0] = {FeatureTerm{1.0, {FeatureFactor::action(firm)}}};
    map[1] = {FeatureTerm{1.0, {FeatureFactor::action(firm), FeatureFactor::action(0)}}};
    map[2] = {FeatureTerm{1.0, {FeatureFactor::action(firm), FeatureFactor::action(1)}}};
    map[3] = {FeatureTerm{1.0, {FeatureFactor::action(firm), FeatureFactor::context(0)}}};
    return LinearUtilityModel(firm, std::move(map));
}

BertrandNashEquilibrium bertrand_nash(const BertrandDuopoly& duopoly, double xi) {
    const auto& t1 = duopoly.theta1;
    const auto& t2 = duopoly.theta2;
    if (!(t1(1) < 0) || !(t2(2) < 0))
        throw InputError("bertrand_nash: interior maximizer needs strictly negative own-price coefficients");
    Eigen::Matrix2d foc;
    foc << 2 * t1(1), t1(2), t2(1), 2 * t2(2);
    double det = foc.determinant();
    if (std::abs(det) < 1e-12 * (std::abs(4 * t1(1) * t2(2)) + std::abs(t1(2) * t2(1)) + 1e-30))
        throw InputError("bertrand_nash: singular first-order-condition system");
    Eigen::Vector2d rhs(-(t1(0) + t1(3) * xi), -(t2(0) + t2(3) * xi));
    Eigen::Vector2d p = foc.inverse() * rhs;

    BertrandNashEquilibrium ne;
    ne.unclamped_p1 = p(0);
    ne.unclamped_p2 = p(1);
    auto clamp = [&](double v) {
        return std::min(std::max(v, duopoly.price_bounds.lower), duopoly.price_bounds.upper);
    };
    ne.p1 = clamp(p(0));
    ne.p2 = clamp(p(1));
    ne.clamped = (ne.p1 != p(0)) || (ne.p2 != p(1));
    return ne;
}

double marginal_revenue(const Eigen::Vector4d& theta, int firm, double p1, double p2, double xi) {
    if (firm == 0) return theta(0) + 2 * theta(1) * p1 + theta(2) * p2 + theta(3) * xi;
    if (firm == 1) return theta(0) + theta(1) * p1 + 2 * theta(2) * p2 + theta(3) * xi;
    throw InputError("marginal_revenue: firm index must be 0 or 1");
}

double marginal_revenue(const BertrandDuopoly& duopoly, int firm, double p1, double p2, double xi) {
    return marginal_revenue(duopoly.theta(firm), firm, p1, p2, xi);
}

GridBestResponse best_response_grid(const LinearUtilityModel& model, const Eigen::VectorXd& theta,
                                    const ActionProfile& baseline, const Context& xi,
                                    const GridSpec& grid) {
    if (baseline.of(model.player()).size() != 1)
        throw InputError("best_response_grid: grid search needs a scalar action");
    GridBestResponse best;
    bool first = true;
    Action candidate(1);
    for (double a : regular_grid(grid)) {
        candidate(0) = a;
        double value = model.utility(theta, baseline.with_action(model.player(), candidate), xi);
        if (first || value > best.value) {
            best.action = a;
            best.value = value;
            first = false;
        }
    }
    return best;
}

std::vector<ActionProfile> better_response_dynamics(const GameDefinition& game,
                                                    const std::vector<LinearUtilityModel>& models,
                                                    const std::vector<Eigen::VectorXd>& thetas,
                                                    const ActionProfile& initial, int steps,
                                                    const Context& xi, const GridSpec& grid) {
    if (steps < 1) throw InputError("better_response_dynamics: steps must be >= 1");
    if (static_cast<int>(models.size()) != game.num_players() ||
        thetas.size() != models.size())
        throw InputError("better_response_dynamics: one model and theta per player required");
    game.validate(initial);
    for (int i = 0; i < game.num_players(); ++i) {
        if (game.action_dim(i) != 1)
            throw InputError("better_response_dynamics: scalar actions required");
    }

    const std::vector<double> grid_points = regular_grid(grid);
    std::vector<ActionProfile> trajectory;
    trajectory.reserve(static_cast<std::size_t>(steps) + 1);
    trajectory.push_back(initial);

    ActionProfile current = initial;
    for (int s = 0; s < steps; ++s) {
        const int mover = s % game.num_players();
        const auto& model = models[static_cast<std::size_t>(mover)];
        const auto& theta = thetas[static_cast<std::size_t>(mover)];
        const double here = model.utility(theta, current, xi);
        Action candidate(1);
        for (double a : grid_points) {
            candidate(0) = a;
            ActionProfile moved = current.with_action(mover, candidate);
            if (model.utility(theta, moved, xi) > here) {
                current = std::move(moved);
                break;
            }
        }
        trajectory.push_back(current);
    }
    return trajectory;
}

MarketShareModel::MarketShareModel(MarketShareKind kind_, double k1_, double k2_)
    : kind(kind_), k1(k1_), k2(k2_) {
    if (k1 < 0 || k2 < 0) throw InputError("MarketShareModel: effectiveness must be nonnegative");
}

LinearUtilityModel MarketShareModel::belief_model(MarketShareKind kind, int firm) {
    if (firm != 0 && firm != 1) throw InputError("belief_model: firm index must be 0 or 1");
    // Firm 0 gains k1 sqrt(a1) * g(1-M) and loses k2 sqrt(a2) * g(M), with
    // g = identity (Lanchester) or sqrt (Sorger); firm 1's objective is the
    // negated increment. The current share M enters as the scalar context.
    FeatureFactor gain = kind == MarketShareKind::Lanchester
                             ? FeatureFactor::context(0, -1.0, 1.0)
                             : FeatureFactor::sqrt_context(0, -1.0, 1.0);
    FeatureFactor loss = kind == MarketShareKind::Lanchester
                             ? FeatureFactor::context(0, 1.0, 0.0)
                             : FeatureFactor::sqrt_context(0, 1.0, 0.0);
    const double sign = firm == 0 ? 1.0 : -1.0;
    FeatureMap map(2);
    map[0] = {FeatureTerm{sign, {FeatureFactor::sqrt_action(0), gain}}};
    map[1] = {FeatureTerm{-sign, {FeatureFactor::sqrt_action(1), loss}}};
    return LinearUtilityModel(firm, std::move(map));
}

double market_share_step(const MarketShareModel& model, double share, double a1, double a2,
                         bool* clamped) {
    if (share < 0.0 || share > 1.0) throw InputError("market_share_step: share must lie in [0,1]");
    if (a1 < 0.0 || a2 < 0.0) throw InputError("market_share_step: advertising must be nonnegative");
    double gain_state = 1.0 - share;
    double loss_state = share;
    if (model.kind == MarketShareKind::Sorger) {
        gain_state = std::sqrt(gain_state);
        loss_state = std::sqrt(loss_state);
    }
    double next = share + model.k1 * std::sqrt(a1) * gain_state - model.k2 * std::sqrt(a2) * loss_state;
    bool out = next < 0.0 || next > 1.0;
    if (clamped) *clamped = out;
    return std::min(std::max(next, 0.0), 1.0);
}

ShareTrajectory simulate_market_share(const MarketShareModel& model, double initial_share,
                                      const std::vector<std::pair<double, double>>& advertising) {
    if (initial_share < 0.0 || initial_share > 1.0)
        throw InputError("simulate_market_share: initial share must lie in [0,1]");
    ShareTrajectory out;
    out.shares.reserve(advertising.size() + 1);
    out.shares.push_back(initial_share);
    for (std::size_t s = 0; s < advertising.size(); ++s) {
        bool clamped = false;
        double next = market_share_step(model, out.shares.back(), advertising[s].first,
                                        advertising[s].second, &clamped);
        if (clamped) out.clamped_steps.push_back(static_cast<int>(s));
        out.shares.push_back(next);
    }
    return out;
}

}  // namespace gamefit
