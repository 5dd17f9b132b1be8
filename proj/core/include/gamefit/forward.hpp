#pragma once

#include <Eigen/Core>
#include <vector>

#include "gamefit/dataset.hpp"
#include "gamefit/features.hpp"
#include "gamefit/game.hpp"

namespace gamefit {

/// Two firms setting prices against linear demands
///   D_i(p1, p2; theta_i, xi) = theta_{i,0} + theta_{i,1} p1 + theta_{i,2} p2 + theta_{i,3} xi
/// and revenues U_i = p_i * D_i. Own-price effects must be nonpositive and
/// cross-price effects nonnegative.
struct BertrandDuopoly {
    Eigen::Vector4d theta1;
    Eigen::Vector4d theta2;
    ActionInterval price_bounds{0.0, 1e6};

    BertrandDuopoly(const Eigen::Vector4d& t1, const Eigen::Vector4d& t2,
                    ActionInterval bounds = {0.0, 1e6});

    GameDefinition game() const;
    const Eigen::Vector4d& theta(int firm) const;

    /// Revenue feature map of `firm`: U_i = <theta_i, phi_i> with
    /// phi_i = (p_i, p_i p_1, p_i p_2, p_i xi).
    static LinearUtilityModel revenue_model(int firm);
};

struct BertrandNashEquilibrium {
    double p1 = 0;
    double p2 = 0;
    bool clamped = false;      // true if the stationary point left the bounds
    double unclamped_p1 = 0;
    double unclamped_p2 = 0;
};

/// Unique stationary point of both revenues from the first-order conditions
///   theta_{i,0} + 2 theta_{i,i} p_i + theta_{i,-i} p_{-i} + theta_{i,3} xi = 0.
/// Requires strict own-price concavity and a nonsingular system.
BertrandNashEquilibrium bertrand_nash(const BertrandDuopoly& duopoly, double xi);

/// d/dp_i of p_i * D_i at (p1, p2, xi) for an arbitrary coefficient vector.
double marginal_revenue(const Eigen::Vector4d& theta, int firm, double p1, double p2, double xi);
double marginal_revenue(const BertrandDuopoly& duopoly, int firm, double p1, double p2, double xi);

struct GridBestResponse {
    double action = 0;
    double value = 0;
};

/// Grid argmax of the player's utility against the opponents in `baseline`;
/// ties break toward the lower action.
GridBestResponse best_response_grid(const LinearUtilityModel& model, const Eigen::VectorXd& theta,
                                    const ActionProfile& baseline, const Context& xi,
                                    const GridSpec& grid);

/// Round-robin first-improvement dynamics on the grid: the moving player
/// takes the first grid action that strictly improves its utility against
/// the current profile and stays put when none does. Every consecutive pair
/// of the returned trajectory is better-response compatible with the
/// generating parameters by construction.
std::vector<ActionProfile> better_response_dynamics(const GameDefinition& game,
                                                    const std::vector<LinearUtilityModel>& models,
                                                    const std::vector<Eigen::VectorXd>& thetas,
                                                    const ActionProfile& initial, int steps,
                                                    const Context& xi, const GridSpec& grid);

enum class MarketShareKind { Lanchester, Sorger };

/// Discrete-time market-share dynamics of firm 1's share M driven by
/// square-root advertising effectiveness; the Sorger variant scales the
/// gain/loss terms by sqrt(1-M) and sqrt(M) to model word of mouth.
struct MarketShareModel {
    MarketShareKind kind = MarketShareKind::Lanchester;
    double k1 = 0;
    double k2 = 0;

    MarketShareModel(MarketShareKind kind, double k1, double k2);

    /// Belief feature map for `firm` (0: maximizes M, 1: maximizes 1-M) with
    /// the current share as the scalar context; parameters are the firm's
    /// beliefs (k_{1,i}, k_{2,i}).
    static LinearUtilityModel belief_model(MarketShareKind kind, int firm);
};

/// One step of the share dynamics, clamped to [0,1]; `clamped` reports when
/// the raw value left the interval.
double market_share_step(const MarketShareModel& model, double share, double a1, double a2,
                         bool* clamped = nullptr);

struct ShareTrajectory {
    std::vector<double> shares;        // length = advertising steps + 1
    std::vector<int> clamped_steps;
};

/// Iterated market_share_step: advertising[s] drives the transition from
/// shares[s] to shares[s+1].
ShareTrajectory simulate_market_share(const MarketShareModel& model, double initial_share,
                                      const std::vector<std::pair<double, double>>& advertising);

}  // namespace gamefit
