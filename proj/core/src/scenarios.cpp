#include "gamefit/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace gamefit {

double NormalSampler::operator()(double mean, double stddev) {
    // 53-bit uniforms in (0,1], Box-Muller transform.
    auto uniform = [&] { return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53; };
    const double u1 = uniform();
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

namespace {

int own_price_index(int firm) { return firm == 0 ? 1 : 2; }
int cross_price_index(int firm) { return firm == 0 ? 2 : 1; }

ParameterSpace bertrand_parameter_space(int firm, const BertrandConfig& config) {
    const int norm_index =
        config.normalization == "intercept" ? 0 : cross_price_index(firm);
    Eigen::VectorXd lower = Eigen::VectorXd::Constant(4, -config.theta_box);
    Eigen::VectorXd upper = Eigen::VectorXd::Constant(4, config.theta_box);
    ParameterSpace space = ParameterSpace::box(lower, upper);
    Eigen::VectorXd own_row = Eigen::VectorXd::Zero(4);
    own_row(own_price_index(firm)) = 1.0;
    space = space.with_inequality(own_row, 0.0);  // own-price coefficient <= 0
    Eigen::VectorXd cross_row = Eigen::VectorXd::Zero(4);
    cross_row(cross_price_index(firm)) = -1.0;
    space = space.with_inequality(cross_row, 0.0);  // cross-price coefficient >= 0
    Eigen::VectorXd norm_row = Eigen::VectorXd::Zero(4);
    norm_row(norm_index) = 1.0;
    return space.with_equality(norm_row, 1.0);
}

MarginalRevenueBand marginal_revenue_band(const EstimationResult& estimate,
                                          const Eigen::Vector4d& normalized_true, int firm,
                                          double opponent_price, double xi, double p_max,
                                          int sweep_points) {
    MarginalRevenueBand band;
    band.opponent_price = opponent_price;
    band.context_value = xi;
    band.prices = regular_grid(GridSpec{0.0, p_max, sweep_points});
    band.lower.reserve(band.prices.size());
    band.upper.reserve(band.prices.size());
    band.true_mr.reserve(band.prices.size());
    for (double p : band.prices) {
        const double p1 = firm == 0 ? p : opponent_price;
        const double p2 = firm == 0 ? opponent_price : p;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& v : estimate.polyhedron.vertices) {
            double mr = marginal_revenue(Eigen::Vector4d(v), firm, p1, p2, xi);
            lo = std::min(lo, mr);
            hi = std::max(hi, mr);
        }
        band.lower.push_back(lo);
        band.upper.push_back(hi);
        band.true_mr.push_back(marginal_revenue(normalized_true, firm, p1, p2, xi));
    }
    return band;
}

}  // namespace

BertrandReport run_bertrand(const BertrandConfig& config) {
    if (config.num_contexts < 1) throw DataError("bertrand config: num_contexts must be >= 1");
    if (!(config.context_std > 0)) throw DataError("bertrand config: context_std must be > 0");
    if (config.grid_points < 2) throw DataError("bertrand config: grid_points must be >= 2");
    if (config.sweep_points < 2) throw DataError("bertrand config: sweep_points must be >= 2");
    if (!(config.theta_box > 0)) throw DataError("bertrand config: theta_box must be > 0");
    if (config.normalization != "cross-price" && config.normalization != "intercept")
        throw DataError("bertrand config: normalization must be 'cross-price' or 'intercept'");

    BertrandReport report;
    report.config = config;

    BertrandDuopoly duopoly(config.theta1_true, config.theta2_true);

    NormalSampler sampler(config.rng_seed);
    report.contexts.reserve(static_cast<std::size_t>(config.num_contexts));
    report.ne_prices.reserve(static_cast<std::size_t>(config.num_contexts));
    double max_price = 0;
    for (int k = 0; k < config.num_contexts; ++k) {
        double xi = sampler(config.context_mean, config.context_std);
        BertrandNashEquilibrium ne = bertrand_nash(duopoly, xi);
        report.contexts.push_back(xi);
        report.ne_prices.push_back({ne.unclamped_p1, ne.unclamped_p2});
        max_price = std::max({max_price, ne.unclamped_p1, ne.unclamped_p2});
    }
    report.p_max_used = config.p_max.value_or(std::ceil(2.0 * max_price));
    for (int k = 0; k < config.num_contexts; ++k) {
        const auto& [p1, p2] = report.ne_prices[static_cast<std::size_t>(k)];
        if (p1 < 0 || p2 < 0 || p1 > report.p_max_used || p2 > report.p_max_used)
            throw DataError("bertrand config: equilibrium prices leave the price grid at context " +
                            std::to_string(k));
    }

    GameDefinition game(2, {{{0.0, report.p_max_used}}, {{0.0, report.p_max_used}}});
    const GridSpec grid{0.0, report.p_max_used, config.grid_points};
    std::vector<Action> alternatives;
    alternatives.reserve(static_cast<std::size_t>(grid.num_points));
    for (double p : regular_grid(grid)) {
        Action a(1);
        a(0) = p;
        alternatives.push_back(a);
    }

    ContextualDataset dataset;
    dataset.batches.reserve(report.contexts.size());
    for (std::size_t k = 0; k < report.contexts.size(); ++k) {
        ContextBatch batch;
        batch.context.values = Eigen::VectorXd::Constant(1, report.contexts[k]);
        Action a1(1), a2(1);
        a1(0) = report.ne_prices[k][0];
        a2(0) = report.ne_prices[k][1];
        ActionProfile ne = game.make_profile({a1, a2});
        for (int firm = 0; firm < 2; ++firm)
            batch.observations.push_back(from_equilibrium(game, firm, ne, alternatives));
        dataset.batches.push_back(std::move(batch));
    }

    for (int firm = 0; firm < 2; ++firm) {
        const Eigen::Vector4d& truth = duopoly.theta(firm);
        const int norm_index =
            config.normalization == "intercept" ? 0 : cross_price_index(firm);
        const double norm_value = truth(norm_index);
        if (norm_value == 0)
            throw DataError("bertrand config: normalization coefficient is zero for firm " +
                            std::to_string(firm + 1));
        report.normalized_true[static_cast<std::size_t>(firm)] = truth / norm_value;

        LinearUtilityModel model = BertrandDuopoly::revenue_model(firm);
        ParameterSpace space = bertrand_parameter_space(firm, config);
        ConstraintSystem system = build_constraints(model, dataset);
        report.estimates[static_cast<std::size_t>(firm)] = estimate_linf(system, space);
    }

    BertrandNashEquilibrium slice = bertrand_nash(duopoly, config.context_mean);
    for (int firm = 0; firm < 2; ++firm) {
        const double opponent = firm == 0 ? slice.p2 : slice.p1;
        report.bands[static_cast<std::size_t>(firm)] = marginal_revenue_band(
            report.estimates[static_cast<std::size_t>(firm)],
            report.normalized_true[static_cast<std::size_t>(firm)], firm, opponent,
            config.context_mean, report.p_max_used, config.sweep_points);
    }
    return report;
}

std::array<std::array<ReferenceRow, 3>, 2> reference_comparison_table() {
    // Published comparison values: rationalization error and estimated
    // beliefs per estimator (rows: linf, l2, ols).
    return {{
        {{{0.018, 0.066, 0.057}, {0.021, 0.078, 0.052}, {0.059, 0.011, 0.007}}},
        {{{0.011, 0.036, 0.022}, {0.013, 0.021, 0.016}, {0.015, 0.012, 0.011}}},
    }};
}

ComparisonReport run_advertising(const AdvertisingConfig& config) {
    TrajectoryData data = load_trajectory_csv(config.data_path);
    const std::size_t T = data.profiles.size();
    if (T < 3) throw DataError("advertising estimation requires at least 3 time steps");
    if (!data.state)
        throw DataError(
            "advertising estimation requires the observed state column; "
            "market_share_initial only seeds forward simulation");
    const std::vector<double>& M = *data.state;
    const double m0 = config.market_share_initial.value_or(M.front());
    if (m0 < 0 || m0 > 1) throw DataError("market_share_initial must lie in [0,1]");
    if (!(config.k_upper > 0)) throw DataError("advertising config: k_upper must be > 0");
    if (config.polyhedron_slack < 0)
        throw DataError("advertising config: polyhedron_slack must be >= 0");

    double max_a = 0;
    for (const auto& p : data.profiles) max_a = std::max({max_a, p.of(0)(0), p.of(1)(0)});
    GameDefinition game(2, {{{0.0, 10.0 * max_a + 1.0}}, {{0.0, 10.0 * max_a + 1.0}}},
                        {"firm1", "firm2"});

    ContextualDataset dataset = dataset_from_state_trajectory(game, data);

    std::vector<std::pair<double, double>> advertising;
    advertising.reserve(T - 1);
    for (std::size_t t = 1; t < T; ++t)
        advertising.emplace_back(data.profiles[t].of(0)(0), data.profiles[t].of(1)(0));

    ComparisonReport report;
    report.times = data.times;
    report.observed_shares = M;
    report.mode = config.comparison_mode;
    if (config.compare_to_reference) report.reference = reference_comparison_table();

    for (int firm = 0; firm < 2; ++firm) {
        const MarketShareKind kind = firm == 0 ? config.model_firm1 : config.model_firm2;
        FirmComparison& cmp = report.firms[static_cast<std::size_t>(firm)];
        cmp.firm = firm;
        cmp.kind = kind;

        LinearUtilityModel model = MarketShareModel::belief_model(kind, firm);
        ParameterSpace space = ParameterSpace::box(Eigen::Vector2d(0.0, 0.0),
                                                   Eigen::Vector2d(config.k_upper, config.k_upper));
        ConstraintSystem system = build_constraints(model, dataset, config.comparison_mode);

        cmp.linf = estimate_linf(system, space);
        L2Estimate l2 = estimate_l2(system, space);
        OlsMarketShareFit ols = estimate_ols_market_share(data, kind);

        auto outcome = [&](const std::string& name, const Eigen::VectorXd& theta,
                           double native) {
            EstimatorOutcome o;
            o.name = name;
            o.theta = theta;
            o.native_loss = native;
            o.linf_certified = irrationality_loss(system, theta);
            o.certificate = certify(system, theta);
            Eigen::VectorXd steps = pointwise_errors(system, theta);
            o.per_step_irrationality.assign(steps.data(), steps.data() + steps.size());
            MarketShareModel believed(kind, std::max(0.0, theta(0)), std::max(0.0, theta(1)));
            o.believed_shares = simulate_market_share(believed, m0, advertising).shares;
            return o;
        };
        cmp.estimators[0] = outcome("linf", cmp.linf.theta_hat, cmp.linf.epsilon_hat);
        cmp.estimators[1] = outcome("l2", l2.theta, l2.loss);
        cmp.estimators[1].converged = l2.converged;
        Eigen::Vector2d theta_ols(ols.k1, ols.k2);
        cmp.estimators[2] = outcome("ols", theta_ols, ols.residual);
        cmp.estimators[2].clipped = ols.clipped;

        // Fig.-4-style envelope: believed evolutions over the vertices of the
        // slack-relaxed solution polyhedron.
        SolutionPolyhedron relaxed = solution_polyhedron(
            system, space, cmp.linf.epsilon_hat * (1.0 + config.polyhedron_slack));
        cmp.band_lower.assign(T, std::numeric_limits<double>::infinity());
        cmp.band_upper.assign(T, -std::numeric_limits<double>::infinity());
        for (const auto& v : relaxed.vertices) {
            MarketShareModel believed(kind, std::max(0.0, v(0)), std::max(0.0, v(1)));
            ShareTrajectory traj = simulate_market_share(believed, m0, advertising);
            for (std::size_t t = 0; t < T; ++t) {
                cmp.band_lower[t] = std::min(cmp.band_lower[t], traj.shares[t]);
                cmp.band_upper[t] = std::max(cmp.band_upper[t], traj.shares[t]);
            }
        }
        if (relaxed.vertices.empty()) {
            cmp.band_lower.clear();
            cmp.band_upper.clear();
        }
    }
    return report;
}

}  // namespace gamefit
