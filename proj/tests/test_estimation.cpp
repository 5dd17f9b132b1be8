#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gamefit/estimation.hpp"
#include "support.hpp"

using namespace gamefit;
using gamefit::testing::Rng;
using gamefit::testing::grid_min_loss;

namespace {

ConstraintSystem system_from_rows(const Eigen::MatrixXd& rows) {
    ConstraintSystem system;
    system.player = 0;
    system.rows = rows;
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
        system.row_meta.push_back({0, static_cast<int>(i), Provenance::Static});
    return system;
}

ActionProfile pair_profile(double a, double b) {
    Action x(1), y(1);
    x(0) = a;
    y(0) = b;
    return ActionProfile{{x, y}};
}

// A one-player concave quadratic game on a grid; data generated from exact
// best responses under theta_true is perfectly rationalizable by
// construction.
struct QuadraticToy {
    GameDefinition game{1, {{{0.0, 4.0}}}};
    // features (a, a^2): utility theta0 * a + theta1 * a^2
    LinearUtilityModel model{
        0, FeatureMap{{FeatureTerm{1.0, {FeatureFactor::action(0)}}},
                      {FeatureTerm{1.0, {FeatureFactor::action(0), FeatureFactor::action(0)}}}}};

    ContextualDataset dataset(const Eigen::Vector2d& theta_true, int contexts, int grid_points) {
        ContextualDataset data;
        std::vector<Action> alternatives;
        for (double v : regular_grid(GridSpec{0.0, 4.0, grid_points}))
            alternatives.push_back(Eigen::VectorXd::Constant(1, v));
        for (int k = 0; k < contexts; ++k) {
            // argmax of theta0 a + theta1 a^2 over the grid (exact scan)
            double best = 0, best_value = -1e300;
            for (const auto& alt : alternatives) {
                double value = theta_true(0) * alt(0) + theta_true(1) * alt(0) * alt(0);
                if (value > best_value) {
                    best_value = value;
                    best = alt(0);
                }
            }
            ContextBatch batch;
            batch.context.values = Eigen::VectorXd::Constant(1, 0.0);
            ActionProfile eq{{Eigen::VectorXd::Constant(1, best)}};
            batch.observations.push_back(from_equilibrium(game, 0, eq, alternatives));
            data.batches.push_back(std::move(batch));
        }
        return data;
    }
};

}  // namespace

TEST_CASE("constraint building") {
    GameDefinition game(2, {{{0.0, 50.0}}, {{0.0, 50.0}}});
    LinearUtilityModel model = MarketShareModel::belief_model(MarketShareKind::Lanchester, 0);

    TrajectoryData data = gamefit::testing::random_advertising_data(11, 9);
    ContextualDataset dataset = dataset_from_state_trajectory(game, data);

    ConstraintSystem system = build_constraints(model, dataset);
    CHECK(system.num_rows() == 8);  // one row per transition
    CHECK(system.param_dim() == 2);
    CHECK(system.row_meta[3].context_index == 3);

    SUBCASE("duplicated data points duplicate rows") {
        ContextualDataset doubled = dataset;
        for (auto& batch : doubled.batches) {
            for (auto& obs : batch.observations) obs.points.push_back(obs.points.front());
        }
        CHECK(build_constraints(model, doubled).num_rows() == 16);
    }
    SUBCASE("fixed-opponent mode cancels the opponent column") {
        ConstraintSystem fixed = build_constraints(model, dataset, ComparisonMode::FixedOpponent);
        for (int r = 0; r < fixed.num_rows(); ++r) CHECK(fixed.rows(r, 1) == 0.0);
        ConstraintSystem joint = build_constraints(model, dataset, ComparisonMode::JointProfile);
        double largest = joint.rows.col(1).cwiseAbs().maxCoeff();
        CHECK(largest > 0.0);  // opponent effectiveness identified
    }
    SUBCASE("missing player is an error") {
        ContextualDataset partial = dataset;
        for (auto& batch : partial.batches) batch.observations.resize(1);  // player 0 only
        LinearUtilityModel other = MarketShareModel::belief_model(MarketShareKind::Lanchester, 1);
        CHECK_THROWS_AS(build_constraints(other, partial), DataError);
    }
    SUBCASE("empty dataset is an error") {
        CHECK_THROWS_AS(build_constraints(model, ContextualDataset{}), DataError);
    }
    SUBCASE("static points build the same row in both modes") {
        QuadraticToy toy;
        ContextualDataset static_data = toy.dataset(Eigen::Vector2d(2.0, -0.7), 2, 9);
        ConstraintSystem a = build_constraints(toy.model, static_data,
                                               ComparisonMode::FixedOpponent);
        ConstraintSystem b = build_constraints(toy.model, static_data,
                                               ComparisonMode::JointProfile);
        CHECK((a.rows - b.rows).lpNorm<Eigen::Infinity>() == 0.0);
    }
}

TEST_CASE("irrationality loss") {
    Eigen::MatrixXd rows(2, 1);
    rows << 1, -2;
    ConstraintSystem system = system_from_rows(rows);
    CHECK(irrationality_loss(system, Eigen::VectorXd::Constant(1, 1.0)) == 1.0);
    CHECK(irrationality_loss(system, Eigen::VectorXd::Zero(1)) == 0.0);

    ConstraintSystem zeros = system_from_rows(Eigen::MatrixXd::Zero(3, 2));
    Rng rng(6);
    for (int i = 0; i < 10; ++i)
        CHECK(irrationality_loss(zeros, rng.vector(2, -9, 9)) == 0.0);

    SUBCASE("positive scaling scales the loss") {
        Rng rng2(7);
        Eigen::MatrixXd r = Eigen::MatrixXd::Random(5, 3);
        ConstraintSystem s = system_from_rows(r);
        for (int i = 0; i < 20; ++i) {
            Eigen::VectorXd theta = rng2.vector(3, -2, 2);
            double alpha = rng2.uniform(0.1, 5.0);
            CHECK(irrationality_loss(s, alpha * theta) ==
                  doctest::Approx(alpha * irrationality_loss(s, theta)).epsilon(1e-12));
        }
    }
    SUBCASE("single-context collapse equals the plain maximum") {
        // with one batch the contextual double max is the inner max itself
        Eigen::VectorXd theta(1);
        theta << 0.5;
        CHECK(irrationality_loss(system, theta) ==
              doctest::Approx(std::max(0.0, (rows * theta).maxCoeff())));
    }
}

TEST_CASE("estimate_linf hand cases") {
    SUBCASE("single row, unit interval") {
        Eigen::MatrixXd rows(1, 1);
        rows << 1;
        ConstraintSystem system = system_from_rows(rows);
        ParameterSpace space = ParameterSpace::box(Eigen::VectorXd::Zero(1),
                                                   Eigen::VectorXd::Ones(1));
        EstimationResult result = estimate_linf(system, space);
        CHECK(result.epsilon_hat == doctest::Approx(0.0));
        CHECK(result.theta_hat(0) == doctest::Approx(0.0));
        REQUIRE(result.polyhedron.vertices_enumerated);
        REQUIRE(result.polyhedron.vertices.size() == 1);  // {0}
        CHECK(result.polyhedron.vertices[0](0) == doctest::Approx(0.0));
    }
    SUBCASE("inactive data leaves the parameter space untouched") {
        Eigen::MatrixXd rows(2, 2);
        rows << -1, 0, 0, -1;  // e <= 0 everywhere on the positive box
        ConstraintSystem system = system_from_rows(rows);
        ParameterSpace space = ParameterSpace::box(Eigen::Vector2d(0.5, 0.5),
                                                   Eigen::Vector2d(1.0, 1.0));
        EstimationResult result = estimate_linf(system, space);
        CHECK(result.epsilon_hat == doctest::Approx(0.0));
        REQUIRE(result.polyhedron.vertices.size() == 4);  // the box itself
    }
    SUBCASE("perfectly rationalizable synthetic data") {
        QuadraticToy toy;
        Eigen::Vector2d theta_true(2.0, -0.5);
        ContextualDataset data = toy.dataset(theta_true, 3, 33);
        ConstraintSystem system = build_constraints(toy.model, data);
        ParameterSpace space = ParameterSpace::box(Eigen::Vector2d(-5, -5),
                                                   Eigen::Vector2d(5, 5));
        EstimationResult result = estimate_linf(system, space);
        CHECK(result.epsilon_hat <= 1e-9);
        CHECK(result.polyhedron.contains(theta_true, 1e-9));
        CHECK(result.polyhedron.contains(result.theta_hat, 1e-9));
    }
}

TEST_CASE("minimax optimality against dense-grid search") {
    Rng rng(515151);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = rng.uniform_int(2, 50);
        Eigen::MatrixXd rows(m, 2);
        for (int i = 0; i < m; ++i) rows.row(i) = rng.vector(2, -1, 1).transpose();
        ConstraintSystem system = system_from_rows(rows);
        ParameterSpace space = ParameterSpace::box(Eigen::Vector2d(-1, -1),
                                                   Eigen::Vector2d(1, 1));
        EstimationResult result = estimate_linf(system, space);

        const int steps = 101;
        double oracle = grid_min_loss(rows, space.inequality_rows(), space.inequality_bounds(),
                                      Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1), steps);
        double grid_step = 2.0 / (steps - 1);
        double max_norm = 0;
        for (int i = 0; i < m; ++i) max_norm = std::max(max_norm, rows.row(i).norm());
        CHECK(result.epsilon_hat <= oracle + 1e-9);
        CHECK(oracle - result.epsilon_hat <= grid_step * max_norm * 2);
    }
}

TEST_CASE("solution polyhedron soundness") {
    Rng rng(9090);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = rng.uniform_int(3, 20);
        Eigen::MatrixXd rows(m, 2);
        for (int i = 0; i < m; ++i) rows.row(i) = rng.vector(2, -1, 1).transpose();
        ConstraintSystem system = system_from_rows(rows);
        ParameterSpace space = ParameterSpace::box(Eigen::Vector2d(-2, -2),
                                                   Eigen::Vector2d(2, 2));
        EstimationResult result = estimate_linf(system, space);
        REQUIRE(result.polyhedron.vertices_enumerated);

        for (const auto& v : result.polyhedron.vertices) {
            CHECK(irrationality_loss(system, v) <= result.epsilon_hat + 1e-8);
        }
        // points violating some polyhedron row by delta have larger loss
        for (int i = 0; i < 50; ++i) {
            Eigen::VectorXd theta = rng.vector(2, -2, 2);
            double violation = 0;
            for (Eigen::Index r = 0; r < rows.rows(); ++r)
                violation = std::max(violation, rows.row(r).dot(theta) - result.epsilon_hat);
            if (violation > 1e-6)
                CHECK(irrationality_loss(system, theta) > result.epsilon_hat);
        }
    }
}

TEST_CASE("scale invariance of the optimal set over a cone at zero loss") {
    // theta >= 0 is a cone; rationalizable data keeps the whole argmin set
    // scale invariant
    Eigen::MatrixXd rows(3, 2);
    rows << -1, 0, -0.5, -0.5, 0, -1;  // every row nonpositive on the cone
    ConstraintSystem system = system_from_rows(rows);
    Eigen::MatrixXd cone_rows(2, 2);
    cone_rows << -1, 0, 0, -1;
    ParameterSpace cone(2, cone_rows, Eigen::VectorXd::Zero(2));
    EstimationResult result = estimate_linf(system, cone);
    REQUIRE(result.epsilon_hat == 0.0);
    Rng rng(31337);
    for (int i = 0; i < 30; ++i) {
        Eigen::VectorXd theta = rng.vector(2, 0, 3);
        if (!result.polyhedron.contains(theta, 1e-12)) continue;
        for (double alpha : {0.25, 2.0, 10.0})
            CHECK(result.polyhedron.contains(alpha * theta, 1e-9));
    }
}

TEST_CASE("certificates") {
    QuadraticToy toy;
    Eigen::Vector2d theta_true(2.0, -0.5);
    ContextualDataset data = toy.dataset(theta_true, 2, 17);
    ConstraintSystem system = build_constraints(toy.model, data);
    ParameterSpace space = ParameterSpace::box(Eigen::Vector2d(-5, -5), Eigen::Vector2d(5, 5));
    EstimationResult result = estimate_linf(system, space);

    SUBCASE("theta_hat reproduces epsilon_hat exactly") {
        Certificate cert = certify(system, result.theta_hat);
        CHECK(cert.epsilon_bar == result.epsilon_hat);  // same maximand, same arithmetic
        CHECK(cert.kind == Certificate::Kind::NashEquilibriumOnGrid);
    }
    SUBCASE("every polyhedron member certifies at most epsilon_hat") {
        Rng rng(4);
        const auto& verts = result.polyhedron.vertices;
        REQUIRE(!verts.empty());
        for (int i = 0; i < 20; ++i) {
            // random convex combination of vertices stays in the polyhedron
            Eigen::VectorXd theta = Eigen::VectorXd::Zero(2);
            double total = 0;
            for (const auto& v : verts) {
                double w = rng.uniform(0, 1);
                theta += w * v;
                total += w;
            }
            theta /= total;
            Certificate cert = certify(system, theta);
            CHECK(cert.epsilon_bar <= result.epsilon_hat + 1e-9);
        }
    }
    SUBCASE("violating a row grows the certificate linearly") {
        // walk along the first row's normal, out of the polyhedron
        Eigen::VectorXd normal = system.rows.row(0).transpose();
        REQUIRE(normal.norm() > 0);
        double base = certify(system, result.theta_hat).epsilon_bar;
        double prev = base;
        for (double delta : {0.1, 0.2, 0.4}) {
            Eigen::VectorXd theta = result.theta_hat + delta * normal / normal.squaredNorm();
            double eps = certify(system, theta).epsilon_bar;
            CHECK(eps >= prev - 1e-12);
            prev = eps;
        }
        CHECK(prev > base);
    }
    SUBCASE("provenance kinds") {
        GameDefinition game(2, {{{0.0, 50.0}}, {{0.0, 50.0}}});
        TrajectoryData adv = gamefit::testing::random_advertising_data(21, 6);
        ContextualDataset dynamic = dataset_from_state_trajectory(game, adv);
        LinearUtilityModel model =
            MarketShareModel::belief_model(MarketShareKind::Lanchester, 0);
        ConstraintSystem dyn_system = build_constraints(model, dynamic);
        CHECK(certify(dyn_system, Eigen::Vector2d(0.1, 0.1)).kind ==
              Certificate::Kind::BetterResponseDynamics);

        CHECK(certify(system, Eigen::Vector2d(0, 0)).epsilon_bar == 0.0);  // zero theta
    }
}

TEST_CASE("l2 estimator") {
    SUBCASE("single row, unit interval") {
        Eigen::MatrixXd rows(1, 1);
        rows << 1;
        ConstraintSystem system = system_from_rows(rows);
        ParameterSpace space = ParameterSpace::box(Eigen::VectorXd::Zero(1),
                                                   Eigen::VectorXd::Ones(1));
        L2Estimate est = estimate_l2(system, space);
        CHECK(est.converged);
        CHECK(est.theta(0) == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(est.loss <= 1e-8);
    }
    SUBCASE("rationalizable data drives the loss to zero") {
        QuadraticToy toy;
        Eigen::Vector2d theta_true(2.0, -0.5);
        ContextualDataset data = toy.dataset(theta_true, 2, 17);
        ConstraintSystem system = build_constraints(toy.model, data);
        ParameterSpace space = ParameterSpace::box(Eigen::Vector2d(-5, -5),
                                                   Eigen::Vector2d(5, 5));
        L2Estimate est = estimate_l2(system, space);
        EstimationResult linf = estimate_linf(system, space);
        CHECK(est.loss <= 1e-6);
        CHECK(linf.polyhedron.contains(est.theta, 1e-5));
    }
    SUBCASE("result stays inside the parameter space") {
        Rng rng(2024);
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::MatrixXd rows(12, 2);
            for (int i = 0; i < 12; ++i) rows.row(i) = rng.vector(2, -1, 1).transpose();
            ConstraintSystem system = system_from_rows(rows);
            ParameterSpace space =
                ParameterSpace::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 3))
                    .with_equality(Eigen::Vector2d(1, 1), 2.0);
            L2Estimate est = estimate_l2(system, space);
            CHECK(space.contains(est.theta, 1e-6));
            // dominance: the minimax estimate never certifies worse
            EstimationResult linf = estimate_linf(system, space);
            CHECK(linf.epsilon_hat <= irrationality_loss(system, est.theta) + 1e-9);
        }
    }
}

TEST_CASE("ols share regression") {
    SUBCASE("noiseless Lanchester recovery") {
        MarketShareModel truth(MarketShareKind::Lanchester, 0.1, 0.2);
        TrajectoryData data;
        data.state.emplace();
        Rng rng(77);
        double share = 0.5;
        double a1 = 2.0, a2 = 1.0;
        for (int t = 0; t < 12; ++t) {
            data.times.push_back(t);
            Action x1(1), x2(1);
            x1(0) = a1;
            x2(0) = a2;
            data.profiles.push_back(ActionProfile{{x1, x2}});
            data.state->push_back(share);
            a1 = rng.uniform(0.5, 4.0);
            a2 = rng.uniform(0.5, 4.0);
            share = market_share_step(truth, share, a1, a2);
        }
        OlsMarketShareFit fit = estimate_ols_market_share(data, MarketShareKind::Lanchester);
        CHECK(fit.k1 == doctest::Approx(0.1).epsilon(1e-9));
        CHECK(fit.k2 == doctest::Approx(0.2).epsilon(1e-9));
        CHECK(fit.residual <= 1e-12);
        CHECK_FALSE(fit.clipped);

        SUBCASE("the fitted model reproduces the trajectory exactly") {
            MarketShareModel fitted(MarketShareKind::Lanchester, fit.k1, fit.k2);
            std::vector<std::pair<double, double>> advertising;
            for (std::size_t t = 1; t < data.profiles.size(); ++t)
                advertising.emplace_back(data.profiles[t].of(0)(0), data.profiles[t].of(1)(0));
            ShareTrajectory sim = simulate_market_share(fitted, (*data.state)[0], advertising);
            for (std::size_t t = 0; t < data.state->size(); ++t)
                CHECK(sim.shares[t] == doctest::Approx((*data.state)[t]).epsilon(1e-9));
        }
    }
    SUBCASE("noiseless Sorger recovery") {
        MarketShareModel truth(MarketShareKind::Sorger, 0.07, 0.11);
        TrajectoryData data;
        data.state.emplace();
        Rng rng(78);
        for (int t = 0; t < 10; ++t) {
            data.times.push_back(t);
            Action x1(1), x2(1);
            x1(0) = rng.uniform(0.5, 4.0);
            x2(0) = rng.uniform(0.5, 4.0);
            data.profiles.push_back(ActionProfile{{x1, x2}});
        }
        std::vector<double>& M = *data.state;
        M.assign(10, 0.4);  // share[t+1] evolves under advertising[t+1]
        for (std::size_t t = 0; t + 1 < M.size(); ++t) {
            M[t + 1] = market_share_step(truth, M[t], data.profiles[t + 1].of(0)(0),
                                         data.profiles[t + 1].of(1)(0));
        }
        OlsMarketShareFit fit = estimate_ols_market_share(data, MarketShareKind::Sorger);
        CHECK(fit.k1 == doctest::Approx(0.07).epsilon(1e-9));
        CHECK(fit.k2 == doctest::Approx(0.11).epsilon(1e-9));
    }
    SUBCASE("constant advertising and share is rank deficient") {
        TrajectoryData data;
        data.state.emplace();
        for (int t = 0; t < 6; ++t) {
            data.times.push_back(t);
            Action x1(1), x2(1);
            x1(0) = 1.0;
            x2(0) = 1.0;
            data.profiles.push_back(ActionProfile{{x1, x2}});
            data.state->push_back(0.5);
        }
        CHECK_THROWS_AS(estimate_ols_market_share(data, MarketShareKind::Lanchester), DataError);
    }
    SUBCASE("missing state column") {
        TrajectoryData data;
        for (int t = 0; t < 4; ++t) {
            data.times.push_back(t);
            Action x1(1), x2(1);
            x1(0) = 1;
            x2(0) = 2;
            data.profiles.push_back(ActionProfile{{x1, x2}});
        }
        CHECK_THROWS_AS(estimate_ols_market_share(data, MarketShareKind::Lanchester), DataError);
    }
}

TEST_CASE("estimator dominance on noisy advertising data") {
    GameDefinition game(2, {{{0.0, 50.0}}, {{0.0, 50.0}}});
    for (std::uint64_t seed : {101u, 102u, 103u, 104u, 105u}) {
        TrajectoryData data = gamefit::testing::random_advertising_data(seed, 14);
        ContextualDataset dataset = dataset_from_state_trajectory(game, data);
        ParameterSpace space = ParameterSpace::box(Eigen::Vector2d(0, 0),
                                                   Eigen::Vector2d(10, 10));
        for (const auto mode : {ComparisonMode::FixedOpponent, ComparisonMode::JointProfile}) {
            for (int firm = 0; firm < 2; ++firm) {
                LinearUtilityModel model =
                    MarketShareModel::belief_model(MarketShareKind::Lanchester, firm);
                ConstraintSystem system = build_constraints(model, dataset, mode);
                EstimationResult linf = estimate_linf(system, space);
                L2Estimate l2 = estimate_l2(system, space);
                OlsMarketShareFit ols =
                    estimate_ols_market_share(data, MarketShareKind::Lanchester);
                double linf_of_l2 = irrationality_loss(system, l2.theta);
                double linf_of_ols =
                    irrationality_loss(system, Eigen::Vector2d(ols.k1, ols.k2));
                CHECK(linf.epsilon_hat <= linf_of_l2 + 1e-9);
                CHECK(linf.epsilon_hat <= linf_of_ols + 1e-9);
            }
        }
    }
}
