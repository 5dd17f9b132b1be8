#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gamefit/features.hpp"
#include "gamefit/forward.hpp"
#include "gamefit/game.hpp"
#include "support.hpp"

using namespace gamefit;
using gamefit::testing::Rng;
using gamefit::testing::quadratic_revenue;

namespace {

ActionProfile prices(double p1, double p2) {
    Action a1(1), a2(1);
    a1(0) = p1;
    a2(0) = p2;
    return ActionProfile{{a1, a2}};
}

Context scalar_context(double xi) { return Context{Eigen::VectorXd::Constant(1, xi)}; }

}  // namespace

TEST_CASE("game definition invariants") {
    CHECK_THROWS_AS(GameDefinition(0, {}), InputError);
    CHECK_THROWS_AS(GameDefinition(1, {{{2.0, 1.0}}}), InputError);  // lower > upper
    GameDefinition game(2, {{{0.0, 10.0}}, {{0.0, 10.0}}});
    CHECK(game.num_players() == 2);
    CHECK(game.action_dim(0) == 1);
    CHECK_THROWS_AS(game.make_profile({Eigen::VectorXd::Constant(1, -1.0),
                                       Eigen::VectorXd::Constant(1, 5.0)}),
                    InputError);
    ActionProfile ok = game.make_profile(
        {Eigen::VectorXd::Constant(1, 3.0), Eigen::VectorXd::Constant(1, 5.0)});
    CHECK(ok.of(0)(0) == 3.0);
}

TEST_CASE("zero parameters give zero utility") {
    LinearUtilityModel model = BertrandDuopoly::revenue_model(0);
    CHECK(model.utility(Eigen::VectorXd::Zero(4), prices(2.3, 4.5), scalar_context(7)) == 0.0);
}

TEST_CASE("revenue utility evaluates the quadratic demand form") {
    LinearUtilityModel model = BertrandDuopoly::revenue_model(0);
    Eigen::VectorXd theta(4);
    theta << 1, -1.2, 0.5, 1;
    double u = model.utility(theta, prices(1.0, 1.0), scalar_context(5.0));
    CHECK(u == doctest::Approx(5.3).epsilon(1e-12));  // 1*(1 - 1.2 + 0.5 + 5)
    CHECK(u == doctest::Approx(quadratic_revenue(theta, 0, 1.0, 1.0, 5.0)).epsilon(1e-12));
}

TEST_CASE("utility is linear in the parameters") {
    Rng rng(31);
    LinearUtilityModel model = BertrandDuopoly::revenue_model(1);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd ta = rng.vector(4, -2, 2);
        Eigen::VectorXd tb = rng.vector(4, -2, 2);
        double alpha = rng.uniform(-3, 3);
        double beta = rng.uniform(-3, 3);
        ActionProfile a = prices(rng.uniform(0, 5), rng.uniform(0, 5));
        Context xi = scalar_context(rng.uniform(0, 8));
        double lhs = model.utility(alpha * ta + beta * tb, a, xi);
        double rhs = alpha * model.utility(ta, a, xi) + beta * model.utility(tb, a, xi);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("scaling theta scales the utility") {
    LinearUtilityModel model = BertrandDuopoly::revenue_model(0);
    Eigen::VectorXd theta(4);
    theta << 1, -1.2, 0.5, 1;
    ActionProfile a = prices(2, 3);
    Context xi = scalar_context(4);
    CHECK(model.utility(2 * theta, a, xi) ==
          doctest::Approx(2 * model.utility(theta, a, xi)).epsilon(1e-12));
}

TEST_CASE("utility difference against the revenue oracle") {
    LinearUtilityModel model = BertrandDuopoly::revenue_model(0);
    Eigen::VectorXd theta(4);
    theta << 1, -1.2, 0.5, 1;
    Context xi = scalar_context(5.0);
    ActionProfile baseline = prices(3.0, 3.4839);
    Action candidate(1);
    candidate(0) = 3.22581;

    double e = model.utility_difference(theta, candidate, baseline, xi);
    double oracle = quadratic_revenue(theta, 0, 3.0, 3.4839, 5.0) -
                    quadratic_revenue(theta, 0, 3.22581, 3.4839, 5.0);
    CHECK(e == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(e == doctest::Approx(-0.061).epsilon(0.02));  // candidate strictly better

    SUBCASE("same action gives zero error") {
        Action same = baseline.of(0);
        CHECK(model.utility_difference(theta, same, baseline, xi) == 0.0);
    }
    SUBCASE("swapping candidate and baseline own-action negates the value") {
        ActionProfile swapped = baseline.with_action(0, candidate);
        Action old_own = baseline.of(0);
        double e2 = model.utility_difference(theta, old_own, swapped, xi);
        CHECK(e2 == doctest::Approx(-e).epsilon(1e-10));
    }
}

TEST_CASE("error row is the feature difference") {
    LinearUtilityModel model = BertrandDuopoly::revenue_model(0);
    Context xi = scalar_context(5.0);
    ActionProfile baseline = prices(3.0, 3.4839);
    Action candidate(1);
    candidate(0) = 3.22581;

    Eigen::VectorXd row = model.error_row(candidate, baseline, xi);
    // hand-expanded: (pb - p, pb^2 - p^2, (pb - p) p2, (pb - p) xi)
    const double pb = 3.0, p = 3.22581, p2 = 3.4839, xiv = 5.0;
    CHECK(row(0) == doctest::Approx(pb - p).epsilon(1e-12));
    CHECK(row(1) == doctest::Approx(pb * pb - p * p).epsilon(1e-12));
    CHECK(row(2) == doctest::Approx(pb * p2 - p * p2).epsilon(1e-12));
    CHECK(row(3) == doctest::Approx(pb * xiv - p * xiv).epsilon(1e-12));

    SUBCASE("zero row when candidate equals baseline own action") {
        Eigen::VectorXd zero = model.error_row(baseline.of(0), baseline, xi);
        CHECK(zero.lpNorm<Eigen::Infinity>() == 0.0);
    }
    SUBCASE("defining identity against utility_difference for random theta") {
        Rng rng(77);
        for (int i = 0; i < 100; ++i) {
            Eigen::VectorXd theta = rng.vector(4, -5, 5);
            CHECK(theta.dot(row) == model.utility_difference(theta, candidate, baseline, xi));
        }
    }
}

TEST_CASE("feature primitives") {
    Context xi = scalar_context(0.36);
    ActionProfile a = prices(4.0, 9.0);

    CHECK(FeatureFactor::sqrt_action(1).evaluate(a, xi) == doctest::Approx(3.0));
    CHECK(FeatureFactor::context(0, -1.0, 1.0).evaluate(a, xi) == doctest::Approx(0.64));
    CHECK(FeatureFactor::sqrt_context(0, -1.0, 1.0).evaluate(a, xi) == doctest::Approx(0.8));
    CHECK(FeatureFactor::indicator(0, 0, 4.0).evaluate(a, xi) == 1.0);
    CHECK(FeatureFactor::indicator(0, 0, 4.1).evaluate(a, xi) == 0.0);

    FeatureFactor bad = FeatureFactor::sqrt_context(0, 1.0, -2.0);  // sqrt(-1.64)
    CHECK_THROWS_AS(bad.evaluate(a, xi), InputError);

    // empty factor list = constant term
    FeatureTerm constant{2.5, {}};
    CHECK(constant.evaluate(a, xi) == 2.5);
}

TEST_CASE("parameter space construction and membership") {
    ParameterSpace box = ParameterSpace::box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
    CHECK(box.contains(Eigen::Vector2d(0.5, -0.5)));
    CHECK_FALSE(box.contains(Eigen::Vector2d(1.5, 0)));

    // {theta <= 0} and {theta >= 1} is empty and must be rejected
    Eigen::MatrixXd rows(2, 1);
    rows << 1, -1;
    Eigen::VectorXd bounds(2);
    bounds << 0, -1;
    CHECK_THROWS_AS(ParameterSpace(1, rows, bounds), InputError);

    ParameterSpace normalized = box.with_equality(Eigen::Vector2d(1, 0), 0.25);
    CHECK(normalized.contains(Eigen::Vector2d(0.25, 0.7)));
    CHECK_FALSE(normalized.contains(Eigen::Vector2d(0.3, 0.7)));
    CHECK_THROWS_AS(box.with_equality(Eigen::Vector2d(1, 0), 2.0), InputError);  // outside box
}

TEST_CASE("dimension mismatches are rejected") {
    LinearUtilityModel model = BertrandDuopoly::revenue_model(0);
    CHECK_THROWS_AS(model.utility(Eigen::VectorXd::Zero(3), prices(1, 1), scalar_context(0)),
                    InputError);
    CHECK_THROWS_AS(
        model.utility_difference(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(1), prices(1, 1),
                                 scalar_context(0)),
        InputError);
}
