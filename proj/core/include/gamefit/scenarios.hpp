#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include "gamefit/estimation.hpp"
#include "gamefit/forward.hpp"

namespace gamefit {

/// Deterministic standard-normal draws: mt19937_64 + Box-Muller, so a
/// serialized seed reproduces the context sample on any platform.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}
    double operator()(double mean, double stddev);

private:
    std::mt19937_64 rng_;
};

// ---- Bertrand demand estimation pipeline -------------------------------

struct BertrandConfig {
    Eigen::Vector4d theta1_true{1.0, -1.2, 0.5, 1.0};
    Eigen::Vector4d theta2_true{1.0, 0.3, -1.0, 1.0};
    int num_contexts = 50;
    double context_mean = 5.0;
    double context_std = 1.5;
    int grid_points = 129;  // 2^7 + 1
    std::optional<double> p_max;  // default: 2x the largest equilibrium price, rounded up
    std::uint64_t rng_seed = 20240501;
    std::string normalization = "cross-price";  // or "intercept"
    double theta_box = 20.0;  // |free normalized coefficient| bound
    int sweep_points = 200;
};

struct MarginalRevenueBand {
    std::vector<double> prices;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> true_mr;
    double opponent_price = 0;  // fixed slice the band is evaluated on
    double context_value = 0;
};

struct BertrandReport {
    BertrandConfig config;
    double p_max_used = 0;
    std::vector<double> contexts;
    std::vector<std::array<double, 2>> ne_prices;
    std::array<Eigen::Vector4d, 2> normalized_true;
    std::array<EstimationResult, 2> estimates;
    std::array<MarginalRevenueBand, 2> bands;
};

/// Samples contexts, computes equilibrium prices, builds the static
/// alternative-grid data-sets, estimates the normalized demand parameters
/// per firm and evaluates the marginal-revenue envelope over the
/// polyhedron's vertices.
BertrandReport run_bertrand(const BertrandConfig& config);

// ---- advertising competition pipeline ----------------------------------

struct AdvertisingConfig {
    std::filesystem::path data_path;
    MarketShareKind model_firm1 = MarketShareKind::Lanchester;
    MarketShareKind model_firm2 = MarketShareKind::Sorger;
    ComparisonMode comparison_mode = ComparisonMode::JointProfile;
    double k_upper = 10.0;  // box bound on effectiveness beliefs (k >= 0 below)
    std::optional<double> market_share_initial;  // required when the CSV has no state column
    double polyhedron_slack = 0.05;  // share band uses the (1+slack)-relaxed polyhedron
    bool compare_to_reference = false;  // print the stored reference table side by side
};

struct EstimatorOutcome {
    std::string name;  // "linf" | "l2" | "ols"
    Eigen::VectorXd theta;
    double native_loss = 0;       // the loss the estimator itself minimizes
    double linf_certified = 0;    // irrationality of this estimate on the data
    Certificate certificate;
    std::vector<double> per_step_irrationality;
    std::vector<double> believed_shares;
    bool converged = true;  // l2 only
    bool clipped = false;   // ols only
};

struct FirmComparison {
    int firm = 0;
    MarketShareKind kind = MarketShareKind::Lanchester;
    EstimationResult linf;
    std::array<EstimatorOutcome, 3> estimators;  // linf, l2, ols
    std::vector<double> band_lower;  // believed-share envelope over the
    std::vector<double> band_upper;  // relaxed polyhedron's vertices
};

struct ReferenceRow {
    double epsilon = 0;
    double k1 = 0;
    double k2 = 0;
};

struct ComparisonReport {
    std::vector<long> times;
    std::vector<double> observed_shares;
    std::array<FirmComparison, 2> firms;
    ComparisonMode mode = ComparisonMode::JointProfile;
    // Published reference values (rationalization error and beliefs per
    // estimator), attached only when the config asks for the side-by-side.
    std::optional<std::array<std::array<ReferenceRow, 3>, 2>> reference;
};

/// Builds the better-response data-set from the trajectory file, runs the
/// Linf, L2 and OLS estimators, certifies each one, and simulates the
/// believed share evolution per estimate (plus the polyhedron band).
ComparisonReport run_advertising(const AdvertisingConfig& config);

/// Reference comparison table (rationalization errors and estimated
/// beliefs) bundled as metadata, never asserted against.
std::array<std::array<ReferenceRow, 3>, 2> reference_comparison_table();

}  // namespace gamefit
