#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamefit/estimation.hpp"
#include "gamefit/scenarios.hpp"

namespace gamefit {

// JSON schemas are documented in the repository README. All loaders throw
// DataError with a parse location on malformed input.

struct PlayerSpec {
    LinearUtilityModel model;
    ParameterSpace space;
    std::optional<Eigen::VectorXd> theta;  // generating parameters, for simulation
};

struct BetterResponseSimSpec {
    ActionProfile initial;
    Context context;
    GridSpec grid;
};

struct MarketShareSimSpec {
    MarketShareKind kind = MarketShareKind::Lanchester;
    double k1 = 0;
    double k2 = 0;
    double initial_share = 0.5;
    double advertising_low = 0.5;   // seeded advertising walk when no input
    double advertising_high = 4.0;  // trajectory is supplied
};

struct GameSpec {
    GameDefinition game;
    int context_dim = 1;
    std::vector<PlayerSpec> players;
    std::optional<BetterResponseSimSpec> better_response;
    std::optional<MarketShareSimSpec> market_share;
};

GameSpec load_game_spec(const std::filesystem::path& path);
void save_game_spec(const std::filesystem::path& path, const GameSpec& spec);

/// One player's estimate as written by the estimate subcommand.
struct PlayerEstimateRecord {
    int player = 0;
    std::string loss;  // "linf" | "l2"
    ComparisonMode mode = ComparisonMode::FixedOpponent;
    Eigen::VectorXd theta;
    double loss_value = 0;
    std::optional<EstimationResult> linf;  // polyhedron etc. when loss == "linf"
    std::optional<Certificate> certificate;
    bool converged = true;
};

void write_estimate_json(const std::filesystem::path& path,
                         const std::vector<PlayerEstimateRecord>& records);

/// Accepts a raw theta array `[...]`, a per-player array `[[...], ...]`, or
/// an estimate result file (theta_hat per player).
std::vector<std::pair<int, Eigen::VectorXd>> load_thetas_json(const std::filesystem::path& path);

void write_certificates_json(const std::filesystem::path& path,
                             const std::vector<std::pair<int, Certificate>>& certificates);

BertrandConfig load_bertrand_config(const std::filesystem::path& path);
AdvertisingConfig load_advertising_config(const std::filesystem::path& path);

/// report.json plus the documented plot-ready CSV files, all inside out_dir.
void write_bertrand_report(const std::filesystem::path& out_dir, const BertrandReport& report);
void write_advertising_report(const std::filesystem::path& out_dir, const ComparisonReport& report);

}  // namespace gamefit
