// Command-line front end: estimation, certification, simulation and the two
// end-to-end experiment pipelines over files.
//
// Exit codes: 0 success, 2 data/config error, 3 internal failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "gamefit/estimation.hpp"
#include "gamefit/forward.hpp"
#include "gamefit/scenarios.hpp"
#include "gamefit/serialization.hpp"

namespace fs = std::filesystem;
using namespace gamefit;

namespace {

struct GlobalOptions {
    fs::path out_dir = ".";
    double tol = 1e-9;
    std::uint64_t seed = 0;
};

fs::path resolve_out(const GlobalOptions& global, const std::string& out,
                     const std::string& fallback) {
    fs::path p = out.empty() ? fs::path(fallback) : fs::path(out);
    if (p.is_relative()) p = global.out_dir / p;
    fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
    return p;
}

ComparisonMode parse_mode(const std::string& name) {
    if (name == "fixed-opponent") return ComparisonMode::FixedOpponent;
    if (name == "joint-profile") return ComparisonMode::JointProfile;
    throw DataError("unknown comparison mode: " + name);
}

// Bundles load as-is; a trajectory CSV becomes dynamic data-sets, with the
// state column (when present) as the per-step context, otherwise under the
// game's declared simulation context.
ContextualDataset load_dataset(const GameSpec& spec, const fs::path& path) {
    if (path.extension() == ".csv") {
        TrajectoryData data = load_trajectory_csv(path);
        if (data.state) return dataset_from_state_trajectory(spec.game, data);
        Context fixed{spec.better_response
                          ? spec.better_response->context.values
                          : Eigen::VectorXd::Zero(spec.context_dim)};
        return dataset_from_trajectory(spec.game, data, fixed);
    }
    return load_dataset_bundle(path);
}

int cmd_estimate(const GlobalOptions& global, const std::string& game_path,
                 const std::string& dataset_path, const std::string& loss,
                 const std::string& mode_name, int player, const std::string& out) {
    GameSpec spec = load_game_spec(game_path);
    ContextualDataset data = load_dataset(spec, dataset_path);
    ComparisonMode mode = parse_mode(mode_name);
    SimplexOptions lp_options;
    lp_options.feasibility_tol = global.tol;
    lp_options.reduced_cost_tol = global.tol;

    std::vector<PlayerEstimateRecord> records;
    for (const auto& ps : spec.players) {
        if (player >= 0 && ps.model.player() != player) continue;
        ConstraintSystem system = build_constraints(ps.model, data, mode);
        PlayerEstimateRecord record;
        record.player = ps.model.player();
        record.loss = loss;
        record.mode = mode;
        if (loss == "linf") {
            EstimationResult result = estimate_linf(system, ps.space, lp_options);
            record.theta = result.theta_hat;
            record.loss_value = result.epsilon_hat;
            record.certificate = certify(system, result.theta_hat);
            record.linf = std::move(result);
        } else if (loss == "l2") {
            L2Estimate result = estimate_l2(system, ps.space);
            record.theta = result.theta;
            record.loss_value = result.loss;
            record.converged = result.converged;
            record.certificate = certify(system, result.theta);
        } else {
            throw DataError("unknown loss: " + loss);
        }
        records.push_back(std::move(record));
    }
    if (records.empty()) throw DataError("no player matched the request");
    fs::path out_path = resolve_out(global, out, "estimate.json");
    write_estimate_json(out_path, records);
    std::printf("wrote %s\n", out_path.string().c_str());
    return 0;
}

int cmd_simulate(const GlobalOptions& global, const std::string& game_path,
                 const std::string& dynamics, int steps, const std::string& input,
                 const std::string& out) {
    if (steps < 1) throw DataError("simulate: --steps must be >= 1");
    GameSpec spec = load_game_spec(game_path);
    fs::path out_path = resolve_out(global, out, "trajectory.csv");

    if (dynamics == "better-response") {
        if (!spec.better_response)
            throw DataError("game file has no better-response simulation block");
        std::vector<LinearUtilityModel> models;
        std::vector<Eigen::VectorXd> thetas;
        for (const auto& ps : spec.players) {
            if (!ps.theta) throw DataError("simulation requires theta for every player");
            models.push_back(ps.model);
            thetas.push_back(*ps.theta);
        }
        if (static_cast<int>(models.size()) != spec.game.num_players())
            throw DataError("simulation requires a model for every player");
        auto trajectory =
            better_response_dynamics(spec.game, models, thetas, spec.better_response->initial,
                                     steps, spec.better_response->context,
                                     spec.better_response->grid);
        TrajectoryData data;
        for (std::size_t t = 0; t < trajectory.size(); ++t) {
            data.times.push_back(static_cast<long>(t));
            data.profiles.push_back(trajectory[t]);
        }
        write_trajectory_csv(out_path, data);
    } else if (dynamics == "market-share") {
        if (!spec.market_share) throw DataError("game file has no market-share simulation block");
        const auto& sim = *spec.market_share;
        MarketShareModel model(sim.kind, sim.k1, sim.k2);
        TrajectoryData data;
        if (!input.empty()) {
            data = load_trajectory_csv(input);
        } else {
            // Seeded uniform advertising walk; 53-bit draws from mt19937_64.
            std::mt19937_64 rng(global.seed);
            auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1p-53; };
            for (int t = 0; t <= steps; ++t) {
                Action a1(1), a2(1);
                a1(0) = sim.advertising_low + (sim.advertising_high - sim.advertising_low) * uniform();
                a2(0) = sim.advertising_low + (sim.advertising_high - sim.advertising_low) * uniform();
                data.times.push_back(t);
                data.profiles.push_back(ActionProfile{{a1, a2}});
            }
        }
        std::vector<std::pair<double, double>> advertising;
        for (std::size_t t = 1; t < data.profiles.size(); ++t)
            advertising.emplace_back(data.profiles[t].of(0)(0), data.profiles[t].of(1)(0));
        ShareTrajectory shares = simulate_market_share(model, sim.initial_share, advertising);
        data.state = shares.shares;
        write_trajectory_csv(out_path, data);
    } else {
        throw DataError("unknown dynamics: " + dynamics + " (better-response, market-share)");
    }
    std::printf("wrote %s\n", out_path.string().c_str());
    return 0;
}

int cmd_certify(const GlobalOptions& global, const std::string& game_path,
                const std::string& dataset_path, const std::string& theta_path,
                const std::string& mode_name, const std::string& out) {
    GameSpec spec = load_game_spec(game_path);
    ContextualDataset data = load_dataset(spec, dataset_path);
    ComparisonMode mode = parse_mode(mode_name);
    auto thetas = load_thetas_json(theta_path);

    std::vector<std::pair<int, Certificate>> certificates;
    for (const auto& [player, theta] : thetas) {
        const PlayerSpec* ps = nullptr;
        for (const auto& candidate : spec.players) {
            if (candidate.model.player() == player) {
                ps = &candidate;
                break;
            }
        }
        if (ps == nullptr)
            throw DataError("game file declares no player " + std::to_string(player));
        ConstraintSystem system = build_constraints(ps->model, data, mode);
        Certificate cert = certify(system, theta);
        certificates.emplace_back(player, cert);
        std::printf("player %d: epsilon_bar=%.12g worst=(context %d, point %d)\n", player,
                    cert.epsilon_bar, cert.worst_context, cert.worst_point);
    }
    fs::path out_path = resolve_out(global, out, "certificate.json");
    write_certificates_json(out_path, certificates);
    std::printf("wrote %s\n", out_path.string().c_str());
    return 0;
}

int cmd_experiment(const GlobalOptions& global, const std::string& scenario,
                   const std::string& config_path, std::uint64_t seed, bool seed_given) {
    fs::create_directories(global.out_dir);
    if (scenario == "bertrand") {
        BertrandConfig config = load_bertrand_config(config_path);
        if (seed_given) config.rng_seed = seed;
        BertrandReport report = run_bertrand(config);
        write_bertrand_report(global.out_dir, report);
        std::printf("bertrand: eps1=%.3g eps2=%.3g -> %s\n", report.estimates[0].epsilon_hat,
                    report.estimates[1].epsilon_hat, (global.out_dir / "report.json").string().c_str());
    } else if (scenario == "advertising") {
        AdvertisingConfig config = load_advertising_config(config_path);
        ComparisonReport report = run_advertising(config);
        write_advertising_report(global.out_dir, report);
        std::printf("advertising: eps1=%.3g eps2=%.3g -> %s\n",
                    report.firms[0].linf.epsilon_hat, report.firms[1].linf.epsilon_hat,
                    (global.out_dir / "report.json").string().c_str());
    } else {
        throw DataError("unknown scenario: " + scenario + " (valid: bertrand, advertising)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"utility estimation in parametric games from observed behaviour"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--out-dir", global.out_dir, "directory for all outputs")->capture_default_str();
    app.add_option("--tol", global.tol, "LP feasibility/optimality tolerance")
        ->capture_default_str();
    auto* seed_opt =
        app.add_option("--seed", global.seed, "seed for simulation / context sampling");

    std::string game_path, dataset_path, theta_path, out, input;
    std::string loss = "linf", mode = "fixed-opponent", dynamics, scenario, config_path;
    int steps = 1, player = -1;

    auto* estimate = app.add_subcommand("estimate", "estimate utility parameters from a dataset");
    estimate->add_option("--game", game_path, "game spec JSON")->required()->check(CLI::ExistingFile);
    estimate->add_option("--dataset", dataset_path, "dataset bundle JSON")
        ->required()
        ->check(CLI::ExistingFile);
    estimate->add_option("--loss", loss, "linf | l2")->capture_default_str();
    estimate->add_option("--mode", mode, "fixed-opponent | joint-profile")->capture_default_str();
    estimate->add_option("--player", player, "estimate a single player (default: all)");
    estimate->add_option("--out", out, "output JSON (default estimate.json)");

    auto* simulate = app.add_subcommand("simulate", "generate a trajectory CSV");
    simulate->add_option("--game", game_path, "game spec JSON")->required()->check(CLI::ExistingFile);
    simulate->add_option("--dynamics", dynamics, "better-response | market-share")->required();
    simulate->add_option("--steps", steps, "number of update steps")->required();
    simulate->add_option("--input", input, "advertising CSV driving a market-share simulation")
        ->check(CLI::ExistingFile);
    simulate->add_option("--out", out, "output CSV (default trajectory.csv)");

    auto* certify_cmd = app.add_subcommand("certify", "certify a parameter vector on a dataset");
    certify_cmd->add_option("--game", game_path, "game spec JSON")
        ->required()
        ->check(CLI::ExistingFile);
    certify_cmd->add_option("--dataset", dataset_path, "dataset bundle JSON")
        ->required()
        ->check(CLI::ExistingFile);
    certify_cmd->add_option("--theta", theta_path, "theta JSON (raw array or estimate output)")
        ->required()
        ->check(CLI::ExistingFile);
    certify_cmd->add_option("--mode", mode, "fixed-opponent | joint-profile")->capture_default_str();
    certify_cmd->add_option("--out", out, "output JSON (default certificate.json)");

    auto* experiment = app.add_subcommand("experiment", "run an end-to-end scenario");
    experiment->add_option("--scenario", scenario, "bertrand | advertising")->required();
    experiment->add_option("--config", config_path, "scenario config JSON")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (estimate->parsed())
            return cmd_estimate(global, game_path, dataset_path, loss, mode, player, out);
        if (simulate->parsed())
            return cmd_simulate(global, game_path, dynamics, steps, input, out);
        if (certify_cmd->parsed())
            return cmd_certify(global, game_path, dataset_path, theta_path, mode, out);
        if (experiment->parsed())
            return cmd_experiment(global, scenario, config_path, global.seed,
                                  seed_opt->count() > 0);
    } catch (const DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const InternalError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 2;
}
