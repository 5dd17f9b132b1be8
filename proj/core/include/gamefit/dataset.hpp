#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "gamefit/game.hpp"

namespace gamefit {

enum class Provenance { Dynamic, Static };

/// One revision observation (a_i^j, abar^j): the action the player chose and
/// the baseline profile it is compared against. Dynamic points built from a
/// trajectory also carry the full successor profile so that the joint-profile
/// comparison mode can move the opponents along with the player.
struct DataPoint {
    Action chosen_action;
    ActionProfile baseline_profile;
    std::optional<ActionProfile> candidate_profile;
};

/// Per-player data-set D_i.
struct ObservationSet {
    int player = 0;
    std::vector<DataPoint> points;
    Provenance provenance = Provenance::Static;

    int size() const { return static_cast<int>(points.size()); }
};

/// One observation batch per context: (xi^k, {D_i^k}).
struct ContextBatch {
    Context context;
    std::vector<ObservationSet> observations;  // one entry per player present
};

/// The full multi-context data-set of Problem 2.
struct ContextualDataset {
    std::vector<ContextBatch> batches;

    int num_batches() const { return static_cast<int>(batches.size()); }
    /// Points of `player` summed over batches.
    int num_points(int player) const;
    const ObservationSet* find(int batch, int player) const;
};

/// Regular 1-D grid over [lower, upper], endpoints included.
struct GridSpec {
    double lower = 0.0;
    double upper = 1.0;
    int num_points = 2;

    double step() const { return (upper - lower) / (num_points - 1); }
};

std::vector<double> regular_grid(const GridSpec& spec);

/// Dynamic observations: consecutive pairs (a_i(j+1), a(j)) of a trajectory.
/// The full successor profile is stored as the candidate profile.
ObservationSet from_trajectory(const GameDefinition& game, int player,
                               const std::vector<ActionProfile>& trajectory);

/// Static observations: the equilibrium action against every alternative.
ObservationSet from_equilibrium(const GameDefinition& game, int player,
                                const ActionProfile& equilibrium,
                                const std::vector<Action>& alternatives);

// ---- file ingestion (schemas documented in the repository README) ----

struct TrajectoryData {
    std::vector<ActionProfile> profiles;          // two players, scalar actions
    std::vector<long> times;                      // strictly increasing
    std::optional<std::vector<double>> state;     // observed market share M(t)
};

/// CSV with header `t,a1,a2[,state]`. Errors carry the offending row.
TrajectoryData load_trajectory_csv(const std::filesystem::path& path);
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryData& data);

/// JSON array of arrays of numbers; rejects an empty list.
std::vector<Context> load_contexts_json(const std::filesystem::path& path);
void write_contexts_json(const std::filesystem::path& path, const std::vector<Context>& contexts);

/// Dataset bundle (full ContextualDataset) persistence.
ContextualDataset load_dataset_bundle(const std::filesystem::path& path);
void write_dataset_bundle(const std::filesystem::path& path, const ContextualDataset& dataset);

/// Better-response data-set of a two-player trajectory with observed state:
/// one batch per transition, the state M(t) as the scalar context.
ContextualDataset dataset_from_state_trajectory(const GameDefinition& game,
                                                const TrajectoryData& data);

/// Dynamic data-sets of every player under one fixed context.
ContextualDataset dataset_from_trajectory(const GameDefinition& game, const TrajectoryData& data,
                                          const Context& fixed_context);

}  // namespace gamefit
