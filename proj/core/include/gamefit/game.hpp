#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "gamefit/error.hpp"

namespace gamefit {

// Closed interval [lower, upper] for one action dimension.
struct ActionInterval {
    double lower = 0.0;
    double upper = 0.0;
};

// One player's action: a real vector (scalar actions are 1-dimensional).
using Action = Eigen::VectorXd;

/// A joint action profile a = (a_1, ..., a_N). Construction does not
/// validate bounds; use GameDefinition::validate / make_profile for that.
struct ActionProfile {
    std::vector<Action> actions;

    int num_players() const { return static_cast<int>(actions.size()); }
    const Action& of(int player) const { return actions.at(static_cast<std::size_t>(player)); }

    /// Copy of this profile with player i's action replaced.
    ActionProfile with_action(int player, const Action& a) const;
};

/// Observable exogenous context xi of one game instance.
struct Context {
    Eigen::VectorXd values;

    int dim() const { return static_cast<int>(values.size()); }
};

/// Players and their admissible action boxes. Utilities live separately in
/// LinearUtilityModel so one game can carry several parameterizations.
class GameDefinition {
public:
    GameDefinition(int num_players, std::vector<std::vector<ActionInterval>> action_bounds,
                   std::vector<std::string> player_labels = {});

    int num_players() const { return num_players_; }
    int action_dim(int player) const;
    const std::vector<ActionInterval>& bounds(int player) const;
    const std::vector<std::string>& player_labels() const { return labels_; }

    /// True iff the action lies within player's box (componentwise, closed).
    bool in_bounds(int player, const Action& a) const;

    /// Throws InputError on dimension mismatch or bound violation.
    void validate(const ActionProfile& profile) const;
    void validate_action(int player, const Action& a) const;

    /// Validating profile factory.
    ActionProfile make_profile(std::vector<Action> actions) const;

private:
    int num_players_;
    std::vector<std::vector<ActionInterval>> bounds_;
    std::vector<std::string> labels_;
};

}  // namespace gamefit
