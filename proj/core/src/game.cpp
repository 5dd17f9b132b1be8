#include "gamefit/game.hpp"

#include <cmath>

namespace gamefit {

ActionProfile ActionProfile::with_action(int player, const Action& a) const {
    ActionProfile out = *this;
    out.actions.at(static_cast<std::size_t>(player)) = a;
    return out;
}

GameDefinition::GameDefinition(int num_players,
                               std::vector<std::vector<ActionInterval>> action_bounds,
                               std::vector<std::string> player_labels)
    : num_players_(num_players), bounds_(std::move(action_bounds)), labels_(std::move(player_labels)) {
    if (num_players_ < 1) throw InputError("GameDefinition: num_players must be >= 1");
    if (static_cast<int>(bounds_.size()) != num_players_)
        throw InputError("GameDefinition: one bound list per player required");
    for (const auto& player_bounds : bounds_) {
        if (player_bounds.empty())
            throw InputError("GameDefinition: every player needs at least one action dimension");
        for (const auto& iv : player_bounds) {
            if (!(iv.lower <= iv.upper) || !std::isfinite(iv.lower) || !std::isfinite(iv.upper))
                throw InputError("GameDefinition: action bound requires finite lower <= upper");
        }
    }
    if (!labels_.empty() && static_cast<int>(labels_.size()) != num_players_)
        throw InputError("GameDefinition: label count mismatch");
}

int GameDefinition::action_dim(int player) const {
    return static_cast<int>(bounds(player).size());
}

const std::vector<ActionInterval>& GameDefinition::bounds(int player) const {
    if (player < 0 || player >= num_players_) throw InputError("GameDefinition: bad player index");
    return bounds_[static_cast<std::size_t>(player)];
}

bool GameDefinition::in_bounds(int player, const Action& a) const {
    const auto& b = bounds(player);
    if (a.size() != static_cast<Eigen::Index>(b.size())) return false;
    for (Eigen::Index d = 0; d < a.size(); ++d) {
        if (!std::isfinite(a(d))) return false;
        const auto& iv = b[static_cast<std::size_t>(d)];
        if (a(d) < iv.lower || a(d) > iv.upper) return false;
    }
    return true;
}

void GameDefinition::validate_action(int player, const Action& a) const {
    const auto& b = bounds(player);
    if (a.size() != static_cast<Eigen::Index>(b.size()))
        throw InputError("action dimension mismatch for player " + std::to_string(player));
    if (!in_bounds(player, a))
        throw InputError("action out of bounds for player " + std::to_string(player));
}

void GameDefinition::validate(const ActionProfile& profile) const {
    if (profile.num_players() != num_players_)
        throw InputError("profile has wrong number of players");
    for (int i = 0; i < num_players_; ++i) validate_action(i, profile.of(i));
}

ActionProfile GameDefinition::make_profile(std::vector<Action> actions) const {
    ActionProfile p{std::move(actions)};
    validate(p);
    return p;
}

}  // namespace gamefit
