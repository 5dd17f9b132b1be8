#include "gamefit/dataset.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gamefit {

int ContextualDataset::num_points(int player) const {
    int n = 0;
    for (const auto& batch : batches) {
        for (const auto& obs : batch.observations) {
            if (obs.player == player) n += obs.size();
        }
    }
    return n;
}

const ObservationSet* ContextualDataset::find(int batch, int player) const {
    const auto& b = batches.at(static_cast<std::size_t>(batch));
    for (const auto& obs : b.observations) {
        if (obs.player == player) return &obs;
    }
    return nullptr;
}

std::vector<double> regular_grid(const GridSpec& spec) {
    if (!(spec.lower < spec.upper)) throw InputError("GridSpec: lower must be < upper");
    if (spec.num_points < 2) throw InputError("GridSpec: num_points must be >= 2");
    std::vector<double> pts(static_cast<std::size_t>(spec.num_points));
    const double step = spec.step();
    for (int i = 0; i < spec.num_points; ++i) pts[static_cast<std::size_t>(i)] = spec.lower + step * i;
    pts.back() = spec.upper;  // exact endpoint
    return pts;
}

ObservationSet from_trajectory(const GameDefinition& game, int player,
                               const std::vector<ActionProfile>& trajectory) {
    if (trajectory.size() < 2)
        throw DataError("from_trajectory: need at least two profiles");
    for (const auto& p : trajectory) game.validate(p);
    ObservationSet set;
    set.player = player;
    set.provenance = Provenance::Dynamic;
    set.points.reserve(trajectory.size() - 1);
    for (std::size_t j = 0; j + 1 < trajectory.size(); ++j) {
        DataPoint pt;
        pt.chosen_action = trajectory[j + 1].of(player);
        pt.baseline_profile = trajectory[j];
        pt.candidate_profile = trajectory[j + 1];
        set.points.push_back(std::move(pt));
    }
    return set;
}

ObservationSet from_equilibrium(const GameDefinition& game, int player,
                                const ActionProfile& equilibrium,
                                const std::vector<Action>& alternatives) {
    if (alternatives.empty()) throw DataError("from_equilibrium: no alternatives given");
    game.validate(equilibrium);
    ObservationSet set;
    set.player = player;
    set.provenance = Provenance::Static;
    set.points.reserve(alternatives.size());
    for (const auto& alt : alternatives) {
        game.validate_action(player, alt);
        DataPoint pt;
        pt.chosen_action = equilibrium.of(player);
        pt.baseline_profile = equilibrium.with_action(player, alt);
        set.points.push_back(std::move(pt));
    }
    return set;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        std::size_t a = cell.find_first_not_of(" \t\r");
        std::size_t b = cell.find_last_not_of(" \t\r");
        cells.push_back(a == std::string::npos ? std::string() : cell.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, long row, const char* column) {
    try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument("trailing garbage");
        if (!std::isfinite(v))
            throw DataError(std::string("non-finite value in column ") + column, row);
        return v;
    } catch (const DataError&) {
        throw;
    } catch (const std::exception&) {
        throw DataError(std::string("non-numeric cell in column ") + column, row);
    }
}

}  // namespace

TrajectoryData load_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open trajectory file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty trajectory file: " + path.string());
    auto header = split_csv_line(line);
    bool has_state = false;
    if (header.size() == 4 && header[3] == "state") {
        has_state = true;
    } else if (header.size() != 3) {
        throw DataError("expected header t,a1,a2[,state]", 1);
    }
    if (header[0] != "t" || header[1] != "a1" || header[2] != "a2")
        throw DataError("expected header t,a1,a2[,state]", 1);

    TrajectoryData out;
    if (has_state) out.state.emplace();
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError("wrong number of columns", row);
        double tval = parse_cell(cells[0], row, "t");
        if (tval != std::floor(tval)) throw DataError("time index must be an integer", row);
        long t = static_cast<long>(tval);
        if (!out.times.empty() && t <= out.times.back())
            throw DataError("time index not strictly increasing", row);
        out.times.push_back(t);
        Action a1(1), a2(1);
        a1(0) = parse_cell(cells[1], row, "a1");
        a2(0) = parse_cell(cells[2], row, "a2");
        out.profiles.push_back(ActionProfile{{a1, a2}});
        if (has_state) {
            double m = parse_cell(cells[3], row, "state");
            if (m < 0.0 || m > 1.0) throw DataError("state must lie in [0,1]", row);
            out.state->push_back(m);
        }
    }
    if (out.profiles.empty()) throw DataError("trajectory file has no data rows");
    return out;
}

ContextualDataset dataset_from_state_trajectory(const GameDefinition& game,
                                                const TrajectoryData& data) {
    if (!data.state) throw DataError("state trajectory dataset requires the state column");
    if (data.profiles.size() < 2) throw DataError("need at least two profiles");
    ContextualDataset out;
    out.batches.reserve(data.profiles.size() - 1);
    for (std::size_t t = 0; t + 1 < data.profiles.size(); ++t) {
        game.validate(data.profiles[t]);
        game.validate(data.profiles[t + 1]);
        ContextBatch batch;
        batch.context.values = Eigen::VectorXd::Constant(1, (*data.state)[t]);
        for (int player = 0; player < game.num_players(); ++player) {
            ObservationSet obs;
            obs.player = player;
            obs.provenance = Provenance::Dynamic;
            DataPoint pt;
            pt.chosen_action = data.profiles[t + 1].of(player);
            pt.baseline_profile = data.profiles[t];
            pt.candidate_profile = data.profiles[t + 1];
            obs.points.push_back(std::move(pt));
            batch.observations.push_back(std::move(obs));
        }
        out.batches.push_back(std::move(batch));
    }
    return out;
}

ContextualDataset dataset_from_trajectory(const GameDefinition& game, const TrajectoryData& data,
                                          const Context& fixed_context) {
    ContextualDataset out;
    ContextBatch batch;
    batch.context = fixed_context;
    for (int player = 0; player < game.num_players(); ++player)
        batch.observations.push_back(from_trajectory(game, player, data.profiles));
    out.batches.push_back(std::move(batch));
    return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryData& data) {
    if (data.times.size() != data.profiles.size())
        throw InputError("write_trajectory_csv: time/profile length mismatch");
    if (data.state && data.state->size() != data.profiles.size())
        throw InputError("write_trajectory_csv: state length mismatch");
    std::ofstream out(path);
    if (!out) throw DataError("cannot write trajectory file: " + path.string());
    out << (data.state ? "t,a1,a2,state\n" : "t,a1,a2\n");
    char buf[128];
    for (std::size_t i = 0; i < data.profiles.size(); ++i) {
        const auto& p = data.profiles[i];
        if (p.num_players() != 2 || p.of(0).size() != 1 || p.of(1).size() != 1)
            throw InputError("write_trajectory_csv: schema requires two scalar actions");
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g", data.times[i], p.of(0)(0), p.of(1)(0));
        out << buf;
        if (data.state) {
            std::snprintf(buf, sizeof buf, ",%.17g", (*data.state)[i]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace gamefit
