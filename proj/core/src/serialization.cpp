#include "gamefit/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gamefit {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
}

double number_at(const json& j, const char* what) {
    if (!j.is_number()) throw DataError(std::string("expected a number for ") + what);
    double v = j.get<double>();
    if (!std::isfinite(v)) throw DataError(std::string("non-finite value for ") + what);
    return v;
}

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd vec_from_json(const json& a, const char* what) {
    if (!a.is_array()) throw DataError(std::string("expected an array for ") + what);
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_at(a[i], what);
    return v;
}

json rows_to_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec_to_json(m.row(i).transpose()));
    return a;
}

json profile_to_json(const ActionProfile& p) {
    json a = json::array();
    for (const auto& action : p.actions) a.push_back(vec_to_json(action));
    return a;
}

ActionProfile profile_from_json(const json& a, const char* what) {
    if (!a.is_array() || a.empty())
        throw DataError(std::string("expected a per-player action array for ") + what);
    ActionProfile p;
    for (const auto& entry : a) p.actions.push_back(vec_from_json(entry, what));
    return p;
}

const char* factor_kind_name(FeatureFactor::Kind kind) {
    switch (kind) {
        case FeatureFactor::Kind::Action: return "action";
        case FeatureFactor::Kind::SqrtAction: return "sqrt_action";
        case FeatureFactor::Kind::Context: return "context";
        case FeatureFactor::Kind::SqrtContext: return "sqrt_context";
        case FeatureFactor::Kind::Indicator: return "indicator";
    }
    throw InternalError("unreachable factor kind");
}

FeatureFactor::Kind factor_kind_from(const std::string& name) {
    if (name == "action") return FeatureFactor::Kind::Action;
    if (name == "sqrt_action") return FeatureFactor::Kind::SqrtAction;
    if (name == "context") return FeatureFactor::Kind::Context;
    if (name == "sqrt_context") return FeatureFactor::Kind::SqrtContext;
    if (name == "indicator") return FeatureFactor::Kind::Indicator;
    throw DataError("unknown feature factor type: " + name);
}

json factor_to_json(const FeatureFactor& f) {
    json j{{"type", factor_kind_name(f.kind)}};
    switch (f.kind) {
        case FeatureFactor::Kind::Action:
        case FeatureFactor::Kind::SqrtAction:
            j["player"] = f.player;
            j["dim"] = f.dim;
            j["scale"] = f.scale;
            j["offset"] = f.offset;
            break;
        case FeatureFactor::Kind::Context:
        case FeatureFactor::Kind::SqrtContext:
            j["dim"] = f.dim;
            j["scale"] = f.scale;
            j["offset"] = f.offset;
            break;
        case FeatureFactor::Kind::Indicator:
            j["player"] = f.player;
            j["dim"] = f.dim;
            j["threshold"] = f.threshold;
            break;
    }
    return j;
}

FeatureFactor factor_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw DataError("feature factor must be an object with a type");
    FeatureFactor f;
    f.kind = factor_kind_from(j.at("type").get<std::string>());
    f.player = j.value("player", 0);
    f.dim = j.value("dim", 0);
    f.scale = j.value("scale", 1.0);
    f.offset = j.value("offset", 0.0);
    f.threshold = j.value("threshold", 0.0);
    return f;
}

json feature_map_to_json(const FeatureMap& map) {
    json comps = json::array();
    for (const auto& component : map) {
        json terms = json::array();
        for (const auto& term : component) {
            json factors = json::array();
            for (const auto& f : term.factors) factors.push_back(factor_to_json(f));
            terms.push_back(json{{"coefficient", term.coefficient}, {"factors", factors}});
        }
        comps.push_back(terms);
    }
    return comps;
}

FeatureMap feature_map_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw DataError("feature map must be a nonempty array");
    FeatureMap map;
    for (const auto& comp : j) {
        if (!comp.is_array()) throw DataError("feature component must be an array of terms");
        FeatureComponent component;
        for (const auto& term : comp) {
            FeatureTerm t;
            t.coefficient = number_at(term.at("coefficient"), "coefficient");
            for (const auto& f : term.value("factors", json::array()))
                t.factors.push_back(factor_from_json(f));
            component.push_back(std::move(t));
        }
        map.push_back(std::move(component));
    }
    return map;
}

json space_to_json(const ParameterSpace& s) {
    json ineqs = json::array();
    for (Eigen::Index i = 0; i < s.inequality_rows().rows(); ++i) {
        ineqs.push_back(json{{"row", vec_to_json(s.inequality_rows().row(i).transpose())},
                             {"bound", s.inequality_bounds()(i)}});
    }
    json eqs = json::array();
    for (Eigen::Index i = 0; i < s.equality_rows().rows(); ++i) {
        eqs.push_back(json{{"row", vec_to_json(s.equality_rows().row(i).transpose())},
                           {"value", s.equality_values()(i)}});
    }
    return json{{"dim", s.dim()}, {"inequalities", ineqs}, {"equalities", eqs}};
}

ParameterSpace space_from_json(const json& j) {
    int dim = j.at("dim").get<int>();
    json ineqs = j.value("inequalities", json::array());
    json eqs = j.value("equalities", json::array());
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(ineqs.size()), dim);
    Eigen::VectorXd bounds(static_cast<Eigen::Index>(ineqs.size()));
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
        Eigen::VectorXd row = vec_from_json(ineqs[i].at("row"), "parameter-space row");
        if (row.size() != dim) throw DataError("parameter-space row has wrong length");
        rows.row(static_cast<Eigen::Index>(i)) = row.transpose();
        bounds(static_cast<Eigen::Index>(i)) = number_at(ineqs[i].at("bound"), "bound");
    }
    Eigen::MatrixXd erows(static_cast<Eigen::Index>(eqs.size()), dim);
    Eigen::VectorXd evals(static_cast<Eigen::Index>(eqs.size()));
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        Eigen::VectorXd row = vec_from_json(eqs[i].at("row"), "parameter-space equality row");
        if (row.size() != dim) throw DataError("parameter-space equality row has wrong length");
        erows.row(static_cast<Eigen::Index>(i)) = row.transpose();
        evals(static_cast<Eigen::Index>(i)) = number_at(eqs[i].at("value"), "value");
    }
    return ParameterSpace(dim, std::move(rows), std::move(bounds), std::move(erows),
                          std::move(evals));
}

json game_to_json(const GameDefinition& g) {
    json bounds = json::array();
    for (int i = 0; i < g.num_players(); ++i) {
        json per_dim = json::array();
        for (const auto& iv : g.bounds(i)) per_dim.push_back(json::array({iv.lower, iv.upper}));
        bounds.push_back(per_dim);
    }
    json j{{"action_bounds", bounds}};
    if (!g.player_labels().empty()) j["labels"] = g.player_labels();
    return j;
}

GameDefinition game_from_json(const json& j) {
    const json& bounds = j.at("action_bounds");
    if (!bounds.is_array() || bounds.empty())
        throw DataError("game: action_bounds must be a nonempty array");
    std::vector<std::vector<ActionInterval>> parsed;
    for (const auto& per_player : bounds) {
        std::vector<ActionInterval> dims;
        for (const auto& iv : per_player) {
            if (!iv.is_array() || iv.size() != 2) throw DataError("game: bound must be [lo, hi]");
            dims.push_back({number_at(iv[0], "bound"), number_at(iv[1], "bound")});
        }
        parsed.push_back(std::move(dims));
    }
    std::vector<std::string> labels = j.value("labels", std::vector<std::string>{});
    return GameDefinition(static_cast<int>(parsed.size()), std::move(parsed), std::move(labels));
}

const char* mode_name(ComparisonMode mode) {
    return mode == ComparisonMode::FixedOpponent ? "fixed-opponent" : "joint-profile";
}

ComparisonMode mode_from(const std::string& name) {
    if (name == "fixed-opponent") return ComparisonMode::FixedOpponent;
    if (name == "joint-profile") return ComparisonMode::JointProfile;
    throw DataError("unknown comparison mode: " + name);
}

const char* kind_name(MarketShareKind kind) {
    return kind == MarketShareKind::Lanchester ? "lanchester" : "sorger";
}

MarketShareKind kind_from(const std::string& name) {
    if (name == "lanchester") return MarketShareKind::Lanchester;
    if (name == "sorger") return MarketShareKind::Sorger;
    throw DataError("unknown market-share model: " + name);
}

const char* certificate_kind_name(Certificate::Kind kind) {
    switch (kind) {
        case Certificate::Kind::BetterResponseDynamics: return "better-response-dynamics";
        case Certificate::Kind::NashEquilibriumOnGrid: return "nash-equilibrium-on-grid";
        case Certificate::Kind::Mixed: return "mixed";
    }
    throw InternalError("unreachable certificate kind");
}

json certificate_to_json(const Certificate& c) {
    return json{{"epsilon_bar", c.epsilon_bar},
                {"worst_context", c.worst_context},
                {"worst_point", c.worst_point},
                {"kind", certificate_kind_name(c.kind)}};
}

json polyhedron_to_json(const SolutionPolyhedron& p) {
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back(vec_to_json(v));
    return json{{"dim", p.dim},
                {"rows", rows_to_json(p.rows)},
                {"bounds", vec_to_json(p.bounds)},
                {"equality_rows", rows_to_json(p.eq_rows)},
                {"equality_values", vec_to_json(p.eq_values)},
                {"bounded", p.bounded},
                {"vertices_enumerated", p.vertices_enumerated},
                {"vertices", verts}};
}

void append_csv_value(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    line += buf;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& columns,
               const std::vector<long>* time_column = nullptr) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << header << '\n';
    std::size_t rows = time_column ? time_column->size() : columns.at(0).size();
    for (std::size_t r = 0; r < rows; ++r) {
        std::string line;
        if (time_column) line += std::to_string((*time_column)[r]);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (time_column || c > 0) line += ',';
            if (r < columns[c].size()) append_csv_value(line, columns[c][r]);
        }
        out << line << '\n';
    }
}

}  // namespace

// ---- dataset bundle / contexts (declared in dataset.hpp) ----------------

std::vector<Context> load_contexts_json(const std::filesystem::path& path) {
    json j = parse_file(path);
    if (!j.is_array()) throw DataError("contexts file must be a JSON array of arrays");
    if (j.empty()) throw DataError("contexts file contains no contexts");
    std::vector<Context> out;
    Eigen::Index dim = -1;
    for (const auto& entry : j) {
        Context c{vec_from_json(entry, "context")};
        if (dim < 0) dim = c.values.size();
        if (c.values.size() != dim) throw DataError("contexts have inconsistent dimensions");
        out.push_back(std::move(c));
    }
    return out;
}

void write_contexts_json(const std::filesystem::path& path, const std::vector<Context>& contexts) {
    json j = json::array();
    for (const auto& c : contexts) j.push_back(vec_to_json(c.values));
    write_file(path, j);
}

ContextualDataset load_dataset_bundle(const std::filesystem::path& path) {
    json j = parse_file(path);
    if (j.value("schema", "") != "gamefit-dataset-v1")
        throw DataError("dataset bundle: missing or unknown schema marker");
    const json& batches = j.at("batches");
    if (!batches.is_array() || batches.empty())
        throw DataError("dataset bundle: batches must be a nonempty array");

    ContextualDataset out;
    Eigen::Index context_dim = -1;
    std::vector<int> player_set;
    for (const auto& jb : batches) {
        ContextBatch batch;
        batch.context.values = vec_from_json(jb.at("context"), "context");
        if (context_dim < 0) context_dim = batch.context.values.size();
        if (batch.context.values.size() != context_dim)
            throw DataError("dataset bundle: context dimension changes between batches");
        std::vector<int> players_here;
        for (const auto& jo : jb.at("observations")) {
            ObservationSet obs;
            obs.player = jo.at("player").get<int>();
            std::string prov = jo.value("provenance", "static");
            if (prov == "dynamic")
                obs.provenance = Provenance::Dynamic;
            else if (prov == "static")
                obs.provenance = Provenance::Static;
            else
                throw DataError("dataset bundle: unknown provenance " + prov);
            for (const auto& jp : jo.at("points")) {
                DataPoint pt;
                pt.chosen_action = vec_from_json(jp.at("chosen"), "chosen action");
                pt.baseline_profile = profile_from_json(jp.at("baseline"), "baseline profile");
                if (jp.contains("candidate"))
                    pt.candidate_profile = profile_from_json(jp.at("candidate"), "candidate profile");
                obs.points.push_back(std::move(pt));
            }
            if (obs.points.empty()) throw DataError("dataset bundle: empty observation set");
            players_here.push_back(obs.player);
            batch.observations.push_back(std::move(obs));
        }
        std::sort(players_here.begin(), players_here.end());
        if (player_set.empty())
            player_set = players_here;
        else if (player_set != players_here)
            throw DataError("dataset bundle: batches cover different player sets");
        out.batches.push_back(std::move(batch));
    }
    return out;
}

void write_dataset_bundle(const std::filesystem::path& path, const ContextualDataset& dataset) {
    json batches = json::array();
    for (const auto& batch : dataset.batches) {
        json observations = json::array();
        for (const auto& obs : batch.observations) {
            json points = json::array();
            for (const auto& pt : obs.points) {
                json jp{{"chosen", vec_to_json(pt.chosen_action)},
                        {"baseline", profile_to_json(pt.baseline_profile)}};
                if (pt.candidate_profile) jp["candidate"] = profile_to_json(*pt.candidate_profile);
                points.push_back(std::move(jp));
            }
            observations.push_back(
                json{{"player", obs.player},
                     {"provenance", obs.provenance == Provenance::Dynamic ? "dynamic" : "static"},
                     {"points", points}});
        }
        batches.push_back(json{{"context", vec_to_json(batch.context.values)},
                               {"observations", observations}});
    }
    json root{{"schema", "gamefit-dataset-v1"}, {"batches", batches}};
    write_file(path, root);
}

// ---- game spec -----------------------------------------------------------

GameSpec load_game_spec(const std::filesystem::path& path) {
    json j = parse_file(path);
    if (j.value("schema", "") != "gamefit-game-v1")
        throw DataError("game file: missing or unknown schema marker");
    GameDefinition game = game_from_json(j.at("game"));
    GameSpec spec{std::move(game), j.value("context_dim", 1), {}, {}, {}};
    for (const auto& jp : j.at("players")) {
        int player = jp.at("player").get<int>();
        if (player < 0 || player >= spec.game.num_players())
            throw DataError("game file: player index out of range");
        LinearUtilityModel model(player, feature_map_from_json(jp.at("features")));
        ParameterSpace space = jp.contains("parameter_space")
                                   ? space_from_json(jp.at("parameter_space"))
                                   : ParameterSpace::unconstrained(model.param_dim());
        if (space.dim() != model.param_dim())
            throw DataError("game file: parameter space dimension does not match the feature map");
        std::optional<Eigen::VectorXd> theta;
        if (jp.contains("theta")) {
            theta = vec_from_json(jp.at("theta"), "theta");
            if (theta->size() != model.param_dim())
                throw DataError("game file: theta length does not match the feature map");
        }
        spec.players.push_back(PlayerSpec{std::move(model), std::move(space), std::move(theta)});
    }
    if (spec.players.empty()) throw DataError("game file: no players declared");

    if (j.contains("simulation")) {
        const json& js = j.at("simulation");
        std::string kind = js.at("kind").get<std::string>();
        if (kind == "better-response") {
            BetterResponseSimSpec sim{
                profile_from_json(js.at("initial"), "initial profile"),
                Context{vec_from_json(js.at("context"), "context")},
                GridSpec{number_at(js.at("grid").at("lower"), "grid lower"),
                         number_at(js.at("grid").at("upper"), "grid upper"),
                         js.at("grid").at("num_points").get<int>()}};
            spec.game.validate(sim.initial);
            spec.better_response = std::move(sim);
        } else if (kind == "market-share") {
            MarketShareSimSpec sim;
            sim.kind = kind_from(js.at("model").get<std::string>());
            sim.k1 = number_at(js.at("k1"), "k1");
            sim.k2 = number_at(js.at("k2"), "k2");
            sim.initial_share = number_at(js.at("initial_share"), "initial_share");
            sim.advertising_low = js.value("advertising_low", 0.5);
            sim.advertising_high = js.value("advertising_high", 4.0);
            spec.market_share = sim;
        } else {
            throw DataError("game file: unknown simulation kind " + kind);
        }
    }
    return spec;
}

void save_game_spec(const std::filesystem::path& path, const GameSpec& spec) {
    json players = json::array();
    for (const auto& p : spec.players) {
        json jp{{"player", p.model.player()},
                {"features", feature_map_to_json(p.model.feature_map())},
                {"parameter_space", space_to_json(p.space)}};
        if (p.theta) jp["theta"] = vec_to_json(*p.theta);
        players.push_back(std::move(jp));
    }
    json root{{"schema", "gamefit-game-v1"},
              {"context_dim", spec.context_dim},
              {"game", game_to_json(spec.game)},
              {"players", players}};
    if (spec.better_response) {
        root["simulation"] = json{
            {"kind", "better-response"},
            {"initial", profile_to_json(spec.better_response->initial)},
            {"context", vec_to_json(spec.better_response->context.values)},
            {"grid", json{{"lower", spec.better_response->grid.lower},
                          {"upper", spec.better_response->grid.upper},
                          {"num_points", spec.better_response->grid.num_points}}}};
    } else if (spec.market_share) {
        root["simulation"] = json{{"kind", "market-share"},
                                  {"model", kind_name(spec.market_share->kind)},
                                  {"k1", spec.market_share->k1},
                                  {"k2", spec.market_share->k2},
                                  {"initial_share", spec.market_share->initial_share},
                                  {"advertising_low", spec.market_share->advertising_low},
                                  {"advertising_high", spec.market_share->advertising_high}};
    }
    write_file(path, root);
}

// ---- estimates / thetas / certificates -----------------------------------

void write_estimate_json(const std::filesystem::path& path,
                         const std::vector<PlayerEstimateRecord>& records) {
    json players = json::array();
    for (const auto& r : records) {
        json jp{{"player", r.player},
                {"loss", r.loss},
                {"mode", mode_name(r.mode)},
                {"theta", vec_to_json(r.theta)},
                {"loss_value", r.loss_value},
                {"converged", r.converged}};
        if (r.certificate) jp["certificate"] = certificate_to_json(*r.certificate);
        if (r.linf) {
            jp["epsilon_hat"] = r.linf->epsilon_hat;
            jp["polyhedron"] = polyhedron_to_json(r.linf->polyhedron);
        }
        players.push_back(std::move(jp));
    }
    write_file(path, json{{"schema", "gamefit-result-v1"}, {"players", players}});
}

std::vector<std::pair<int, Eigen::VectorXd>> load_thetas_json(const std::filesystem::path& path) {
    json j = parse_file(path);
    std::vector<std::pair<int, Eigen::VectorXd>> out;
    if (j.is_array()) {
        if (!j.empty() && j[0].is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i)
                out.emplace_back(static_cast<int>(i), vec_from_json(j[i], "theta"));
        } else {
            out.emplace_back(0, vec_from_json(j, "theta"));
        }
        return out;
    }
    if (j.is_object() && j.contains("players")) {
        for (const auto& jp : j.at("players")) {
            out.emplace_back(jp.at("player").get<int>(), vec_from_json(jp.at("theta"), "theta"));
        }
        return out;
    }
    if (j.is_object() && j.contains("theta")) {
        out.emplace_back(j.value("player", 0), vec_from_json(j.at("theta"), "theta"));
        return out;
    }
    throw DataError("theta file: expected an array, a per-player array, or an estimate result");
}

void write_certificates_json(const std::filesystem::path& path,
                             const std::vector<std::pair<int, Certificate>>& certificates) {
    json players = json::array();
    for (const auto& [player, cert] : certificates) {
        json jc = certificate_to_json(cert);
        jc["player"] = player;
        players.push_back(std::move(jc));
    }
    write_file(path, json{{"schema", "gamefit-certificate-v1"}, {"players", players}});
}

// ---- scenario configs -----------------------------------------------------

BertrandConfig load_bertrand_config(const std::filesystem::path& path) {
    json j = parse_file(path);
    BertrandConfig config;
    if (j.contains("theta1_true")) {
        Eigen::VectorXd v = vec_from_json(j.at("theta1_true"), "theta1_true");
        if (v.size() != 4) throw DataError("bertrand config: theta1_true must have 4 entries");
        config.theta1_true = v;
    }
    if (j.contains("theta2_true")) {
        Eigen::VectorXd v = vec_from_json(j.at("theta2_true"), "theta2_true");
        if (v.size() != 4) throw DataError("bertrand config: theta2_true must have 4 entries");
        config.theta2_true = v;
    }
    config.num_contexts = j.value("num_contexts", config.num_contexts);
    config.context_mean = j.value("context_mean", config.context_mean);
    config.context_std = j.value("context_std", config.context_std);
    config.grid_points = j.value("grid_points", config.grid_points);
    if (j.contains("p_max")) config.p_max = number_at(j.at("p_max"), "p_max");
    config.rng_seed = j.value("rng_seed", config.rng_seed);
    config.normalization = j.value("normalization", config.normalization);
    config.theta_box = j.value("theta_box", config.theta_box);
    config.sweep_points = j.value("sweep_points", config.sweep_points);
    return config;
}

AdvertisingConfig load_advertising_config(const std::filesystem::path& path) {
    json j = parse_file(path);
    AdvertisingConfig config;
    if (!j.contains("data_path")) throw DataError("advertising config: data_path is required");
    std::filesystem::path data = j.at("data_path").get<std::string>();
    config.data_path = data.is_relative() ? path.parent_path() / data : data;
    config.model_firm1 = kind_from(j.value("model_firm1", "lanchester"));
    config.model_firm2 = kind_from(j.value("model_firm2", "sorger"));
    config.comparison_mode = mode_from(j.value("comparison_mode", "joint-profile"));
    config.k_upper = j.value("k_upper", config.k_upper);
    if (j.contains("market_share_initial"))
        config.market_share_initial = number_at(j.at("market_share_initial"), "market_share_initial");
    config.polyhedron_slack = j.value("polyhedron_slack", config.polyhedron_slack);
    config.compare_to_reference = j.value("compare_to_reference", config.compare_to_reference);
    return config;
}

// ---- reports ---------------------------------------------------------------

void write_bertrand_report(const std::filesystem::path& out_dir, const BertrandReport& report) {
    std::filesystem::create_directories(out_dir);
    json ne = json::array();
    for (const auto& [p1, p2] : report.ne_prices) ne.push_back(json::array({p1, p2}));
    json firms = json::array();
    for (int firm = 0; firm < 2; ++firm) {
        const auto& est = report.estimates[static_cast<std::size_t>(firm)];
        const auto& band = report.bands[static_cast<std::size_t>(firm)];
        firms.push_back(json{
            {"firm", firm + 1},
            {"normalized_true", vec_to_json(report.normalized_true[static_cast<std::size_t>(firm)])},
            {"epsilon_hat", est.epsilon_hat},
            {"theta_hat", vec_to_json(est.theta_hat)},
            {"polyhedron", polyhedron_to_json(est.polyhedron)},
            {"band", json{{"opponent_price", band.opponent_price},
                          {"context_value", band.context_value},
                          {"csv", "mr_band_firm" + std::to_string(firm + 1) + ".csv"}}}});
    }
    json root{{"schema", "gamefit-bertrand-report-v1"},
              {"config",
               json{{"theta1_true", vec_to_json(report.config.theta1_true)},
                    {"theta2_true", vec_to_json(report.config.theta2_true)},
                    {"num_contexts", report.config.num_contexts},
                    {"context_mean", report.config.context_mean},
                    {"context_std", report.config.context_std},
                    {"grid_points", report.config.grid_points},
                    {"rng_seed", report.config.rng_seed},
                    {"normalization", report.config.normalization},
                    {"theta_box", report.config.theta_box},
                    {"sweep_points", report.config.sweep_points}}},
              {"p_max", report.p_max_used},
              {"contexts", report.contexts},
              {"ne_prices", ne},
              {"firms", firms}};
    write_file(out_dir / "report.json", root);

    for (int firm = 0; firm < 2; ++firm) {
        const auto& band = report.bands[static_cast<std::size_t>(firm)];
        write_csv(out_dir / ("mr_band_firm" + std::to_string(firm + 1) + ".csv"),
                  "p,band_min,band_max,true_mr",
                  {band.prices, band.lower, band.upper, band.true_mr});
    }
}

void write_advertising_report(const std::filesystem::path& out_dir,
                              const ComparisonReport& report) {
    std::filesystem::create_directories(out_dir);
    const std::size_t T = report.observed_shares.size();
    json firms = json::array();
    for (int firm = 0; firm < 2; ++firm) {
        const auto& cmp = report.firms[static_cast<std::size_t>(firm)];
        json estimators = json::array();
        for (const auto& e : cmp.estimators) {
            estimators.push_back(json{{"name", e.name},
                                      {"theta", vec_to_json(e.theta)},
                                      {"native_loss", e.native_loss},
                                      {"linf_certified", e.linf_certified},
                                      {"certificate", certificate_to_json(e.certificate)},
                                      {"converged", e.converged},
                                      {"clipped", e.clipped}});
        }
        firms.push_back(json{{"firm", firm + 1},
                             {"model", kind_name(cmp.kind)},
                             {"epsilon_hat", cmp.linf.epsilon_hat},
                             {"polyhedron", polyhedron_to_json(cmp.linf.polyhedron)},
                             {"estimators", estimators}});
    }
    json root{{"schema", "gamefit-advertising-report-v1"},
              {"mode", mode_name(report.mode)},
              {"times", report.times},
              {"observed_shares", report.observed_shares},
              {"firms", firms}};
    if (report.reference) {
        json ref = json::array();
        const char* names[3] = {"linf", "l2", "ols"};
        for (int firm = 0; firm < 2; ++firm) {
            json rows = json::object();
            for (int e = 0; e < 3; ++e) {
                const auto& row =
                    (*report.reference)[static_cast<std::size_t>(firm)][static_cast<std::size_t>(e)];
                rows[names[e]] =
                    json{{"epsilon", row.epsilon}, {"k1", row.k1}, {"k2", row.k2}};
            }
            ref.push_back(json{{"firm", firm + 1}, {"reference", rows}});
        }
        root["reference_comparison"] = ref;
    }
    write_file(out_dir / "report.json", root);

    for (int firm = 0; firm < 2; ++firm) {
        const auto& cmp = report.firms[static_cast<std::size_t>(firm)];
        std::vector<long> step_times(report.times.begin() + 1, report.times.end());
        write_csv(out_dir / ("irrationality_firm" + std::to_string(firm + 1) + ".csv"),
                  "t,linf,l2,ols",
                  {cmp.estimators[0].per_step_irrationality,
                   cmp.estimators[1].per_step_irrationality,
                   cmp.estimators[2].per_step_irrationality},
                  &step_times);

        std::vector<double> actual = report.observed_shares;
        actual.resize(T);
        write_csv(out_dir / ("share_firm" + std::to_string(firm + 1) + ".csv"),
                  "t,actual,linf,l2,ols,band_min,band_max",
                  {actual, cmp.estimators[0].believed_shares, cmp.estimators[1].believed_shares,
                   cmp.estimators[2].believed_shares, cmp.band_lower, cmp.band_upper},
                  &report.times);
    }
}

}  // namespace gamefit
