#include "spillover/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spillover/error.hpp"

namespace spillover {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
    throw SpecError(path + ": " + message);
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("$: invalid JSON (") + e.what() + ")");
    }
}

double number_at(const json& doc, const std::string& path) {
    if (!doc.is_number()) schema_error(path, "expected a number");
    return doc.get<double>();
}

std::string string_at(const json& doc, const std::string& path) {
    if (!doc.is_string()) schema_error(path, "expected a string");
    return doc.get<std::string>();
}

void reject_unknown_keys(const json& doc, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : doc.items()) {
        if (allowed.count(key) == 0) schema_error(path + "." + key, "unknown key");
    }
}

ParamMap read_params(const json& doc) {
    ParamMap params;
    if (!doc.contains("params")) return params;
    const json& p = doc["params"];
    if (!p.is_object()) schema_error("$.params", "expected an object");
    for (const auto& [key, value] : p.items()) params[key] = number_at(value, "$.params." + key);
    return params;
}

void read_common(const json& doc, double& tie_weight, std::optional<double>& horizon) {
    if (doc.contains("tie_weight")) {
        tie_weight = number_at(doc["tie_weight"], "$.tie_weight");
        if (!(tie_weight >= 0.0 && tie_weight <= 1.0)) schema_error("$.tie_weight", "must lie in [0, 1]");
    }
    if (doc.contains("horizon") && !doc["horizon"].is_null()) {
        horizon = number_at(doc["horizon"], "$.horizon");
        if (!(*horizon > 0.0)) schema_error("$.horizon", "must be positive");
    }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ContestConfig parse_contest_config(std::string_view json_text) {
    const json doc = parse_document(json_text);
    if (!doc.is_object()) schema_error("$", "expected an object");
    if (!doc.contains("family")) schema_error("$.family", "missing required key");

    ContestConfig cfg;
    cfg.family = string_at(doc["family"], "$.family");
    if (cfg.family == "multi") schema_error("$.family", "multi-player document where a two-player contest is expected");
    cfg.params = read_params(doc);
    read_common(doc, cfg.tie_weight, cfg.horizon);

    if (doc.contains("value_scale")) {
        const json& vs = doc["value_scale"];
        if (!vs.is_array() || vs.size() != 2) schema_error("$.value_scale", "expected an array of two numbers");
        for (std::size_t i = 0; i < 2; ++i) {
            cfg.value_scale[i] = number_at(vs[i], "$.value_scale[" + std::to_string(i) + "]");
            if (!(cfg.value_scale[i] > 0.0)) schema_error("$.value_scale[" + std::to_string(i) + "]", "must be positive");
        }
    }

    std::set<std::string> allowed{"family", "params", "tie_weight", "horizon", "value_scale", "description"};
    if (cfg.family == "expr") {
        for (std::size_t i = 0; i < 2; ++i) {
            const std::string n = std::to_string(i + 1);
            for (const std::string& key : {"v" + n, "c" + n}) {
                if (!doc.contains(key)) schema_error("$." + key, "missing required key");
                allowed.insert(key);
            }
            cfg.value_exprs[i] = string_at(doc["v" + n], "$.v" + n);
            cfg.cost_exprs[i] = string_at(doc["c" + n], "$.c" + n);
        }
    } else {
        const auto& names = family_names();
        if (std::find(names.begin(), names.end(), cfg.family) == names.end()) {
            schema_error("$.family", "unknown family '" + cfg.family + "'");
        }
    }
    if (doc.contains("description")) (void)string_at(doc["description"], "$.description");
    reject_unknown_keys(doc, "$", allowed);
    return cfg;
}

ContestConfig load_contest_config(const std::filesystem::path& path) {
    return parse_contest_config(read_text_file(path));
}

std::string to_json(const ContestConfig& config) {
    json doc;
    doc["family"] = config.family;
    if (config.family == "expr") {
        doc["v1"] = config.value_exprs[0];
        doc["c1"] = config.cost_exprs[0];
        doc["v2"] = config.value_exprs[1];
        doc["c2"] = config.cost_exprs[1];
    }
    json params = json::object();
    for (const auto& [k, v] : config.params) params[k] = v;
    doc["params"] = params;
    doc["tie_weight"] = config.tie_weight;
    if (config.horizon) doc["horizon"] = *config.horizon;
    if (config.value_scale[0] != 1.0 || config.value_scale[1] != 1.0) {
        doc["value_scale"] = {config.value_scale[0], config.value_scale[1]};
    }
    return doc.dump(2) + "\n";
}

MultiContestConfig parse_multi_config(std::string_view json_text) {
    const json doc = parse_document(json_text);
    if (!doc.is_object()) schema_error("$", "expected an object");
    if (!doc.contains("family")) schema_error("$.family", "missing required key");
    if (string_at(doc["family"], "$.family") != "multi") schema_error("$.family", "expected \"multi\"");
    if (!doc.contains("players")) schema_error("$.players", "missing required key");
    const json& players = doc["players"];
    if (!players.is_array() || players.size() < 2) schema_error("$.players", "expected an array of at least two players");

    MultiContestConfig cfg;
    for (std::size_t k = 0; k < players.size(); ++k) {
        const std::string path = "$.players[" + std::to_string(k) + "]";
        const json& p = players[k];
        if (!p.is_object()) schema_error(path, "expected an object");
        for (const char* key : {"v", "c"}) {
            if (!p.contains(key)) schema_error(path + "." + key, "missing required key");
        }
        cfg.value_exprs.push_back(string_at(p["v"], path + ".v"));
        cfg.cost_exprs.push_back(string_at(p["c"], path + ".c"));
        cfg.labels.push_back(p.contains("label") ? string_at(p["label"], path + ".label")
                                                 : "player " + std::to_string(k + 1));
        reject_unknown_keys(p, path, {"v", "c", "label"});
    }
    cfg.params = read_params(doc);
    read_common(doc, cfg.tie_weight, cfg.horizon);
    if (doc.contains("duo")) {
        const json& d = doc["duo"];
        if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number_integer()) {
            schema_error("$.duo", "expected two 1-based player numbers");
        }
        const auto i = d[0].get<long long>(), j = d[1].get<long long>();
        const auto n = static_cast<long long>(players.size());
        if (i < 1 || j < 1 || i > n || j > n || i == j) schema_error("$.duo", "players must be distinct and in 1.." + std::to_string(n));
        cfg.duo = std::pair<std::size_t, std::size_t>(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
    }
    if (doc.contains("description")) (void)string_at(doc["description"], "$.description");
    reject_unknown_keys(doc, "$", {"family", "players", "params", "tie_weight", "horizon", "duo", "description"});
    return cfg;
}

MultiContestConfig load_multi_config(const std::filesystem::path& path) {
    return parse_multi_config(read_text_file(path));
}

MultiContestSpec make_multi_contest(const MultiContestConfig& config) {
    std::vector<MultiPlayerSpec> players;
    for (std::size_t k = 0; k < config.value_exprs.size(); ++k) {
        const std::string path = "$.players[" + std::to_string(k) + "]";
        try {
            expr::Expr v = expr::parse(config.value_exprs[k]);
            const expr::Expr c = expr::bind(expr::parse(config.cost_exprs[k]), config.params);
            if (const auto free = expr::free_parameters(c); !free.empty()) {
                throw SpecError(path + ".c: unbound parameter '" + *free.begin() + "'");
            }
            players.push_back(MultiPlayerSpec{std::move(v), ScalarFunc1::from_expression(c, {}), config.labels[k]});
        } catch (const ParseError& e) {
            throw SpecError(path + ": " + e.what());
        }
    }
    return MultiContestSpec(std::move(players), config.params, config.tie_weight, config.horizon);
}

}  // namespace spillover
