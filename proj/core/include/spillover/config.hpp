#pragma once

// JSON contest configuration documents. Schema: docs/config_schema.md.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spillover/model.hpp"

namespace spillover {

/// Parses a two-player contest document. Schema violations throw SpecError
/// whose message starts with the JSON path of the offending key, e.g.
/// "$.params.lambda: expected a number".
[[nodiscard]] ContestConfig parse_contest_config(std::string_view json_text);
[[nodiscard]] ContestConfig load_contest_config(const std::filesystem::path& path);

/// Serializes a configuration back to a JSON document (pretty-printed).
[[nodiscard]] std::string to_json(const ContestConfig& config);

struct MultiContestConfig {
    std::vector<std::string> value_exprs;
    std::vector<std::string> cost_exprs;
    std::vector<std::string> labels;
    ParamMap params;
    double tie_weight = 0.5;
    std::optional<double> horizon;
    std::optional<std::pair<std::size_t, std::size_t>> duo;  ///< 0-based
};

/// Multi-player document: {"family": "multi", "players": [{"v": ..., "c": ...}, ...], ...}.
[[nodiscard]] MultiContestConfig parse_multi_config(std::string_view json_text);
[[nodiscard]] MultiContestConfig load_multi_config(const std::filesystem::path& path);
[[nodiscard]] MultiContestSpec make_multi_contest(const MultiContestConfig& config);

/// Reads a whole file; throws SpecError when it cannot be opened.
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace spillover
