#pragma once

#include <string>

#include "spillover/config.hpp"
#include "spillover/model.hpp"

namespace spillover::test {

inline std::string config_path(const std::string& name) { return std::string(SPILLOVER_CONFIG_DIR) + "/" + name; }

inline ContestSpec load(const std::string& name) { return make_contest(load_contest_config(config_path(name))); }

inline ContestSpec expr_contest(const std::string& v1, const std::string& c1, const std::string& v2,
                                const std::string& c2, std::optional<double> horizon = std::nullopt,
                                ParamMap params = {}) {
    ContestConfig cfg;
    cfg.family = "expr";
    cfg.value_exprs = {v1, v2};
    cfg.cost_exprs = {c1, c2};
    cfg.params = std::move(params);
    cfg.horizon = horizon;
    return make_contest(cfg);
}

inline ContestConfig family_config(const std::string& family, ParamMap params,
                                   std::optional<double> horizon = std::nullopt) {
    ContestConfig cfg;
    cfg.family = family;
    cfg.params = std::move(params);
    cfg.horizon = horizon;
    return cfg;
}

}  // namespace spillover::test
