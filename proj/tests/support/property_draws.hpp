#pragma once

// Seeded random parameter draws for every built-in family, shared by the
// property tests and the acceptance suite.

#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "spillover/model.hpp"

namespace spillover::test {

struct FamilyDraw {
    std::string family;
    ParamMap params;
    std::optional<double> horizon;
};

inline std::vector<FamilyDraw> property_draws(std::size_t per_family = 5, std::uint64_t seed = 20241019) {
    std::mt19937_64 rng(seed);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    std::vector<FamilyDraw> out;
    for (std::size_t k = 0; k < per_family; ++k) {
        out.push_back({"constant_prize", {{"v1", u(0.5, 2)}, {"v2", u(0.5, 2)}, {"c1_slope", u(0.5, 2)}, {"c2_slope", u(0.5, 2)}}, {}});
        out.push_back({"affine_spillover",
                       {{"base1", u(1, 2)}, {"own1", u(0, 0.5)}, {"opp1", u(0, 1)}, {"cost1", u(2, 4)},
                        {"base2", u(1, 2)}, {"own2", u(0, 0.5)}, {"opp2", u(0, 1)}, {"cost2", u(2, 4)}},
                       {}});
        out.push_back({"logistic_spillover", {{"lambda", u(0, 4)}}, 1.0});
        out.push_back({"woa_costly_prep", {{"f1_0", u(0.5, 1.5)}, {"f2_0", u(1.5, 2.5)}, {"delta", u(0.1, 0.3)}}, 8.0});
        out.push_back({"woa_uncompromising", {{"f1_0", u(0.5, 1.5)}, {"f2_0", u(1.5, 2.5)}, {"z1", u(0.1, 0.3)}, {"z2", u(0.1, 0.3)}}, 8.0});
        out.push_back({"offense_defense", {{"V", u(1, 2)}, {"delta_a", u(0, 1)}, {"c_a", u(0.5, 2)}, {"c_d", u(0.5, 2)}}, {}});
        out.push_back({"exp_investment", {{"omega1", u(0.3, 0.9)}, {"omega2", u(0.3, 0.9)}, {"r1", u(0.2, 0.8)}, {"r2", u(0.2, 0.8)}}, {}});
        out.push_back({"winners_regret", {{"omega1", u(0.2, 0.5)}, {"omega2", u(0.2, 0.5)}}, {}});
    }
    return out;
}

inline std::string describe(const FamilyDraw& d) {
    std::string s = d.family + " {";
    for (const auto& [k, v] : d.params) s += " " + k + "=" + std::to_string(v);
    return s + " }";
}

inline void PrintTo(const FamilyDraw& d, std::ostream* os) { *os << describe(d); }

}  // namespace spillover::test
