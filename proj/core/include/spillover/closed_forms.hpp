#pragma once

// Analytic solutions used as oracles for the numerical solver.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "spillover/grid.hpp"
#include "spillover/model.hpp"
#include "spillover/scalar_func.hpp"

namespace spillover {

struct ClosedFormSolution {
    std::string family;
    std::array<std::optional<ScalarFunc1>, 2> raw_cdf;      ///< G̃_i
    std::array<std::optional<ScalarFunc1>, 2> raw_density;  ///< g̃_i
    std::array<std::optional<double>, 2> upper_bound_raw;   ///< s̄_i
    std::optional<double> s_bar;
    std::array<double, 2> atoms{};
    std::optional<double> win_probability_1;
    std::array<std::optional<double>, 2> expected_score;
    std::optional<double> expected_min_score;
    std::string provenance;
};

/// G̃_i for contests whose opponent value separates as v_{-i}(s;y) = a(s) + b(y):
///
///   G̃_i(s) = (1/F(s)) ∫_0^s c'_{-i}(y)/v_{-i}(y;y) F(y) dy,
///   F(y)   = exp(∫_0^y a'(u)/v_{-i}(u;u) du),
///
/// integrated with composite Simpson at ten times the resolution of `grid` and
/// returned as a tabulated function on [0, T]. Throws SpecError when ∂v/∂s
/// visibly depends on y.
[[nodiscard]] ClosedFormSolution addsep_cdf(const ContestSpec& spec, Player player, const Grid& grid);

/// Printed solutions of the applications: woa_costly_prep (affine), offense_defense,
/// exp_investment and winners_regret. Throws SpecError for anything else.
[[nodiscard]] ClosedFormSolution application_solution(std::string_view family, const ParamMap& params);

/// True when application_solution supports the family.
[[nodiscard]] bool has_application_solution(std::string_view family) noexcept;

}  // namespace spillover
