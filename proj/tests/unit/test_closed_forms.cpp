#include <gtest/gtest.h>

#include <cmath>

#include "spillover/closed_forms.hpp"
#include "spillover/equilibrium.hpp"
#include "spillover/error.hpp"
#include "support.hpp"

namespace spillover {
namespace {

double raw_cdf(const DensitySolution& sol, double s) {
    const std::size_t k = sol.grid.floor_index(s);
    if (k >= sol.solved_cells()) return sol.cumulative.back();
    const double t = (s - sol.grid.node(k)) / sol.grid.step();
    return (1 - t) * sol.cumulative[k] + t * sol.cumulative[k + 1];
}

class ApplicationOracle : public ::testing::TestWithParam<const char*> {};

TEST_P(ApplicationOracle, NumericSolutionMatchesClosedForm) {
    const ContestConfig cfg = load_contest_config(test::config_path(GetParam()));
    const ContestSpec spec = make_contest(cfg);
    const ClosedFormSolution exact = application_solution(cfg.family, cfg.params);
    const Equilibrium eq = assemble(spec, Grid(2000, choose_horizon(spec)));

    ASSERT_TRUE(exact.s_bar);
    // s̄ is ill-conditioned where the CDF flattens out (war of attrition)
    EXPECT_NEAR(eq.s_bar, *exact.s_bar, 5e-3);
    for (Player p : kPlayers) {
        EXPECT_NEAR(eq.atom(p), exact.atoms[index(p)], 2e-3);
        ASSERT_TRUE(exact.raw_cdf[index(p)]);
        for (int m = 1; m <= 5; ++m) {
            const double s = eq.s_bar * m / 5.0;
            EXPECT_NEAR(raw_cdf(eq.raw[index(p)], s), (*exact.raw_cdf[index(p)])(s), 3e-3)
                << GetParam() << " player " << number(p) << " s=" << s;
        }
    }
    if (exact.win_probability_1) EXPECT_NEAR(win_probability(eq, Player::one), *exact.win_probability_1, 5e-3);
    for (Player p : kPlayers) {
        if (exact.expected_score[index(p)]) {
            EXPECT_NEAR(expected_score(eq, p), *exact.expected_score[index(p)], 2e-3);
        }
    }
    if (exact.expected_min_score) EXPECT_NEAR(expected_min_score(eq), *exact.expected_min_score, 2e-3);
    EXPECT_FALSE(exact.provenance.empty());
}

INSTANTIATE_TEST_SUITE_P(Applications, ApplicationOracle,
                         ::testing::Values("woa_costly_prep.json", "offense_defense.json", "exp_investment.json",
                                           "winners_regret.json"));

TEST(ClosedForms, WarOfAttritionAtom) {
    const ClosedFormSolution sol =
        application_solution("woa_costly_prep", {{"f1_0", 1}, {"f2_0", 2}, {"delta", 0.1}});
    EXPECT_NEAR(sol.atoms[0], std::sqrt(0.11) - 0.1, 1e-9);
    EXPECT_EQ(sol.atoms[1], 0.0);
    // non-atom parts: (1+δ)(1 - e^{-s/2}) and (1+δ)(1 - e^{-s})
    EXPECT_NEAR((*sol.raw_cdf[0])(1.0), 1.1 * (1 - std::exp(-0.5)), 1e-9);
    EXPECT_NEAR((*sol.raw_cdf[1])(1.0), 1.1 * (1 - std::exp(-1.0)), 1e-9);
}

TEST(ClosedForms, OffenseDefense) {
    const ClosedFormSolution sol = application_solution("offense_defense", {{"V", 1}, {"delta_a", 1}, {"c_a", 1}, {"c_d", 1}});
    ASSERT_TRUE(sol.win_probability_1);
    EXPECT_NEAR(*sol.win_probability_1, 1 - std::log(2.0), 1e-6);
    EXPECT_NEAR((*sol.raw_cdf[1])(0.25), 0.25 / 0.75, 1e-12);
}

TEST(ClosedForms, WinnersRegretAtom) {
    const ClosedFormSolution sol = application_solution("winners_regret", {{"omega1", 0.5}, {"omega2", 0.4}});
    EXPECT_NEAR(sol.atoms[1], 0.2, 1e-6);
    ASSERT_TRUE(sol.expected_score[0]);
    EXPECT_NEAR(*sol.expected_score[0], 1 + 1.5 * std::log(0.6), 1e-6);
}

TEST(ClosedForms, UnsupportedFamily) {
    EXPECT_FALSE(has_application_solution("logistic_spillover"));
    EXPECT_TRUE(has_application_solution("winners_regret"));
    EXPECT_THROW((void)application_solution("logistic_spillover", {{"lambda", 1}}), SpecError);
}

TEST(AddSep, AgreesWithApplicationSolutions) {
    for (const char* name : {"woa_costly_prep.json", "offense_defense.json"}) {
        const ContestConfig cfg = load_contest_config(test::config_path(name));
        const ContestSpec spec = make_contest(cfg);
        const ClosedFormSolution exact = application_solution(cfg.family, cfg.params);
        const Grid grid(2000, choose_horizon(spec));
        for (Player p : kPlayers) {
            const ClosedFormSolution sep = addsep_cdf(spec, p, grid);
            ASSERT_TRUE(sep.raw_cdf[index(p)]);
            const double top = exact.upper_bound_raw[index(p)].value_or(grid.horizon());
            for (int m = 0; m <= 20; ++m) {
                const double s = std::min(top, grid.horizon()) * m / 20.0;
                EXPECT_NEAR((*sep.raw_cdf[index(p)])(s), (*exact.raw_cdf[index(p)])(s), 1e-6) << name << " s=" << s;
            }
        }
    }
}

TEST(AddSep, LogisticMatchesNumericSolver) {
    const ContestSpec spec = test::load("rankedcost_lambda4.json");
    const Grid grid(2000, 0.9);
    for (Player p : kPlayers) {
        const ClosedFormSolution sep = addsep_cdf(spec, p, grid);
        const DensitySolution num = solve_density_matrix(spec, p, grid);
        for (int m = 1; m <= 5; ++m) {
            const double s = 0.84 * m / 5.0;
            EXPECT_NEAR(raw_cdf(num, s), (*sep.raw_cdf[index(p)])(s), 2e-3);
        }
    }
}

TEST(AddSep, RejectsNonSeparableValues) {
    const ContestSpec spec = test::load("exp_investment.json");
    EXPECT_THROW((void)addsep_cdf(spec, Player::one, Grid(200, 2.0)), SpecError);
}

}  // namespace
}  // namespace spillover
