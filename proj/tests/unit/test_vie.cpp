#include <gtest/gtest.h>

#include <cmath>

#include "spillover/error.hpp"
#include "spillover/vie.hpp"
#include "support.hpp"

namespace spillover {
namespace {

double sup_error(const DensitySolution& sol, const std::function<double(double)>& exact, bool cdf = false,
                 double upto = 1e300) {
    double worst = 0.0;
    for (std::size_t k = 1; k <= sol.solved_cells(); ++k) {
        const double s = sol.grid.node(k);
        if (s > upto) break;
        const double x = cdf ? sol.cumulative[k] : sol.values[k];
        worst = std::max(worst, std::abs(x - exact(s)));
    }
    return worst;
}

TEST(Vie, CanonicalAllPayDensityIsOne) {
    const ContestSpec spec = make_family("constant_prize", {});
    const Grid grid(2000, 1.0);
    for (SolveMethod m : {SolveMethod::matrix, SolveMethod::picard, SolveMethod::cdf}) {
        const DensitySolution sol = solve_density(spec, Player::one, grid, m);
        EXPECT_EQ(sol.solved_cells(), 2000u);
        EXPECT_LT(sup_error(sol, [](double) { return 1.0; }), 1e-9) << method_name(m);
        EXPECT_LT(sup_error(sol, [](double s) { return s; }, true), 1e-9) << method_name(m);
        EXPECT_NEAR(sol.values[0], 1.0, 1e-15);
        EXPECT_EQ(sol.cumulative[0], 0.0);
    }
}

TEST(Vie, PicardOnKernelFreeContestNeedsOneIteration) {
    const ContestSpec spec = make_family("constant_prize", {{"v", 2}, {"c_slope", 3}});
    const DensitySolution sol = solve_density_picard(spec, Player::two, Grid(500, 1.0));
    EXPECT_EQ(sol.iterations, 1u);
    EXPECT_LT(sup_error(sol, [](double) { return 1.5; }), 1e-12);
}

TEST(Vie, ExponentialInvestmentDensityIsConstant) {
    // g̃_i = r_{-i}/ω_{-i}
    const ContestSpec spec =
        make_family("exp_investment", {{"omega1", 0.5}, {"omega2", 0.4}, {"r1", 0.5}, {"r2", 0.5}});
    const Grid grid(2000, choose_horizon(spec));
    const DensitySolution g1 = solve_density_matrix(spec, Player::one, grid);
    const DensitySolution g2 = solve_density_matrix(spec, Player::two, grid);
    EXPECT_LT(sup_error(g1, [](double) { return 1.25; }), 1e-3);
    EXPECT_LT(sup_error(g2, [](double) { return 1.0; }), 1e-3);
}

TEST(Vie, LogisticDensitiesMatchReciprocalTieValue) {
    // v depends on y only, so g̃_1 = c_2'/v(s;s) = 1/v(s;s) and g̃_2 = 2s/v(s;s).
    const ContestSpec spec = test::load("rankedcost_lambda4.json");
    const Grid grid(2000, 0.9);
    const auto& v = spec.player(Player::one).value;
    const DensitySolution g1 = solve_density_matrix(spec, Player::one, grid);
    const DensitySolution g2 = solve_density_matrix(spec, Player::two, grid);
    EXPECT_LT(sup_error(g1, [&](double s) { return 1.0 / v(s, s); }), 1e-3);
    EXPECT_LT(sup_error(g2, [&](double s) { return 2.0 * s / v(s, s); }), 1.2e-3);
}

TEST(Vie, WinnersRegretDensity) {
    // g̃_i = e^{-s}/ω_{-i}
    const ContestSpec spec = make_family("winners_regret", {{"omega1", 0.5}, {"omega2", 0.4}});
    const Grid grid(2000, 1.0);
    const DensitySolution g1 = solve_density_matrix(spec, Player::one, grid);
    const DensitySolution g2 = solve_density_matrix(spec, Player::two, grid);
    EXPECT_LT(sup_error(g1, [](double s) { return std::exp(-s) / 0.4; }), 1e-3);
    EXPECT_LT(sup_error(g2, [](double s) { return std::exp(-s) / 0.5; }), 1e-3);
}

TEST(Vie, DefenderCdfClosedForm) {
    // G̃_d(s) = c_a s/(V - δ_a s), solved from the attacker's indifference
    const ContestSpec spec = test::load("offense_defense.json");
    const Grid grid(2000, 1.0);
    for (SolveMethod m : {SolveMethod::matrix, SolveMethod::cdf}) {
        const DensitySolution gd = solve_density(spec, Player::two, grid, m);
        EXPECT_LT(sup_error(gd, [](double s) { return s / (1.0 - s); }, true, 0.5), 2e-3) << method_name(m);
    }
}

TEST(Vie, MatrixAndPicardShareTheirFixedPoint) {
    const ContestSpec spec = test::load("affine_fig1.json");
    const Grid grid(1000, 2.0);
    for (Player p : kPlayers) {
        const DensitySolution a = solve_density_matrix(spec, p, grid);
        const DensitySolution b = solve_density_picard(spec, p, grid, {1e-13, 10000});
        ASSERT_EQ(a.values.size(), b.values.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < a.values.size(); ++k) worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
        EXPECT_LT(worst, 1e-8);
        EXPECT_GT(b.iterations, 1u);
    }
}

TEST(Vie, PicardReportsNonConvergence) {
    const ContestSpec spec = test::load("affine_fig1.json");
    EXPECT_THROW((void)solve_density_picard(spec, Player::one, Grid(200, 2.0), {1e-14, 2}), SolverError);
}

TEST(Vie, CdfDirectAgreesWithMatrix) {
    for (const char* name : {"rankedcost_lambda4.json", "woa_costly_prep.json", "exp_investment.json",
                             "theorem2_affine.json"}) {
        const ContestSpec spec = test::load(name);
        const Grid grid(2000, choose_horizon(spec));
        for (Player p : kPlayers) {
            const DensitySolution a = solve_density_matrix(spec, p, grid);
            const DensitySolution b = solve_cdf_direct(spec, p, grid);
            double worst = 0.0;
            for (std::size_t k = 0; k < a.cumulative.size(); ++k) {
                worst = std::max(worst, std::abs(a.cumulative[k] - b.cumulative[k]));
            }
            EXPECT_LT(worst, 5e-3) << name;
        }
    }
}

TEST(Vie, ResidualAndPositivity) {
    for (const char* name : {"canonical_allpay.json", "rankedcost_lambda4.json", "affine_fig1.json",
                             "winners_regret.json", "offense_defense.json"}) {
        const ContestSpec spec = test::load(name);
        const Grid grid(2000, choose_horizon(spec));
        for (Player p : kPlayers) {
            const DensitySolution sol = solve_density_matrix(spec, p, grid);
            EXPECT_LE(vie_residual(spec, sol), 1e-10) << name;
            ASSERT_GE(sol.values[0], 0.0);  // c'(0) may vanish
            for (std::size_t k = 1; k < sol.values.size(); ++k) {
                ASSERT_GT(sol.values[k], 0.0) << name << " node " << k;
            }
        }
    }
}

TEST(Vie, FirstOrderConvergence) {
    // Halving h halves the error against the exact density 2s/v(s;s).
    const ContestSpec spec = test::load("rankedcost_lambda4.json");
    const auto& v = spec.player(Player::one).value;
    auto error_at = [&](std::size_t n) {
        return sup_error(solve_density_matrix(spec, Player::two, Grid(n, 0.9)),
                         [&](double s) { return 2.0 * s / v(s, s); });
    };
    const double ratio = error_at(500) / error_at(1000);
    EXPECT_GE(ratio, 1.5);
    EXPECT_LE(ratio, 2.5);
}

TEST(Vie, RejectsAssumptionViolations) {
    EXPECT_THROW((void)solve_density_matrix(test::load("a2_violation.json"), Player::two, Grid(100, 1.0)),
                 AssumptionError);
}

TEST(Vie, TruncatesWhereTieValueVanishes) {
    // v_2(s;s) = 1 - 2s hits zero at s = 1/2, beyond the joint bound of player 2.
    const ContestSpec spec = test::expr_contest("1", "s", "1 - s - y", "2*s", 1.0);
    const DensitySolution sol = solve_density_matrix(spec, Player::one, Grid(100, 1.0));
    EXPECT_LT(sol.solved_cells(), 100u);
    EXPECT_EQ(sol.values.size(), sol.cumulative.size());
}

}  // namespace
}  // namespace spillover
