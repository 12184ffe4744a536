#pragma once

// Higher-level tools built on the equilibrium solver: the positive-payoff
// certificate, parameter sweeps and crossover search, the participation check
// for more than two players and prize balancing.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spillover/equilibrium.hpp"
#include "spillover/model.hpp"
#include "spillover/vie.hpp"

namespace spillover {

struct PositivePayoffCheck {
    std::optional<Player> winner;  ///< empty: inconclusive (the test is sufficient, not necessary)
    double s_bar = 0.0;            ///< upper end of the checked range
    std::string details;
};

/// Tests, for each player i, c_i(s)/v_i(s;s) < c_{-i}(s)/v_{-i}(s;s) and
/// |∂_y v_i(s;y)|/v_i(s;s) <= ∂_y v_{-i}(s;y)/v_{-i}(s;s) at grid pairs
/// 0 <= y <= s <= s̄, with s̄ from the assembled equilibrium.
[[nodiscard]] PositivePayoffCheck check_positive_payoff(const ContestSpec& spec, const Grid& grid);

struct SweepOptions {
    std::size_t grid_cells = 2000;
    SolveMethod method = SolveMethod::matrix;
    /// 0: use SPILLOVER_EQ_THREADS, else the hardware concurrency.
    std::size_t threads = 0;
};

struct SweepPoint {
    double value = 0.0;
    std::array<double, 2> payoffs{};
    std::array<double, 2> atoms{};
    double s_bar = 0.0;
    double win_prob_1 = 0.0;
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepPoint> points;
    std::optional<double> crossover;
};

/// Solves the contest at `steps` equally spaced values of `param` in [from, to].
/// The horizon is the configuration's, or chosen per value when it has none.
[[nodiscard]] SweepResult sweep(const ContestConfig& base, const std::string& param, double from, double to,
                                std::size_t steps, const SweepOptions& options = {});

enum class CrossoverMetric {
    payoff_difference,     ///< v_1(0;0)·atom_2 - v_2(0;0)·atom_1
    win_probability_half,  ///< P(player 1 wins) - 1/2
};

[[nodiscard]] double crossover_metric(const Equilibrium& eq, CrossoverMetric metric);

/// Brackets a sign change of the metric with a `bracket_steps`-point sweep, then
/// bisects (at most 60 steps) until the bracket is narrower than `tol`.
/// Throws SolverError when the metric does not change sign on [from, to].
[[nodiscard]] double find_crossover(const ContestConfig& base, const std::string& param, double from, double to,
                                    CrossoverMetric metric = CrossoverMetric::payoff_difference,
                                    const SweepOptions& options = {}, double tol = 1e-3,
                                    std::size_t bracket_steps = 17);

struct OutsiderReport {
    std::size_t player = 0;  ///< 0-based
    /// Ranked-costs inequality c_k(s)/v_k(s; s_i, s_j) >= c_j(s)/v_j(s; s_i) on the
    /// sampled profiles. Diagnostic only.
    bool ranked_costs_hold = true;
    std::optional<std::array<double, 3>> first_violation;  ///< (s, s_i, s_j)
    double best_deviation_payoff = 0.0;
    double best_deviation_score = 0.0;
};

struct ParticipationReport {
    std::pair<std::size_t, std::size_t> duo;  ///< 0-based (i, j)
    double s_bar = 0.0;
    std::array<double, 2> duo_payoffs{};
    std::array<double, 2> duo_atoms{};
    /// Player i has a positive payoff in the two-player game.
    bool hypothesis_holds = false;
    std::optional<std::size_t> positive_payoff_player;
    std::vector<OutsiderReport> outsiders;
    double tolerance = 5e-3;
    /// No outsider gains more than the tolerance by entering.
    bool certified = false;
};

/// Checks that an equilibrium where only players i and j (0-based) are active
/// exists: solves their two-player game (every other score at zero), then
/// evaluates every outsider's best entry payoff against it.
[[nodiscard]] ParticipationReport participation_check(const MultiContestSpec& multi, std::size_t i, std::size_t j,
                                                      std::size_t grid_cells = 2000, double tolerance = 5e-3,
                                                      std::size_t profile_samples = 16);

struct BalanceResult {
    double gamma = 1.0;
    std::optional<Player> scaled_player;  ///< the previously non-atom player
    ContestSpec balanced;
};

/// Scales the non-atom player's prize by gamma = G̃_a(s̄), a being the atom player,
/// so that neither player keeps an atom. gamma = 1 when there is no atom.
[[nodiscard]] BalanceResult balance_prize(const ContestSpec& spec, const Grid& grid);

/// Worker count for parallel sweeps: SPILLOVER_EQ_THREADS when set and positive,
/// otherwise std::thread::hardware_concurrency() (at least 1).
[[nodiscard]] std::size_t default_thread_count();

}  // namespace spillover
