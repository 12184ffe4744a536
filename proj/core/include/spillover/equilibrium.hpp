#pragma once

// Equilibrium assembly from the two raw densities, and everything computed
// from an assembled equilibrium: payoffs, win probabilities, moments, expected
// utilities and the verification of equilibrium conditions.
//
// CDF convention: G(0) includes the atom at zero (right-continuous CDF). All
// integrals against dG use the discrete measure μ[0] = G[0], μ[k] = G[k] - G[k-1].

#include <array>
#include <optional>
#include <vector>

#include "spillover/grid.hpp"
#include "spillover/model.hpp"
#include "spillover/vie.hpp"

namespace spillover {

struct StrategyDistribution {
    Grid grid;
    std::vector<double> cdf;      ///< G[k], k = 0..N; G[0] is the atom
    std::vector<double> density;  ///< g̃[k] on [0, s̄], 0 beyond
    double atom_at_zero = 0.0;
    double upper_bound = 0.0;  ///< s̄, shared by both players

    /// μ[k]: probability mass assigned to node k.
    [[nodiscard]] double mass(std::size_t k) const { return k == 0 ? cdf[0] : cdf[k] - cdf[k - 1]; }
};

struct Equilibrium {
    ContestSpec spec;
    std::array<DensitySolution, 2> raw;
    std::array<StrategyDistribution, 2> strategies;
    std::array<double, 2> payoffs{};
    /// s̄_i where G̃_i reaches one; empty when it never does on the grid
    /// (that player is then necessarily the one with the atom).
    std::array<std::optional<double>, 2> upper_bounds_raw;
    /// 1 - G̃_i(s̄) before the smaller one was zeroed.
    std::array<double, 2> raw_atoms{};
    double s_bar = 0.0;

    [[nodiscard]] const Grid& grid() const noexcept { return strategies[0].grid; }
    [[nodiscard]] const StrategyDistribution& strategy(Player p) const noexcept { return strategies[index(p)]; }
    [[nodiscard]] double atom(Player p) const noexcept { return strategies[index(p)].atom_at_zero; }
};

/// s̄_i with G̃_i(s̄_i) = 1, linearly interpolated between the bracketing nodes.
/// Throws HorizonError when the cumulative never reaches one.
[[nodiscard]] double find_upper_bound(const DensitySolution& sol);

/// Solves both densities with `method` and assembles the equilibrium.
[[nodiscard]] Equilibrium assemble(const ContestSpec& spec, const Grid& grid, SolveMethod method = SolveMethod::matrix,
                                   PicardOptions options = {});

/// Assembles from already computed densities (raw[i] must be player i's).
[[nodiscard]] Equilibrium assemble(const ContestSpec& spec, std::array<DensitySolution, 2> raw);

/// v_i(0;0) · atom_{-i}.
[[nodiscard]] double payoff(const Equilibrium& eq, Player p);

/// Lower bound v_i(0;0)[c_{-i}(s̄)/v_{-i}(s̄;s̄) - c_i(s̄)/v_i(s̄;s̄)] on player i's payoff.
[[nodiscard]] double theorem2_bound(const Equilibrium& eq, Player p);

/// P(player p's score exceeds the opponent's), ties split by the tie weight.
[[nodiscard]] double win_probability(const Equilibrium& eq, Player p);

[[nodiscard]] double expected_score(const Equilibrium& eq, Player p);
[[nodiscard]] double expected_min_score(const Equilibrium& eq);

/// Player p's expected utility from the pure score s against the opponent's
/// equilibrium strategy. s = 0 meets the opponent's atom in a tie.
[[nodiscard]] double expected_utility(const Equilibrium& eq, Player p, double s);

/// expected_utility(s) - payoff(p).
[[nodiscard]] double indifference_residual(const Equilibrium& eq, Player p, double s);

struct VerificationReport {
    std::array<double, 2> max_residual{};        ///< sup |U_i - ū_i| over nodes in (0, s̄]
    std::array<double, 2> max_deviation_gain{};  ///< max U_i - ū_i over all nodes up to T
    std::array<double, 2> best_deviation{};      ///< score attaining max_deviation_gain
    /// atom_{-i} · sup |v_i(s;0) - v_i(0;0)| on [0, s̄]: the part of the residual
    /// produced by the opponent's atom when the prize depends on one's own score.
    std::array<double, 2> atom_term{};
    double tolerance = 0.0;
    bool passed = false;
};

/// Default tolerance 5e-3 · max(c_1(s̄), c_2(s̄)).
[[nodiscard]] double default_verify_tolerance(const Equilibrium& eq);

[[nodiscard]] VerificationReport verify(const Equilibrium& eq, std::optional<double> tol = std::nullopt);

}  // namespace spillover
