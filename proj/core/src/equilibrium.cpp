#include "spillover/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spillover/error.hpp"

namespace spillover {

namespace {

constexpr double kReachesOne = 1.0 - 1e-12;

std::optional<double> try_upper_bound(const DensitySolution& sol) {
    const auto& G = sol.cumulative;
    for (std::size_t k = 1; k < G.size(); ++k) {
        if (G[k] >= kReachesOne) {
            const double s0 = sol.grid.node(k - 1), s1 = sol.grid.node(k);
            const double t = (1.0 - G[k - 1]) / (G[k] - G[k - 1]);
            return std::min(s1, s0 + std::clamp(t, 0.0, 1.0) * (s1 - s0));
        }
    }
    return std::nullopt;
}

/// G̃ at an arbitrary score by linear interpolation between solved nodes.
double raw_cdf_at(const DensitySolution& sol, double s) {
    const Grid& grid = sol.grid;
    const std::size_t k = grid.floor_index(s);
    if (k >= sol.solved_cells()) {
        if (k == sol.solved_cells() && grid.node(k) == s) return sol.cumulative[k];
        throw SolverError("player " + std::to_string(number(sol.player)) +
                          "'s raw CDF is unavailable at s = " + std::to_string(s) +
                          " (tie value v(s;s) not positive there)");
    }
    const double s0 = grid.node(k), s1 = grid.node(k + 1);
    const double t = (s - s0) / (s1 - s0);
    return sol.cumulative[k] + t * (sol.cumulative[k + 1] - sol.cumulative[k]);
}

double opponent_tie_share(const Equilibrium& eq, Player p) {
    return p == Player::one ? eq.spec.tie_weight() : 1.0 - eq.spec.tie_weight();
}

}  // namespace

double find_upper_bound(const DensitySolution& sol) {
    if (auto s = try_upper_bound(sol)) return *s;
    throw HorizonError("player " + std::to_string(number(sol.player)) + "'s raw CDF only reaches " +
                       std::to_string(sol.cumulative.back()) + " on [0, " +
                       std::to_string(sol.grid.node(sol.solved_cells())) + "]; extend the horizon");
}

Equilibrium assemble(const ContestSpec& spec, const Grid& grid, SolveMethod method, PicardOptions options) {
    return assemble(spec, {solve_density(spec, Player::one, grid, method, options),
                           solve_density(spec, Player::two, grid, method, options)});
}

Equilibrium assemble(const ContestSpec& spec, std::array<DensitySolution, 2> raw) {
    const Grid grid = raw[0].grid;
    if (raw[1].grid.cells() != grid.cells() || raw[1].grid.horizon() != grid.horizon()) {
        throw SolverError("densities were solved on different grids");
    }
    if (raw[0].player != Player::one || raw[1].player != Player::two) {
        throw SolverError("densities must be ordered by player");
    }

    std::array<std::optional<double>, 2> bounds{try_upper_bound(raw[0]), try_upper_bound(raw[1])};
    if (!bounds[0] && !bounds[1]) {
        (void)find_upper_bound(raw[0]);  // throws the informative HorizonError
    }
    double s_bar = std::numeric_limits<double>::infinity();
    for (const auto& b : bounds) {
        if (b) s_bar = std::min(s_bar, *b);
    }

    std::array<double, 2> atoms{};
    for (Player p : kPlayers) {
        atoms[index(p)] = std::clamp(1.0 - raw_cdf_at(raw[index(p)], s_bar), 0.0, 1.0);
    }
    const std::array<double, 2> raw_atoms = atoms;
    const double tolerance = 2.0 / static_cast<double>(grid.cells());
    if (std::min(atoms[0], atoms[1]) > tolerance) {
        throw SolverError("both players keep an atom at zero (" + std::to_string(atoms[0]) + ", " +
                          std::to_string(atoms[1]) + "); the contest likely violates the assumptions");
    }
    atoms[atoms[0] < atoms[1] ? 0 : 1] = 0.0;

    const std::size_t last = grid.floor_index(s_bar);
    auto strategy = [&](Player p) {
        const auto& sol = raw[index(p)];
        StrategyDistribution d{grid, std::vector<double>(grid.cells() + 1, 1.0),
                               std::vector<double>(grid.cells() + 1, 0.0), atoms[index(p)], s_bar};
        d.cdf[0] = atoms[index(p)];
        d.density[0] = sol.values[0];
        for (std::size_t k = 1; k <= last && k <= sol.solved_cells(); ++k) {
            d.cdf[k] = std::min(1.0, sol.cumulative[k] + atoms[index(p)]);
            d.density[k] = sol.values[k];
        }
        return d;
    };
    std::array<StrategyDistribution, 2> strategies{strategy(Player::one), strategy(Player::two)};
    Equilibrium eq{spec, std::move(raw), std::move(strategies), {}, bounds, raw_atoms, s_bar};
    for (Player p : kPlayers) eq.payoffs[index(p)] = payoff(eq, p);
    return eq;
}

double payoff(const Equilibrium& eq, Player p) {
    return eq.spec.player(p).value(0.0, 0.0) * eq.atom(other(p));
}

double theorem2_bound(const Equilibrium& eq, Player p) {
    const double s = eq.s_bar;
    const auto& me = eq.spec.player(p);
    const auto& op = eq.spec.opponent(p);
    return me.value(0.0, 0.0) * (op.cost(s) / op.value(s, s) - me.cost(s) / me.value(s, s));
}

double win_probability(const Equilibrium& eq, Player p) {
    const auto& mine = eq.strategy(p);
    const auto& theirs = eq.strategy(other(p));
    const double tie = p == Player::one ? eq.spec.tie_weight() : 1.0 - eq.spec.tie_weight();
    double prob = 0.0;
    for (std::size_t k = 0; k < mine.cdf.size(); ++k) {
        const double below = k == 0 ? 0.0 : theirs.cdf[k - 1];
        prob += mine.mass(k) * (below + tie * theirs.mass(k));
    }
    return prob;
}

double expected_score(const Equilibrium& eq, Player p) {
    const auto& d = eq.strategy(p);
    const double h = d.grid.step();
    double sum = 0.0;
    for (std::size_t k = 1; k < d.cdf.size(); ++k) sum += 1.0 - d.cdf[k];
    return h * sum;
}

double expected_min_score(const Equilibrium& eq) {
    const auto& a = eq.strategy(Player::one);
    const auto& b = eq.strategy(Player::two);
    const double h = a.grid.step();
    double sum = 0.0;
    for (std::size_t k = 1; k < a.cdf.size(); ++k) sum += (1.0 - a.cdf[k]) * (1.0 - b.cdf[k]);
    return h * sum;
}

double expected_utility(const Equilibrium& eq, Player p, double s) {
    const auto& me = eq.spec.player(p);
    const auto& theirs = eq.strategy(other(p));
    const Grid& grid = theirs.grid;
    if (!(s > 0.0)) {
        return opponent_tie_share(eq, p) * theirs.atom_at_zero * me.value(0.0, 0.0) - me.cost(0.0);
    }
    double u = theirs.atom_at_zero * me.value(s, 0.0);
    // the opponent puts no mass above s̄, so the sum stops at its node
    const std::size_t top = std::min(grid.floor_index(s), grid.floor_index(eq.s_bar) + 1);
    for (std::size_t k = 1; k <= top && k <= grid.cells(); ++k) {
        const double m = theirs.mass(k);
        if (m != 0.0) u += m * me.value(s, grid.node(k));
    }
    return u - me.cost(s);
}

double indifference_residual(const Equilibrium& eq, Player p, double s) {
    return expected_utility(eq, p, s) - eq.payoffs[index(p)];
}

double default_verify_tolerance(const Equilibrium& eq) {
    return 5e-3 * std::max(eq.spec.player(Player::one).cost(eq.s_bar), eq.spec.player(Player::two).cost(eq.s_bar));
}

VerificationReport verify(const Equilibrium& eq, std::optional<double> tol) {
    VerificationReport report;
    report.tolerance = tol.value_or(default_verify_tolerance(eq));
    const Grid& grid = eq.grid();
    const std::size_t last = grid.floor_index(eq.s_bar);
    for (Player p : kPlayers) {
        const std::size_t i = index(p);
        const auto& me = eq.spec.player(p);
        double residual = 0.0, gain = expected_utility(eq, p, 0.0) - eq.payoffs[i], best = 0.0, atom_term = 0.0;
        const double v00 = me.value(0.0, 0.0);
        for (std::size_t k = 1; k <= grid.cells(); ++k) {
            const double s = grid.node(k);
            const double r = indifference_residual(eq, p, s);
            if (k <= last) {
                residual = std::max(residual, std::abs(r));
                atom_term = std::max(atom_term, std::abs(me.value(s, 0.0) - v00));
            }
            if (r > gain) {
                gain = r;
                best = s;
            }
        }
        report.max_residual[i] = residual;
        report.max_deviation_gain[i] = gain;
        report.best_deviation[i] = best;
        report.atom_term[i] = eq.atom(other(p)) * atom_term;
    }
    report.passed = true;
    for (std::size_t i = 0; i < 2; ++i) {
        report.passed = report.passed && report.max_residual[i] <= report.tolerance &&
                        report.max_deviation_gain[i] <= report.tolerance;
    }
    return report;
}

}  // namespace spillover
