#include "spillover/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "spillover/error.hpp"

namespace spillover {

namespace {

constexpr double kSlack = 1e-12;

ContestSpec spec_at(const ContestConfig& base, const std::string& param, double value) {
    ContestConfig cfg = base;
    cfg.params[param] = value;
    return make_contest(cfg);
}

Equilibrium solve_at(const ContestConfig& base, const std::string& param, double value, const SweepOptions& options) {
    const ContestSpec spec = spec_at(base, param, value);
    return assemble(spec, Grid(options.grid_cells, choose_horizon(spec)), options.method);
}

/// Runs body(k) for k in [0, count) on up to `threads` workers; rethrows the
/// first exception after all workers have stopped.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t k = 0; k < count; ++k) body(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count && !failed; k = next++) {
                try {
                    body(k);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed = true;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::size_t default_thread_count() {
    if (const char* env = std::getenv("SPILLOVER_EQ_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && n > 0) return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

PositivePayoffCheck check_positive_payoff(const ContestSpec& spec, const Grid& grid) {
    PositivePayoffCheck out;
    std::ostringstream details;
    try {
        out.s_bar = assemble(spec, grid).s_bar;
    } catch (const Error& e) {
        out.s_bar = grid.horizon();
        details << "equilibrium not assembled (" << e.what() << "); checked on [0, T]. ";
    }
    const std::size_t last = grid.floor_index(out.s_bar);
    const std::size_t stride = std::max<std::size_t>(1, last / 400);

    for (Player p : kPlayers) {
        const auto& me = spec.player(p);
        const auto& op = spec.opponent(p);
        bool ranked = true, spill = true;
        for (std::size_t k = 1; k <= last && ranked && spill; k += stride) {
            const double s = grid.node(k);
            const double vm = me.value(s, s), vo = op.value(s, s);
            if (!(me.cost(s) / vm < op.cost(s) / vo)) {
                ranked = false;
                details << "player " << number(p) << ": normalized cost not strictly lower at s=" << s << ". ";
                break;
            }
            for (std::size_t m = 0; m <= k; m += stride) {
                const double y = grid.node(m);
                if (std::abs(me.value.d_opp(s, y)) / vm > op.value.d_opp(s, y) / vo + kSlack) {
                    spill = false;
                    details << "player " << number(p) << ": spillover condition fails at s=" << s << ", y=" << y
                            << ". ";
                    break;
                }
            }
        }
        if (ranked && spill) {
            out.winner = p;
            details << "player " << number(p) << " certified on [0, " << out.s_bar << "].";
            break;
        }
    }
    if (!out.winner) details << "inconclusive.";
    out.details = details.str();
    return out;
}

SweepResult sweep(const ContestConfig& base, const std::string& param, double from, double to, std::size_t steps,
                  const SweepOptions& options) {
    if (steps < 2) throw SpecError("a sweep needs at least two steps");
    if (!(to > from)) throw SpecError("sweep range must satisfy from < to");
    SweepResult result;
    result.parameter = param;
    result.points.resize(steps);
    const std::size_t threads = options.threads ? options.threads : default_thread_count();
    parallel_for(steps, threads, [&](std::size_t k) {
        const double value = k + 1 == steps ? to : from + (to - from) * static_cast<double>(k) / (steps - 1);
        const Equilibrium eq = solve_at(base, param, value, options);
        SweepPoint& pt = result.points[k];
        pt.value = value;
        pt.payoffs = eq.payoffs;
        pt.atoms = {eq.atom(Player::one), eq.atom(Player::two)};
        pt.s_bar = eq.s_bar;
        pt.win_prob_1 = win_probability(eq, Player::one);
    });
    for (std::size_t k = 1; k < steps; ++k) {
        const double a = result.points[k - 1].payoffs[0] - result.points[k - 1].payoffs[1];
        const double b = result.points[k].payoffs[0] - result.points[k].payoffs[1];
        if ((a > 0.0) != (b > 0.0)) {
            try {
                result.crossover = find_crossover(base, param, result.points[k - 1].value, result.points[k].value,
                                                  CrossoverMetric::payoff_difference, options, 1e-3, 2);
            } catch (const SolverError&) {
                // a sign change that bisection cannot confirm is not reported
            }
            break;
        }
    }
    return result;
}

double crossover_metric(const Equilibrium& eq, CrossoverMetric metric) {
    switch (metric) {
        case CrossoverMetric::payoff_difference: return eq.payoffs[0] - eq.payoffs[1];
        case CrossoverMetric::win_probability_half: return win_probability(eq, Player::one) - 0.5;
    }
    return NAN;
}

double find_crossover(const ContestConfig& base, const std::string& param, double from, double to,
                      CrossoverMetric metric, const SweepOptions& options, double tol, std::size_t bracket_steps) {
    if (!(to > from)) throw SpecError("crossover range must satisfy from < to");
    if (!(tol > 0.0)) throw SpecError("crossover tolerance must be positive");
    bracket_steps = std::max<std::size_t>(2, bracket_steps);
    auto f = [&](double x) { return crossover_metric(solve_at(base, param, x, options), metric); };

    std::vector<double> xs(bracket_steps), fs(bracket_steps);
    const std::size_t threads = options.threads ? options.threads : default_thread_count();
    parallel_for(bracket_steps, threads, [&](std::size_t k) {
        xs[k] = k + 1 == bracket_steps ? to : from + (to - from) * static_cast<double>(k) / (bracket_steps - 1);
        fs[k] = f(xs[k]);
    });
    double lo = 0, hi = 0, flo = 0;
    bool found = false;
    for (std::size_t k = 1; k < bracket_steps; ++k) {
        if ((fs[k - 1] > 0.0) != (fs[k] > 0.0)) {
            lo = xs[k - 1];
            hi = xs[k];
            flo = fs[k - 1];
            found = true;
            break;
        }
    }
    if (!found) {
        throw SolverError("the metric does not change sign for " + param + " in [" + std::to_string(from) + ", " +
                          std::to_string(to) + "]");
    }
    for (int it = 0; it < 60 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

/// A coarse view of a discrete strategy: the atom at zero plus bins of nodes,
/// each represented by its mass-weighted mean score.
struct CoarseMeasure {
    std::vector<double> score;
    std::vector<double> mass;
    std::vector<double> top;  ///< largest node score inside the bin
};

CoarseMeasure coarsen(const StrategyDistribution& d, std::size_t last, std::size_t bins) {
    CoarseMeasure out;
    out.score.push_back(0.0);
    out.mass.push_back(d.mass(0));
    out.top.push_back(0.0);
    const std::size_t width = std::max<std::size_t>(1, (last + bins - 1) / bins);
    for (std::size_t start = 1; start <= last; start += width) {
        double m = 0.0, ms = 0.0, top = 0.0;
        for (std::size_t k = start; k < start + width && k <= last; ++k) {
            const double mk = d.mass(k);
            m += mk;
            ms += mk * d.grid.node(k);
            top = d.grid.node(k);
        }
        if (m > 0.0) {
            out.score.push_back(ms / m);
            out.mass.push_back(m);
            out.top.push_back(top);
        }
    }
    return out;
}

}  // namespace

ParticipationReport participation_check(const MultiContestSpec& multi, std::size_t i, std::size_t j,
                                        std::size_t grid_cells, double tolerance, std::size_t profile_samples) {
    const std::size_t n = multi.size();
    if (i >= n || j >= n || i == j) throw SpecError("participation check needs two distinct players");
    ParticipationReport report;
    report.duo = {i, j};
    report.tolerance = tolerance;

    const ContestSpec duo = multi.restrict_to_duo(i, j);
    const Grid grid(grid_cells, choose_horizon(duo));
    const Equilibrium eq = assemble(duo, grid);
    report.s_bar = eq.s_bar;
    report.duo_payoffs = eq.payoffs;
    report.duo_atoms = {eq.atom(Player::one), eq.atom(Player::two)};
    report.hypothesis_holds = eq.payoffs[0] > 0.0;
    const double payoff_floor = 2.0 / static_cast<double>(grid_cells);
    if (eq.payoffs[0] > payoff_floor) report.positive_payoff_player = i;
    else if (eq.payoffs[1] > payoff_floor) report.positive_payoff_player = j;

    const std::size_t last = std::min(grid.cells(), grid.floor_index(eq.s_bar) + 1);
    const CoarseMeasure mi = coarsen(eq.strategy(Player::one), last, 200);
    const CoarseMeasure mj = coarsen(eq.strategy(Player::two), last, 200);

    // profile samples for the ranked-costs condition: zero plus points of [0, s̄]
    std::vector<double> profile{0.0};
    for (std::size_t m = 1; m <= profile_samples; ++m) {
        profile.push_back(eq.s_bar * static_cast<double>(m) / static_cast<double>(profile_samples));
    }

    std::vector<double> scores(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        OutsiderReport out;
        out.player = k;
        const auto& cost_k = multi.player(k).cost;
        const auto& cost_j = multi.player(j).cost;

        for (std::size_t a = 1; a < profile.size() && out.ranked_costs_hold; ++a) {
            const double s = profile[a];
            for (double si : profile) {
                std::fill(scores.begin(), scores.end(), 0.0);
                scores[i] = si;
                const double vj = multi.value(j, s, scores);
                for (double sj : profile) {
                    scores[j] = sj;
                    const double vk = multi.value(k, s, scores);
                    if (!(vj > kSlack)) continue;
                    const double lhs = vk > kSlack ? cost_k(s) / vk : std::numeric_limits<double>::infinity();
                    if (lhs < cost_j(s) / vj - kSlack) {
                        out.ranked_costs_hold = false;
                        out.first_violation = std::array<double, 3>{s, si, sj};
                        break;
                    }
                }
                if (!out.ranked_costs_hold) break;
            }
        }

        // entry payoffs at up to 400 scores in (0, T]
        const std::size_t stride = std::max<std::size_t>(1, grid.cells() / 400);
        out.best_deviation_payoff = -std::numeric_limits<double>::infinity();
        for (std::size_t node = stride; node <= grid.cells(); node += stride) {
            const double s = grid.node(node);
            double u = 0.0;
            std::fill(scores.begin(), scores.end(), 0.0);
            for (std::size_t a = 0; a < mi.score.size() && mi.top[a] <= s; ++a) {
                scores[i] = mi.score[a];
                for (std::size_t b = 0; b < mj.score.size() && mj.top[b] <= s; ++b) {
                    scores[j] = mj.score[b];
                    u += mi.mass[a] * mj.mass[b] * multi.value(k, s, scores);
                }
            }
            u -= cost_k(s);
            if (u > out.best_deviation_payoff) {
                out.best_deviation_payoff = u;
                out.best_deviation_score = s;
            }
        }
        report.outsiders.push_back(out);
    }
    report.certified = std::all_of(report.outsiders.begin(), report.outsiders.end(),
                                   [&](const OutsiderReport& o) { return o.best_deviation_payoff <= tolerance; });
    return report;
}

BalanceResult balance_prize(const ContestSpec& spec, const Grid& grid) {
    const Equilibrium eq = assemble(spec, grid);
    std::optional<Player> atom_player;
    for (Player p : kPlayers) {
        if (eq.atom(p) > 0.0) atom_player = p;
    }
    if (!atom_player) return BalanceResult{1.0, std::nullopt, spec};
    const double gamma = 1.0 - eq.raw_atoms[index(*atom_player)];
    if (!(gamma > 0.0)) throw SolverError("the atom player never participates; no positive scale balances the prize");
    const Player scaled = other(*atom_player);
    return BalanceResult{gamma, scaled, spec.with_value_scale(scaled, gamma)};
}

}  // namespace spillover
