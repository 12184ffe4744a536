#include "spillover/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "spillover/error.hpp"

namespace spillover {

namespace {

/// Cumulative integral of f sampled at equally spaced nodes 0..M with step h:
/// Simpson on each panel [2m, 2m+2], and the quadratic through a panel's three
/// nodes for the half-panel ending at an odd node.
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    const std::size_t m = f.size() - 1;
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t k = 0; k + 2 <= m; k += 2) {
        out[k + 1] = out[k] + h * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2]) / 12.0;
        out[k + 2] = out[k] + h * (f[k] + 4.0 * f[k + 1] + f[k + 2]) / 3.0;
    }
    if (m % 2 == 1) {
        // last odd node: quadratic through m-2, m-1, m
        out[m] = out[m - 1] + h * (-f[m - 2] + 8.0 * f[m - 1] + 5.0 * f[m]) / 12.0;
    }
    return out;
}

void check_separable(const PlayerSpec& opp, double horizon) {
    constexpr int kSamples = 16;
    for (int a = 1; a <= kSamples; ++a) {
        const double s = horizon * a / kSamples;
        const double base = opp.value.d_own(s, 0.0);
        for (int b = 1; b <= a; ++b) {
            const double y = s * b / a;
            const double d = opp.value.d_own(s, y);
            if (std::abs(d - base) > 1e-6 * (1.0 + std::abs(base))) {
                throw SpecError("value function is not additively separable: dv/ds depends on y at s = " +
                                std::to_string(s));
            }
        }
    }
}

/// Smallest s in (0, hi] with G(s) = 1 for nondecreasing G, by bisection.
std::optional<double> solve_unit(const std::function<double(double)>& G, double hi) {
    if (!(G(hi) >= 1.0)) return std::nullopt;
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (G(mid) >= 1.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Fills s̄ and the atoms from the raw CDFs and their s̄_i.
void finish(ClosedFormSolution& sol) {
    const auto& b = sol.upper_bound_raw;
    if (!b[0] && !b[1]) throw SolverError("closed form: neither raw CDF reaches one");
    const double s_bar = std::min(b[0].value_or(INFINITY), b[1].value_or(INFINITY));
    sol.s_bar = s_bar;
    for (std::size_t i = 0; i < 2; ++i) {
        const bool bounding = b[i] && *b[i] == s_bar;
        sol.atoms[i] = bounding ? 0.0 : std::clamp(1.0 - (*sol.raw_cdf[i])(s_bar), 0.0, 1.0);
    }
}

ScalarFunc1 fn(std::string description, std::function<double(double)> value, std::function<double(double)> deriv) {
    return ScalarFunc1(FuncKind::builtin, std::move(description), std::move(value), std::move(deriv));
}

double get(const ParamMap& p, const char* key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

double require(const ParamMap& p, const char* key) {
    const auto it = p.find(key);
    if (it == p.end()) throw SpecError(std::string("closed form: missing parameter '") + key + "'");
    return it->second;
}

ClosedFormSolution woa_costly_prep(const ParamMap& p) {
    // Validates the parameters the same way the solver would.
    (void)make_family("woa_costly_prep", p);
    ClosedFormSolution sol;
    sol.family = "woa_costly_prep";
    sol.provenance = "war of attrition with costly preparation, affine f and l";
    const double delta = get(p, "delta", NAN);
    for (std::size_t i = 0; i < 2; ++i) {
        // G̃_i is pinned down by the opponent's primitives
        const std::string o = std::to_string(2 - i);
        const double f0 = require(p, ("f" + o + "_0").c_str());
        const double fs = get(p, ("f" + o + "_slope").c_str(), 1.0);
        const double l = get(p, ("l" + o).c_str(), 1.0);
        const double d = get(p, ("delta" + o).c_str(), delta);
        const double kappa = l - fs;  // v(s;s) = f0 + kappa s
        std::function<double(double)> G, g;
        if (l > 0.0) {
            const double scale = (d + l) / l;
            if (kappa == 0.0) {
                G = [=](double s) { return scale * -std::expm1(-l * s / f0); };
                g = [=](double s) { return (d + l) / f0 * std::exp(-l * s / f0); };
            } else {
                G = [=](double s) { return scale * (1.0 - std::pow(f0 / (f0 + kappa * s), l / kappa)); };
                g = [=](double s) { return (d + l) / f0 * std::pow(f0 / (f0 + kappa * s), l / kappa + 1.0); };
            }
        } else if (fs > 0.0) {
            G = [=](double s) { return -(d / fs) * std::log1p(-fs * s / f0); };
            g = [=](double s) { return d / (f0 - fs * s); };
        } else {
            G = [=](double s) { return d * s / f0; };
            g = [=](double) { return d / f0; };
        }
        sol.raw_cdf[i] = fn("G~" + std::to_string(i + 1), G, g);
        sol.raw_density[i] = fn("g~" + std::to_string(i + 1), g, [](double) { return NAN; });
        // bracket the crossing; with kappa < 0 the tie value vanishes at -f0/kappa
        double hi = 1.0;
        if (kappa < 0.0) {
            hi = -f0 / kappa * (1.0 - 1e-9);
        } else {
            while (hi < 1e6 && !(G(hi) >= 1.0)) hi *= 2.0;
        }
        sol.upper_bound_raw[i] = solve_unit(G, hi);
    }
    finish(sol);
    return sol;
}

ClosedFormSolution offense_defense(const ParamMap& p) {
    (void)make_family("offense_defense", p);
    const double V = require(p, "V"), da = require(p, "delta_a"), ca = require(p, "c_a"), cd = require(p, "c_d");
    ClosedFormSolution sol;
    sol.family = "offense_defense";
    sol.provenance = "offense/defense contest";
    // attacker (player 1): solved from the defender's primitives
    if (da > 0.0) {
        sol.raw_cdf[0] = fn(
            "G~a", [=](double s) { return (cd / da) * std::log(V / (V - da * s)); },
            [=](double s) { return cd / (V - da * s); });
        sol.upper_bound_raw[0] = (V / da) * -std::expm1(-da / cd);
        sol.win_probability_1 = (cd / (da * da)) * (da + ca * std::log(ca / (ca + da)));
    } else {
        sol.raw_cdf[0] = fn("G~a", [=](double s) { return cd * s / V; }, [=](double) { return cd / V; });
        sol.upper_bound_raw[0] = V / cd;
    }
    sol.raw_density[0] = fn("g~a", [=](double s) { return cd / (V - da * s); }, [](double) { return NAN; });
    sol.raw_cdf[1] = fn(
        "G~d", [=](double s) { return ca * s / (V - da * s); },
        [=](double s) { return ca * V / ((V - da * s) * (V - da * s)); });
    sol.raw_density[1] = fn(
        "g~d", [=](double s) { return ca * V / ((V - da * s) * (V - da * s)); }, [](double) { return NAN; });
    sol.upper_bound_raw[1] = V / (ca + da);
    finish(sol);
    return sol;
}

ClosedFormSolution exp_investment(const ParamMap& p) {
    (void)make_family("exp_investment", p);
    const std::array<double, 2> w{require(p, "omega1"), require(p, "omega2")};
    const std::array<double, 2> r{require(p, "r1"), require(p, "r2")};
    ClosedFormSolution sol;
    sol.family = "exp_investment";
    sol.provenance = "war of investment; uniform strategies g~_i = r_{-i}/omega_{-i}";
    for (std::size_t i = 0; i < 2; ++i) {
        const double g = r[1 - i] / w[1 - i];
        sol.raw_cdf[i] = fn("G~", [g](double s) { return g * s; }, [g](double) { return g; });
        sol.raw_density[i] = fn("g~", [g](double) { return g; }, [](double) { return 0.0; });
        sol.upper_bound_raw[i] = 1.0 / g;
    }
    finish(sol);
    const double lo = std::min(*sol.upper_bound_raw[0], *sol.upper_bound_raw[1]);
    const double hi = std::max(*sol.upper_bound_raw[0], *sol.upper_bound_raw[1]);
    const double delta = lo / hi;  // the atom is 1 - delta
    sol.expected_min_score = delta * lo / 3.0;
    return sol;
}

ClosedFormSolution winners_regret(const ParamMap& p) {
    (void)make_family("winners_regret", p);
    const std::array<double, 2> w{require(p, "omega1"), require(p, "omega2")};
    ClosedFormSolution sol;
    sol.family = "winners_regret";
    sol.provenance = "winner's regret; g~_i = exp(-s)/omega_{-i}";
    for (std::size_t i = 0; i < 2; ++i) {
        const double wo = w[1 - i];
        sol.raw_cdf[i] = fn(
            "G~", [wo](double s) { return -std::expm1(-s) / wo; }, [wo](double s) { return std::exp(-s) / wo; });
        sol.raw_density[i] = fn(
            "g~", [wo](double s) { return std::exp(-s) / wo; }, [wo](double s) { return -std::exp(-s) / wo; });
        sol.upper_bound_raw[i] = -std::log1p(-wo);
    }
    finish(sol);
    // the player without an atom has E[s] = 1 + ((1 - w)/w) log(1 - w), w the opponent's weight
    for (std::size_t i = 0; i < 2; ++i) {
        if (sol.atoms[i] == 0.0) {
            const double wo = w[1 - i];
            sol.expected_score[i] = 1.0 + ((1.0 - wo) / wo) * std::log1p(-wo);
        }
    }
    return sol;
}

}  // namespace

ClosedFormSolution addsep_cdf(const ContestSpec& spec, Player player, const Grid& grid) {
    const PlayerSpec& opp = spec.opponent(player);
    check_separable(opp, grid.horizon());

    const std::size_t m = 10 * grid.cells();
    const double h = grid.horizon() / static_cast<double>(m);
    std::vector<double> xs(m + 1);
    for (std::size_t k = 0; k <= m; ++k) xs[k] = k == m ? grid.horizon() : static_cast<double>(k) * h;
    // stop where the tie value is no longer positive
    std::size_t last = m;
    for (std::size_t k = 0; k <= m; ++k) {
        if (!(opp.value(xs[k], xs[k]) > 1e-12)) {
            last = k == 0 ? 0 : k - 1;
            break;
        }
    }
    if (last < 2) throw SolverError("additive-separable oracle: v(s;s) is not positive near zero");
    xs.resize(last + 1);

    std::vector<double> a(xs.size()), f(xs.size()), G(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) a[k] = opp.value.d_own(xs[k], xs[k]) / opp.value(xs[k], xs[k]);
    const std::vector<double> log_f = cumulative_simpson(a, h);
    std::vector<double> integrand(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        integrand[k] = opp.cost.derivative(xs[k]) / opp.value(xs[k], xs[k]) * std::exp(log_f[k]);
    }
    const std::vector<double> outer = cumulative_simpson(integrand, h);
    for (std::size_t k = 0; k < xs.size(); ++k) G[k] = outer[k] * std::exp(-log_f[k]);

    ClosedFormSolution sol;
    sol.family = spec.config().family;
    sol.provenance = "additively separable spillovers (integrating factor)";
    const std::size_t i = index(player);
    for (std::size_t k = 1; k < G.size(); ++k) {
        if (G[k] >= 1.0) {
            const double t = (1.0 - G[k - 1]) / (G[k] - G[k - 1]);
            sol.upper_bound_raw[i] = xs[k - 1] + t * (xs[k] - xs[k - 1]);
            break;
        }
    }
    sol.raw_cdf[i] = ScalarFunc1::tabulated(xs, std::move(G), "additive-separable G~");
    return sol;
}

bool has_application_solution(std::string_view family) noexcept {
    return family == "woa_costly_prep" || family == "offense_defense" || family == "exp_investment" ||
           family == "winners_regret";
}

ClosedFormSolution application_solution(std::string_view family, const ParamMap& params) {
    if (family == "woa_costly_prep") return woa_costly_prep(params);
    if (family == "offense_defense") return offense_defense(params);
    if (family == "exp_investment") return exp_investment(params);
    if (family == "winners_regret") return winners_regret(params);
    throw SpecError("no closed-form solution for family '" + std::string(family) + "'");
}

}  // namespace spillover
