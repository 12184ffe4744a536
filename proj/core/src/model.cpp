#include "spillover/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "spillover/error.hpp"

namespace spillover {

namespace {

constexpr double kSlack = 1e-12;
constexpr std::size_t kYSamples = 64;

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string player_label(Player p) { return "player " + std::to_string(number(p)); }

/// Reads family parameters, tracking which keys were consumed so leftovers can
/// be reported as unknown.
class ParamReader {
public:
    ParamReader(std::string_view family, const ParamMap& params) : family_(family), params_(params) {}

    double required(const std::string& key) {
        used_.insert(key);
        const auto it = params_.find(key);
        if (it == params_.end()) {
            throw SpecError("family '" + family_ + "': missing parameter '" + key + "'");
        }
        return check_finite(key, it->second);
    }

    double optional(const std::string& key, double fallback) {
        used_.insert(key);
        const auto it = params_.find(key);
        return it == params_.end() ? fallback : check_finite(key, it->second);
    }

    [[nodiscard]] bool has(const std::string& key) const { return params_.count(key) != 0; }

    void positive(const std::string& key, double x) const {
        if (!(x > 0.0)) fail(key, x, "must be > 0");
    }
    void non_negative(const std::string& key, double x) const {
        if (!(x >= 0.0)) fail(key, x, "must be >= 0");
    }
    void open_interval(const std::string& key, double x, double lo, double hi) const {
        if (!(x > lo && x < hi)) fail(key, x, "must lie in (" + fmt(lo) + ", " + fmt(hi) + ")");
    }
    [[noreturn]] void fail(const std::string& key, double x, const std::string& why) const {
        throw SpecError("family '" + family_ + "': parameter '" + key + "' = " + fmt(x) + " " + why);
    }

    void reject_unknown() const {
        for (const auto& [key, value] : params_) {
            if (used_.count(key) == 0) {
                throw SpecError("family '" + family_ + "': unknown parameter '" + key + "'");
            }
        }
    }

private:
    double check_finite(const std::string& key, double x) const {
        if (!std::isfinite(x)) fail(key, x, "must be finite");
        return x;
    }

    std::string family_;
    const ParamMap& params_;
    std::set<std::string> used_;
};

ScalarFunc1 linear_cost(double slope) {
    return ScalarFunc1(FuncKind::builtin, fmt(slope) + "*s", [slope](double s) { return slope * s; },
                       [slope](double) { return slope; });
}

ScalarFunc2 affine_value(double base, double own, double opp) {
    return ScalarFunc2(
        FuncKind::builtin, fmt(base) + " + " + fmt(own) + "*s + " + fmt(opp) + "*y",
        [=](double s, double y) { return base + own * s + opp * y; }, [own](double, double) { return own; },
        [opp](double, double) { return opp; });
}

// logistic sigma(t) = 1 / (1 + e^t), evaluated without overflow
double logistic(double t) {
    if (t > 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

ContestSpec constant_prize(const ParamMap& params) {
    ParamReader r("constant_prize", params);
    const double v = r.optional("v", 1.0);
    const double c = r.optional("c_slope", 1.0);
    const std::array<double, 2> vs{r.optional("v1", v), r.optional("v2", v)};
    const std::array<double, 2> cs{r.optional("c1_slope", c), r.optional("c2_slope", c)};
    r.reject_unknown();
    std::array<PlayerSpec, 2> players{
        PlayerSpec{affine_value(vs[0], 0, 0), linear_cost(cs[0]), "player 1"},
        PlayerSpec{affine_value(vs[1], 0, 0), linear_cost(cs[1]), "player 2"},
    };
    for (int i = 0; i < 2; ++i) {
        r.positive(i == 0 ? "v1" : "v2", vs[i]);
        r.positive(i == 0 ? "c1_slope" : "c2_slope", cs[i]);
    }
    return ContestSpec(std::move(players), 0.5, std::nullopt);
}

ContestSpec affine_spillover(const ParamMap& params) {
    ParamReader r("affine_spillover", params);
    std::array<PlayerSpec, 2> players{
        PlayerSpec{affine_value(0, 0, 0), linear_cost(1), ""},
        PlayerSpec{affine_value(0, 0, 0), linear_cost(1), ""},
    };
    for (int i = 1; i <= 2; ++i) {
        const std::string n = std::to_string(i);
        const double base = r.required("base" + n);
        const double own = r.optional("own" + n, 0.0);
        const double opp = r.optional("opp" + n, 0.0);
        const double cost = r.required("cost" + n);
        r.positive("base" + n, base);
        r.positive("cost" + n, cost);
        players[i - 1] = PlayerSpec{affine_value(base, own, opp), linear_cost(cost), "player " + n};
    }
    r.reject_unknown();
    return ContestSpec(std::move(players), 0.5, std::nullopt);
}

ContestSpec logistic_spillover(const ParamMap& params) {
    ParamReader r("logistic_spillover", params);
    const double lambda = r.required("lambda");
    const double base = r.optional("base", 0.4);
    const std::array<double, 2> power{r.optional("c1_power", 2.0), r.optional("c2_power", 1.0)};
    r.reject_unknown();
    r.non_negative("lambda", lambda);
    r.positive("base", base);
    for (int i = 0; i < 2; ++i) {
        if (!(power[i] >= 1.0)) r.fail(i == 0 ? "c1_power" : "c2_power", power[i], "must be >= 1");
    }

    const ScalarFunc2 value(
        FuncKind::builtin, fmt(base) + " + 1/(1 + exp(" + fmt(lambda) + "*(2*y - 1)))",
        [=](double, double y) { return base + logistic(lambda * (2.0 * y - 1.0)); },
        [](double, double) { return 0.0; },
        [=](double, double y) {
            const double sg = logistic(lambda * (2.0 * y - 1.0));
            return -2.0 * lambda * sg * (1.0 - sg);
        });
    auto power_cost = [](double p) {
        return ScalarFunc1(
            FuncKind::builtin, "s^" + fmt(p), [p](double s) { return std::pow(s, p); },
            [p](double s) { return p == 1.0 ? 1.0 : p * std::pow(s, p - 1.0); });
    };
    std::array<PlayerSpec, 2> players{
        PlayerSpec{value, power_cost(power[0]), "player 1"},
        PlayerSpec{value, power_cost(power[1]), "player 2"},
    };
    return ContestSpec(std::move(players), 0.5, std::nullopt);
}

/// War of attrition with costly preparation: v_i(s;y) = f_i(y) - l_i(s) with
/// f_i(y) = f_i0 - f_i_slope*y and l_i(s) = -l_i*s, cost c_i = eps_i(s) - l_i(s)
/// where eps_i(s) = delta_i*s.
ContestSpec woa(std::string_view family, const ParamMap& params, bool uncompromising) {
    ParamReader r(family, params);
    std::array<double, 2> f0{}, fs{}, l{}, d{};
    for (int i = 0; i < 2; ++i) {
        const std::string n = std::to_string(i + 1);
        f0[i] = r.required("f" + n + "_0");
        fs[i] = r.optional("f" + n + "_slope", 1.0);
        l[i] = r.optional("l" + n, 1.0);
        r.positive("f" + n + "_0", f0[i]);
        r.non_negative("f" + n + "_slope", fs[i]);
        r.non_negative("l" + n, l[i]);
    }
    if (uncompromising) {
        const std::array<double, 2> z{r.required("z1"), r.required("z2")};
        r.open_interval("z1", z[0], 0.0, 1.0);
        r.open_interval("z2", z[1], 0.0, 1.0);
        for (int i = 0; i < 2; ++i) d[i] = l[i] * z[1 - i] / (1.0 - z[1 - i]);
        for (int i = 0; i < 2; ++i) {
            if (!(d[i] > 0.0)) r.fail("l" + std::to_string(i + 1), l[i], "must be > 0 for uncompromising types");
        }
    } else {
        if (r.has("delta")) {
            const double delta = r.required("delta");
            d = {r.optional("delta1", delta), r.optional("delta2", delta)};
        } else {
            d = {r.required("delta1"), r.required("delta2")};
        }
        r.positive("delta1", d[0]);
        r.positive("delta2", d[1]);
    }
    r.reject_unknown();

    std::array<PlayerSpec, 2> players{
        PlayerSpec{affine_value(f0[0], l[0], -fs[0]), linear_cost(d[0] + l[0]), "player 1"},
        PlayerSpec{affine_value(f0[1], l[1], -fs[1]), linear_cost(d[1] + l[1]), "player 2"},
    };
    return ContestSpec(std::move(players), 0.5, std::nullopt);
}

ContestSpec offense_defense(const ParamMap& params) {
    ParamReader r("offense_defense", params);
    const double V = r.required("V");
    const double delta = r.required("delta_a");
    const double ca = r.required("c_a");
    const double cd = r.required("c_d");
    r.reject_unknown();
    r.positive("V", V);
    r.non_negative("delta_a", delta);
    r.positive("c_a", ca);
    r.positive("c_d", cd);
    std::array<PlayerSpec, 2> players{
        PlayerSpec{affine_value(V, -delta, 0.0), linear_cost(ca), "attacker"},
        PlayerSpec{affine_value(V, 0.0, -delta), linear_cost(cd), "defender"},
    };
    return ContestSpec(std::move(players), 0.5, std::nullopt);
}

ContestSpec exp_investment(const ParamMap& params) {
    ParamReader r("exp_investment", params);
    std::array<PlayerSpec, 2> players{
        PlayerSpec{affine_value(0, 0, 0), linear_cost(1), ""},
        PlayerSpec{affine_value(0, 0, 0), linear_cost(1), ""},
    };
    for (int i = 1; i <= 2; ++i) {
        const std::string n = std::to_string(i);
        const double w = r.required("omega" + n);
        const double rate = r.required("r" + n);
        r.open_interval("omega" + n, w, 0.0, 1.0);
        r.open_interval("r" + n, rate, 0.0, 1.0);
        ScalarFunc2 value(
            FuncKind::builtin, fmt(w) + "*exp(" + fmt(rate) + "*(s - y))",
            [=](double s, double y) { return w * std::exp(rate * (s - y)); },
            [=](double s, double y) { return rate * w * std::exp(rate * (s - y)); },
            [=](double s, double y) { return -rate * w * std::exp(rate * (s - y)); });
        ScalarFunc1 cost(
            FuncKind::builtin, "exp(" + fmt(rate) + "*s) - 1", [rate](double s) { return std::expm1(rate * s); },
            [rate](double s) { return rate * std::exp(rate * s); });
        players[i - 1] = PlayerSpec{std::move(value), std::move(cost), "player " + n};
    }
    r.reject_unknown();
    return ContestSpec(std::move(players), 0.5, std::nullopt);
}

ContestSpec winners_regret(const ParamMap& params) {
    ParamReader r("winners_regret", params);
    std::array<PlayerSpec, 2> players{
        PlayerSpec{affine_value(0, 0, 0), linear_cost(1), ""},
        PlayerSpec{affine_value(0, 0, 0), linear_cost(1), ""},
    };
    const ScalarFunc1 cost(
        FuncKind::builtin, "s - s^2/2", [](double s) { return s - 0.5 * s * s; }, [](double s) { return 1.0 - s; });
    for (int i = 1; i <= 2; ++i) {
        const std::string n = std::to_string(i);
        const double w = r.required("omega" + n);
        if (!(w > 0.0 && w <= 0.5)) r.fail("omega" + n, w, "must lie in (0, 0.5]");
        ScalarFunc2 value(
            FuncKind::builtin, fmt(w) + "*(1 - (s - y)^2/2)",
            [w](double s, double y) { return w * (1.0 - 0.5 * (s - y) * (s - y)); },
            [w](double s, double y) { return -w * (s - y); }, [w](double s, double y) { return w * (s - y); });
        players[i - 1] = PlayerSpec{std::move(value), cost, "player " + n};
    }
    r.reject_unknown();
    // the cost is only increasing on [0, 1]
    return ContestSpec(std::move(players), 0.5, 1.0);
}

struct Probe {
    bool finite = true;
    double value = 0.0;
};

}  // namespace

// ---------------------------------------------------------------------------

ContestSpec::ContestSpec(std::array<PlayerSpec, 2> players, double tie_weight, std::optional<double> horizon_hint,
                         ContestConfig origin)
    : players_(std::move(players)), tie_weight_(tie_weight), horizon_hint_(horizon_hint), origin_(std::move(origin)) {
    if (!(tie_weight >= 0.0 && tie_weight <= 1.0)) {
        throw SpecError("tie_weight must lie in [0, 1], got " + fmt(tie_weight));
    }
    if (horizon_hint && !(*horizon_hint > 0.0 && std::isfinite(*horizon_hint))) {
        throw SpecError("horizon must be a positive finite number, got " + fmt(*horizon_hint));
    }
}

ContestSpec ContestSpec::with_value_scale(Player p, double gamma) const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw SpecError("value scale must be positive, got " + fmt(gamma));
    ContestSpec out = *this;
    auto& pl = out.players_[index(p)];
    pl.value = pl.value.scaled(gamma);
    out.origin_.value_scale[index(p)] *= gamma;
    return out;
}

ContestSpec ContestSpec::with_horizon(double horizon) const {
    ContestSpec out = *this;
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw SpecError("horizon must be positive, got " + fmt(horizon));
    out.horizon_hint_ = horizon;
    out.origin_.horizon = horizon;
    return out;
}

const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names{
        "constant_prize",  "affine_spillover", "logistic_spillover", "woa_costly_prep", "woa_uncompromising",
        "offense_defense", "exp_investment",   "winners_regret",     "expr",
    };
    return names;
}

ContestSpec make_family(std::string_view name, const ParamMap& params) {
    ContestConfig cfg;
    cfg.family = std::string(name);
    cfg.params = params;
    if (name == "expr") throw SpecError("family 'expr' needs expression strings; use make_contest");
    return make_contest(cfg);
}

namespace {

ContestSpec build_family(const ContestConfig& config) {
    const std::string& name = config.family;
    const ParamMap& params = config.params;
    if (name == "constant_prize") return constant_prize(params);
    if (name == "affine_spillover") return affine_spillover(params);
    if (name == "logistic_spillover") return logistic_spillover(params);
    if (name == "woa_costly_prep") return woa(name, params, false);
    if (name == "woa_uncompromising") return woa(name, params, true);
    if (name == "offense_defense") return offense_defense(params);
    if (name == "exp_investment") return exp_investment(params);
    if (name == "winners_regret") return winners_regret(params);
    if (name == "expr") {
        std::array<PlayerSpec, 2> players{
            PlayerSpec{affine_value(0, 0, 0), linear_cost(1), ""},
            PlayerSpec{affine_value(0, 0, 0), linear_cost(1), ""},
        };
        for (int i = 0; i < 2; ++i) {
            const std::string n = std::to_string(i + 1);
            try {
                const expr::Expr v = expr::bind(expr::parse(config.value_exprs[i]), params);
                const expr::Expr c = expr::bind(expr::parse(config.cost_exprs[i]), params);
                for (const auto* e : {&v, &c}) {
                    const auto free = expr::free_parameters(*e);
                    if (!free.empty()) {
                        throw SpecError("unbound parameter '" + *free.begin() + "'");
                    }
                }
                players[i] = PlayerSpec{ScalarFunc2::from_expression(v, {}), ScalarFunc1::from_expression(c, {}),
                                        "player " + n};
            } catch (const ParseError& e) {
                throw SpecError("v" + n + "/c" + n + ": " + e.what());
            } catch (const SpecError& e) {
                throw SpecError("player " + n + ": " + e.what());
            }
        }
        return ContestSpec(std::move(players), 0.5, std::nullopt);
    }
    throw SpecError("unknown family '" + name + "'");
}

}  // namespace

ContestSpec make_contest(const ContestConfig& config) {
    ContestSpec base = build_family(config);
    std::array<PlayerSpec, 2> players{base.player(Player::one), base.player(Player::two)};
    for (std::size_t i = 0; i < 2; ++i) {
        const double g = config.value_scale[i];
        if (!(g > 0.0) || !std::isfinite(g)) throw SpecError("value_scale entries must be positive, got " + fmt(g));
        if (g != 1.0) players[i].value = players[i].value.scaled(g);
    }
    const std::optional<double> horizon = config.horizon ? config.horizon : base.horizon_hint();
    ContestConfig origin = config;
    return ContestSpec(std::move(players), config.tie_weight, horizon, std::move(origin));
}

// ---------------------------------------------------------------------------

std::string_view assumption_name(Assumption a) noexcept {
    switch (a) {
        case Assumption::smoothness: return "smoothness";
        case Assumption::monotonicity: return "monotonicity";
        case Assumption::interiority: return "interiority";
        case Assumption::tie_discontinuity: return "tie_discontinuity";
    }
    return "unknown";
}

bool ValidationReport::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (const auto& c : checks) {
        if (c.passed) continue;
        out << assumption_name(c.assumption) << ": ";
        if (c.first_violation) {
            const auto& v = *c.first_violation;
            out << player_label(v.player) << " at s=" << fmt(v.s) << ", y=" << fmt(v.y) << ": " << v.message;
        }
        out << '\n';
    }
    return out.str();
}

namespace {

/// y samples in [0, s], at most kYSamples of them, always including 0 and s.
std::vector<double> y_samples(double s) {
    if (s <= 0.0) return {0.0};
    std::vector<double> ys(kYSamples);
    for (std::size_t m = 0; m < kYSamples; ++m) {
        ys[m] = s * static_cast<double>(m) / static_cast<double>(kYSamples - 1);
    }
    ys.back() = s;
    return ys;
}

double sup_value(const ScalarFunc2& v, double s) {
    double best = -std::numeric_limits<double>::infinity();
    for (double y : y_samples(s)) best = std::max(best, v(s, y));
    return best;
}

class Recorder {
public:
    explicit Recorder(AssumptionCheck& check) : check_(check) {}
    void fail(Player p, double s, double y, std::string message) {
        if (!check_.passed) return;
        check_.passed = false;
        check_.first_violation = Violation{p, s, y, std::move(message)};
    }
    [[nodiscard]] bool failed() const { return !check_.passed; }

private:
    AssumptionCheck& check_;
};

template <class F>
bool finite_call(F&& f, double& out) {
    try {
        out = f();
    } catch (const Error&) {
        return false;
    }
    return std::isfinite(out);
}

}  // namespace

ValidationReport validate_assumptions(const ContestSpec& spec, const Grid& grid) {
    ValidationReport report{};
    for (std::size_t a = 0; a < 4; ++a) report.checks[a].assumption = static_cast<Assumption>(a);
    Recorder smooth(report.checks[0]);
    Recorder mono(report.checks[1]);
    Recorder inter(report.checks[2]);
    Recorder tie(report.checks[3]);

    const std::vector<double> nodes = grid.nodes();

    // A1: everything the solver touches is finite on 0 <= y <= s <= T.
    for (Player p : kPlayers) {
        const auto& pl = spec.player(p);
        for (double s : nodes) {
            double out = 0.0;
            if (!finite_call([&] { return pl.cost(s); }, out)) {
                smooth.fail(p, s, 0.0, "c(s) is not finite");
            }
            if (!finite_call([&] { return pl.cost.derivative(s); }, out)) {
                smooth.fail(p, s, 0.0, "c'(s) is not finite");
            }
            for (double y : y_samples(s)) {
                if (!finite_call([&] { return pl.value(s, y); }, out)) {
                    smooth.fail(p, s, y, "v(s;y) is not finite");
                } else if (!finite_call([&] { return pl.value.d_own(s, y); }, out)) {
                    smooth.fail(p, s, y, "dv/ds is not finite");
                } else if (!finite_call([&] { return pl.value.d_opp(s, y); }, out)) {
                    smooth.fail(p, s, y, "dv/dy is not finite");
                }
                if (smooth.failed()) break;
            }
            if (smooth.failed()) break;
        }
    }
    if (smooth.failed()) {
        // later checks would only trip over the same non-finite values
        for (auto* r : {&mono, &inter, &tie}) r->fail(report.checks[0].first_violation->player, 0, 0, "not checked: A1 failed");
        return report;
    }

    // A3: v(0;0) > c(0) = 0 and the score bound T_i.
    for (Player p : kPlayers) {
        const auto& pl = spec.player(p);
        const double c0 = pl.cost(0.0);
        if (std::abs(c0) > kSlack) inter.fail(p, 0.0, 0.0, "c(0) = " + fmt(c0) + " is not zero");
        const double v00 = pl.value(0.0, 0.0);
        if (!(v00 > kSlack)) inter.fail(p, 0.0, 0.0, "v(0;0) = " + fmt(v00) + " is not positive");
        for (double s : nodes) {
            if (sup_value(pl.value, s) < pl.cost(s) + kSlack) {
                report.score_bound[index(p)] = s;
                break;
            }
        }
    }

    // A2 on each player's own action space [0, T_i].
    for (Player p : kPlayers) {
        const auto& pl = spec.player(p);
        const double upper = report.score_bound[index(p)].value_or(grid.horizon());
        double prev_cost = pl.cost(0.0);
        for (std::size_t k = 0; k < nodes.size() && nodes[k] <= upper; ++k) {
            const double s = nodes[k];
            const double cd = pl.cost.derivative(s);
            if (k > 0) {
                const double c = pl.cost(s);
                if (!(c > prev_cost)) {
                    mono.fail(p, s, 0.0, "c is not strictly increasing");
                    break;
                }
                prev_cost = c;
            }
            std::size_t ties = 0;
            for (double y : y_samples(s)) {
                const double gap = pl.value.d_own(s, y) - cd;
                if (gap > kSlack) {
                    mono.fail(p, s, y, "dv/ds = " + fmt(pl.value.d_own(s, y)) + " exceeds c'(s) = " + fmt(cd));
                    break;
                }
                if (std::abs(gap) <= kSlack && ++ties > 1) {
                    mono.fail(p, s, y, "dv/ds equals c'(s) on a set of positive measure");
                    break;
                }
            }
            if (mono.failed()) break;
        }
    }

    // A4 on the joint action space.
    double joint = grid.horizon();
    for (const auto& b : report.score_bound) {
        if (b) joint = std::min(joint, *b);
    }
    for (Player p : kPlayers) {
        const auto& pl = spec.player(p);
        for (double s : nodes) {
            if (s >= joint && s > 0.0) break;  // v(s;s) may vanish exactly at the bound
            const double v = pl.value(s, s);
            if (!(v > kSlack)) {
                tie.fail(p, s, s, "v(s;s) = " + fmt(v) + " is not positive");
                break;
            }
        }
    }
    return report;
}

double choose_horizon(const ContestSpec& spec) {
    if (spec.horizon_hint()) return *spec.horizon_hint();
    double T = 1.0;
    for (int doubling = 0; doubling <= 20; ++doubling, T *= 2.0) {
        bool bounded = true;
        for (Player p : kPlayers) {
            const auto& pl = spec.player(p);
            double sup = 0.0, cost = 0.0;
            if (!finite_call([&] { return sup_value(pl.value, T); }, sup) ||
                !finite_call([&] { return pl.cost(T); }, cost) || !(sup < cost + kSlack)) {
                bounded = false;
                break;
            }
        }
        if (bounded) return T;
    }
    throw HorizonError("no horizon T <= 2^20 with sup_y v_i(T;y) < c_i(T) for both players; set \"horizon\"");
}

PlayerSpec transform_loser_spillovers(const ScalarFunc2& vhat, const ScalarFunc1& c_own, const ScalarFunc1& c_opp,
                                      std::string label) {
    if (std::abs(c_own(0.0)) > kSlack) throw SpecError("own cost must vanish at zero");
    ScalarFunc2 value(
        FuncKind::composite, vhat.description() + " + [" + c_opp.description() + "](y) + [" + c_own.description() + "](s)",
        [=](double s, double y) { return vhat(s, y) + c_opp(y) + c_own(s); },
        [=](double s, double y) { return vhat.d_own(s, y) + c_own.derivative(s); },
        [=](double s, double y) { return vhat.d_opp(s, y) + c_opp.derivative(y); });
    return PlayerSpec{std::move(value), c_own, std::move(label)};
}

// ---------------------------------------------------------------------------

namespace {

std::string slot_name(std::size_t k) { return "s" + std::to_string(k + 1); }

}  // namespace

MultiContestSpec::MultiContestSpec(std::vector<MultiPlayerSpec> players, ParamMap params, double tie_weight,
                                   std::optional<double> horizon_hint)
    : players_(std::move(players)), params_(std::move(params)), tie_weight_(tie_weight),
      horizon_hint_(horizon_hint) {
    if (players_.size() < 2) throw SpecError("a multi-player contest needs at least two players");
    if (!(tie_weight >= 0.0 && tie_weight <= 1.0)) throw SpecError("tie_weight must lie in [0, 1]");
    for (std::size_t k = 0; k < players_.size(); ++k) {
        if (expr::uses_variable(players_[k].value, expr::Variable::y)) {
            throw SpecError("player " + std::to_string(k + 1) + ": use s1..sn for opponents' scores, not 'y'");
        }
        expr::Expr bound = expr::bind(players_[k].value, params_);
        for (const auto& name : expr::free_parameters(bound)) {
            bool slot = false;
            for (std::size_t j = 0; j < players_.size(); ++j) slot = slot || name == slot_name(j);
            if (!slot) throw SpecError("player " + std::to_string(k + 1) + ": unbound parameter '" + name + "'");
        }
        bound_values_.push_back(std::move(bound));
    }
}

double MultiContestSpec::value(std::size_t k, double s, const std::vector<double>& scores) const {
    if (scores.size() != players_.size()) throw SpecError("score vector has the wrong length");
    ParamMap slots;
    for (std::size_t j = 0; j < scores.size(); ++j) slots[slot_name(j)] = j == k ? s : scores[j];
    return expr::eval(bound_values_.at(k), s, std::nullopt, slots);
}

ScalarFunc2 MultiContestSpec::value_against(std::size_t k, std::size_t varying) const {
    if (k >= size() || varying >= size() || k == varying) throw SpecError("invalid player pair");
    expr::Expr e = bound_values_[k];
    for (std::size_t j = 0; j < size(); ++j) {
        const expr::Expr replacement = j == varying ? expr::Expr::variable(expr::Variable::y)
                                       : j == k     ? expr::Expr::variable(expr::Variable::s)
                                                    : expr::Expr::literal(0.0);
        e = expr::substitute(e, slot_name(j), replacement);
    }
    return ScalarFunc2::from_expression(e, {});
}

ContestSpec MultiContestSpec::restrict_to_duo(std::size_t i, std::size_t j) const {
    std::array<PlayerSpec, 2> players{
        PlayerSpec{value_against(i, j), players_.at(i).cost, players_.at(i).label},
        PlayerSpec{value_against(j, i), players_.at(j).cost, players_.at(j).label},
    };
    return ContestSpec(std::move(players), tie_weight_, horizon_hint_);
}

}  // namespace spillover
