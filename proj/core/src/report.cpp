#include "spillover/report.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace spillover {

namespace {

using json = nlohmann::json;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json optional_number(const std::optional<double>& x) { return x ? number_or_null(*x) : json(nullptr); }

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_equilibrium_csv(const Equilibrium& eq, std::ostream& out) {
    const auto& a = eq.strategy(Player::one);
    const auto& b = eq.strategy(Player::two);
    out << "node,G1,G2,g1,g2\n";
    for (std::size_t k = 0; k < a.cdf.size(); ++k) {
        out << format_double(a.grid.node(k)) << ',' << format_double(a.cdf[k]) << ',' << format_double(b.cdf[k])
            << ',' << format_double(a.density[k]) << ',' << format_double(b.density[k]) << '\n';
    }
}

std::string equilibrium_summary_json(const Equilibrium& eq) {
    json doc;
    doc["family"] = eq.spec.config().family;
    doc["grid"] = {{"cells", eq.grid().cells()}, {"horizon", eq.grid().horizon()}};
    doc["method"] = std::string(method_name(eq.raw[0].method));
    doc["s_bar"] = eq.s_bar;
    doc["s_bar_raw"] = {optional_number(eq.upper_bounds_raw[0]), optional_number(eq.upper_bounds_raw[1])};
    doc["atoms"] = {eq.atom(Player::one), eq.atom(Player::two)};
    doc["atoms_raw"] = {eq.raw_atoms[0], eq.raw_atoms[1]};
    doc["payoffs"] = {eq.payoffs[0], eq.payoffs[1]};
    doc["theorem2_bound"] = {theorem2_bound(eq, Player::one), theorem2_bound(eq, Player::two)};
    doc["win_prob"] = {win_probability(eq, Player::one), win_probability(eq, Player::two)};
    doc["expected_scores"] = {expected_score(eq, Player::one), expected_score(eq, Player::two)};
    doc["expected_min_score"] = expected_min_score(eq);
    if (eq.raw[0].method == SolveMethod::picard) {
        doc["picard_iterations"] = {eq.raw[0].iterations, eq.raw[1].iterations};
    }
    return doc.dump(2) + "\n";
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << "param_value,payoff_1,payoff_2,atom_1,atom_2,s_bar,win_prob_1\n";
    for (const auto& p : result.points) {
        out << format_double(p.value) << ',' << format_double(p.payoffs[0]) << ',' << format_double(p.payoffs[1])
            << ',' << format_double(p.atoms[0]) << ',' << format_double(p.atoms[1]) << ',' << format_double(p.s_bar)
            << ',' << format_double(p.win_prob_1) << '\n';
    }
}

std::string sweep_summary_json(const SweepResult& result) {
    json doc;
    doc["parameter"] = result.parameter;
    doc["crossover"] = optional_number(result.crossover);
    json points = json::array();
    for (const auto& p : result.points) {
        points.push_back({{"param_value", p.value},
                          {"payoffs", {p.payoffs[0], p.payoffs[1]}},
                          {"atoms", {p.atoms[0], p.atoms[1]}},
                          {"s_bar", p.s_bar},
                          {"win_prob_1", p.win_prob_1}});
    }
    doc["points"] = points;
    return doc.dump(2) + "\n";
}

std::string participation_json(const ParticipationReport& report) {
    json doc;
    doc["duo"] = {report.duo.first + 1, report.duo.second + 1};
    doc["s_bar"] = report.s_bar;
    doc["duo_payoffs"] = {report.duo_payoffs[0], report.duo_payoffs[1]};
    doc["duo_atoms"] = {report.duo_atoms[0], report.duo_atoms[1]};
    doc["hypothesis_holds"] = report.hypothesis_holds;
    doc["positive_payoff_player"] =
        report.positive_payoff_player ? json(*report.positive_payoff_player + 1) : json(nullptr);
    json outsiders = json::array();
    for (const auto& o : report.outsiders) {
        json entry{{"player", o.player + 1},
                   {"ranked_costs_hold", o.ranked_costs_hold},
                   {"best_deviation_payoff", number_or_null(o.best_deviation_payoff)},
                   {"best_deviation_score", o.best_deviation_score}};
        if (o.first_violation) {
            const auto& v = *o.first_violation;
            entry["first_violation"] = {{"s", v[0]}, {"s_i", v[1]}, {"s_j", v[2]}};
        }
        outsiders.push_back(entry);
    }
    doc["outsiders"] = outsiders;
    doc["tolerance"] = report.tolerance;
    doc["certified"] = report.certified;
    return doc.dump(2) + "\n";
}

}  // namespace spillover
