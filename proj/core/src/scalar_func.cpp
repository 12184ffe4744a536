#include "spillover/scalar_func.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

#include "spillover/error.hpp"

namespace spillover {

ScalarFunc1::ScalarFunc1(FuncKind kind, std::string description, Fn value, Fn derivative)
    : kind_(kind), description_(std::move(description)), value_(std::move(value)),
      derivative_(std::move(derivative)) {}

ScalarFunc1 ScalarFunc1::from_expression(const expr::Expr& e, const ParamMap& params) {
    expr::Expr bound = expr::bind(e, params);
    if (expr::uses_variable(bound, expr::Variable::y)) {
        throw SpecError("a one-argument function may only use the variable 's'");
    }
    static const ParamMap kNone;
    auto value = [bound](double s) { return expr::eval(bound, s, std::nullopt, kNone); };
    auto derivative = [bound](double s) {
        return expr::diff(bound, expr::Variable::s, s, std::nullopt, kNone);
    };
    return ScalarFunc1(FuncKind::expression, expr::print(bound), value, derivative);
}

ScalarFunc1 ScalarFunc1::tabulated(std::vector<double> xs, std::vector<double> ys, std::string description) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw Error("tabulated function needs at least two (x, y) pairs of equal length");
    }
    for (std::size_t k = 1; k < xs.size(); ++k) {
        if (!(xs[k] > xs[k - 1])) throw Error("tabulated abscissae must be strictly increasing");
    }
    struct Table {
        std::vector<double> x, y;
        [[nodiscard]] std::size_t segment(double s) const {
            const auto it = std::upper_bound(x.begin(), x.end(), s);
            const auto k = static_cast<std::size_t>(it - x.begin());
            return std::clamp<std::size_t>(k, 1, x.size() - 1);
        }
    };
    auto table = std::make_shared<const Table>(Table{std::move(xs), std::move(ys)});
    auto value = [table](double s) {
        if (s <= table->x.front()) return table->y.front();
        if (s >= table->x.back()) return table->y.back();
        const std::size_t k = table->segment(s);
        const double t = (s - table->x[k - 1]) / (table->x[k] - table->x[k - 1]);
        return table->y[k - 1] + t * (table->y[k] - table->y[k - 1]);
    };
    auto derivative = [table](double s) {
        if (s < table->x.front() || s > table->x.back()) return 0.0;
        const std::size_t k = table->segment(s);
        return (table->y[k] - table->y[k - 1]) / (table->x[k] - table->x[k - 1]);
    };
    return ScalarFunc1(FuncKind::tabulated, std::move(description), value, derivative);
}

ScalarFunc1 ScalarFunc1::constant(double c) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return ScalarFunc1(FuncKind::builtin, buf, [c](double) { return c; }, [](double) { return 0.0; });
}

ScalarFunc2::ScalarFunc2(FuncKind kind, std::string description, Fn value, Fn d_own, Fn d_opp)
    : kind_(kind), description_(std::move(description)), value_(std::move(value)), d_own_(std::move(d_own)),
      d_opp_(std::move(d_opp)) {}

ScalarFunc2 ScalarFunc2::from_expression(const expr::Expr& e, const ParamMap& params) {
    expr::Expr bound = expr::bind(e, params);
    static const ParamMap kNone;
    auto value = [bound](double s, double y) { return expr::eval(bound, s, y, kNone); };
    auto d_own = [bound](double s, double y) { return expr::diff(bound, expr::Variable::s, s, y, kNone); };
    auto d_opp = [bound](double s, double y) { return expr::diff(bound, expr::Variable::y, s, y, kNone); };
    return ScalarFunc2(FuncKind::expression, expr::print(bound), value, d_own, d_opp);
}

ScalarFunc2 ScalarFunc2::scaled(double gamma) const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", gamma);
    return ScalarFunc2(
        FuncKind::composite, std::string(buf) + " * (" + description_ + ")",
        [v = value_, gamma](double s, double y) { return gamma * v(s, y); },
        [d = d_own_, gamma](double s, double y) { return gamma * d(s, y); },
        [d = d_opp_, gamma](double s, double y) { return gamma * d(s, y); });
}

}  // namespace spillover
