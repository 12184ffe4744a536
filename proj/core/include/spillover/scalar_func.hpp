#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spillover/funcexpr.hpp"

namespace spillover {

enum class FuncKind { builtin, expression, tabulated, composite };

/// Real function of one score, with its derivative.
class ScalarFunc1 {
public:
    using Fn = std::function<double(double)>;

    ScalarFunc1(FuncKind kind, std::string description, Fn value, Fn derivative);

    /// Binds `params` into `e` and differentiates numerically with expr::diff.
    static ScalarFunc1 from_expression(const expr::Expr& e, const ParamMap& params);

    /// Piecewise-linear interpolation through (xs[k], ys[k]); xs strictly increasing.
    /// Outside [xs.front(), xs.back()] the end values are held constant.
    static ScalarFunc1 tabulated(std::vector<double> xs, std::vector<double> ys, std::string description);

    static ScalarFunc1 constant(double c);

    [[nodiscard]] double operator()(double s) const { return value_(s); }
    [[nodiscard]] double derivative(double s) const { return derivative_(s); }
    [[nodiscard]] FuncKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }

private:
    FuncKind kind_;
    std::string description_;
    Fn value_;
    Fn derivative_;
};

/// Real function of (own score s, opponent score y) with both partials.
class ScalarFunc2 {
public:
    using Fn = std::function<double(double, double)>;

    ScalarFunc2(FuncKind kind, std::string description, Fn value, Fn d_own, Fn d_opp);

    static ScalarFunc2 from_expression(const expr::Expr& e, const ParamMap& params);

    [[nodiscard]] double operator()(double s, double y) const { return value_(s, y); }
    /// ∂v/∂s
    [[nodiscard]] double d_own(double s, double y) const { return d_own_(s, y); }
    /// ∂v/∂y
    [[nodiscard]] double d_opp(double s, double y) const { return d_opp_(s, y); }
    [[nodiscard]] FuncKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }

    /// gamma * v, derivatives scaled accordingly.
    [[nodiscard]] ScalarFunc2 scaled(double gamma) const;

private:
    FuncKind kind_;
    std::string description_;
    Fn value_;
    Fn d_own_;
    Fn d_opp_;
};

}  // namespace spillover
