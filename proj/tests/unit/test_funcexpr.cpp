#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spillover/error.hpp"
#include "spillover/funcexpr.hpp"

namespace spillover::expr {
namespace {

TEST(Parse, SingleVariable) {
    const Expr e = parse("s");
    EXPECT_EQ(e.kind(), Kind::variable);
    EXPECT_EQ(e.variable(), Variable::s);
}

TEST(Parse, LogisticValueFunction) {
    const Expr e = parse("2/5 + 1/(1+exp(lambda*(2*y-1)))");
    const ParamMap params{{"lambda", 4.0}};
    const double expected = 0.4 + 1.0 / (1.0 + std::exp(-4.0));
    EXPECT_NEAR(eval(e, 0.0, 0.0, params), expected, 1e-14);
    EXPECT_NEAR(expected, 1.38208, 1e-4);
}

TEST(Parse, ReportsOffsetOfFirstError) {
    try {
        (void)parse("1+*2");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 2u);
    }
}

TEST(Parse, RejectsMalformedInput) {
    EXPECT_THROW((void)parse(""), ParseError);
    EXPECT_THROW((void)parse("   "), ParseError);
    EXPECT_THROW((void)parse("(s+1"), ParseError);
    EXPECT_THROW((void)parse("s+1)"), ParseError);
    EXPECT_THROW((void)parse("sin(s)"), ParseError);
    EXPECT_THROW((void)parse("exp s"), ParseError);
    EXPECT_THROW((void)parse("2 $ 3"), ParseError);
}

TEST(Parse, Precedence) {
    const ParamMap none;
    EXPECT_DOUBLE_EQ(eval(parse("1+2*3"), 0, std::nullopt, none), 7.0);
    EXPECT_DOUBLE_EQ(eval(parse("2^3^2"), 0, std::nullopt, none), 512.0);
    EXPECT_DOUBLE_EQ(eval(parse("-2^2"), 0, std::nullopt, none), -4.0);
    EXPECT_DOUBLE_EQ(eval(parse("8/4/2"), 0, std::nullopt, none), 1.0);
    EXPECT_DOUBLE_EQ(eval(parse("2-3-4"), 0, std::nullopt, none), -5.0);
    EXPECT_DOUBLE_EQ(eval(parse("2^-1"), 0, std::nullopt, none), 0.5);
    EXPECT_DOUBLE_EQ(eval(parse("1.5e1"), 0, std::nullopt, none), 15.0);
}

TEST(Eval, Square) { EXPECT_DOUBLE_EQ(eval(parse("s^2"), 0.5, std::nullopt, {}), 0.25); }

TEST(Eval, ExponentialInvestmentAtDiagonal) {
    const ParamMap params{{"r", 0.5}, {"omega", 0.4}};
    EXPECT_DOUBLE_EQ(eval(parse("exp(r*(s-y))*omega"), 1.0, 1.0, params), 0.4);
}

TEST(Eval, DomainErrors) {
    EXPECT_THROW((void)eval(parse("log(s)"), 0.0, std::nullopt, {}), EvalError);
    EXPECT_THROW((void)eval(parse("sqrt(s-1)"), 0.0, std::nullopt, {}), EvalError);
    EXPECT_THROW((void)eval(parse("1/s"), 0.0, std::nullopt, {}), EvalError);
    EXPECT_THROW((void)eval(parse("exp(s)"), 1000.0, std::nullopt, {}), EvalError);
}

TEST(Eval, UnboundNames) {
    EXPECT_THROW((void)eval(parse("a*s"), 1.0, std::nullopt, {}), EvalError);
    EXPECT_THROW((void)eval(parse("s+y"), 1.0, std::nullopt, {}), EvalError);
}

TEST(Diff, SquareAtOne) { EXPECT_NEAR(diff(parse("s^2"), Variable::s, 1.0, std::nullopt, {}), 2.0, 1e-6); }

TEST(Diff, LogisticValueHasNoOwnScoreTerm) {
    const Expr e = parse("2/5 + 1/(1+exp(lambda*(2*y-1)))");
    const ParamMap params{{"lambda", 4.0}};
    for (double s : {0.0, 0.1, 0.5, 0.9}) {
        EXPECT_NEAR(diff(e, Variable::s, s, 0.3, params), 0.0, 1e-9);
    }
}

TEST(Diff, OpponentPartial) {
    const ParamMap params{{"r", 0.5}, {"omega", 0.4}};
    EXPECT_NEAR(diff(parse("exp(r*(s-y))*omega"), Variable::y, 0.5, 0.5, params), -0.2, 1e-5);
}

TEST(Diff, OneSidedAtZeroStaysInDomain) {
    // sqrt is undefined below zero; the stencil must not step there.
    EXPECT_NEAR(diff(parse("sqrt(s+1)"), Variable::s, 0.0, std::nullopt, {}), 0.5, 1e-6);
    EXPECT_NO_THROW((void)diff(parse("sqrt(s)"), Variable::s, 0.0, std::nullopt, {}));
}

TEST(Diff, PolynomialsMatchAnalyticDerivative) {
    std::mt19937_64 rng(20240901);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::uniform_real_distribution<double> point(0.0, 2.0);
    const Expr e = parse("a0 + a1*s + a2*s^2 + a3*s^3");
    for (int trial = 0; trial < 100; ++trial) {
        const ParamMap p{{"a0", coef(rng)}, {"a1", coef(rng)}, {"a2", coef(rng)}, {"a3", coef(rng)}};
        const double x = point(rng);
        const double exact = p.at("a1") + 2 * p.at("a2") * x + 3 * p.at("a3") * x * x;
        const double numeric = diff(e, Variable::s, x, std::nullopt, p);
        EXPECT_LE(std::abs(numeric - exact), 1e-5 * std::max(1.0, std::abs(exact))) << "x = " << x;
    }
}

TEST(Bind, SubstitutesParameters) {
    const Expr e = bind(parse("a*s + b"), {{"a", 2.0}});
    EXPECT_EQ(free_parameters(e), std::set<std::string>{"b"});
    EXPECT_DOUBLE_EQ(eval(e, 3.0, std::nullopt, {{"b", 1.0}}), 7.0);
    EXPECT_TRUE(uses_variable(e, Variable::s));
    EXPECT_FALSE(uses_variable(e, Variable::y));
}

TEST(Reserved, Identifiers) {
    for (const char* id : {"s", "y", "exp", "log", "sqrt"}) EXPECT_TRUE(is_reserved(id)) << id;
    EXPECT_FALSE(is_reserved("lambda"));
}

Expr random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 6);
    switch (pick(rng)) {
        case 0: {
            const double values[] = {0.0, 1.0, 2.5, 0.1, 1e-7, 123456.789};
            std::uniform_int_distribution<int> which(0, 5);
            return Expr::literal(values[which(rng)]);
        }
        case 1:
            return Expr::variable(std::bernoulli_distribution(0.5)(rng) ? Variable::s : Variable::y);
        case 2: {
            const char* names[] = {"a", "lambda", "omega_1", "x2"};
            return Expr::parameter(names[std::uniform_int_distribution<int>(0, 3)(rng)]);
        }
        case 3:
            return Expr::negate(random_expr(rng, depth - 1));
        case 4: {
            const Function f[] = {Function::exp, Function::log, Function::sqrt};
            return Expr::call(f[std::uniform_int_distribution<int>(0, 2)(rng)], random_expr(rng, depth - 1));
        }
        default: {
            const BinaryOp ops[] = {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div, BinaryOp::pow};
            const BinaryOp op = ops[std::uniform_int_distribution<int>(0, 4)(rng)];
            return Expr::binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
        }
    }
}

TEST(RoundTrip, RandomTrees) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Expr e = random_expr(rng, 6);
        const std::string text = print(e);
        Expr back = Expr::literal(0);
        ASSERT_NO_THROW(back = parse(text)) << text;
        EXPECT_TRUE(back == e) << text << " reprinted as " << print(back);
    }
}

}  // namespace
}  // namespace spillover::expr
