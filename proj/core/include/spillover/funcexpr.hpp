#pragma once

// A small arithmetic expression language for user-supplied value and cost
// functions.
//
// Grammar (lowest to highest precedence):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//
// Variables are `s` and `y`; `exp`, `log` and `sqrt` are the only functions.
// Any other identifier matching [a-z_][a-z0-9_]* is a named parameter that
// must be bound at evaluation time.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace spillover {

using ParamMap = std::map<std::string, double, std::less<>>;

namespace expr {

enum class Kind { literal, variable, parameter, negate, binary, call };
enum class Variable { s, y };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { exp, log, sqrt };

/// Immutable expression tree with shared structure. Copies are cheap.
///
/// Literal nodes always hold finite, non-negative values; negative constants
/// are represented as `negate(literal)`, which is what the parser produces.
class Expr {
public:
    static Expr literal(double value);
    static Expr variable(Variable v);
    static Expr parameter(std::string name);
    static Expr negate(Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    static Expr call(Function f, Expr argument);

    [[nodiscard]] Kind kind() const noexcept;
    [[nodiscard]] double value() const;             // literal
    [[nodiscard]] Variable variable() const;        // variable
    [[nodiscard]] const std::string& name() const;  // parameter
    [[nodiscard]] BinaryOp op() const;              // binary
    [[nodiscard]] Function function() const;        // call
    [[nodiscard]] const Expr& lhs() const;          // binary; also the operand of negate/call
    [[nodiscard]] const Expr& rhs() const;          // binary

    /// Structural equality (literal values compared exactly).
    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parses `text`; throws ParseError carrying the byte offset of the first error.
[[nodiscard]] Expr parse(std::string_view text);

/// Renders with the minimum parentheses needed for parse(print(e)) == e.
[[nodiscard]] std::string print(const Expr& e);

/// IEEE double evaluation. Throws EvalError for unbound names, a missing `y`,
/// division by zero, log/sqrt outside their domain and non-finite results.
[[nodiscard]] double eval(const Expr& e, double s, std::optional<double> y, const ParamMap& params);

/// Partial derivative by finite differences.
///
/// Central difference with step h = max(1e-6, 1e-6 |x|); when x - h < 0 a
/// second-order one-sided stencil is used so no negative argument is touched.
[[nodiscard]] double diff(const Expr& e, Variable wrt, double s, std::optional<double> y,
                          const ParamMap& params);

/// Replaces every parameter present in `params` by its value.
[[nodiscard]] Expr bind(const Expr& e, const ParamMap& params);

/// Replaces parameter `name` by `replacement`.
[[nodiscard]] Expr substitute(const Expr& e, std::string_view name, const Expr& replacement);

/// Parameter names that remain free in `e`.
[[nodiscard]] std::set<std::string> free_parameters(const Expr& e);

/// True when `e` mentions variable `v`.
[[nodiscard]] bool uses_variable(const Expr& e, Variable v);

[[nodiscard]] bool is_reserved(std::string_view identifier);

}  // namespace expr
}  // namespace spillover
