#include "spillover/funcexpr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "spillover/error.hpp"

namespace spillover::expr {

struct Expr::Node {
    Kind kind{};
    double value = 0.0;
    Variable var{};
    std::string name;
    BinaryOp op{};
    Function func{};
    std::optional<Expr> lhs;
    std::optional<Expr> rhs;
};

Expr Expr::literal(double value) {
    if (!std::isfinite(value) || value < 0.0 || std::signbit(value)) {
        throw Error("expression literals must be finite and non-negative");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::literal;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable(Variable v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->var = v;
    return Expr(std::move(n));
}

Expr Expr::parameter(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::parameter;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::negate;
    n->lhs = std::move(operand);
    return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::binary;
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return Expr(std::move(n));
}

Expr Expr::call(Function f, Expr argument) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->func = f;
    n->lhs = std::move(argument);
    return Expr(std::move(n));
}

Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const { return node_->value; }
Variable Expr::variable() const { return node_->var; }
const std::string& Expr::name() const { return node_->name; }
BinaryOp Expr::op() const { return node_->op; }
Function Expr::function() const { return node_->func; }
const Expr& Expr::lhs() const { return *node_->lhs; }
const Expr& Expr::rhs() const { return *node_->rhs; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Kind::literal: return a.value() == b.value();
        case Kind::variable: return a.variable() == b.variable();
        case Kind::parameter: return a.name() == b.name();
        case Kind::negate: return a.lhs() == b.lhs();
        case Kind::binary: return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
        case Kind::call: return a.function() == b.function() && a.lhs() == b.lhs();
    }
    return false;
}

bool is_reserved(std::string_view identifier) {
    return identifier == "s" || identifier == "y" || identifier == "exp" || identifier == "log" ||
           identifier == "sqrt";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse_all() {
        skip_space();
        if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
        Expr e = parse_expr();
        skip_space();
        if (pos_ != text_.size()) {
            if (text_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(BinaryOp::add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = Expr::binary(BinaryOp::sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(BinaryOp::mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = Expr::binary(BinaryOp::div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::negate(parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) return Expr::binary(BinaryOp::pow, base, parse_unary());
        return base;
    }

    Expr parse_primary() {
        skip_space();
        if (pos_ == text_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            const std::size_t open = pos_;
            ++pos_;
            Expr inner = parse_expr();
            if (!accept(')')) {
                skip_space();
                throw ParseError("unbalanced '(' opened at offset " + std::to_string(open), pos_);
            }
            return inner;
        }
        if (is_digit(c) || c == '.') return parse_number();
        if (is_ident_start(c)) return parse_identifier();
        if (c == ')') throw ParseError("unbalanced ')'", pos_);
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && is_digit(text_[p])) {
                while (p < text_.size() && is_digit(text_[p])) ++p;
                pos_ = p;
            }
        }
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(value)) {
            throw ParseError("malformed number", start);
        }
        return Expr::literal(value);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        const std::string_view id = text_.substr(start, pos_ - start);
        skip_space();
        const bool called = pos_ < text_.size() && text_[pos_] == '(';
        std::optional<Function> f;
        if (id == "exp") f = Function::exp;
        if (id == "log") f = Function::log;
        if (id == "sqrt") f = Function::sqrt;
        if (f) {
            if (!called) throw ParseError("function '" + std::string(id) + "' requires '('", pos_);
            const std::size_t open = pos_;
            ++pos_;
            Expr arg = parse_expr();
            if (!accept(')')) {
                skip_space();
                throw ParseError("unbalanced '(' opened at offset " + std::to_string(open), pos_);
            }
            return Expr::call(*f, arg);
        }
        if (called) throw ParseError("unknown function '" + std::string(id) + "'", start);
        if (id == "s") return Expr::variable(Variable::s);
        if (id == "y") return Expr::variable(Variable::y);
        return Expr::parameter(std::string(id));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Expr& e) {
    switch (e.kind()) {
        case Kind::negate: return kPrecNeg;
        case Kind::binary:
            switch (e.op()) {
                case BinaryOp::add:
                case BinaryOp::sub: return kPrecAdd;
                case BinaryOp::mul:
                case BinaryOp::div: return kPrecMul;
                case BinaryOp::pow: return kPrecPow;
            }
            break;
        default: break;
    }
    return kPrecAtom;
}

std::string format_literal(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void print_into(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool parens, std::string& out) {
    if (parens) out += '(';
    print_into(e, out);
    if (parens) out += ')';
}

void print_into(const Expr& e, std::string& out) {
    switch (e.kind()) {
        case Kind::literal: out += format_literal(e.value()); return;
        case Kind::variable: out += e.variable() == Variable::s ? "s" : "y"; return;
        case Kind::parameter: out += e.name(); return;
        case Kind::negate:
            out += '-';
            print_wrapped(e.lhs(), precedence(e.lhs()) < kPrecNeg, out);
            return;
        case Kind::call: {
            static constexpr std::array names{"exp", "log", "sqrt"};
            out += names[static_cast<std::size_t>(e.function())];
            out += '(';
            print_into(e.lhs(), out);
            out += ')';
            return;
        }
        case Kind::binary: {
            const int p = precedence(e);
            if (e.op() == BinaryOp::pow) {
                print_wrapped(e.lhs(), precedence(e.lhs()) <= kPrecPow, out);
                out += " ^ ";
                print_wrapped(e.rhs(), precedence(e.rhs()) < kPrecNeg, out);
                return;
            }
            print_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
            switch (e.op()) {
                case BinaryOp::add: out += " + "; break;
                case BinaryOp::sub: out += " - "; break;
                case BinaryOp::mul: out += " * "; break;
                case BinaryOp::div: out += " / "; break;
                case BinaryOp::pow: break;
            }
            print_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluation

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
    return v;
}

double eval_node(const Expr& e, double s, const std::optional<double>& y, const ParamMap& params) {
    switch (e.kind()) {
        case Kind::literal: return e.value();
        case Kind::variable:
            if (e.variable() == Variable::s) return s;
            if (!y) throw EvalError("variable 'y' is not bound");
            return *y;
        case Kind::parameter: {
            const auto it = params.find(e.name());
            if (it == params.end()) throw EvalError("unbound name '" + e.name() + "'");
            return it->second;
        }
        case Kind::negate: return -eval_node(e.lhs(), s, y, params);
        case Kind::call: {
            const double x = eval_node(e.lhs(), s, y, params);
            switch (e.function()) {
                case Function::exp: return checked(std::exp(x), "exp");
                case Function::log:
                    if (!(x > 0.0)) throw EvalError("log of non-positive value");
                    return std::log(x);
                case Function::sqrt:
                    if (x < 0.0) throw EvalError("sqrt of negative value");
                    return std::sqrt(x);
            }
            break;
        }
        case Kind::binary: {
            const double a = eval_node(e.lhs(), s, y, params);
            const double b = eval_node(e.rhs(), s, y, params);
            switch (e.op()) {
                case BinaryOp::add: return checked(a + b, "'+'");
                case BinaryOp::sub: return checked(a - b, "'-'");
                case BinaryOp::mul: return checked(a * b, "'*'");
                case BinaryOp::div:
                    if (b == 0.0) throw EvalError("division by zero");
                    return checked(a / b, "'/'");
                case BinaryOp::pow: {
                    if (a == 0.0 && b < 0.0) throw EvalError("division by zero in '^'");
                    if (a < 0.0 && b != std::floor(b)) throw EvalError("non-integer power of negative value");
                    return checked(std::pow(a, b), "'^'");
                }
            }
            break;
        }
    }
    throw EvalError("corrupt expression");
}

template <class Fn>
Expr rebuild(const Expr& e, const Fn& leaf) {
    switch (e.kind()) {
        case Kind::literal:
        case Kind::variable:
        case Kind::parameter: return leaf(e);
        case Kind::negate: return Expr::negate(rebuild(e.lhs(), leaf));
        case Kind::call: return Expr::call(e.function(), rebuild(e.lhs(), leaf));
        case Kind::binary: return Expr::binary(e.op(), rebuild(e.lhs(), leaf), rebuild(e.rhs(), leaf));
    }
    return e;
}

template <class Fn>
void visit(const Expr& e, const Fn& fn) {
    fn(e);
    switch (e.kind()) {
        case Kind::negate:
        case Kind::call: visit(e.lhs(), fn); break;
        case Kind::binary:
            visit(e.lhs(), fn);
            visit(e.rhs(), fn);
            break;
        default: break;
    }
}

Expr constant(double v) {
    if (v < 0.0 || std::signbit(v)) return Expr::negate(Expr::literal(-v));
    return Expr::literal(v);
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Expr& e) {
    std::string out;
    print_into(e, out);
    return out;
}

double eval(const Expr& e, double s, std::optional<double> y, const ParamMap& params) {
    return eval_node(e, s, y, params);
}

double diff(const Expr& e, Variable wrt, double s, std::optional<double> y, const ParamMap& params) {
    if (wrt == Variable::y && !y) throw EvalError("variable 'y' is not bound");
    const double x = wrt == Variable::s ? s : *y;
    const double h = std::max(1e-6, 1e-6 * std::abs(x));
    auto at = [&](double xv) {
        return wrt == Variable::s ? eval_node(e, xv, y, params) : eval_node(e, s, xv, params);
    };
    if (x - h < 0.0) {
        return (-3.0 * at(x) + 4.0 * at(x + h) - at(x + 2.0 * h)) / (2.0 * h);
    }
    return (at(x + h) - at(x - h)) / (2.0 * h);
}

Expr bind(const Expr& e, const ParamMap& params) {
    return rebuild(e, [&](const Expr& leaf) {
        if (leaf.kind() == Kind::parameter) {
            const auto it = params.find(leaf.name());
            if (it != params.end()) return constant(it->second);
        }
        return leaf;
    });
}

Expr substitute(const Expr& e, std::string_view name, const Expr& replacement) {
    return rebuild(e, [&](const Expr& leaf) {
        if (leaf.kind() == Kind::parameter && leaf.name() == name) return replacement;
        return leaf;
    });
}

std::set<std::string> free_parameters(const Expr& e) {
    std::set<std::string> names;
    visit(e, [&](const Expr& n) {
        if (n.kind() == Kind::parameter) names.insert(n.name());
    });
    return names;
}

bool uses_variable(const Expr& e, Variable v) {
    bool found = false;
    visit(e, [&](const Expr& n) {
        if (n.kind() == Kind::variable && n.variable() == v) found = true;
    });
    return found;
}

}  // namespace spillover::expr
