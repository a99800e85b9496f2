#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hilfer {

/// Immutable expression tree in two variables: x (position) and a (function value).
///
/// Grammar, loosest to tightest binding:
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | 'x' | 'a' | name '(' sum (',' sum)* ')' | '(' sum ')'
/// Functions: abs log exp sin cos sqrt (one argument), min max (two).
class Expr {
public:
    enum class Kind { literal, var_x, var_a, negate, add, sub, mul, div, pow, call };
    enum class Func { abs, log, exp, sin, cos, sqrt, min, max };

    struct Node;

    /// The literal 0.
    Expr();

    /// Parses src; throws SyntaxError with a byte offset on malformed or unknown input.
    static Expr parse(std::string_view src);

    /// Literals are finite and non-negative; write negative constants with negate().
    static Expr literal(double value);
    static Expr var_x();
    static Expr var_a();
    static Expr negate(Expr operand);
    static Expr binary(Kind op, Expr lhs, Expr rhs);
    static Expr call(Func fn, std::vector<Expr> args);

    /// Evaluates at (x, a). Throws DomainError for log/sqrt outside their domain,
    /// division by zero, or any other operation that would yield a non-finite value.
    double eval(double x, double a) const;

    /// Minimal-parenthesis rendering that parses back to a structurally equal tree.
    std::string to_string() const;

    bool uses_variable_a() const;

    Kind kind() const noexcept;

    friend bool operator==(const Expr& lhs, const Expr& rhs);

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    Kind kind;
    double value = 0.0;
    Func func = Func::abs;
    std::vector<Expr> children;
};

std::string_view function_name(Expr::Func fn) noexcept;

}  // namespace hilfer
