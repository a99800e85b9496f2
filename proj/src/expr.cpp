#include "hilfer/expr.hpp"

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>
#include <system_error>

#include "hilfer/errors.hpp"

namespace hilfer {
namespace {

struct FuncInfo {
    std::string_view name;
    Expr::Func func;
    std::size_t arity;
};

constexpr std::array<FuncInfo, 8> kFunctions{{
    {"abs", Expr::Func::abs, 1},
    {"log", Expr::Func::log, 1},
    {"exp", Expr::Func::exp, 1},
    {"sin", Expr::Func::sin, 1},
    {"cos", Expr::Func::cos, 1},
    {"sqrt", Expr::Func::sqrt, 1},
    {"min", Expr::Func::min, 2},
    {"max", Expr::Func::max, 2},
}};

const FuncInfo* find_function(std::string_view name) {
    for (const auto& info : kFunctions) {
        if (info.name == name) return &info;
    }
    return nullptr;
}

std::size_t arity_of(Expr::Func fn) {
    for (const auto& info : kFunctions) {
        if (info.func == fn) return info.arity;
    }
    return 0;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse_all() {
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError("empty expression", pos_);
        Expr e = sum();
        skip_ws();
        if (pos_ < src_.size()) {
            throw SyntaxError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            skip_ws();
            if (pos_ >= src_.size()) {
                throw SyntaxError(std::string("expected '") + c + "' before end of input", pos_);
            }
            throw SyntaxError(std::string("expected '") + c + "', found '" + src_[pos_] + "'", pos_);
        }
    }

    Expr sum() {
        Expr lhs = product();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(Expr::Kind::add, lhs, product());
            } else if (accept('-')) {
                lhs = Expr::binary(Expr::Kind::sub, lhs, product());
            } else {
                return lhs;
            }
        }
    }

    Expr product() {
        Expr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(Expr::Kind::mul, lhs, unary());
            } else if (accept('/')) {
                lhs = Expr::binary(Expr::Kind::div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    Expr unary() {
        if (accept('-')) return Expr::negate(unary());
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) return Expr::binary(Expr::Kind::pow, base, unary());
        return base;
    }

    Expr primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr number() {
        const std::size_t start = pos_;
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value,
                                               std::chars_format::general);
        if (ec != std::errc() || !std::isfinite(value)) {
            throw SyntaxError("malformed number", start);
        }
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        return Expr::literal(value);
    }

    Expr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return Expr::var_x();
        if (name == "a") return Expr::var_a();
        const FuncInfo* info = find_function(name);
        if (info == nullptr) {
            throw SyntaxError("unknown identifier '" + std::string(name) + "'", start);
        }
        expect('(');
        std::vector<Expr> args;
        args.push_back(sum());
        while (accept(',')) args.push_back(sum());
        if (args.size() != info->arity) {
            throw SyntaxError(std::string(info->name) + " takes " + std::to_string(info->arity) +
                                  " argument(s), got " + std::to_string(args.size()),
                              start);
        }
        expect(')');
        return Expr::call(info->func, std::move(args));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

int precedence(Expr::Kind kind) {
    switch (kind) {
        case Expr::Kind::add:
        case Expr::Kind::sub:
            return 1;
        case Expr::Kind::mul:
        case Expr::Kind::div:
            return 2;
        case Expr::Kind::negate:
            return 3;
        case Expr::Kind::pow:
            return 4;
        default:
            return 5;
    }
}

char op_char(Expr::Kind kind) {
    switch (kind) {
        case Expr::Kind::add: return '+';
        case Expr::Kind::sub: return '-';
        case Expr::Kind::mul: return '*';
        case Expr::Kind::div: return '/';
        case Expr::Kind::pow: return '^';
        default: return '?';
    }
}

void print(const Expr::Node& node, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
    if (parens) out += '(';
    out += child.to_string();
    if (parens) out += ')';
}

void print(const Expr::Node& node, std::string& out) {
    using Kind = Expr::Kind;
    switch (node.kind) {
        case Kind::literal: {
            std::array<char, 64> buf{};
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), node.value);
            out.append(buf.data(), res.ptr);
            return;
        }
        case Kind::var_x: out += 'x'; return;
        case Kind::var_a: out += 'a'; return;
        case Kind::negate:
            out += '-';
            print_child(node.children[0], precedence(node.children[0].kind()) < 3, out);
            return;
        case Kind::call:
            out += function_name(node.func);
            out += '(';
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                if (i > 0) out += ", ";
                out += node.children[i].to_string();
            }
            out += ')';
            return;
        default: break;
    }
    const int p = precedence(node.kind);
    const int lp = precedence(node.children[0].kind());
    const int rp = precedence(node.children[1].kind());
    const bool is_pow = node.kind == Kind::pow;
    print_child(node.children[0], is_pow ? lp <= p : lp < p, out);
    if (p == 1) {
        out += ' ';
        out += op_char(node.kind);
        out += ' ';
    } else {
        out += op_char(node.kind);
    }
    print_child(node.children[1], is_pow ? rp < 3 : rp <= p, out);
}

[[noreturn]] void domain(const std::string& what, double x, double a) {
    std::ostringstream os;
    os << what << " (x = " << x << ", a = " << a << ")";
    throw DomainError(os.str());
}

double eval_node(const Expr::Node& node, double x, double a);

}  // namespace

std::string_view function_name(Expr::Func fn) noexcept {
    for (const auto& info : kFunctions) {
        if (info.func == fn) return info.name;
    }
    return "?";
}

Expr::Expr() : Expr(literal(0.0)) {}

Expr Expr::parse(std::string_view src) { return Parser(src).parse_all(); }

Expr Expr::literal(double value) {
    if (!std::isfinite(value) || std::signbit(value)) {
        throw DomainError("Expr::literal: value must be finite and non-negative");
    }
    return Expr(std::make_shared<const Node>(Node{Kind::literal, value, Func::abs, {}}));
}

Expr Expr::var_x() { return Expr(std::make_shared<const Node>(Node{Kind::var_x, 0.0, Func::abs, {}})); }

Expr Expr::var_a() { return Expr(std::make_shared<const Node>(Node{Kind::var_a, 0.0, Func::abs, {}})); }

Expr Expr::negate(Expr operand) {
    return Expr(std::make_shared<const Node>(Node{Kind::negate, 0.0, Func::abs, {std::move(operand)}}));
}

Expr Expr::binary(Kind op, Expr lhs, Expr rhs) {
    if (precedence(op) == 5 || op == Kind::negate) {
        throw DomainError("Expr::binary: not a binary operator");
    }
    return Expr(std::make_shared<const Node>(
        Node{op, 0.0, Func::abs, {std::move(lhs), std::move(rhs)}}));
}

Expr Expr::call(Func fn, std::vector<Expr> args) {
    if (args.size() != arity_of(fn)) {
        throw DomainError("Expr::call: wrong number of arguments for " + std::string(function_name(fn)));
    }
    return Expr(std::make_shared<const Node>(Node{Kind::call, 0.0, fn, std::move(args)}));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }

double Expr::eval(double x, double a) const { return eval_node(*node_, x, a); }

std::string Expr::to_string() const {
    std::string out;
    print(*node_, out);
    return out;
}

bool Expr::uses_variable_a() const {
    if (node_->kind == Kind::var_a) return true;
    for (const auto& child : node_->children) {
        if (child.uses_variable_a()) return true;
    }
    return false;
}

bool operator==(const Expr& lhs, const Expr& rhs) {
    if (lhs.node_ == rhs.node_) return true;
    const auto& l = *lhs.node_;
    const auto& r = *rhs.node_;
    if (l.kind != r.kind) return false;
    if (l.kind == Expr::Kind::literal) return l.value == r.value;
    if (l.kind == Expr::Kind::call && l.func != r.func) return false;
    return l.children == r.children;
}

namespace {

double eval_node(const Expr::Node& node, double x, double a) {
    using Kind = Expr::Kind;
    using Func = Expr::Func;
    switch (node.kind) {
        case Kind::literal: return node.value;
        case Kind::var_x: return x;
        case Kind::var_a: return a;
        case Kind::negate: return -node.children[0].eval(x, a);
        case Kind::add: return node.children[0].eval(x, a) + node.children[1].eval(x, a);
        case Kind::sub: return node.children[0].eval(x, a) - node.children[1].eval(x, a);
        case Kind::mul: return node.children[0].eval(x, a) * node.children[1].eval(x, a);
        case Kind::div: {
            const double num = node.children[0].eval(x, a);
            const double den = node.children[1].eval(x, a);
            if (den == 0.0) domain("division by zero", x, a);
            return num / den;
        }
        case Kind::pow: {
            const double base = node.children[0].eval(x, a);
            const double expo = node.children[1].eval(x, a);
            const double r = std::pow(base, expo);
            if (!std::isfinite(r)) domain("power outside its domain", x, a);
            return r;
        }
        case Kind::call: {
            const double u = node.children[0].eval(x, a);
            switch (node.func) {
                case Func::abs: return std::fabs(u);
                case Func::log:
                    if (!(u > 0.0)) domain("log of a non-positive argument", x, a);
                    return std::log(u);
                case Func::exp: {
                    const double r = std::exp(u);
                    if (!std::isfinite(r)) domain("exp overflow", x, a);
                    return r;
                }
                case Func::sin: return std::sin(u);
                case Func::cos: return std::cos(u);
                case Func::sqrt:
                    if (u < 0.0) domain("sqrt of a negative argument", x, a);
                    return std::sqrt(u);
                case Func::min: return std::min(u, node.children[1].eval(x, a));
                case Func::max: return std::max(u, node.children[1].eval(x, a));
            }
            break;
        }
    }
    return 0.0;
}

}  // namespace
}  // namespace hilfer
