#pragma once

// Expression language for scalar fields f(x, y, z; t).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          (right-associative)
//   primary := number | identifier | identifier '(' expr (',' expr)* ')' | '(' expr ')'
//
// x, y, z, t are variables; phi, pi, e are named constants; abs, sqrt, exp,
// ln, sin, cos, atan2, min, max are functions; any other identifier is a
// free parameter that must be bound at evaluation time.

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "morphocell/error.hpp"

namespace morphocell::dsl {

// ---------------------------------------------------------------------------
// Tokens

enum class TokenKind { Number, Identifier, Operator, Paren, Comma };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t position;

    bool operator==(const Token&) const = default;
};

inline std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const auto is_digit = [&](std::size_t k) {
        return k < source.size() && std::isdigit(static_cast<unsigned char>(source[k]));
    };
    while (i < source.size()) {
        const char c = source[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(i) || (c == '.' && is_digit(i + 1))) {
            while (is_digit(i)) ++i;
            if (i < source.size() && source[i] == '.') {
                ++i;
                while (is_digit(i)) ++i;
            }
            // An exponent is only consumed when digits follow; "2e" lexes as 2 then e.
            if (i < source.size() && (source[i] == 'e' || source[i] == 'E')) {
                std::size_t k = i + 1;
                if (k < source.size() && (source[k] == '+' || source[k] == '-')) ++k;
                if (is_digit(k)) {
                    i = k;
                    while (is_digit(i)) ++i;
                }
            }
            tokens.push_back({TokenKind::Number, std::string(source.substr(start, i - start)), start});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < source.size() &&
                   (std::isalnum(static_cast<unsigned char>(source[i])) || source[i] == '_'))
                ++i;
            tokens.push_back(
                {TokenKind::Identifier, std::string(source.substr(start, i - start)), start});
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            tokens.push_back({TokenKind::Operator, std::string(1, c), start});
            ++i;
        } else if (c == '(' || c == ')') {
            tokens.push_back({TokenKind::Paren, std::string(1, c), start});
            ++i;
        } else if (c == ',') {
            tokens.push_back({TokenKind::Comma, ",", start});
            ++i;
        } else {
            throw LexError(start, c);
        }
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// Syntax tree

enum class Variable { X, Y, Z, T };
enum class NamedConstant { Phi, Pi, E };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Abs, Sqrt, Exp, Ln, Sin, Cos, Atan2, Min, Max };

inline constexpr double golden_ratio = std::numbers::phi;

struct Node;

/// Immutable, cheaply copyable handle to an expression tree. Subtrees are
/// shared, never mutated, and safe to evaluate from several threads at once.
class Expr {
public:
    struct Constant;
    struct Var;
    struct Param;
    struct Named;
    struct Negate;
    struct Binary;
    struct Call;

    using Variant = std::variant<Constant, Var, Param, Named, Negate, Binary, Call>;

    static Expr constant(double v);
    static Expr var(Variable v);
    static Expr param(std::string name);
    static Expr named(NamedConstant c);
    static Expr negate(Expr child);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    static Expr call(Function fn, std::vector<Expr> args);

    const Variant& node() const;

    template <class T>
    const T* as() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Expr::Constant { double value; };
struct Expr::Var { Variable variable; };
struct Expr::Param { std::string name; };
struct Expr::Named { NamedConstant constant; };
struct Expr::Negate { Expr child; };
struct Expr::Binary { BinaryOp op; Expr lhs; Expr rhs; };
struct Expr::Call { Function function; std::vector<Expr> args; };

struct Node {
    Expr::Variant data;
};

inline const Expr::Variant& Expr::node() const { return node_->data; }

template <class T>
const T* Expr::as() const {
    return std::get_if<T>(&node());
}

inline Expr Expr::constant(double v) { return Expr(std::make_shared<const Node>(Node{Constant{v}})); }
inline Expr Expr::var(Variable v) { return Expr(std::make_shared<const Node>(Node{Var{v}})); }
inline Expr Expr::param(std::string name) {
    return Expr(std::make_shared<const Node>(Node{Param{std::move(name)}}));
}
inline Expr Expr::named(NamedConstant c) { return Expr(std::make_shared<const Node>(Node{Named{c}})); }
inline Expr Expr::negate(Expr child) {
    return Expr(std::make_shared<const Node>(Node{Negate{std::move(child)}}));
}
inline Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}}));
}
inline Expr Expr::call(Function fn, std::vector<Expr> args) {
    return Expr(std::make_shared<const Node>(Node{Call{fn, std::move(args)}}));
}

/// Structural equality; constants compare bitwise.
inline bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    const auto& na = a.node();
    const auto& nb = b.node();
    if (na.index() != nb.index()) return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(nb);
            if constexpr (std::is_same_v<T, Expr::Constant>) {
                return std::bit_cast<std::uint64_t>(lhs.value) ==
                       std::bit_cast<std::uint64_t>(rhs.value);
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                return lhs.variable == rhs.variable;
            } else if constexpr (std::is_same_v<T, Expr::Param>) {
                return lhs.name == rhs.name;
            } else if constexpr (std::is_same_v<T, Expr::Named>) {
                return lhs.constant == rhs.constant;
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                return lhs.child == rhs.child;
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                return lhs.op == rhs.op && lhs.lhs == rhs.lhs && lhs.rhs == rhs.rhs;
            } else {
                return lhs.function == rhs.function && lhs.args == rhs.args;
            }
        },
        na);
}

struct FunctionInfo {
    std::string_view name;
    Function function;
    std::size_t arity;
};

inline constexpr std::array<FunctionInfo, 9> functions{{
    {"abs", Function::Abs, 1},
    {"sqrt", Function::Sqrt, 1},
    {"exp", Function::Exp, 1},
    {"ln", Function::Ln, 1},
    {"sin", Function::Sin, 1},
    {"cos", Function::Cos, 1},
    {"atan2", Function::Atan2, 2},
    {"min", Function::Min, 2},
    {"max", Function::Max, 2},
}};

inline const FunctionInfo& info(Function fn) {
    return functions[static_cast<std::size_t>(fn)];
}

inline std::optional<Function> lookup_function(std::string_view name) {
    for (const auto& f : functions)
        if (f.name == name) return f.function;
    return std::nullopt;
}

inline std::optional<Variable> lookup_variable(std::string_view name) {
    if (name == "x") return Variable::X;
    if (name == "y") return Variable::Y;
    if (name == "z") return Variable::Z;
    if (name == "t") return Variable::T;
    return std::nullopt;
}

inline std::optional<NamedConstant> lookup_named(std::string_view name) {
    if (name == "phi") return NamedConstant::Phi;
    if (name == "pi") return NamedConstant::Pi;
    if (name == "e") return NamedConstant::E;
    return std::nullopt;
}

inline std::string_view name_of(Variable v) {
    constexpr std::array<std::string_view, 4> names{"x", "y", "z", "t"};
    return names[static_cast<std::size_t>(v)];
}

inline std::string_view name_of(NamedConstant c) {
    constexpr std::array<std::string_view, 3> names{"phi", "pi", "e"};
    return names[static_cast<std::size_t>(c)];
}

inline double value_of(NamedConstant c) {
    switch (c) {
        case NamedConstant::Phi: return std::numbers::phi;
        case NamedConstant::Pi: return std::numbers::pi;
        case NamedConstant::E: return std::numbers::e;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

class Parser {
public:
    explicit Parser(std::span<const Token> tokens) : tokens_(tokens) {
        if (!tokens.empty()) end_ = tokens.back().position + tokens.back().lexeme.size();
    }

    Expr parse_all() {
        Expr e = expression();
        if (pos_ < tokens_.size()) throw ParseError(here(), "operator or end of input");
        return e;
    }

private:
    std::span<const Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;

    std::size_t here() const { return pos_ < tokens_.size() ? tokens_[pos_].position : end_; }

    bool peek(TokenKind kind, std::string_view lexeme) const {
        return pos_ < tokens_.size() && tokens_[pos_].kind == kind && tokens_[pos_].lexeme == lexeme;
    }

    void expect(TokenKind kind, std::string_view lexeme) {
        if (!peek(kind, lexeme)) throw ParseError(here(), "'" + std::string(lexeme) + "'");
        ++pos_;
    }

    Expr expression() {
        Expr lhs = term();
        while (peek(TokenKind::Operator, "+") || peek(TokenKind::Operator, "-")) {
            const BinaryOp op = tokens_[pos_++].lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
            lhs = Expr::binary(op, std::move(lhs), term());
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = unary();
        while (peek(TokenKind::Operator, "*") || peek(TokenKind::Operator, "/")) {
            const BinaryOp op = tokens_[pos_++].lexeme == "*" ? BinaryOp::Mul : BinaryOp::Div;
            lhs = Expr::binary(op, std::move(lhs), unary());
        }
        return lhs;
    }

    Expr unary() {
        if (peek(TokenKind::Operator, "-")) {
            ++pos_;
            return Expr::negate(unary());
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (peek(TokenKind::Operator, "^")) {
            ++pos_;
            return Expr::binary(BinaryOp::Pow, std::move(base), unary());
        }
        return base;
    }

    Expr primary() {
        if (pos_ >= tokens_.size()) throw ParseError(end_, "operand");
        const Token& tok = tokens_[pos_];
        switch (tok.kind) {
            case TokenKind::Number: {
                double value = 0.0;
                const char* first = tok.lexeme.data();
                const char* last = first + tok.lexeme.size();
                auto [ptr, ec] = std::from_chars(first, last, value);
                if (ec != std::errc() || ptr != last || !std::isfinite(value))
                    throw ParseError(tok.position, "finite number");
                ++pos_;
                return Expr::constant(value);
            }
            case TokenKind::Identifier: {
                ++pos_;
                if (auto fn = lookup_function(tok.lexeme)) return call(*fn, tok);
                if (peek(TokenKind::Paren, "("))
                    throw ParseError(tok.position, "known function name");
                if (auto v = lookup_variable(tok.lexeme)) return Expr::var(*v);
                if (auto c = lookup_named(tok.lexeme)) return Expr::named(*c);
                return Expr::param(tok.lexeme);
            }
            case TokenKind::Paren:
                if (tok.lexeme == "(") {
                    ++pos_;
                    Expr inner = expression();
                    expect(TokenKind::Paren, ")");
                    return inner;
                }
                break;
            default:
                break;
        }
        throw ParseError(tok.position, "operand");
    }

    Expr call(Function fn, const Token& name) {
        expect(TokenKind::Paren, "(");
        std::vector<Expr> args;
        args.push_back(expression());
        while (peek(TokenKind::Comma, ",")) {
            ++pos_;
            args.push_back(expression());
        }
        expect(TokenKind::Paren, ")");
        const auto& fi = info(fn);
        if (args.size() != fi.arity)
            throw ArityError(name.position, std::string(fi.name), fi.arity, args.size());
        return Expr::call(fn, std::move(args));
    }
};

}  // namespace detail

inline Expr parse(std::span<const Token> tokens) { return detail::Parser(tokens).parse_all(); }

inline Expr parse(std::string_view source) {
    const auto tokens = tokenize(source);
    return parse(tokens);
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalContext {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double t = 1.0;
    std::map<std::string, double, std::less<>> params;
};

namespace detail {

inline bool is_integer(double v) { return std::isfinite(v) && std::trunc(v) == v; }

inline double power(double base, double exponent) {
    if (base < 0.0 && !is_integer(exponent))
        throw DomainError("negative base raised to a non-integer exponent");
    if (base == 0.0 && exponent < 0.0) throw DomainError("division by zero (zero to a negative power)");
    return std::pow(base, exponent);
}

inline double eval(const Expr& e, const EvalContext& ctx) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Constant>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                switch (n.variable) {
                    case Variable::X: return ctx.x;
                    case Variable::Y: return ctx.y;
                    case Variable::Z: return ctx.z;
                    case Variable::T:
                        if (!(ctx.t > 0.0)) throw TimeError(ctx.t);
                        return ctx.t;
                }
                return 0.0;
            } else if constexpr (std::is_same_v<T, Expr::Param>) {
                auto it = ctx.params.find(n.name);
                if (it == ctx.params.end()) throw UnboundParam(n.name);
                return it->second;
            } else if constexpr (std::is_same_v<T, Expr::Named>) {
                return value_of(n.constant);
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                return -eval(n.child, ctx);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                const double a = eval(n.lhs, ctx);
                const double b = eval(n.rhs, ctx);
                switch (n.op) {
                    case BinaryOp::Add: return a + b;
                    case BinaryOp::Sub: return a - b;
                    case BinaryOp::Mul: return a * b;
                    case BinaryOp::Div:
                        if (b == 0.0) throw DomainError("division by zero");
                        return a / b;
                    case BinaryOp::Pow: return power(a, b);
                }
                return 0.0;
            } else {
                const double a = eval(n.args[0], ctx);
                switch (n.function) {
                    case Function::Abs: return std::fabs(a);
                    case Function::Sqrt:
                        if (a < 0.0) throw DomainError("sqrt of a negative value");
                        return std::sqrt(a);
                    case Function::Exp: return std::exp(a);
                    case Function::Ln:
                        if (!(a > 0.0)) throw DomainError("ln of a non-positive value");
                        return std::log(a);
                    case Function::Sin: return std::sin(a);
                    case Function::Cos: return std::cos(a);
                    case Function::Atan2: return std::atan2(a, eval(n.args[1], ctx));
                    case Function::Min: return std::fmin(a, eval(n.args[1], ctx));
                    case Function::Max: return std::fmax(a, eval(n.args[1], ctx));
                }
                return 0.0;
            }
        },
        e.node());
}

}  // namespace detail

/// Evaluates in IEEE double precision. Throws DomainError, TimeError (t <= 0
/// reached through Var t) or UnboundParam.
inline double evaluate(const Expr& expr, const EvalContext& ctx) { return detail::eval(expr, ctx); }

// ---------------------------------------------------------------------------
// Tree queries and rewriting

inline void visit_nodes(const Expr& e, const std::function<void(const Expr&)>& fn) {
    fn(e);
    if (auto n = e.as<Expr::Negate>()) {
        visit_nodes(n->child, fn);
    } else if (auto b = e.as<Expr::Binary>()) {
        visit_nodes(b->lhs, fn);
        visit_nodes(b->rhs, fn);
    } else if (auto c = e.as<Expr::Call>()) {
        for (const auto& a : c->args) visit_nodes(a, fn);
    }
}

inline std::set<std::string> free_params(const Expr& expr) {
    std::set<std::string> out;
    visit_nodes(expr, [&](const Expr& e) {
        if (auto p = e.as<Expr::Param>()) out.insert(p->name);
    });
    return out;
}

inline bool uses_variable(const Expr& expr, Variable v) {
    bool found = false;
    visit_nodes(expr, [&](const Expr& e) {
        if (auto var = e.as<Expr::Var>(); var && var->variable == v) found = true;
    });
    return found;
}

/// Replaces every bound parameter by a constant with the same value.
/// Evaluation of the result is bitwise identical to evaluating the original
/// with the same bindings.
inline Expr bind(const Expr& e, const std::map<std::string, double, std::less<>>& params) {
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Param>) {
                auto it = params.find(n.name);
                return it == params.end() ? e : Expr::constant(it->second);
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                return Expr::negate(bind(n.child, params));
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                return Expr::binary(n.op, bind(n.lhs, params), bind(n.rhs, params));
            } else if constexpr (std::is_same_v<T, Expr::Call>) {
                std::vector<Expr> args;
                args.reserve(n.args.size());
                for (const auto& a : n.args) args.push_back(bind(a, params));
                return Expr::call(n.function, std::move(args));
            } else {
                return e;
            }
        },
        e.node());
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

// Binding strength used to decide where parentheses are required.
enum Precedence : int { AddSub = 1, MulDiv = 2, Unary = 3, Pow = 4, Atom = 5 };

inline int precedence(const Expr& e) {
    if (auto b = e.as<Expr::Binary>()) {
        switch (b->op) {
            case BinaryOp::Add:
            case BinaryOp::Sub: return AddSub;
            case BinaryOp::Mul:
            case BinaryOp::Div: return MulDiv;
            case BinaryOp::Pow: return Pow;
        }
    }
    if (e.as<Expr::Negate>()) return Unary;
    if (auto c = e.as<Expr::Constant>(); c && std::signbit(c->value)) return Unary;
    return Atom;
}

inline std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

inline void print(const Expr& e, std::string& out);

inline void print_wrapped(const Expr& e, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(e, out);
    if (wrap) out += ')';
}

inline void print(const Expr& e, std::string& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Constant>) {
                out += format_number(n.value);
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                out += name_of(n.variable);
            } else if constexpr (std::is_same_v<T, Expr::Param>) {
                out += n.name;
            } else if constexpr (std::is_same_v<T, Expr::Named>) {
                out += name_of(n.constant);
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
                out += '-';
                print_wrapped(n.child, precedence(n.child) < Unary, out);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                const int p = precedence(e);
                if (n.op == BinaryOp::Pow) {
                    print_wrapped(n.lhs, precedence(n.lhs) <= Pow, out);
                    out += '^';
                    print_wrapped(n.rhs, precedence(n.rhs) < Unary, out);
                    return;
                }
                print_wrapped(n.lhs, precedence(n.lhs) < p, out);
                switch (n.op) {
                    case BinaryOp::Add: out += " + "; break;
                    case BinaryOp::Sub: out += " - "; break;
                    case BinaryOp::Mul: out += " * "; break;
                    default: out += " / "; break;
                }
                // Right operand of a left-associative operator at the same level needs parens.
                const int rp = precedence(n.rhs);
                print_wrapped(n.rhs, rp < p || (rp == p && p < Unary), out);
            } else {
                out += info(n.function).name;
                out += '(';
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ", ";
                    print(n.args[i], out);
                }
                out += ')';
            }
        },
        e.node());
}

}  // namespace detail

/// Prints with the minimum parentheses the grammar needs; the result parses
/// back to a structurally identical tree (for trees the parser can produce).
inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print(e, out);
    return out;
}

}  // namespace morphocell::dsl
