#pragma once

// Shared fixtures for the test suites: a random expression-tree generator,
// a fully parenthesized printer, and small numeric helpers.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "morphocell/dsl.hpp"

namespace morphocell::test_support {

using dsl::BinaryOp;
using dsl::Expr;
using dsl::Function;
using dsl::NamedConstant;
using dsl::Variable;

/// Random expression trees over every node kind. Constants are
/// non-negative, since a negative literal reads back as a negation.
class ExprGenerator {
public:
    explicit ExprGenerator(std::uint64_t seed) : rng_(seed) {}

    Expr operator()(int depth) {
        if (depth <= 0 || pick(4) == 0) return leaf();
        switch (pick(3)) {
            case 0: return Expr::negate((*this)(depth - 1));
            case 1: {
                const auto op = static_cast<BinaryOp>(pick(5));
                return Expr::binary(op, (*this)(depth - 1), (*this)(depth - 1));
            }
            default: {
                const auto fn = static_cast<Function>(pick(dsl::functions.size()));
                std::vector<Expr> args;
                for (std::size_t i = 0; i < dsl::functions[static_cast<std::size_t>(fn)].arity; ++i)
                    args.push_back((*this)(depth - 1));
                return Expr::call(fn, std::move(args));
            }
        }
    }

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    std::mt19937_64& engine() { return rng_; }

private:
    Expr leaf() {
        switch (pick(5)) {
            case 0: return Expr::var(static_cast<Variable>(pick(4)));
            case 1: return Expr::named(static_cast<NamedConstant>(pick(3)));
            case 2: {
                static const char* names[] = {"a", "b", "H", "k_2", "alpha"};
                return Expr::param(names[pick(5)]);
            }
            case 3: {
                static const double specials[] = {0.0, 1.0, 2.0, 0.5, 1e-5, 1e20, 123456.789, 0.1};
                return Expr::constant(specials[pick(8)]);
            }
            default: return Expr::constant(real(0.0, 10.0));
        }
    }

    std::mt19937_64 rng_;
};

/// Prints every compound subexpression inside its own parentheses.
inline std::string parenthesized(const Expr& e) {
    if (auto c = e.as<Expr::Constant>()) return dsl::detail::format_number(c->value);
    if (auto v = e.as<Expr::Var>()) return std::string(dsl::name_of(v->variable));
    if (auto p = e.as<Expr::Param>()) return p->name;
    if (auto n = e.as<Expr::Named>()) return std::string(dsl::name_of(n->constant));
    if (auto n = e.as<Expr::Negate>()) return "(-" + parenthesized(n->child) + ")";
    if (auto b = e.as<Expr::Binary>()) {
        static const char* ops[] = {"+", "-", "*", "/", "^"};
        return "(" + parenthesized(b->lhs) + ops[static_cast<int>(b->op)] + parenthesized(b->rhs) + ")";
    }
    const auto& call = *e.as<Expr::Call>();
    std::string out(dsl::info(call.function).name);
    out += "(";
    for (std::size_t i = 0; i < call.args.size(); ++i) {
        if (i) out += ",";
        out += parenthesized(call.args[i]);
    }
    return out + ")";
}

inline dsl::EvalContext random_context(ExprGenerator& gen) {
    dsl::EvalContext ctx;
    ctx.x = gen.real(-3, 3);
    ctx.y = gen.real(-3, 3);
    ctx.z = gen.real(-3, 3);
    ctx.t = gen.real(0.1, 4);
    for (const char* name : {"a", "b", "H", "k_2", "alpha"}) ctx.params[name] = gen.real(-3, 3);
    return ctx;
}

/// Evaluation outcome usable for equality checks: either a value (bitwise)
/// or the error code raised.
struct Outcome {
    bool ok = false;
    std::uint64_t bits = 0;
    std::string code;

    bool operator==(const Outcome&) const = default;
};

inline Outcome outcome(const Expr& e, const dsl::EvalContext& ctx) {
    try {
        const double v = dsl::evaluate(e, ctx);
        return {true, std::bit_cast<std::uint64_t>(v), {}};
    } catch (const Error& err) {
        return {false, 0, err.code()};
    }
}

}  // namespace morphocell::test_support
