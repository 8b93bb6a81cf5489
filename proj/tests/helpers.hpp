#pragma once

// Shared test utilities: RNG, random tree generators, and independent
// evaluation oracles. Oracles here deliberately avoid the library's
// canonicalization/evaluation paths so they can stand as a second opinion.

#include <optional>
#include <random>
#include <vector>

#include "symkern/expr.hpp"
#include "symkern/symbols.hpp"

namespace testutil {

using symkern::BigRational;
using symkern::Expr;
using symkern::SymbolPtr;

inline std::mt19937& rng() {
    static std::mt19937 gen(20240817u);
    return gen;
}

inline int rand_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng());
}

inline BigRational rand_rational(int max_abs_num = 9, int max_den = 5) {
    return BigRational(rand_int(-max_abs_num, max_abs_num), rand_int(1, max_den));
}

inline BigRational rand_nonzero_rational(int max_abs_num = 9, int max_den = 5) {
    while (true) {
        BigRational r = rand_rational(max_abs_num, max_den);
        if (!r.is_zero()) return r;
    }
}

/// Independent recursive evaluator over exact rationals for raw or canonical
/// trees built from Const/Sym/Add/Mul/Pow(with integer constant exponents).
/// Returns nullopt when the tree leaves the rational fragment.
inline std::optional<BigRational> oracle_eval(const Expr& e,
                                              const std::map<std::string, BigRational>& env) {
    using symkern::ExprKind;
    switch (e.kind()) {
        case ExprKind::Constant:
            return e.value();
        case ExprKind::Symbol: {
            auto it = env.find(e.sym()->name);
            if (it == env.end()) return std::nullopt;
            return it->second;
        }
        case ExprKind::Add: {
            BigRational s(0);
            for (const Expr& t : e.operands()) {
                auto v = oracle_eval(t, env);
                if (!v) return std::nullopt;
                s += *v;
            }
            return s;
        }
        case ExprKind::Mul: {
            BigRational p(1);
            for (const Expr& t : e.operands()) {
                auto v = oracle_eval(t, env);
                if (!v) return std::nullopt;
                p *= *v;
            }
            return p;
        }
        case ExprKind::Pow: {
            auto b = oracle_eval(e.base(), env);
            auto x = oracle_eval(e.exponent(), env);
            if (!b || !x || !x->is_integer()) return std::nullopt;
            long long k = x->num().convert_to<long long>();
            if (b->is_zero() && k <= 0) return std::nullopt;  // avoid 0^0 / division by zero
            return b->pow(k);
        }
        default:
            return std::nullopt;
    }
}

/// Random unnormalized tree over the rational fragment; exercise canonicalize.
inline Expr rand_raw_tree(const std::vector<SymbolPtr>& syms, int depth) {
    using namespace symkern;
    if (depth <= 0 || rand_int(0, 5) == 0) {
        if (!syms.empty() && rand_int(0, 1) == 0)
            return symbol(syms[static_cast<std::size_t>(rand_int(0, static_cast<int>(syms.size()) - 1))]);
        return constant(rand_rational());
    }
    switch (rand_int(0, 3)) {
        case 0: {
            std::vector<Expr> ops;
            int n = rand_int(2, 4);
            for (int i = 0; i < n; ++i) ops.push_back(rand_raw_tree(syms, depth - 1));
            return detail::raw_add(std::move(ops));
        }
        case 1: {
            std::vector<Expr> ops;
            int n = rand_int(2, 3);
            for (int i = 0; i < n; ++i) ops.push_back(rand_raw_tree(syms, depth - 1));
            return detail::raw_mul(std::move(ops));
        }
        default:
            return detail::raw_pow(rand_raw_tree(syms, depth - 1), integer(rand_int(0, 3)));
    }
}

/// Random canonical expression including functions; used for print/parse
/// round trips and differentiation properties.
inline Expr rand_expr(const std::vector<SymbolPtr>& syms, int depth, bool with_funcs = true) {
    using namespace symkern;
    if (depth <= 0 || rand_int(0, 4) == 0) {
        if (!syms.empty() && rand_int(0, 2) != 0)
            return symbol(syms[static_cast<std::size_t>(rand_int(0, static_cast<int>(syms.size()) - 1))]);
        return constant(rand_rational());
    }
    switch (rand_int(0, with_funcs ? 4 : 3)) {
        case 0: {
            std::vector<Expr> ops;
            int n = rand_int(2, 3);
            for (int i = 0; i < n; ++i) ops.push_back(rand_expr(syms, depth - 1, with_funcs));
            return add(std::move(ops));
        }
        case 1: {
            std::vector<Expr> ops;
            int n = rand_int(2, 3);
            for (int i = 0; i < n; ++i) ops.push_back(rand_expr(syms, depth - 1, with_funcs));
            return mul(std::move(ops));
        }
        case 2:
            return pow(rand_expr(syms, depth - 1, with_funcs), integer(rand_int(-2, 3)));
        case 3: {
            // rational exponents too
            return pow(rand_expr(syms, depth - 1, with_funcs),
                       constant(BigRational(rand_int(1, 3), 2)));
        }
        default: {
            FuncName f = static_cast<FuncName>(rand_int(0, 4));
            return func(f, rand_expr(syms, depth - 1, with_funcs));
        }
    }
}

}  // namespace testutil
