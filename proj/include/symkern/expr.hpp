#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "symkern/error.hpp"
#include "symkern/rational.hpp"
#include "symkern/symbols.hpp"

namespace symkern {

enum class ExprKind {
    Constant,
    Pi,
    ImaginaryUnit,
    Symbol,
    Pow,
    Function,
    Mul,
    Add,
    Order,
    Limit,
    Infinity,
};

enum class FuncName { Sin, Cos, Exp, Log, Abs };

inline const char* func_name_str(FuncName f) {
    switch (f) {
        case FuncName::Sin: return "sin";
        case FuncName::Cos: return "cos";
        case FuncName::Exp: return "exp";
        case FuncName::Log: return "log";
        case FuncName::Abs: return "abs";
    }
    return "?";
}

enum class LimitDir { Both, Left, Right };

class Expr;
namespace detail {
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
}  // namespace detail

Expr constant(BigRational v);
Expr integer(long long n);
Expr symbol(const SymbolPtr& s);
Expr pi_constant();
Expr imaginary_unit();
Expr infinity(int sign);
Expr add(std::vector<Expr> operands);
Expr mul(std::vector<Expr> operands);
Expr pow(Expr base, Expr exponent);
Expr func(FuncName f, Expr arg);
Expr order_term(const SymbolPtr& var, int degree);
Expr deferred_limit(Expr body, const SymbolPtr& var, Expr point, LimitDir dir);

namespace detail {

struct ExprNode {
    ExprKind kind;
    std::size_t hash = 0;
    BigRational value;       // Constant
    SymbolPtr sym;           // Symbol; Order/Limit variable
    std::vector<Expr> args;  // Add/Mul operands; Pow {base,exp}; Function {arg}; Limit {body,point}
    FuncName fn = FuncName::Sin;
    int degree = 0;  // Order
    LimitDir dir = LimitDir::Both;
    int inf_sign = 1;  // Infinity
};

inline std::size_t hash_mix(std::size_t h, std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

inline std::size_t hash_bigint(const BigInt& n) {
    BigInt m = n % 1000000007;
    long long v = m.convert_to<long long>();
    return static_cast<std::size_t>(v >= 0 ? v : -v) * 2 + (v < 0 ? 1 : 0);
}

}  // namespace detail

/// Immutable canonical expression tree. Cheap to copy (shared nodes); all
/// construction funnels through the canonicalizing factories below.
class Expr {
  public:
    Expr() = delete;

    ExprKind kind() const { return node_->kind; }
    std::size_t hash() const { return node_->hash; }

    const BigRational& value() const { return node_->value; }
    const SymbolPtr& sym() const { return node_->sym; }
    const std::vector<Expr>& operands() const { return node_->args; }
    const Expr& base() const { return node_->args[0]; }
    const Expr& exponent() const { return node_->args[1]; }
    FuncName func_name() const { return node_->fn; }
    const Expr& arg() const { return node_->args[0]; }
    int order_degree() const { return node_->degree; }
    const Expr& limit_body() const { return node_->args[0]; }
    const Expr& limit_point() const { return node_->args[1]; }
    LimitDir limit_dir() const { return node_->dir; }
    int infinity_sign() const { return node_->inf_sign; }

    bool is_constant() const { return kind() == ExprKind::Constant; }
    bool is_integer_constant() const { return is_constant() && value().is_integer(); }
    bool is_zero() const { return is_constant() && value().is_zero(); }
    bool is_one() const { return is_constant() && value().is_one(); }
    bool is_symbol() const { return kind() == ExprKind::Symbol; }

    bool same_node(const Expr& o) const { return node_ == o.node_; }

    static Expr adopt(detail::NodePtr n) { return Expr(std::move(n)); }
    const detail::NodePtr& node() const { return node_; }

  private:
    explicit Expr(detail::NodePtr n) : node_(std::move(n)) {}
    detail::NodePtr node_;
};

// ---------------------------------------------------------------------------
// Total structural order: Const < Pi < I < Sym < Pow < Func < Mul < Add <
// Order < Limit < Infinity; ties lexicographic then recursive.
// ---------------------------------------------------------------------------

inline int kind_rank(ExprKind k) {
    switch (k) {
        case ExprKind::Constant: return 0;
        case ExprKind::Pi: return 1;
        case ExprKind::ImaginaryUnit: return 2;
        case ExprKind::Symbol: return 3;
        case ExprKind::Pow: return 4;
        case ExprKind::Function: return 5;
        case ExprKind::Mul: return 6;
        case ExprKind::Add: return 7;
        case ExprKind::Order: return 8;
        case ExprKind::Limit: return 9;
        case ExprKind::Infinity: return 10;
    }
    return 11;
}

inline int compare(const Expr& a, const Expr& b) {
    if (a.same_node(b)) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case ExprKind::Constant: {
            if (a.value() == b.value()) return 0;
            return a.value() < b.value() ? -1 : 1;
        }
        case ExprKind::Pi:
            return 0;
        case ExprKind::ImaginaryUnit:
            return 0;
        case ExprKind::Symbol: {
            int c = a.sym()->name.compare(b.sym()->name);
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case ExprKind::Pow: {
            if (int c = compare(a.base(), b.base())) return c;
            return compare(a.exponent(), b.exponent());
        }
        case ExprKind::Function: {
            if (a.func_name() != b.func_name())
                return static_cast<int>(a.func_name()) < static_cast<int>(b.func_name()) ? -1 : 1;
            return compare(a.arg(), b.arg());
        }
        case ExprKind::Mul:
        case ExprKind::Add: {
            const auto& xs = a.operands();
            const auto& ys = b.operands();
            std::size_t n = std::min(xs.size(), ys.size());
            for (std::size_t i = 0; i < n; ++i)
                if (int c = compare(xs[i], ys[i])) return c;
            if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
            return 0;
        }
        case ExprKind::Order: {
            int c = a.sym()->name.compare(b.sym()->name);
            if (c != 0) return c < 0 ? -1 : 1;
            if (a.order_degree() != b.order_degree()) return a.order_degree() < b.order_degree() ? -1 : 1;
            return 0;
        }
        case ExprKind::Limit: {
            if (int c = compare(a.limit_body(), b.limit_body())) return c;
            int c = a.sym()->name.compare(b.sym()->name);
            if (c != 0) return c < 0 ? -1 : 1;
            if (int c2 = compare(a.limit_point(), b.limit_point())) return c2;
            if (a.limit_dir() != b.limit_dir())
                return static_cast<int>(a.limit_dir()) < static_cast<int>(b.limit_dir()) ? -1 : 1;
            return 0;
        }
        case ExprKind::Infinity:
            if (a.infinity_sign() != b.infinity_sign()) return a.infinity_sign() < b.infinity_sign() ? -1 : 1;
            return 0;
    }
    return 0;
}

inline bool equal(const Expr& a, const Expr& b) {
    if (a.same_node(b)) return true;
    if (a.hash() != b.hash()) return false;
    return compare(a, b) == 0;
}

inline bool operator==(const Expr& a, const Expr& b) { return equal(a, b); }
inline bool operator!=(const Expr& a, const Expr& b) { return !equal(a, b); }

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// ---------------------------------------------------------------------------
// Node construction (canonicalizing factories)
// ---------------------------------------------------------------------------

namespace detail {

inline std::size_t node_hash(const ExprNode& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 1000003ULL;
    switch (n.kind) {
        case ExprKind::Constant:
            h = hash_mix(h, hash_bigint(n.value.num()));
            h = hash_mix(h, hash_bigint(n.value.den()));
            break;
        case ExprKind::Symbol:
            h = hash_mix(h, std::hash<std::string>{}(n.sym->name));
            break;
        case ExprKind::Function:
            h = hash_mix(h, static_cast<std::size_t>(n.fn));
            break;
        case ExprKind::Order:
            h = hash_mix(h, std::hash<std::string>{}(n.sym->name));
            h = hash_mix(h, static_cast<std::size_t>(n.degree));
            break;
        case ExprKind::Limit:
            h = hash_mix(h, std::hash<std::string>{}(n.sym->name));
            h = hash_mix(h, static_cast<std::size_t>(n.dir));
            break;
        case ExprKind::Infinity:
            h = hash_mix(h, static_cast<std::size_t>(n.inf_sign + 2));
            break;
        default:
            break;
    }
    for (const Expr& a : n.args) h = hash_mix(h, a.hash());
    return h;
}

inline Expr finish(ExprNode n) {
    n.hash = node_hash(n);
    return Expr::adopt(std::make_shared<const ExprNode>(std::move(n)));
}

/// Unnormalized constructors: the raw-tree surface consumed by canonicalize()
/// (and by tests that need denormalized input). Everything else should use
/// the canonicalizing factories.
inline Expr raw_add(std::vector<Expr> ops) {
    ExprNode n{ExprKind::Add};
    n.args = std::move(ops);
    return finish(std::move(n));
}
inline Expr raw_mul(std::vector<Expr> ops) {
    ExprNode n{ExprKind::Mul};
    n.args = std::move(ops);
    return finish(std::move(n));
}
inline Expr raw_pow(Expr base, Expr exp) {
    ExprNode n{ExprKind::Pow};
    n.args = {std::move(base), std::move(exp)};
    return finish(std::move(n));
}
inline Expr raw_func(FuncName f, Expr arg) {
    ExprNode n{ExprKind::Function};
    n.fn = f;
    n.args = {std::move(arg)};
    return finish(std::move(n));
}

}  // namespace detail

inline Expr constant(BigRational v) {
    detail::ExprNode n{ExprKind::Constant};
    n.value = std::move(v);
    return detail::finish(std::move(n));
}

inline Expr integer(long long v) { return constant(BigRational(v)); }

inline const Expr& zero() {
    static const Expr e = integer(0);
    return e;
}
inline const Expr& one() {
    static const Expr e = integer(1);
    return e;
}

inline Expr symbol(const SymbolPtr& s) {
    if (!s) fail(ErrorKind::InvalidName, "null symbol");
    detail::ExprNode n{ExprKind::Symbol};
    n.sym = s;
    return detail::finish(std::move(n));
}

inline Expr pi_constant() {
    detail::ExprNode n{ExprKind::Pi};
    return detail::finish(std::move(n));
}

inline Expr imaginary_unit() {
    detail::ExprNode n{ExprKind::ImaginaryUnit};
    return detail::finish(std::move(n));
}

inline Expr infinity(int sign) {
    detail::ExprNode n{ExprKind::Infinity};
    n.inf_sign = sign >= 0 ? 1 : -1;
    return detail::finish(std::move(n));
}

inline Expr order_term(const SymbolPtr& var, int degree) {
    if (degree < 0) fail(ErrorKind::DomainError, "order degree must be nonnegative");
    detail::ExprNode n{ExprKind::Order};
    n.sym = var;
    n.degree = degree;
    return detail::finish(std::move(n));
}

inline Expr deferred_limit(Expr body, const SymbolPtr& var, Expr point, LimitDir dir) {
    detail::ExprNode n{ExprKind::Limit};
    n.sym = var;
    n.dir = dir;
    n.args = {std::move(body), std::move(point)};
    return detail::finish(std::move(n));
}

// ---------------------------------------------------------------------------
// Sign/assumption propagation
// ---------------------------------------------------------------------------

enum class Trilean { Yes, No, Unknown };
enum class AskProperty { Real, Positive, Integer, Nonzero };

/// Abstract sign of a (possibly non-real) expression. Sound: a claim is made
/// only when it holds for every valuation consistent with the assumptions.
enum class Sign {
    Zero,
    Pos,
    Neg,
    NonNeg,
    NonPos,
    NonZero,      // real, nonzero, sign unknown
    UnknownReal,  // real, nothing else known
    NotReal,      // provably not a real number
    Unknown,
};

inline bool sign_is_real(Sign s) { return s != Sign::NotReal && s != Sign::Unknown; }

inline Sign sign_of(const Expr& e);

namespace detail {

inline Sign sign_of_const(const BigRational& v) {
    if (v.is_zero()) return Sign::Zero;
    return v.is_positive() ? Sign::Pos : Sign::Neg;
}

inline Sign sign_add(Sign a, Sign b) {
    if (a == Sign::Zero) return b;
    if (b == Sign::Zero) return a;
    auto is = [](Sign s, Sign t) { return s == t; };
    if ((is(a, Sign::Pos) || is(a, Sign::NonNeg)) && (is(b, Sign::Pos) || is(b, Sign::NonNeg))) {
        return (is(a, Sign::Pos) || is(b, Sign::Pos)) ? Sign::Pos : Sign::NonNeg;
    }
    if ((is(a, Sign::Neg) || is(a, Sign::NonPos)) && (is(b, Sign::Neg) || is(b, Sign::NonPos))) {
        return (is(a, Sign::Neg) || is(b, Sign::Neg)) ? Sign::Neg : Sign::NonPos;
    }
    if (a == Sign::NotReal && sign_is_real(b)) return Sign::NotReal;
    if (b == Sign::NotReal && sign_is_real(a)) return Sign::NotReal;
    if (sign_is_real(a) && sign_is_real(b)) return Sign::UnknownReal;
    return Sign::Unknown;
}

inline Sign sign_mul(Sign a, Sign b) {
    if (a == Sign::Zero || b == Sign::Zero) return Sign::Zero;
    if (a == Sign::NotReal || b == Sign::NotReal) {
        // i * (real nonzero) is not real; anything else unknown.
        Sign r = a == Sign::NotReal ? b : a;
        if (r == Sign::Pos || r == Sign::Neg || r == Sign::NonZero) return Sign::NotReal;
        return Sign::Unknown;
    }
    if (!sign_is_real(a) || !sign_is_real(b)) return Sign::Unknown;
    auto definite = [](Sign s) { return s == Sign::Pos || s == Sign::Neg; };
    if (definite(a) && definite(b)) return a == b ? Sign::Pos : Sign::Neg;
    auto nonzero = [](Sign s) { return s == Sign::Pos || s == Sign::Neg || s == Sign::NonZero; };
    if (nonzero(a) && nonzero(b)) return Sign::NonZero;
    auto nonneg = [](Sign s) { return s == Sign::Pos || s == Sign::NonNeg; };
    auto nonpos = [](Sign s) { return s == Sign::Neg || s == Sign::NonPos; };
    if ((nonneg(a) && nonneg(b)) || (nonpos(a) && nonpos(b))) return Sign::NonNeg;
    if ((nonneg(a) && nonpos(b)) || (nonpos(a) && nonneg(b))) return Sign::NonPos;
    return Sign::UnknownReal;
}

}  // namespace detail

inline Trilean ask_integer(const Expr& e);

inline Sign sign_of(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return detail::sign_of_const(e.value());
        case ExprKind::Pi:
            return Sign::Pos;
        case ExprKind::ImaginaryUnit:
            return Sign::NotReal;
        case ExprKind::Symbol: {
            const Assumptions& a = e.sym()->assumptions;
            if (a.positive) return Sign::Pos;
            if (a.real || a.integer) return Sign::UnknownReal;
            return Sign::Unknown;
        }
        case ExprKind::Add: {
            Sign s = Sign::Zero;
            for (const Expr& t : e.operands()) s = detail::sign_add(s, sign_of(t));
            return s;
        }
        case ExprKind::Mul: {
            Sign s = Sign::Pos;
            for (const Expr& t : e.operands()) s = detail::sign_mul(s, sign_of(t));
            return s;
        }
        case ExprKind::Pow: {
            Sign b = sign_of(e.base());
            const Expr& ex = e.exponent();
            if (ex.is_constant()) {
                const BigRational& r = ex.value();
                if (r.is_zero()) return Sign::Pos;  // survives only when base may be 0^0-like; 0^0=1
                bool negexp = r.is_negative();
                if (r.is_integer()) {
                    bool even = (r.num() % 2) == 0;
                    switch (b) {
                        case Sign::Pos: return Sign::Pos;
                        case Sign::Neg: return even ? Sign::Pos : Sign::Neg;
                        case Sign::Zero: return negexp ? Sign::Unknown : Sign::Zero;
                        case Sign::NonNeg: return negexp ? (even ? Sign::Pos : Sign::Unknown)
                                                         : (even ? Sign::NonNeg : Sign::NonNeg);
                        case Sign::NonPos: return negexp ? Sign::Unknown : (even ? Sign::NonNeg : Sign::NonPos);
                        case Sign::NonZero: return even ? Sign::Pos : Sign::NonZero;
                        case Sign::UnknownReal: return even ? (negexp ? Sign::Pos : Sign::NonNeg) : Sign::UnknownReal;
                        default: return Sign::Unknown;
                    }
                }
                // Rational non-integer exponent: even root demands nonnegative base.
                bool even_root = (r.den() % 2) == 0;
                switch (b) {
                    case Sign::Pos: return Sign::Pos;
                    case Sign::Zero: return negexp ? Sign::Unknown : Sign::Zero;
                    case Sign::NonNeg: return negexp ? Sign::Unknown : Sign::NonNeg;
                    case Sign::Neg: return even_root ? Sign::NotReal : (negexp ? Sign::Neg : Sign::Neg);
                    case Sign::NonPos: return even_root ? Sign::Unknown : Sign::NonPos;
                    default: return Sign::Unknown;
                }
            }
            // Symbolic exponent: positive real base keeps positivity when the
            // exponent is provably real.
            if (b == Sign::Pos && sign_is_real(sign_of(ex))) return Sign::Pos;
            return Sign::Unknown;
        }
        case ExprKind::Function: {
            Sign a = sign_of(e.arg());
            switch (e.func_name()) {
                case FuncName::Exp:
                    return sign_is_real(a) ? Sign::Pos : Sign::Unknown;
                case FuncName::Log:
                    return a == Sign::Pos ? Sign::UnknownReal : Sign::Unknown;
                case FuncName::Sin:
                case FuncName::Cos:
                    return sign_is_real(a) ? Sign::UnknownReal : Sign::Unknown;
                case FuncName::Abs:
                    if (!sign_is_real(a)) return Sign::Unknown;
                    if (a == Sign::Pos || a == Sign::Neg || a == Sign::NonZero) return Sign::Pos;
                    if (a == Sign::Zero) return Sign::Zero;
                    return Sign::NonNeg;
            }
            return Sign::Unknown;
        }
        default:
            return Sign::Unknown;
    }
}

inline Trilean ask_integer(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return e.value().is_integer() ? Trilean::Yes : Trilean::No;
        case ExprKind::Pi:
        case ExprKind::ImaginaryUnit:
            return Trilean::No;
        case ExprKind::Symbol:
            return e.sym()->assumptions.integer ? Trilean::Yes : Trilean::Unknown;
        case ExprKind::Add: {
            std::size_t yes = 0, no = 0;
            for (const Expr& t : e.operands()) {
                Trilean r = ask_integer(t);
                if (r == Trilean::Yes) ++yes;
                if (r == Trilean::No) ++no;
            }
            if (yes == e.operands().size()) return Trilean::Yes;
            // integers plus a single non-integer cannot sum to an integer
            if (no == 1 && yes + 1 == e.operands().size()) return Trilean::No;
            return Trilean::Unknown;
        }
        case ExprKind::Mul: {
            for (const Expr& t : e.operands())
                if (ask_integer(t) != Trilean::Yes) return Trilean::Unknown;
            return Trilean::Yes;
        }
        case ExprKind::Pow: {
            if (ask_integer(e.base()) == Trilean::Yes && e.exponent().is_constant() &&
                e.exponent().value().is_integer() && !e.exponent().value().is_negative())
                return Trilean::Yes;
            return Trilean::Unknown;
        }
        case ExprKind::Function:
            if (e.func_name() == FuncName::Abs && ask_integer(e.arg()) == Trilean::Yes) return Trilean::Yes;
            return Trilean::Unknown;
        default:
            return Trilean::Unknown;
    }
}

/// Tri-state query against the assumption system. Sound: never answers
/// yes/no unless it holds for every consistent valuation.
inline Trilean ask(const Expr& e, AskProperty p) {
    Sign s = sign_of(e);
    switch (p) {
        case AskProperty::Real:
            if (sign_is_real(s)) return Trilean::Yes;
            if (s == Sign::NotReal) return Trilean::No;
            return Trilean::Unknown;
        case AskProperty::Positive:
            if (s == Sign::Pos) return Trilean::Yes;
            if (s == Sign::Zero || s == Sign::Neg || s == Sign::NonPos || s == Sign::NotReal) return Trilean::No;
            return Trilean::Unknown;
        case AskProperty::Nonzero:
            if (s == Sign::Pos || s == Sign::Neg || s == Sign::NonZero || s == Sign::NotReal) return Trilean::Yes;
            if (s == Sign::Zero) return Trilean::No;
            return Trilean::Unknown;
        case AskProperty::Integer:
            return ask_integer(e);
    }
    return Trilean::Unknown;
}

// ---------------------------------------------------------------------------
// Canonicalizing factories
// ---------------------------------------------------------------------------

namespace detail {

inline void check_arith_operand(const Expr& e) {
    if (e.kind() == ExprKind::Infinity)
        fail(ErrorKind::DomainError, "infinity cannot enter arithmetic (no extended reals)");
}

/// Splits an Add term into (rational coefficient, monic part). The monic
/// part of a pure constant is 1.
inline std::pair<BigRational, Expr> split_coeff(const Expr& t) {
    if (t.is_constant()) return {t.value(), one()};
    if (t.kind() == ExprKind::Mul) {
        const auto& ops = t.operands();
        if (ops[0].is_constant()) {
            if (ops.size() == 2) return {ops[0].value(), ops[1]};
            std::vector<Expr> rest(ops.begin() + 1, ops.end());
            ExprNode n{ExprKind::Mul};
            n.args = std::move(rest);
            return {ops[0].value(), finish(std::move(n))};
        }
    }
    return {BigRational(1), t};
}

/// Degree of `t` in `var` when t = c * var^k with c free of var; nullopt
/// otherwise. Used for order-term absorption.
std::optional<BigRational> monomial_degree_in(const Expr& t, const SymbolPtr& var);

}  // namespace detail

inline bool contains_symbol(const Expr& e, const SymbolPtr& s) {
    switch (e.kind()) {
        case ExprKind::Symbol:
            return e.sym()->name == s->name;
        case ExprKind::Order:
            return e.sym()->name == s->name;
        case ExprKind::Limit:
            return e.sym()->name == s->name || contains_symbol(e.limit_body(), s) ||
                   contains_symbol(e.limit_point(), s);
        default:
            for (const Expr& a : e.operands())
                if (contains_symbol(a, s)) return true;
            return false;
    }
}

namespace detail {

inline std::optional<BigRational> monomial_degree_in(const Expr& t, const SymbolPtr& var) {
    if (!contains_symbol(t, var)) return BigRational(0);
    if (t.is_symbol() && t.sym()->name == var->name) return BigRational(1);
    if (t.kind() == ExprKind::Pow && t.base().is_symbol() && t.base().sym()->name == var->name &&
        t.exponent().is_constant())
        return t.exponent().value();
    if (t.kind() == ExprKind::Mul) {
        BigRational deg(0);
        for (const Expr& f : t.operands()) {
            auto d = monomial_degree_in(f, var);
            if (!d) return std::nullopt;
            deg += *d;
        }
        return deg;
    }
    return std::nullopt;
}

}  // namespace detail

inline Expr add(std::vector<Expr> operands) {
    // Flatten nested sums.
    std::vector<Expr> flat;
    flat.reserve(operands.size());
    for (Expr& e : operands) {
        detail::check_arith_operand(e);
        if (e.kind() == ExprKind::Add)
            for (const Expr& c : e.operands()) flat.push_back(c);
        else
            flat.push_back(std::move(e));
    }

    // Order terms: keep the lowest degree per variable, absorb covered terms.
    std::map<std::string, std::pair<SymbolPtr, int>> orders;
    std::vector<Expr> terms;
    terms.reserve(flat.size());
    for (Expr& e : flat) {
        if (e.kind() == ExprKind::Order) {
            auto it = orders.find(e.sym()->name);
            if (it == orders.end())
                orders.emplace(e.sym()->name, std::make_pair(e.sym(), e.order_degree()));
            else
                it->second.second = std::min(it->second.second, e.order_degree());
        } else {
            terms.push_back(std::move(e));
        }
    }
    if (!orders.empty()) {
        std::vector<Expr> kept;
        for (Expr& t : terms) {
            bool absorbed = false;
            for (auto& [name, vo] : orders) {
                auto d = detail::monomial_degree_in(t, vo.first);
                if (d && d->is_integer() && *d >= BigRational(vo.second)) {
                    absorbed = true;
                    break;
                }
            }
            if (!absorbed) kept.push_back(std::move(t));
        }
        terms = std::move(kept);
    }

    // Merge like terms: sort by monic part, sum rational coefficients.
    std::vector<std::pair<Expr, BigRational>> split;
    split.reserve(terms.size());
    for (const Expr& t : terms) {
        auto [c, m] = detail::split_coeff(t);
        split.emplace_back(m, c);
    }
    std::sort(split.begin(), split.end(),
              [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
    std::vector<Expr> merged;
    BigRational const_sum(0);
    for (std::size_t i = 0; i < split.size();) {
        std::size_t j = i;
        BigRational c(0);
        while (j < split.size() && equal(split[j].first, split[i].first)) c += split[j++].second;
        const Expr& m = split[i].first;
        if (m.is_one()) {
            const_sum += c;
        } else if (!c.is_zero()) {
            if (c.is_one())
                merged.push_back(m);
            else
                merged.push_back(mul({constant(c), m}));
        }
        i = j;
    }
    if (!const_sum.is_zero()) merged.push_back(constant(const_sum));
    // A merged coefficient can re-introduce nested sums via distribution.
    bool needs_reflatten = std::any_of(merged.begin(), merged.end(),
                                       [](const Expr& t) { return t.kind() == ExprKind::Add; });
    for (auto& [name, vo] : orders) merged.push_back(order_term(vo.first, vo.second));
    if (needs_reflatten) return add(std::move(merged));

    if (merged.empty()) return zero();
    if (merged.size() == 1) return merged[0];
    std::sort(merged.begin(), merged.end(), ExprLess{});
    detail::ExprNode n{ExprKind::Add};
    n.args = std::move(merged);
    return detail::finish(std::move(n));
}

inline Expr mul(std::vector<Expr> operands) {
    // Flatten nested products; peel off constants.
    std::vector<Expr> flat;
    flat.reserve(operands.size());
    for (Expr& e : operands) {
        detail::check_arith_operand(e);
        if (e.kind() == ExprKind::Mul)
            for (const Expr& c : e.operands()) flat.push_back(c);
        else
            flat.push_back(std::move(e));
    }

    BigRational coeff(1);
    std::vector<std::pair<Expr, Expr>> pairs;  // (base, exponent)
    std::vector<Expr> orders;
    for (const Expr& f : flat) {
        if (f.is_constant()) {
            coeff *= f.value();
        } else if (f.kind() == ExprKind::Order) {
            orders.push_back(f);
        } else if (f.kind() == ExprKind::Pow) {
            pairs.emplace_back(f.base(), f.exponent());
        } else {
            pairs.emplace_back(f, one());
        }
    }
    if (coeff.is_zero()) return zero();

    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });

    std::vector<Expr> factors;
    bool saw_composite = false;
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        std::vector<Expr> exps;
        while (j < pairs.size() && equal(pairs[j].first, pairs[i].first)) exps.push_back(pairs[j++].second);
        std::size_t merged_count = exps.size();
        Expr e = merged_count == 1 ? exps[0] : add(std::move(exps));
        // A merge summing exponents to zero is a division: the factor drops.
        if (merged_count > 1 && e.is_zero()) {
            i = j;
            continue;
        }
        Expr r = pow(pairs[i].first, e);
        if (r.is_constant())
            coeff *= r.value();
        else {
            // A Mul result (distribution, or a product base passed through
            // with unit exponent) must be re-flattened and re-merged.
            if (r.kind() == ExprKind::Mul) saw_composite = true;
            factors.push_back(std::move(r));
        }
        i = j;
    }
    if (coeff.is_zero()) return zero();
    if (saw_composite) {
        // pow() distributed something; rerun the merge on the new factor list.
        factors.push_back(constant(coeff));
        for (Expr& o : orders) factors.push_back(std::move(o));
        return mul(std::move(factors));
    }

    // Order-term absorption: constants vanish into the order term; powers of
    // the order variable shift its degree.
    if (!orders.empty()) {
        SymbolPtr var = orders[0].sym();
        int degree = orders[0].order_degree();
        for (std::size_t k = 1; k < orders.size(); ++k)
            if (orders[k].sym()->name == var->name) degree += orders[k].order_degree();
        std::vector<Expr> kept;
        for (Expr& f : factors) {
            auto d = detail::monomial_degree_in(f, var);
            if (d && d->is_integer() && *d >= BigRational(0) && f.kind() != ExprKind::Add) {
                degree += d->num().convert_to<int>();
            } else {
                kept.push_back(std::move(f));
            }
        }
        kept.push_back(order_term(var, degree));
        factors = std::move(kept);
        coeff = BigRational(1);
    }

    if (factors.empty()) return constant(coeff);
    if (factors.size() == 1 && coeff.is_one()) return factors[0];

    // A lone rational coefficient distributes over a sum.
    if (factors.size() == 1 && factors[0].kind() == ExprKind::Add) {
        std::vector<Expr> scaled;
        scaled.reserve(factors[0].operands().size());
        for (const Expr& t : factors[0].operands()) scaled.push_back(mul({constant(coeff), t}));
        return add(std::move(scaled));
    }

    std::sort(factors.begin(), factors.end(), ExprLess{});
    if (!coeff.is_one()) factors.insert(factors.begin(), constant(coeff));
    if (factors.size() == 1) return factors[0];
    detail::ExprNode n{ExprKind::Mul};
    n.args = std::move(factors);
    return detail::finish(std::move(n));
}

namespace detail {

inline BigRational rational_gcd(const BigRational& a, const BigRational& b) {
    BigInt n = boost::multiprecision::gcd(a.num(), b.num());
    BigInt d = boost::multiprecision::lcm(a.den(), b.den());
    return BigRational(n, d);
}

/// Rational content of a canonical Add (gcd of term coefficients), always
/// positive.
inline BigRational add_content(const Expr& e) {
    BigRational g(0);
    for (const Expr& t : e.operands()) {
        auto [c, m] = split_coeff(t);
        g = rational_gcd(g.abs(), c.abs());
    }
    return g.is_zero() ? BigRational(1) : g;
}

}  // namespace detail

inline Expr pow(Expr base, Expr exponent) {
    detail::check_arith_operand(base);
    detail::check_arith_operand(exponent);
    if (base.kind() == ExprKind::Order || exponent.kind() == ExprKind::Order)
        fail(ErrorKind::UnsupportedNode, "order term in power");

    if (exponent.is_one()) return base;

    if (base.is_constant() && exponent.is_constant()) {
        if (base.is_zero() && exponent.value().is_negative())
            fail(ErrorKind::DomainError, "division by exact zero");
        if (auto r = exact_rational_pow(base.value(), exponent.value())) return constant(*r);
        // Falls through: stays a symbolic radical like 2^(1/2).
    }

    if (exponent.is_zero()) {
        // 0^0 = 1 by convention; otherwise only a provably nonzero base
        // collapses.
        if (base.is_zero()) return one();
        if (ask(base, AskProperty::Nonzero) == Trilean::Yes) return one();
        detail::ExprNode n{ExprKind::Pow};
        n.args = {std::move(base), std::move(exponent)};
        return detail::finish(std::move(n));
    }

    if (base.is_one()) return one();
    if (base.is_zero() && exponent.is_constant() && exponent.value().is_positive()) return zero();

    // i^n cycles with period 4.
    if (base.kind() == ExprKind::ImaginaryUnit && exponent.is_integer_constant()) {
        BigInt m = exponent.value().num() % 4;
        if (m < 0) m += 4;
        switch (m.convert_to<int>()) {
            case 0: return one();
            case 1: return base;
            case 2: return integer(-1);
            case 3: return mul({integer(-1), imaginary_unit()});
        }
    }

    bool exp_is_int = exponent.is_integer_constant();

    // abs(x)^even = x^even.
    if (base.kind() == ExprKind::Function && base.func_name() == FuncName::Abs && exp_is_int &&
        exponent.value().num() % 2 == 0)
        return pow(base.arg(), std::move(exponent));

    // (x^p)^q merges when q is an integer, or whenever the base is positive.
    if (base.kind() == ExprKind::Pow) {
        const Expr& b = base.base();
        const Expr& p = base.exponent();
        if (exp_is_int || ask(b, AskProperty::Positive) == Trilean::Yes)
            return pow(b, mul({p, exponent}));
        // sqrt of an even power is a power of the absolute value.
        if (p.is_integer_constant() && p.value().num() % 2 == 0 && exponent.is_constant() &&
            exponent.value().den() == 2) {
            BigRational prod = p.value() * exponent.value();
            if (prod.is_integer()) return pow(func(FuncName::Abs, b), constant(prod));
        }
    }

    // Integer powers distribute over products.
    if (base.kind() == ExprKind::Mul && exp_is_int) {
        std::vector<Expr> parts;
        parts.reserve(base.operands().size());
        for (const Expr& f : base.operands()) parts.push_back(pow(f, exponent));
        return mul(std::move(parts));
    }

    // Rational content of a sum is pulled out when its power folds to a
    // rational: (c*S)^e = c^e * S^e. Keeps Add bases content-free.
    if (base.kind() == ExprKind::Add && exponent.is_constant()) {
        BigRational c = detail::add_content(base);
        if (!c.is_one()) {
            if (auto ce = exact_rational_pow(c, exponent.value())) {
                std::vector<Expr> scaled;
                BigRational inv = BigRational(1) / c;
                for (const Expr& t : base.operands()) scaled.push_back(mul({constant(inv), t}));
                return mul({constant(*ce), pow(add(std::move(scaled)), std::move(exponent))});
            }
        }
    }

    detail::ExprNode n{ExprKind::Pow};
    n.args = {std::move(base), std::move(exponent)};
    return detail::finish(std::move(n));
}

inline Expr func(FuncName f, Expr arg) {
    detail::check_arith_operand(arg);
    if (arg.kind() == ExprKind::Order) fail(ErrorKind::UnsupportedNode, "order term in function argument");

    if (arg.is_constant()) {
        const BigRational& v = arg.value();
        switch (f) {
            case FuncName::Exp:
                if (v.is_zero()) return one();
                break;
            case FuncName::Log:
                if (v.is_one()) return zero();
                if (v.is_zero()) fail(ErrorKind::DomainError, "log of exact zero");
                break;
            case FuncName::Sin:
                if (v.is_zero()) return zero();
                break;
            case FuncName::Cos:
                if (v.is_zero()) return one();
                break;
            case FuncName::Abs:
                return constant(v.abs());
        }
    }
    if (f == FuncName::Abs) {
        Sign s = sign_of(arg);
        if (s == Sign::Pos || s == Sign::NonNeg || s == Sign::Zero) return arg;
        if (s == Sign::Neg || s == Sign::NonPos) return mul({integer(-1), std::move(arg)});
        if (arg.kind() == ExprKind::Function && arg.func_name() == FuncName::Abs) return arg;
        // |c*x| = |c| * |x| for rational coefficients.
        auto [c, m] = detail::split_coeff(arg);
        if (!c.is_one() && !m.is_one()) return mul({constant(c.abs()), func(FuncName::Abs, m)});
    }

    detail::ExprNode n{ExprKind::Function};
    n.fn = f;
    n.args = {std::move(arg)};
    return detail::finish(std::move(n));
}

// Convenience builders -------------------------------------------------------

inline Expr neg(Expr e) { return mul({integer(-1), std::move(e)}); }
inline Expr sub(Expr a, Expr b) { return add({std::move(a), neg(std::move(b))}); }
inline Expr div(Expr a, Expr b) { return mul({std::move(a), pow(std::move(b), integer(-1))}); }
inline Expr sqrt_(Expr e) { return pow(std::move(e), constant(BigRational(1, 2))); }
inline Expr sin_(Expr e) { return func(FuncName::Sin, std::move(e)); }
inline Expr cos_(Expr e) { return func(FuncName::Cos, std::move(e)); }
inline Expr exp_(Expr e) { return func(FuncName::Exp, std::move(e)); }
inline Expr log_(Expr e) { return func(FuncName::Log, std::move(e)); }
inline Expr abs_(Expr e) { return func(FuncName::Abs, std::move(e)); }
inline Expr euler_e() { return exp_(one()); }

inline Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
inline Expr operator-(const Expr& a) { return neg(a); }
inline Expr operator+(const Expr& a, long long b) { return add({a, integer(b)}); }
inline Expr operator+(long long a, const Expr& b) { return add({integer(a), b}); }
inline Expr operator-(const Expr& a, long long b) { return sub(a, integer(b)); }
inline Expr operator-(long long a, const Expr& b) { return sub(integer(a), b); }
inline Expr operator*(const Expr& a, long long b) { return mul({a, integer(b)}); }
inline Expr operator*(long long a, const Expr& b) { return mul({integer(a), b}); }
inline Expr operator/(const Expr& a, long long b) { return div(a, integer(b)); }
inline Expr operator/(long long a, const Expr& b) { return div(integer(a), b); }

// ---------------------------------------------------------------------------
// Core operations: canonicalize, substitution, free symbols
// ---------------------------------------------------------------------------

/// Rebuilds the tree bottom-up through the canonicalizing factories.
/// Idempotent; the entry point for raw (unnormalized) trees.
inline Expr canonicalize(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Pi:
        case ExprKind::ImaginaryUnit:
        case ExprKind::Symbol:
        case ExprKind::Order:
        case ExprKind::Infinity:
            return e;
        case ExprKind::Add: {
            std::vector<Expr> ops;
            ops.reserve(e.operands().size());
            for (const Expr& c : e.operands()) ops.push_back(canonicalize(c));
            return add(std::move(ops));
        }
        case ExprKind::Mul: {
            std::vector<Expr> ops;
            ops.reserve(e.operands().size());
            for (const Expr& c : e.operands()) ops.push_back(canonicalize(c));
            return mul(std::move(ops));
        }
        case ExprKind::Pow:
            return pow(canonicalize(e.base()), canonicalize(e.exponent()));
        case ExprKind::Function:
            return func(e.func_name(), canonicalize(e.arg()));
        case ExprKind::Limit:
            return deferred_limit(canonicalize(e.limit_body()), e.sym(), canonicalize(e.limit_point()),
                                  e.limit_dir());
    }
    return e;
}

/// Ordered (symbol, replacement) pairs; symbols pairwise distinct.
using BindingList = std::vector<std::pair<SymbolPtr, Expr>>;

namespace detail {

inline Expr subs_impl(const Expr& e, const std::map<std::string, Expr>& bindings) {
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Pi:
        case ExprKind::ImaginaryUnit:
        case ExprKind::Infinity:
            return e;
        case ExprKind::Symbol: {
            auto it = bindings.find(e.sym()->name);
            return it != bindings.end() ? it->second : e;
        }
        case ExprKind::Order: {
            auto it = bindings.find(e.sym()->name);
            if (it != bindings.end() && it->second.is_symbol())
                return order_term(it->second.sym(), e.order_degree());
            return e;
        }
        case ExprKind::Add: {
            std::vector<Expr> ops;
            ops.reserve(e.operands().size());
            for (const Expr& c : e.operands()) ops.push_back(subs_impl(c, bindings));
            return add(std::move(ops));
        }
        case ExprKind::Mul: {
            std::vector<Expr> ops;
            ops.reserve(e.operands().size());
            for (const Expr& c : e.operands()) ops.push_back(subs_impl(c, bindings));
            return mul(std::move(ops));
        }
        case ExprKind::Pow:
            return pow(subs_impl(e.base(), bindings), subs_impl(e.exponent(), bindings));
        case ExprKind::Function:
            return func(e.func_name(), subs_impl(e.arg(), bindings));
        case ExprKind::Limit: {
            // The limit variable is a binder: it is not substituted inside
            // the body.
            Expr point = subs_impl(e.limit_point(), bindings);
            if (bindings.count(e.sym()->name)) {
                std::map<std::string, Expr> inner = bindings;
                inner.erase(e.sym()->name);
                return deferred_limit(subs_impl(e.limit_body(), inner), e.sym(), point, e.limit_dir());
            }
            return deferred_limit(subs_impl(e.limit_body(), bindings), e.sym(), point, e.limit_dir());
        }
    }
    return e;
}

}  // namespace detail

/// Simultaneous substitution: every binding is read against the original
/// expression; the result is canonical. Unbound symbols pass through.
inline Expr subs(const Expr& e, const BindingList& bindings) {
    std::map<std::string, Expr> m;
    for (const auto& [s, v] : bindings) {
        if (!m.emplace(s->name, v).second)
            fail(ErrorKind::InvalidName, "duplicate binding for symbol '" + s->name + "'");
    }
    return detail::subs_impl(e, m);
}

inline Expr subs(const Expr& e, const SymbolPtr& s, const Expr& v) { return subs(e, BindingList{{s, v}}); }

struct SymbolNameLess {
    bool operator()(const SymbolPtr& a, const SymbolPtr& b) const { return a->name < b->name; }
};
using SymbolSet = std::set<SymbolPtr, SymbolNameLess>;

namespace detail {
inline void collect_free(const Expr& e, SymbolSet& out, std::set<std::string>& bound) {
    switch (e.kind()) {
        case ExprKind::Symbol:
            if (!bound.count(e.sym()->name)) out.insert(e.sym());
            return;
        case ExprKind::Order:
            if (!bound.count(e.sym()->name)) out.insert(e.sym());
            return;
        case ExprKind::Limit: {
            collect_free(e.limit_point(), out, bound);
            bool inserted = bound.insert(e.sym()->name).second;
            collect_free(e.limit_body(), out, bound);
            if (inserted) bound.erase(e.sym()->name);
            return;
        }
        default:
            for (const Expr& a : e.operands()) collect_free(a, out, bound);
    }
}
}  // namespace detail

inline SymbolSet free_symbols(const Expr& e) {
    SymbolSet out;
    std::set<std::string> bound;
    detail::collect_free(e, out, bound);
    return out;
}

inline bool is_ground(const Expr& e) { return free_symbols(e).empty(); }

/// Exact rational value of a ground, function-free tree; nullopt when the
/// expression does not fold to a rational (radicals, pi, i, functions).
inline std::optional<BigRational> eval_rational(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return e.value();
        case ExprKind::Add: {
            BigRational s(0);
            for (const Expr& t : e.operands()) {
                auto v = eval_rational(t);
                if (!v) return std::nullopt;
                s += *v;
            }
            return s;
        }
        case ExprKind::Mul: {
            BigRational p(1);
            for (const Expr& t : e.operands()) {
                auto v = eval_rational(t);
                if (!v) return std::nullopt;
                p *= *v;
            }
            return p;
        }
        case ExprKind::Pow: {
            auto b = eval_rational(e.base());
            auto x = eval_rational(e.exponent());
            if (!b || !x) return std::nullopt;
            return exact_rational_pow(*b, *x);
        }
        default:
            return std::nullopt;
    }
}

}  // namespace symkern
