#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "symkern/expr.hpp"
#include "symkern/mpoly.hpp"

namespace symkern {

// ---------------------------------------------------------------------------
// expand
// ---------------------------------------------------------------------------

Expr expand(const Expr& e);

namespace detail {

/// Distributes a product whose factors may be sums; factors are already
/// expanded. Non-sum factors multiply into every term.
inline Expr distribute(const std::vector<Expr>& factors) {
    std::vector<Expr> acc{one()};
    for (const Expr& f : factors) {
        std::vector<Expr> next;
        if (f.kind() == ExprKind::Add) {
            next.reserve(acc.size() * f.operands().size());
            for (const Expr& t : acc)
                for (const Expr& u : f.operands()) next.push_back(mul({t, u}));
        } else {
            next.reserve(acc.size());
            for (const Expr& t : acc) next.push_back(mul({t, f}));
        }
        acc = std::move(next);
    }
    return add(std::move(acc));
}

}  // namespace detail

/// Fully distributes products and nonnegative integer powers of sums.
/// Non-polynomial subterms (functions, radicals, symbolic powers) are atoms;
/// their arguments are expanded in place.
inline Expr expand(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Add: {
            std::vector<Expr> ops;
            ops.reserve(e.operands().size());
            for (const Expr& t : e.operands()) ops.push_back(expand(t));
            return add(std::move(ops));
        }
        case ExprKind::Mul: {
            std::vector<Expr> ops;
            ops.reserve(e.operands().size());
            for (const Expr& t : e.operands()) ops.push_back(expand(t));
            return detail::distribute(ops);
        }
        case ExprKind::Pow: {
            Expr b = expand(e.base());
            Expr ex = expand(e.exponent());
            if (b.kind() == ExprKind::Add && ex.is_integer_constant() && ex.value() > BigRational(1) &&
                ex.value() < BigRational(128)) {
                int k = ex.value().num().convert_to<int>();
                Expr acc = b;
                for (int i = 1; i < k; ++i) acc = detail::distribute({acc, b});
                return acc;
            }
            return pow(std::move(b), std::move(ex));
        }
        case ExprKind::Function:
            return func(e.func_name(), expand(e.arg()));
        case ExprKind::Limit:
            return deferred_limit(expand(e.limit_body()), e.sym(), expand(e.limit_point()), e.limit_dir());
        default:
            return e;
    }
}

// ---------------------------------------------------------------------------
// Polynomial views
// ---------------------------------------------------------------------------

/// Dense univariate view: coefficients by ascending degree, all free of the
/// variable. Empty list = zero polynomial.
struct UnivariatePoly {
    SymbolPtr var;
    std::vector<Expr> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    Expr to_expr() const {
        std::vector<Expr> terms;
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            terms.push_back(mul({coeffs[k], pow(symbol(var), integer(static_cast<long long>(k)))}));
        return add(std::move(terms));
    }

    void trim() {
        while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    }
};

namespace detail {

/// Splits one expanded term into (degree in var, cofactor free of var).
/// Throws NotPolynomial on negative, fractional or symbolic powers of var
/// and on var buried inside a function or power base.
inline std::pair<long long, Expr> term_degree(const Expr& term, const SymbolPtr& var) {
    auto bad = [&]() -> std::pair<long long, Expr> {
        fail(ErrorKind::NotPolynomial, "not a polynomial in '" + var->name + "'");
    };
    if (!contains_symbol(term, var)) return {0, term};
    if (term.is_symbol()) return {1, one()};
    if (term.kind() == ExprKind::Pow) {
        if (term.base().is_symbol() && term.base().sym()->name == var->name) {
            const Expr& ex = term.exponent();
            if (ex.is_integer_constant() && ex.value().is_positive())
                return {ex.value().num().convert_to<long long>(), one()};
        }
        return bad();
    }
    if (term.kind() == ExprKind::Mul) {
        long long deg = 0;
        std::vector<Expr> rest;
        for (const Expr& f : term.operands()) {
            if (!contains_symbol(f, var)) {
                rest.push_back(f);
                continue;
            }
            auto [d, c] = term_degree(f, var);
            deg += d;
            if (!c.is_one()) rest.push_back(c);
        }
        return {deg, mul(std::move(rest))};
    }
    return bad();
}

}  // namespace detail

/// Expands e and reads it as a dense polynomial in var.
inline UnivariatePoly univariate_from(const Expr& e, const SymbolPtr& var) {
    Expr p = expand(e);
    UnivariatePoly out{var, {}};
    std::vector<Expr> terms =
        p.kind() == ExprKind::Add ? p.operands() : std::vector<Expr>{p};
    std::vector<std::vector<Expr>> buckets;
    for (const Expr& t : terms) {
        if (t.is_zero()) continue;
        auto [deg, cof] = detail::term_degree(t, var);
        if (deg > 4096) fail(ErrorKind::NotPolynomial, "degree overflow");
        if (buckets.size() <= static_cast<std::size_t>(deg)) buckets.resize(static_cast<std::size_t>(deg) + 1);
        buckets[static_cast<std::size_t>(deg)].push_back(cof);
    }
    for (auto& b : buckets) out.coeffs.push_back(add(std::move(b)));
    out.trim();
    return out;
}

/// Groups an expanded polynomial by powers of v: sum of c_k * v^k with c_k
/// free of v, built in descending k.
inline Expr collect(const Expr& e, const SymbolPtr& v) {
    UnivariatePoly p = univariate_from(e, v);
    if (p.coeffs.empty()) return zero();
    std::vector<Expr> terms;
    for (int k = p.degree(); k >= 0; --k) {
        const Expr& c = p.coeffs[static_cast<std::size_t>(k)];
        if (c.is_zero()) continue;
        terms.push_back(mul({c, pow(symbol(v), integer(k))}));
    }
    return add(std::move(terms));
}

// ---------------------------------------------------------------------------
// Rational univariate helpers (dense BigRational vectors, ascending)
// ---------------------------------------------------------------------------

namespace detail {

using RatPoly = std::vector<BigRational>;

inline void rp_trim(RatPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline int rp_deg(const RatPoly& p) { return static_cast<int>(p.size()) - 1; }

inline RatPoly rp_derivative(const RatPoly& p) {
    RatPoly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * BigRational(static_cast<long long>(k)));
    rp_trim(d);
    return d;
}

inline RatPoly rp_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, BigRational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    rp_trim(r);
    return r;
}

/// Quotient and remainder of a / b (b nonzero).
inline std::pair<RatPoly, RatPoly> rp_divmod(const RatPoly& a, const RatPoly& b) {
    RatPoly r = a, q;
    rp_trim(r);
    int db = rp_deg(b);
    if (db < 0) fail(ErrorKind::DomainError, "division by zero polynomial");
    if (rp_deg(r) >= db) q.assign(static_cast<std::size_t>(rp_deg(r) - db) + 1, BigRational(0));
    while (rp_deg(r) >= db) {
        int k = rp_deg(r) - db;
        BigRational c = r.back() / b.back();
        q[static_cast<std::size_t>(k)] = c;
        for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(i + k)] -= c * b[static_cast<std::size_t>(i)];
        rp_trim(r);
    }
    rp_trim(q);
    return {q, r};
}

inline RatPoly rp_monic(RatPoly p) {
    rp_trim(p);
    if (p.empty()) return p;
    BigRational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

inline RatPoly rp_gcd(RatPoly a, RatPoly b) {
    rp_trim(a);
    rp_trim(b);
    while (!b.empty()) {
        auto [q, r] = rp_divmod(a, b);
        a = std::move(b);
        b = rp_monic(std::move(r));
    }
    return rp_monic(std::move(a));
}

inline BigRational rp_eval(const RatPoly& p, const BigRational& x) {
    BigRational v(0);
    for (std::size_t k = p.size(); k-- > 0;) v = v * x + p[k];
    return v;
}

/// Yun's square-free decomposition of a monic polynomial: returns pairs
/// (square-free factor, multiplicity), multiplicities ascending.
inline std::vector<std::pair<RatPoly, int>> rp_squarefree(const RatPoly& f) {
    std::vector<std::pair<RatPoly, int>> out;
    RatPoly fp = rp_derivative(f);
    RatPoly g = rp_gcd(f, fp);
    if (rp_deg(g) == 0) {
        out.emplace_back(rp_monic(f), 1);
        return out;
    }
    RatPoly c = rp_divmod(f, g).first;
    RatPoly d = rp_divmod(fp, g).first;
    {
        RatPoly cp = rp_derivative(c);
        RatPoly nd(std::max(d.size(), cp.size()), BigRational(0));
        for (std::size_t k = 0; k < d.size(); ++k) nd[k] = d[k];
        for (std::size_t k = 0; k < cp.size(); ++k) nd[k] -= cp[k];
        rp_trim(nd);
        d = std::move(nd);
    }
    int i = 1;
    while (rp_deg(c) > 0) {
        RatPoly a = rp_gcd(c, d);
        if (rp_deg(a) > 0) out.emplace_back(a, i);
        c = rp_divmod(c, a).first;
        RatPoly cp = rp_derivative(c);
        RatPoly da = rp_divmod(d, a).first;
        RatPoly nd(std::max(da.size(), cp.size()), BigRational(0));
        for (std::size_t k = 0; k < da.size(); ++k) nd[k] = da[k];
        for (std::size_t k = 0; k < cp.size(); ++k) nd[k] -= cp[k];
        rp_trim(nd);
        d = std::move(nd);
        ++i;
    }
    return out;
}

inline std::vector<BigInt> positive_divisors(BigInt n) {
    if (n < 0) n = -n;
    std::vector<BigInt> divs;
    for (BigInt d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divs.push_back(d);
            if (d * d != n) divs.push_back(n / d);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

/// All rational roots of a monic rational polynomial (rational root theorem
/// on its primitive integer form), each reported once.
inline std::vector<BigRational> rational_roots_of(const RatPoly& monic) {
    std::vector<BigRational> roots;
    if (rp_deg(monic) < 1) return roots;
    // clear denominators to an integer polynomial
    BigInt den_lcm = 1;
    for (const auto& c : monic) den_lcm = boost::multiprecision::lcm(den_lcm, c.den());
    std::vector<BigInt> ip;
    for (const auto& c : monic) ip.push_back((c * BigRational(den_lcm)).num());
    while (!ip.empty() && ip.back() == 0) ip.pop_back();
    // trailing zeros: root 0
    std::size_t tz = 0;
    while (tz < ip.size() && ip[tz] == 0) ++tz;
    if (tz > 0) roots.emplace_back(0);
    if (ip.size() - tz < 2) return roots;
    BigInt a0 = ip[tz], an = ip.back();
    for (const BigInt& p : positive_divisors(a0)) {
        for (const BigInt& q : positive_divisors(an)) {
            if (boost::multiprecision::gcd(p, q) != 1) continue;
            for (int sgn : {1, -1}) {
                BigRational cand(sgn * p, q);
                if (rp_eval(monic, cand).is_zero()) {
                    if (std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
                }
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Divides out (x - r) as often as it goes; returns the multiplicity.
inline int rp_deflate(RatPoly& p, const BigRational& r) {
    RatPoly lin{-r, BigRational(1)};
    int m = 0;
    while (rp_deg(p) >= 1) {
        auto [q, rem] = rp_divmod(p, lin);
        if (!rem.empty()) break;
        p = std::move(q);
        ++m;
    }
    return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// factor
// ---------------------------------------------------------------------------

struct FactorResult {
    Expr expression;
    /// False when a square-free factor of degree >= 3 without rational roots
    /// was left unfactored.
    bool complete = true;
};

/// Factors a univariate polynomial over the rationals: rational content x
/// irreducible-over-Q factors found by square-free decomposition plus
/// rational-root extraction. Irreducible quadratics stay whole; rootless
/// factors of degree >= 3 are returned unfactored and flagged.
inline FactorResult factor(const Expr& e) {
    Expr ex = expand(e);
    SymbolSet fs = free_symbols(ex);
    if (fs.empty()) return {ex, true};
    SymbolPtr var;
    std::vector<BigRational> rc;
    for (const SymbolPtr& s : fs) {
        UnivariatePoly p = [&]() -> UnivariatePoly {
            try {
                return univariate_from(ex, s);
            } catch (const Error&) {
                return UnivariatePoly{s, {}};
            }
        }();
        if (p.coeffs.empty()) continue;
        bool all_rational = true;
        std::vector<BigRational> cs;
        for (const Expr& c : p.coeffs) {
            if (!c.is_constant()) {
                all_rational = false;
                break;
            }
            cs.push_back(c.value());
        }
        if (all_rational) {
            var = s;
            rc = std::move(cs);
            break;
        }
    }
    if (!var) return {ex, false};  // not univariate over Q; left unfactored

    detail::rp_trim(rc);
    if (rc.empty()) return {zero(), true};
    if (detail::rp_deg(rc) == 0) return {constant(rc[0]), true};

    BigRational content = rc.back();  // leading coefficient; rest made monic
    detail::RatPoly monic = detail::rp_monic(rc);

    Expr x = symbol(var);
    std::vector<Expr> parts;
    bool complete = true;

    for (auto& [sq, mult] : detail::rp_squarefree(monic)) {
        detail::RatPoly rem = sq;
        for (const BigRational& r : detail::rational_roots_of(sq)) {
            detail::rp_deflate(rem, r);
            // present the linear factor with integer coefficients
            BigInt q = r.den();
            Expr lin = q == 1 ? x - constant(r) : constant(BigRational(q)) * x - constant(r * BigRational(q));
            if (q != 1) content /= BigRational(q).pow(mult);
            parts.push_back(pow(lin, integer(mult)));
        }
        detail::rp_trim(rem);
        if (detail::rp_deg(rem) >= 1) {
            // residual without rational roots: clear to a primitive integer
            // polynomial for presentation
            BigInt den_lcm = 1;
            for (const auto& c : rem) den_lcm = boost::multiprecision::lcm(den_lcm, c.den());
            BigInt num_gcd = 0;
            for (const auto& c : rem) num_gcd = boost::multiprecision::gcd(num_gcd, (c * BigRational(den_lcm)).num());
            BigRational scale = BigRational(den_lcm) / BigRational(num_gcd);
            std::vector<Expr> terms;
            for (std::size_t k = 0; k < rem.size(); ++k)
                terms.push_back(constant(rem[k] * scale) * pow(x, integer(static_cast<long long>(k))));
            parts.push_back(pow(add(std::move(terms)), integer(mult)));
            content /= scale.pow(mult);
            if (detail::rp_deg(rem) >= 3) complete = false;
        }
    }
    parts.push_back(constant(content));
    return {mul(std::move(parts)), complete};
}

// ---------------------------------------------------------------------------
// poly_roots
// ---------------------------------------------------------------------------

struct RootMultiplicity {
    Expr root;
    int multiplicity;
};

namespace detail {

/// sqrt of a nonnegative rational as an Expr (exact when a perfect square).
inline Expr sqrt_of_rational(const BigRational& d) {
    return pow(constant(d), constant(BigRational(1, 2)));
}

}  // namespace detail

/// Roots with multiplicities: rational-root extraction for rational
/// coefficients of any degree, quadratic formula (radicals, imaginary pairs)
/// for degree <= 2 (symbolic coefficients allowed). Throws UnsolvableResidual
/// when an unfactorable residual of degree >= 3 remains.
inline std::vector<RootMultiplicity> poly_roots(const UnivariatePoly& p) {
    std::vector<Expr> coeffs = p.coeffs;
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    if (coeffs.empty()) fail(ErrorKind::UnsolvableResidual, "zero polynomial has every value as a root");
    if (coeffs.size() == 1) return {};

    std::vector<RootMultiplicity> out;

    bool all_rational = std::all_of(coeffs.begin(), coeffs.end(), [](const Expr& c) { return c.is_constant(); });
    if (all_rational && coeffs.size() > 3) {
        detail::RatPoly rp;
        for (const Expr& c : coeffs) rp.push_back(c.value());
        rp = detail::rp_monic(rp);
        // peel rational roots with multiplicity
        for (const BigRational& r : detail::rational_roots_of(rp)) {
            int m = detail::rp_deflate(rp, r);
            if (m > 0) out.push_back({constant(r), m});
        }
        detail::rp_trim(rp);
        if (detail::rp_deg(rp) == 0) return out;
        if (detail::rp_deg(rp) > 2)
            fail(ErrorKind::UnsolvableResidual,
                 "residual factor of degree " + std::to_string(detail::rp_deg(rp)) + " has no rational roots");
        std::vector<Expr> resid;
        for (const auto& c : rp) resid.push_back(constant(c));
        for (auto& rm : poly_roots(UnivariatePoly{p.var, std::move(resid)})) out.push_back(std::move(rm));
        return out;
    }

    if (coeffs.size() == 2) {
        out.push_back({neg(coeffs[0]) / coeffs[1], 1});
        return out;
    }
    if (coeffs.size() == 3) {
        const Expr& a = coeffs[2];
        const Expr& b = coeffs[1];
        const Expr& c = coeffs[0];
        Expr disc = expand(b * b - 4 * a * c);
        Expr two_a = 2 * a;
        if (disc.is_zero()) {
            out.push_back({neg(b) / two_a, 2});
            return out;
        }
        Expr s = [&]() {
            if (disc.is_constant() && disc.value().is_negative())
                return imaginary_unit() * detail::sqrt_of_rational(-disc.value());
            return pow(disc, constant(BigRational(1, 2)));
        }();
        out.push_back({(neg(b) - s) / two_a, 1});
        out.push_back({(neg(b) + s) / two_a, 1});
        return out;
    }
    fail(ErrorKind::UnsolvableResidual, "cannot solve degree " + std::to_string(coeffs.size() - 1) +
                                            " polynomial with symbolic coefficients");
}

// ---------------------------------------------------------------------------
// Fractions: combine over a common denominator and cancel
// ---------------------------------------------------------------------------

struct Fraction {
    Expr num;
    Expr den;
};

namespace detail {

// (base, exponent) factor multiset of a product; the rational coefficient is
// returned separately.
struct FactorList {
    BigRational coeff{1};
    std::vector<std::pair<Expr, BigRational>> factors;  // exponents > 0
};

inline void fl_insert(FactorList& fl, const Expr& base, const BigRational& exp) {
    for (auto& [b, e] : fl.factors) {
        if (equal(b, base)) {
            e += exp;
            return;
        }
    }
    fl.factors.emplace_back(base, exp);
}

inline FactorList factor_list_of(const Expr& e) {
    FactorList fl;
    auto handle = [&](const Expr& f) {
        if (f.is_constant()) {
            fl.coeff *= f.value();
        } else if (f.kind() == ExprKind::Pow && f.exponent().is_constant()) {
            fl_insert(fl, f.base(), f.exponent().value());
        } else {
            fl_insert(fl, f, BigRational(1));
        }
    };
    if (e.kind() == ExprKind::Mul)
        for (const Expr& f : e.operands()) handle(f);
    else
        handle(e);
    return fl;
}

inline Expr factor_list_expr(const FactorList& fl) {
    std::vector<Expr> parts;
    if (!fl.coeff.is_one()) parts.push_back(constant(fl.coeff));
    for (const auto& [b, e] : fl.factors) parts.push_back(pow(b, constant(e)));
    return mul(std::move(parts));
}

}  // namespace detail

Fraction as_fraction(const Expr& e);

/// e rewritten with a single expanded numerator over a factored denominator,
/// with common polynomial factors cancelled.
inline Expr rational_normal(const Expr& e) {
    Fraction f = as_fraction(e);
    if (f.den.is_one()) return f.num;
    return div(f.num, f.den);
}

namespace detail {

inline Fraction cancel_fraction(Expr num, const FactorList& den) {
    FactorList remaining;
    remaining.coeff = BigRational(1);

    AtomTable atoms;
    MPoly np = to_mpoly(num, atoms);
    for (const auto& [base, exp] : den.factors) {
        BigRational left = exp;
        if (exp.is_integer() && exp.is_positive()) {
            MPoly bp = to_mpoly(base, atoms);
            while (left.is_positive()) {
                auto q = np.divide_exact(bp);
                if (!q) break;
                np = std::move(*q);
                left -= BigRational(1);
            }
        }
        if (!left.is_zero()) fl_insert(remaining, base, left);
    }
    Expr new_num = np.to_expr(atoms);
    if (!den.coeff.is_one()) new_num = mul({constant(BigRational(1) / den.coeff), new_num});
    return {new_num, factor_list_expr(remaining)};
}

}  // namespace detail

inline Fraction as_fraction(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Add: {
            std::vector<Fraction> parts;
            parts.reserve(e.operands().size());
            for (const Expr& t : e.operands()) parts.push_back(as_fraction(t));
            // least common denominator as a structural factor multiset
            detail::FactorList lcm;
            std::vector<detail::FactorList> den_fls;
            for (const Fraction& f : parts) {
                detail::FactorList fl = detail::factor_list_of(f.den);
                for (const auto& [b, ex] : fl.factors) {
                    bool found = false;
                    for (auto& [lb, lex] : lcm.factors) {
                        if (equal(lb, b)) {
                            lex = std::max(lex, ex);
                            found = true;
                            break;
                        }
                    }
                    if (!found) lcm.factors.emplace_back(b, ex);
                }
                den_fls.push_back(std::move(fl));
            }
            std::vector<Expr> nums;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                std::vector<Expr> fs{parts[i].num};
                if (!den_fls[i].coeff.is_one())
                    fs.push_back(constant(BigRational(1) / den_fls[i].coeff));
                for (const auto& [b, ex] : lcm.factors) {
                    BigRational have(0);
                    for (const auto& [db, dex] : den_fls[i].factors)
                        if (equal(db, b)) have = dex;
                    if (ex != have) fs.push_back(pow(b, constant(ex - have)));
                }
                nums.push_back(mul(std::move(fs)));
            }
            Expr num = expand(add(std::move(nums)));
            return detail::cancel_fraction(std::move(num), lcm);
        }
        case ExprKind::Mul: {
            std::vector<Expr> nums, dens;
            for (const Expr& f : e.operands()) {
                Fraction sub = as_fraction(f);
                nums.push_back(sub.num);
                dens.push_back(sub.den);
            }
            Expr den = mul(std::move(dens));
            return detail::cancel_fraction(expand(mul(std::move(nums))), detail::factor_list_of(den));
        }
        case ExprKind::Pow: {
            const Expr& ex = e.exponent();
            if (ex.is_integer_constant()) {
                BigRational v = ex.value();
                if (v > BigRational(0) && v < BigRational(64)) {
                    Fraction b = as_fraction(e.base());
                    long long k = v.num().convert_to<long long>();
                    return {expand(pow(b.num, integer(k))), pow(b.den, integer(k))};
                }
                if (v.is_negative() && v > BigRational(-64)) {
                    Fraction b = as_fraction(e.base());
                    long long k = (-v).num().convert_to<long long>();
                    // sinking a sum into the denominator keeps it factored
                    return detail::cancel_fraction(expand(pow(b.den, integer(k))),
                                                   detail::factor_list_of(pow(b.num, integer(k))));
                }
            }
            Expr nb = rational_normal(e.base());
            return {pow(nb, ex), one()};
        }
        case ExprKind::Function:
            return {func(e.func_name(), rational_normal(e.arg())), one()};
        default:
            return {e, one()};
    }
}

}  // namespace symkern
