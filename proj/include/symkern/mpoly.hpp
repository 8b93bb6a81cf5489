#pragma once

// Internal sparse multivariate polynomial arithmetic over BigRational.
// Generators ("atoms") are arbitrary canonical Exprs: symbols, function
// applications, radicals, reciprocals of non-polynomial subtrees. This is
// the exact-division workhorse behind fraction-free elimination and
// numerator/denominator cancellation.

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <vector>

#include "symkern/expr.hpp"

namespace symkern::detail {

class AtomTable {
  public:
    int intern(const Expr& e) {
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (equal(atoms_[i], e)) return static_cast<int>(i);
        atoms_.push_back(e);
        return static_cast<int>(atoms_.size()) - 1;
    }
    const Expr& at(int id) const { return atoms_[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return atoms_.size(); }

  private:
    std::vector<Expr> atoms_;
};

// (atom id, exponent > 0) pairs sorted by id; empty = the unit monomial.
using Monomial = std::vector<std::pair<int, int>>;

/// Lexicographic monomial order (atom 0 strongest). Compatible with
/// multiplication, which the exact-division loop relies on.
struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            int ida = i < a.size() ? a[i].first : INT_MAX;
            int idb = j < b.size() ? b[j].first : INT_MAX;
            if (ida == idb) {
                if (a[i].second != b[j].second) return a[i].second < b[j].second;
                ++i, ++j;
            } else if (ida < idb) {
                return false;  // a carries an earlier atom, so a > b
            } else {
                return true;
            }
        }
        return false;
    }
};

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        } else if (a[i].first < b[j].first) {
            out.push_back(a[i++]);
        } else {
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return out;
}

/// a / b, or nullopt when some exponent would go negative.
inline std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    Monomial out;
    std::size_t i = 0;
    for (const auto& [id, e] : b) {
        while (i < a.size() && a[i].first < id) out.push_back(a[i++]);
        if (i >= a.size() || a[i].first != id || a[i].second < e) return std::nullopt;
        if (a[i].second > e) out.emplace_back(id, a[i].second - e);
        ++i;
    }
    while (i < a.size()) out.push_back(a[i++]);
    return out;
}

class MPoly {
  public:
    using Terms = std::map<Monomial, BigRational, MonoLess>;

    MPoly() = default;
    static MPoly constant(BigRational c) {
        MPoly p;
        if (!c.is_zero()) p.terms_[Monomial{}] = std::move(c);
        return p;
    }
    static MPoly atom(int id) {
        MPoly p;
        p.terms_[Monomial{{id, 1}}] = BigRational(1);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    const Terms& terms() const { return terms_; }

    MPoly operator+(const MPoly& o) const {
        MPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.accumulate(m, c);
        return r;
    }
    MPoly operator-(const MPoly& o) const {
        MPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.accumulate(m, -c);
        return r;
    }
    MPoly operator*(const MPoly& o) const {
        MPoly r;
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) r.accumulate(mono_mul(m1, m2), c1 * c2);
        return r;
    }
    MPoly operator-() const {
        MPoly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    MPoly pow(int k) const {
        MPoly r = constant(BigRational(1));
        MPoly b = *this;
        while (k > 0) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    /// Exact division; nullopt when `this` is not a polynomial multiple of d.
    std::optional<MPoly> divide_exact(const MPoly& d) const {
        if (d.is_zero()) return std::nullopt;
        MPoly q;
        MPoly r = *this;
        const auto& dl = *d.terms_.rbegin();  // leading term in lex order
        while (!r.is_zero()) {
            const auto& rl = *r.terms_.rbegin();
            auto m = mono_div(rl.first, dl.first);
            if (!m) return std::nullopt;
            BigRational c = rl.second / dl.second;
            MPoly t;
            t.terms_[*m] = c;
            q.accumulate(*m, c);
            r = r - t * d;
        }
        return q;
    }

    /// Total degree contribution of a single atom across all terms.
    int degree_in(int id) const {
        int deg = 0;
        for (const auto& [m, c] : terms_)
            for (const auto& [aid, e] : m)
                if (aid == id) deg = std::max(deg, e);
        return deg;
    }

    Expr to_expr(const AtomTable& atoms) const {
        std::vector<Expr> sum;
        sum.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            std::vector<Expr> factors;
            factors.push_back(symkern::constant(c));
            for (const auto& [id, e] : m) factors.push_back(symkern::pow(atoms.at(id), integer(e)));
            sum.push_back(mul(std::move(factors)));
        }
        return add(std::move(sum));
    }

  private:
    void accumulate(const Monomial& m, const BigRational& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    Terms terms_;
};

/// Converts a canonical Expr to a polynomial in abstracted atoms. Always
/// succeeds: any non-polynomial subtree (function application, radical,
/// negative or symbolic power) becomes an opaque generator.
inline MPoly to_mpoly(const Expr& e, AtomTable& atoms) {
    switch (e.kind()) {
        case ExprKind::Constant:
            return MPoly::constant(e.value());
        case ExprKind::Add: {
            MPoly r;
            for (const Expr& t : e.operands()) r = r + to_mpoly(t, atoms);
            return r;
        }
        case ExprKind::Mul: {
            MPoly r = MPoly::constant(BigRational(1));
            for (const Expr& t : e.operands()) r = r * to_mpoly(t, atoms);
            return r;
        }
        case ExprKind::Pow: {
            const Expr& ex = e.exponent();
            if (ex.is_integer_constant()) {
                BigRational v = ex.value();
                if (v > BigRational(0) && v < BigRational(64))
                    return to_mpoly(e.base(), atoms).pow(v.num().convert_to<int>());
                if (v.is_negative() && v > BigRational(-64)) {
                    // atomize the reciprocal so that 1/b and 1/b^2 share a base
                    int id = atoms.intern(pow(e.base(), integer(-1)));
                    return MPoly::atom(id).pow((-v).num().convert_to<int>());
                }
            }
            return MPoly::atom(atoms.intern(e));
        }
        default:
            return MPoly::atom(atoms.intern(e));
    }
}

}  // namespace symkern::detail
