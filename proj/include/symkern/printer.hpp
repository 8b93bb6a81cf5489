#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "symkern/expr.hpp"
#include "symkern/matrix.hpp"

namespace symkern {

std::string to_infix(const Expr& e);
std::string to_latex(const Expr& e);

// ---------------------------------------------------------------------------
// Display ordering: terms of a sum print in graded order (descending total
// degree; ascending when an order term is present), plain monomials before
// radicals/functions, ties broken by the lexicographic atom sequence.
// ---------------------------------------------------------------------------

namespace detail {

inline BigRational display_degree(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Pi:
        case ExprKind::ImaginaryUnit:
        case ExprKind::Infinity:
        case ExprKind::Limit:
            return BigRational(0);
        case ExprKind::Symbol:
            return BigRational(1);
        case ExprKind::Add: {
            BigRational m(0);
            bool first = true;
            for (const Expr& t : e.operands()) {
                BigRational d = display_degree(t);
                if (first || d > m) m = d;
                first = false;
            }
            return m;
        }
        case ExprKind::Mul: {
            BigRational s(0);
            for (const Expr& t : e.operands()) s += display_degree(t);
            return s;
        }
        case ExprKind::Pow:
            if (e.exponent().is_constant()) return display_degree(e.base()) * e.exponent().value();
            return display_degree(e.base());
        case ExprKind::Function:
            return BigRational(0);
        case ExprKind::Order:
            return BigRational(e.order_degree());
    }
    return BigRational(0);
}

/// 0 = constant-coefficient monomial in symbols with integer exponents;
/// 1 = anything else (functions, radicals, unexpanded sums).
inline int display_class(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Pi:
        case ExprKind::ImaginaryUnit:
        case ExprKind::Symbol:
        case ExprKind::Infinity:
            return 0;
        case ExprKind::Pow:
            return (e.base().is_symbol() && e.exponent().is_integer_constant()) ? 0 : 1;
        case ExprKind::Mul: {
            for (const Expr& f : e.operands())
                if (display_class(f) != 0) return 1;
            return 0;
        }
        default:
            return 1;
    }
}

std::vector<Expr> ordered_terms(const Expr& addNode);

inline void name_seq_into(const Expr& e, std::vector<std::string>& out, int depth = 0) {
    if (depth > 16) return;
    switch (e.kind()) {
        case ExprKind::Constant:
        case ExprKind::Infinity:
            return;
        case ExprKind::Pi:
            out.push_back("pi");
            return;
        case ExprKind::ImaginaryUnit:
            out.push_back("I");
            return;
        case ExprKind::Symbol:
            out.push_back(e.sym()->name);
            return;
        case ExprKind::Mul:
            for (const Expr& f : e.operands()) name_seq_into(f, out, depth + 1);
            return;
        case ExprKind::Pow: {
            if (e.exponent().is_integer_constant() && e.exponent().value().is_positive()) {
                long long k = std::min<long long>(e.exponent().value().num().convert_to<long long>(), 8);
                for (long long i = 0; i < k; ++i) name_seq_into(e.base(), out, depth + 1);
            } else {
                name_seq_into(e.base(), out, depth + 1);
            }
            return;
        }
        case ExprKind::Function:
            out.push_back(func_name_str(e.func_name()));
            name_seq_into(e.arg(), out, depth + 1);
            return;
        case ExprKind::Add: {
            std::vector<Expr> ts = ordered_terms(e);
            if (!ts.empty()) name_seq_into(ts[0], out, depth + 1);
            return;
        }
        default:
            return;
    }
}

inline std::vector<std::string> name_seq(const Expr& e) {
    std::vector<std::string> out;
    name_seq_into(e, out);
    return out;
}

inline std::vector<Expr> ordered_terms(const Expr& addNode) {
    std::vector<Expr> terms = addNode.operands();
    // "2 - z" special case: a positive number plus a single-factor product
    // with negative coefficient displays number-first.
    if (terms.size() == 2) {
        const Expr* num = nullptr;
        const Expr* rest = nullptr;
        for (const Expr& t : terms)
            if (t.is_constant())
                num = &t;
            else
                rest = &t;
        if (num && rest && num->value().is_positive() && rest->kind() == ExprKind::Mul &&
            rest->operands().size() == 2 && rest->operands()[0].is_constant() &&
            rest->operands()[0].value().is_negative())
            return {*num, *rest};
    }
    bool has_order = false;
    for (const Expr& t : terms)
        if (t.kind() == ExprKind::Order) has_order = true;
    struct Key {
        bool is_order;
        BigRational degree;
        int cls;
        std::vector<std::string> names;
        const Expr* e;
    };
    std::vector<Key> keys;
    keys.reserve(terms.size());
    for (const Expr& t : terms)
        keys.push_back({t.kind() == ExprKind::Order, display_degree(t), display_class(t), name_seq(t), &t});
    std::stable_sort(keys.begin(), keys.end(), [&](const Key& a, const Key& b) {
        if (a.is_order != b.is_order) return b.is_order;
        if (a.degree != b.degree) return has_order ? a.degree < b.degree : a.degree > b.degree;
        if (a.cls != b.cls) return a.cls < b.cls;
        if (a.names != b.names) return a.names < b.names;
        return compare(*a.e, *b.e) < 0;
    });
    std::vector<Expr> out;
    out.reserve(keys.size());
    for (const Key& k : keys) out.push_back(*k.e);
    return out;
}

/// Numerator/denominator split of a product for display. The rational
/// coefficient's numerator joins num, its denominator joins den.
struct MulParts {
    bool negative = false;
    BigInt cnum{1};
    BigInt cden{1};
    std::vector<Expr> num;
    std::vector<Expr> den;
};

inline MulParts split_for_display(const Expr& e) {
    MulParts p;
    auto handle = [&](const Expr& f) {
        if (f.is_constant()) {
            BigRational v = f.value();
            if (v.is_negative()) {
                p.negative = !p.negative;
                v = -v;
            }
            p.cnum *= v.num();
            p.cden *= v.den();
        } else if (f.kind() == ExprKind::Pow && f.exponent().is_constant() &&
                   f.exponent().value().is_negative()) {
            p.den.push_back(pow(f.base(), constant(-f.exponent().value())));
        } else {
            p.num.push_back(f);
        }
    };
    if (e.kind() == ExprKind::Mul)
        for (const Expr& f : e.operands()) handle(f);
    else
        handle(e);
    return p;
}

// ---------------------------------------------------------------------------
// Infix writer
// ---------------------------------------------------------------------------

enum Prec { PrecAdd = 1, PrecMul = 2, PrecPow = 3, PrecAtom = 4 };

std::string infix(const Expr& e, int parent);

inline std::string infix_product(const MulParts& p) {
    std::string num;
    bool coeff_printed = false;
    if (p.cnum != 1 || p.num.empty()) {
        num = p.cnum.str();
        coeff_printed = true;
    }
    for (const Expr& f : p.num) {
        if (coeff_printed || !num.empty()) num += "*";
        num += infix(f, PrecMul + 1);
        coeff_printed = true;
    }
    if (p.cden == 1 && p.den.empty()) return num;
    std::string den;
    std::size_t den_parts = p.den.size() + (p.cden != 1 ? 1 : 0);
    if (p.cden != 1) den = p.cden.str();
    for (const Expr& f : p.den) {
        if (!den.empty()) den += "*";
        den += infix(f, PrecMul + 1);
    }
    if (den_parts > 1) den = "(" + den + ")";
    return num + "/" + den;
}

inline std::string infix(const Expr& e, int parent) {
    switch (e.kind()) {
        case ExprKind::Constant: {
            const BigRational& v = e.value();
            if (!v.is_integer()) {
                std::string s = v.num().str() + "/" + v.den().str();
                return parent > PrecMul ? "(" + s + ")" : s;
            }
            std::string s = v.num().str();
            if (v.is_negative() && parent > PrecAdd) return "(" + s + ")";
            return s;
        }
        case ExprKind::Pi:
            return "pi";
        case ExprKind::ImaginaryUnit:
            return "I";
        case ExprKind::Infinity:
            return e.infinity_sign() > 0 ? "oo" : (parent > PrecAdd ? "(-oo)" : "-oo");
        case ExprKind::Symbol:
            return e.sym()->name;
        case ExprKind::Add: {
            std::string out;
            bool first = true;
            for (const Expr& t : ordered_terms(e)) {
                MulParts p = split_for_display(t);
                std::string body = infix_product(p);
                if (first) {
                    out = (p.negative ? "-" : "") + body;
                    first = false;
                } else {
                    out += (p.negative ? " - " : " + ") + body;
                }
            }
            return parent > PrecAdd ? "(" + out + ")" : out;
        }
        case ExprKind::Mul: {
            MulParts p = split_for_display(e);
            std::string body = infix_product(p);
            if (p.negative) {
                std::string s = "-" + body;
                return parent > PrecAdd ? "(" + s + ")" : s;
            }
            return parent > PrecMul ? "(" + body + ")" : body;
        }
        case ExprKind::Pow: {
            const Expr& ex = e.exponent();
            if (ex.is_constant()) {
                const BigRational& v = ex.value();
                if (v == BigRational(1, 2)) return "sqrt(" + infix(e.base(), 0) + ")";
                if (v.is_negative()) {
                    MulParts p = split_for_display(e);
                    std::string body = infix_product(p);
                    return parent > PrecMul ? "(" + body + ")" : body;
                }
            }
            std::string b = infix(e.base(), PrecPow + 1);
            std::string x = ex.kind() == ExprKind::Pow ? infix(ex, PrecPow) : infix(ex, PrecAtom);
            std::string s = b + "^" + x;
            return parent > PrecPow ? "(" + s + ")" : s;
        }
        case ExprKind::Function:
            return std::string(func_name_str(e.func_name())) + "(" + infix(e.arg(), 0) + ")";
        case ExprKind::Order: {
            int d = e.order_degree();
            if (d == 0) return "O(1)";
            if (d == 1) return "O(" + e.sym()->name + ")";
            return "O(" + e.sym()->name + "^" + std::to_string(d) + ")";
        }
        case ExprKind::Limit: {
            std::string s = "Limit(" + infix(e.limit_body(), 0) + ", " + e.sym()->name + ", " +
                            infix(e.limit_point(), 0);
            if (e.limit_dir() == LimitDir::Left) s += ", left";
            if (e.limit_dir() == LimitDir::Right) s += ", right";
            return s + ")";
        }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// LaTeX writer
// ---------------------------------------------------------------------------

inline std::string latex_symbol_name(const std::string& name) {
    static const char* greek[] = {"alpha", "beta",    "gamma", "delta", "epsilon", "zeta",  "eta",
                                  "theta", "iota",    "kappa", "lambda", "mu",     "nu",    "xi",
                                  "rho",   "sigma",   "tau",   "upsilon", "phi",   "chi",   "psi",
                                  "omega", "Gamma",   "Delta", "Theta", "Lambda",  "Sigma", "Phi",
                                  "Psi",   "Omega"};
    std::size_t cut = name.size();
    while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1]))) --cut;
    std::string stem = name.substr(0, cut);
    std::string digits = name.substr(cut);
    for (const char* g : greek)
        if (stem == g) {
            stem = "\\" + stem;
            break;
        }
    if (!digits.empty()) return stem + "_{" + digits + "}";
    return stem;
}

std::string latex(const Expr& e, int parent);

inline std::string latex_product(const MulParts& p) {
    std::size_t num_parts = p.num.size() + ((p.cnum != 1 || p.num.empty()) ? 1 : 0);
    std::size_t den_parts = p.den.size() + (p.cden != 1 ? 1 : 0);
    std::string num;
    if (p.cnum != 1 || p.num.empty()) num = p.cnum.str();
    for (const Expr& f : p.num) {
        if (!num.empty()) num += " ";
        num += latex(f, num_parts > 1 ? PrecMul + 1 : 0);
    }
    if (den_parts == 0) return num;
    std::string den;
    if (p.cden != 1) den = p.cden.str();
    for (const Expr& f : p.den) {
        if (!den.empty()) den += " ";
        den += latex(f, den_parts > 1 ? PrecMul + 1 : 0);
    }
    return "\\frac{" + num + "}{" + den + "}";
}

inline std::string latex(const Expr& e, int parent) {
    switch (e.kind()) {
        case ExprKind::Constant: {
            const BigRational& v = e.value();
            if (!v.is_integer()) {
                bool neg = v.is_negative();
                std::string s = std::string(neg ? "-" : "") + "\\frac{" + v.abs().num().str() + "}{" +
                                v.den().str() + "}";
                return s;
            }
            std::string s = v.num().str();
            if (v.is_negative() && parent > PrecAdd) return "\\left(" + s + "\\right)";
            return s;
        }
        case ExprKind::Pi:
            return "\\pi";
        case ExprKind::ImaginaryUnit:
            return "i";
        case ExprKind::Infinity:
            return e.infinity_sign() > 0 ? "\\infty" : "-\\infty";
        case ExprKind::Symbol:
            return latex_symbol_name(e.sym()->name);
        case ExprKind::Add: {
            std::string out;
            bool first = true;
            for (const Expr& t : ordered_terms(e)) {
                MulParts p = split_for_display(t);
                std::string body = latex_product(p);
                if (first) {
                    out = (p.negative ? "-" : "") + body;
                    first = false;
                } else {
                    out += (p.negative ? " - " : " + ") + body;
                }
            }
            return parent > PrecAdd ? "\\left(" + out + "\\right)" : out;
        }
        case ExprKind::Mul: {
            MulParts p = split_for_display(e);
            std::string body = latex_product(p);
            if (p.negative) {
                std::string s = "-" + body;
                return parent > PrecAdd ? "\\left(" + s + "\\right)" : s;
            }
            return parent > PrecMul ? "\\left(" + body + "\\right)" : body;
        }
        case ExprKind::Pow: {
            const Expr& ex = e.exponent();
            if (ex.is_constant()) {
                const BigRational& v = ex.value();
                if (v == BigRational(1, 2)) return "\\sqrt{" + latex(e.base(), 0) + "}";
                if (v.is_negative()) return latex_product(split_for_display(e));
            }
            std::string b = latex(e.base(), PrecPow + 1);
            std::string s = b + "^{" + latex(ex, 0) + "}";
            return parent > PrecPow ? "\\left(" + s + "\\right)" : s;
        }
        case ExprKind::Function: {
            if (e.func_name() == FuncName::Exp) {
                if (e.arg().is_one()) return "e";
                return "e^{" + latex(e.arg(), 0) + "}";
            }
            if (e.func_name() == FuncName::Abs) return "\\left|{" + latex(e.arg(), 0) + "}\\right|";
            std::string n = std::string("\\") + func_name_str(e.func_name());
            return n + "\\left(" + latex(e.arg(), 0) + "\\right)";
        }
        case ExprKind::Order: {
            int d = e.order_degree();
            std::string v = latex_symbol_name(e.sym()->name);
            if (d == 0) return "O\\left(1\\right)";
            if (d == 1) return "O\\left(" + v + "\\right)";
            return "O\\left(" + v + "^{" + std::to_string(d) + "}\\right)";
        }
        case ExprKind::Limit: {
            std::string pt = latex(e.limit_point(), 0);
            std::string body = latex(e.limit_body(), e.limit_body().kind() == ExprKind::Add ? PrecMul : 0);
            return "\\lim_{" + latex_symbol_name(e.sym()->name) + " \\to " + pt + "} " + body;
        }
    }
    return "?";
}

}  // namespace detail

inline std::string to_infix(const Expr& e) { return detail::infix(e, 0); }
inline std::string to_latex(const Expr& e) { return detail::latex(e, 0); }

inline std::string to_infix(const MatrixExpr& m) {
    if (m.empty()) return "[]";
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out += "[";
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += to_infix(m.at(i, j));
        }
        out += "]";
        if (i + 1 < m.rows()) out += "\n";
    }
    return out;
}

inline std::string to_latex(const MatrixExpr& m) {
    std::string out = "\\begin{bmatrix}";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += " & ";
            out += to_latex(m.at(i, j));
        }
        if (i + 1 < m.rows()) out += " \\\\ ";
    }
    out += "\\end{bmatrix}";
    return out;
}

}  // namespace symkern
