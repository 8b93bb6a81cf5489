#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "symkern/expr.hpp"
#include "symkern/polys.hpp"

namespace symkern {

/// Dense rectangular matrix of canonical expressions, row-major, immutable
/// in spirit (ops build new matrices).
class MatrixExpr {
  public:
    MatrixExpr(std::size_t rows, std::size_t cols, std::vector<Expr> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows_ * cols_ != entries_.size())
            fail(ErrorKind::ShapeError, "entry count does not match matrix shape");
    }

    static MatrixExpr filled(std::size_t rows, std::size_t cols, const Expr& v) {
        return MatrixExpr(rows, cols, std::vector<Expr>(rows * cols, v));
    }

    static MatrixExpr identity(std::size_t n) {
        MatrixExpr m = filled(n, n, zero());
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = one();
        return m;
    }

    static MatrixExpr diagonal(const std::vector<Expr>& d) {
        MatrixExpr m = filled(d.size(), d.size(), zero());
        for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
        return m;
    }

    static MatrixExpr from_columns(const std::vector<std::vector<Expr>>& cols) {
        if (cols.empty()) fail(ErrorKind::ShapeError, "no columns");
        std::size_t r = cols[0].size();
        for (const auto& c : cols)
            if (c.size() != r) fail(ErrorKind::ShapeError, "columns differ in length");
        MatrixExpr m = filled(r, cols.size(), zero());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < r; ++i) m.at(i, j) = cols[j][i];
        return m;
    }

    static MatrixExpr column(const std::vector<Expr>& v) { return from_columns({v}); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    const Expr& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    Expr& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const std::vector<Expr>& entries() const { return entries_; }

    MatrixExpr map(const std::function<Expr(const Expr&)>& f) const {
        std::vector<Expr> out;
        out.reserve(entries_.size());
        for (const Expr& e : entries_) out.push_back(f(e));
        return MatrixExpr(rows_, cols_, std::move(out));
    }

  private:
    std::size_t rows_, cols_;
    std::vector<Expr> entries_;
};

inline bool equal(const MatrixExpr& a, const MatrixExpr& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        if (!equal(a.entries()[i], b.entries()[i])) return false;
    return true;
}
inline bool operator==(const MatrixExpr& a, const MatrixExpr& b) { return equal(a, b); }
inline bool operator!=(const MatrixExpr& a, const MatrixExpr& b) { return !equal(a, b); }

// ---------------------------------------------------------------------------
// Structure ops
// ---------------------------------------------------------------------------

inline MatrixExpr transpose(const MatrixExpr& a) {
    MatrixExpr out = MatrixExpr::filled(a.cols(), a.rows(), zero());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
    return out;
}

inline MatrixExpr matmul(const MatrixExpr& a, const MatrixExpr& b) {
    if (a.cols() != b.rows()) fail(ErrorKind::ShapeError, "inner dimensions do not match");
    MatrixExpr out = MatrixExpr::filled(a.rows(), b.cols(), zero());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::vector<Expr> terms;
            terms.reserve(a.cols());
            for (std::size_t k = 0; k < a.cols(); ++k) terms.push_back(mul({a.at(i, k), b.at(k, j)}));
            out.at(i, j) = add(std::move(terms));
        }
    return out;
}

inline MatrixExpr madd(const MatrixExpr& a, const MatrixExpr& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::ShapeError, "shape mismatch");
    MatrixExpr out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = add({a.at(i, j), b.at(i, j)});
    return out;
}

inline MatrixExpr msub(const MatrixExpr& a, const MatrixExpr& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::ShapeError, "shape mismatch");
    MatrixExpr out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = sub(a.at(i, j), b.at(i, j));
    return out;
}

inline MatrixExpr scalar_mul(const Expr& s, const MatrixExpr& a) {
    return a.map([&](const Expr& e) { return mul({s, e}); });
}

inline MatrixExpr hadamard(const MatrixExpr& a, const MatrixExpr& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::ShapeError, "shape mismatch");
    MatrixExpr out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = mul({a.at(i, j), b.at(i, j)});
    return out;
}

inline MatrixExpr operator*(const MatrixExpr& a, const MatrixExpr& b) { return matmul(a, b); }
inline MatrixExpr operator+(const MatrixExpr& a, const MatrixExpr& b) { return madd(a, b); }
inline MatrixExpr operator-(const MatrixExpr& a, const MatrixExpr& b) { return msub(a, b); }
inline MatrixExpr operator*(const Expr& s, const MatrixExpr& a) { return scalar_mul(s, a); }

/// Keeps the listed rows/columns (in the given order).
inline MatrixExpr submatrix(const MatrixExpr& a, const std::vector<std::size_t>& keep_rows,
                            const std::vector<std::size_t>& keep_cols) {
    for (auto r : keep_rows)
        if (r >= a.rows()) fail(ErrorKind::ShapeError, "row index out of range");
    for (auto c : keep_cols)
        if (c >= a.cols()) fail(ErrorKind::ShapeError, "column index out of range");
    std::vector<Expr> out;
    out.reserve(keep_rows.size() * keep_cols.size());
    for (auto r : keep_rows)
        for (auto c : keep_cols) out.push_back(a.at(r, c));
    return MatrixExpr(keep_rows.size(), keep_cols.size(), std::move(out));
}

inline MatrixExpr expand_entries(const MatrixExpr& a) {
    return a.map([](const Expr& e) { return expand(e); });
}

inline MatrixExpr normalize_entries(const MatrixExpr& a) {
    return a.map([](const Expr& e) { return rational_normal(e); });
}

// ---------------------------------------------------------------------------
// Fraction-free (Bareiss) elimination
// ---------------------------------------------------------------------------

namespace detail {

/// Matrix entries lifted to polynomials over shared atoms, with per-row
/// denominators cleared. scale = product of the cleared row denominators.
struct PolyMat {
    std::vector<std::vector<MPoly>> rows;
    AtomTable atoms;
    Expr scale = one();
};

inline PolyMat lift_to_polys(const MatrixExpr& m) {
    PolyMat pm;
    std::vector<Expr> scales;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<Fraction> fracs;
        FactorList lcm;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Fraction f = as_fraction(m.at(i, j));
            FactorList fl = factor_list_of(f.den);
            for (const auto& [b, ex] : fl.factors) {
                bool found = false;
                for (auto& [lb, lex] : lcm.factors)
                    if (equal(lb, b)) {
                        lex = std::max(lex, ex);
                        found = true;
                        break;
                    }
                if (!found) lcm.factors.emplace_back(b, ex);
            }
            fracs.push_back(std::move(f));
        }
        std::vector<MPoly> row;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            FactorList dfl = factor_list_of(fracs[j].den);
            std::vector<Expr> fs{fracs[j].num};
            if (!dfl.coeff.is_one()) fs.push_back(constant(BigRational(1) / dfl.coeff));
            for (const auto& [b, ex] : lcm.factors) {
                BigRational have(0);
                for (const auto& [db, dex] : dfl.factors)
                    if (equal(db, b)) have = dex;
                if (ex != have) fs.push_back(pow(b, constant(ex - have)));
            }
            row.push_back(to_mpoly(expand(mul(std::move(fs))), pm.atoms));
        }
        pm.rows.push_back(std::move(row));
        scales.push_back(factor_list_expr(lcm));
    }
    pm.scale = mul(std::move(scales));
    return pm;
}

/// Determinant of a square polynomial matrix by Bareiss elimination; nullopt
/// when an exact division fails (pivot structurally nonzero but identically
/// zero, e.g. hidden trigonometric identities).
inline std::optional<MPoly> bareiss_det(std::vector<std::vector<MPoly>> m) {
    std::size_t n = m.size();
    if (n == 0) return MPoly::constant(BigRational(1));
    int sign = 1;
    MPoly prev = MPoly::constant(BigRational(1));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m[piv][k].is_zero()) ++piv;
        if (piv == n) return MPoly();  // zero column -> zero determinant
        if (piv != k) {
            std::swap(m[piv], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                MPoly num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                auto q = num.divide_exact(prev);
                if (!q) return std::nullopt;
                m[i][j] = std::move(*q);
            }
            m[i][k] = MPoly();
        }
        prev = m[k][k];
    }
    MPoly d = m[n - 1][n - 1];
    return sign < 0 ? -d : d;
}

/// Cofactor-expansion determinant over the expression field; the fallback
/// (and test-independent small-n path) when Bareiss pivots misbehave.
inline Expr cofactor_det(const MatrixExpr& a) {
    std::size_t n = a.rows();
    if (n == 0) return one();
    if (n == 1) return a.at(0, 0);
    std::vector<Expr> terms;
    std::vector<std::size_t> rest;
    for (std::size_t i = 1; i < n; ++i) rest.push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
        if (a.at(0, j).is_zero()) continue;
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < n; ++c)
            if (c != j) cols.push_back(c);
        Expr minor = cofactor_det(submatrix(a, rest, cols));
        Expr term = mul({a.at(0, j), minor});
        terms.push_back(j % 2 == 0 ? term : neg(term));
    }
    return expand(add(std::move(terms)));
}

}  // namespace detail

/// Determinant by fraction-free elimination over the expression field
/// (cofactor fallback when symbolic pivots defeat the exact division).
inline Expr det(const MatrixExpr& a) {
    if (a.rows() != a.cols()) fail(ErrorKind::ShapeError, "determinant of a non-square matrix");
    if (a.rows() == 0) return one();
    detail::PolyMat pm = detail::lift_to_polys(a);
    auto d = detail::bareiss_det(pm.rows);
    if (d) return rational_normal(div(d->to_expr(pm.atoms), pm.scale));
    if (a.rows() <= 6) return rational_normal(div(detail::cofactor_det(a), one()));
    fail(ErrorKind::SingularMatrix, "elimination failed on symbolic pivots");
}

struct InverseResult {
    MatrixExpr value;
    /// det(A); the inverse is valid wherever this expression is nonzero.
    Expr determinant;
};

/// Inverse with the nonvanishing condition attached; entries are cofactors
/// over the common denominator det(A).
inline InverseResult inv_with_condition(const MatrixExpr& a) {
    if (a.rows() != a.cols()) fail(ErrorKind::ShapeError, "inverse of a non-square matrix");
    std::size_t n = a.rows();
    Expr d = det(a);
    if (d.is_zero()) fail(ErrorKind::SingularMatrix, "matrix determinant is exactly zero");
    MatrixExpr out = MatrixExpr::filled(n, n, zero());
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < n; ++i) all.push_back(i);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::size_t> rs, cs;
            for (auto r : all)
                if (r != j) rs.push_back(r);
            for (auto c : all)
                if (c != i) cs.push_back(c);
            Expr minor = n == 1 ? one() : det(submatrix(a, rs, cs));
            Expr cof = (i + j) % 2 == 0 ? minor : neg(minor);
            out.at(i, j) = rational_normal(div(cof, d));
        }
    }
    return {std::move(out), std::move(d)};
}

inline MatrixExpr inv(const MatrixExpr& a) { return inv_with_condition(a).value; }

// ---------------------------------------------------------------------------
// Field elimination (RREF) for null spaces and linear solving
// ---------------------------------------------------------------------------

namespace detail {

inline Expr simp(const Expr& e) { return rational_normal(e); }

/// Reduced row echelon form over the expression field with structural-zero
/// pivoting; returns pivot column of each pivot row.
inline std::vector<std::size_t> rref_in_place(MatrixExpr& m) {
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m.at(piv, c).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(r, j));
        Expr p = m.at(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) = simp(div(m.at(r, j), p));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            Expr f = m.at(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                m.at(i, j) = simp(sub(m.at(i, j), mul({f, m.at(r, j)})));
        }
        pivot_cols.push_back(c);
        ++r;
    }
    return pivot_cols;
}

}  // namespace detail

/// Basis of the null space; each free variable set to 1 in turn.
inline std::vector<MatrixExpr> null_space(const MatrixExpr& a) {
    MatrixExpr m = normalize_entries(a);
    std::vector<std::size_t> pivots = detail::rref_in_place(m);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<MatrixExpr> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Expr> v(a.cols(), zero());
        v[f] = one();
        for (std::size_t pr = 0; pr < pivots.size(); ++pr) v[pivots[pr]] = detail::simp(neg(m.at(pr, f)));
        basis.push_back(MatrixExpr(a.cols(), 1, std::move(v)));
    }
    return basis;
}

/// Solves A x = b by fraction-free forward elimination (Bareiss on the
/// augmented system) and back-substitution over the expression field.
inline MatrixExpr solve_linear(const MatrixExpr& a, const MatrixExpr& b) {
    if (a.rows() != a.cols()) fail(ErrorKind::ShapeError, "coefficient matrix must be square");
    if (b.rows() != a.rows()) fail(ErrorKind::ShapeError, "right-hand side has wrong height");
    std::size_t n = a.rows(), m = b.cols();
    // augmented [A | b]
    std::vector<Expr> aug;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.push_back(a.at(i, j));
        for (std::size_t j = 0; j < m; ++j) aug.push_back(b.at(i, j));
    }
    MatrixExpr w(n, n + m, std::move(aug));
    detail::PolyMat pm = detail::lift_to_polys(w);
    auto& rows = pm.rows;

    // fraction-free forward elimination
    detail::MPoly prev = detail::MPoly::constant(BigRational(1));
    bool fraction_free_ok = true;
    for (std::size_t k = 0; k + 1 < n && fraction_free_ok; ++k) {
        std::size_t piv = k;
        while (piv < n && rows[piv][k].is_zero()) ++piv;
        if (piv == n) fail(ErrorKind::SingularMatrix, "structural zero pivot column");
        if (piv != k) std::swap(rows[piv], rows[k]);
        for (std::size_t i = k + 1; i < n && fraction_free_ok; ++i) {
            for (std::size_t j = k + 1; j < n + m; ++j) {
                detail::MPoly num = rows[k][k] * rows[i][j] - rows[i][k] * rows[k][j];
                auto q = num.divide_exact(prev);
                if (!q) {
                    fraction_free_ok = false;
                    break;
                }
                rows[i][j] = std::move(*q);
            }
            rows[i][k] = detail::MPoly();
        }
        prev = rows[k][k];
    }

    MatrixExpr u = MatrixExpr::filled(n, n + m, zero());
    if (fraction_free_ok) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n + m; ++j) u.at(i, j) = rows[i][j].to_expr(pm.atoms);
    } else {
        // field elimination fallback (symbolic pivots defeating Bareiss)
        u = normalize_entries(w);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            std::size_t piv = k;
            while (piv < n && u.at(piv, k).is_zero()) ++piv;
            if (piv == n) fail(ErrorKind::SingularMatrix, "structural zero pivot column");
            for (std::size_t j = 0; j < n + m; ++j) std::swap(u.at(piv, j), u.at(k, j));
            for (std::size_t i = k + 1; i < n; ++i) {
                Expr f = detail::simp(div(u.at(i, k), u.at(k, k)));
                for (std::size_t j = k; j < n + m; ++j)
                    u.at(i, j) = detail::simp(sub(u.at(i, j), mul({f, u.at(k, j)})));
            }
        }
    }

    if (u.at(n - 1, n - 1).is_zero()) fail(ErrorKind::SingularMatrix, "matrix is structurally singular");

    // back-substitution in the field
    MatrixExpr x = MatrixExpr::filled(n, m, zero());
    for (std::size_t col = 0; col < m; ++col) {
        for (std::size_t i = n; i-- > 0;) {
            if (u.at(i, i).is_zero()) fail(ErrorKind::SingularMatrix, "zero pivot in back-substitution");
            std::vector<Expr> terms{u.at(i, n + col)};
            for (std::size_t j = i + 1; j < n; ++j) terms.push_back(neg(mul({u.at(i, j), x.at(j, col)})));
            x.at(i, col) = detail::simp(div(add(std::move(terms)), u.at(i, i)));
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Eigen decomposition
// ---------------------------------------------------------------------------

struct EigenPair {
    Expr value;
    int multiplicity;
    std::vector<MatrixExpr> vectors;
};

namespace detail {

/// Splits a product into (factor, positive integer exponent) pairs; anything
/// else is a single factor.
inline std::vector<std::pair<Expr, int>> structural_factors(const Expr& e) {
    std::vector<std::pair<Expr, int>> out;
    auto push = [&](const Expr& f) {
        if (f.kind() == ExprKind::Pow && f.exponent().is_integer_constant() &&
            f.exponent().value().is_positive() && f.exponent().value() < BigRational(64))
            out.emplace_back(f.base(), f.exponent().value().num().convert_to<int>());
        else
            out.emplace_back(f, 1);
    };
    if (e.kind() == ExprKind::Mul)
        for (const Expr& f : e.operands()) push(f);
    else
        push(e);
    return out;
}

}  // namespace detail

/// Eigenvalues as roots of det(A - lambda I) (solved per structural factor of
/// the determinant), with eigenvectors from the null space of A - lambda I.
inline std::vector<EigenPair> eigen(const MatrixExpr& a) {
    if (a.rows() != a.cols()) fail(ErrorKind::ShapeError, "eigen decomposition of a non-square matrix");
    static SymbolTable internal;
    SymbolPtr lam = internal.intern("_lambda");
    for (const Expr& e : a.entries())
        if (contains_symbol(e, lam)) fail(ErrorKind::InvalidName, "matrix uses the reserved name _lambda");

    MatrixExpr shifted = msub(a, scalar_mul(symbol(lam), MatrixExpr::identity(a.rows())));
    Expr charpoly = det(shifted);

    std::vector<EigenPair> out;
    for (const auto& [f, k] : detail::structural_factors(charpoly)) {
        if (!contains_symbol(f, lam)) continue;
        Fraction fr = as_fraction(f);
        UnivariatePoly up = univariate_from(fr.num, lam);
        for (auto& rm : poly_roots(up)) {
            Expr value = rational_normal(rm.root);
            bool merged = false;
            for (auto& p : out)
                if (equal(p.value, value)) {
                    p.multiplicity += rm.multiplicity * k;
                    merged = true;
                    break;
                }
            if (!merged) out.push_back({value, rm.multiplicity * k, {}});
        }
    }
    for (auto& p : out) {
        MatrixExpr m = msub(a, scalar_mul(p.value, MatrixExpr::identity(a.rows())));
        p.vectors = null_space(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// QR decomposition (symbolic Gram-Schmidt)
// ---------------------------------------------------------------------------

struct QrResult {
    MatrixExpr q;
    MatrixExpr r;
};

/// Gram-Schmidt with exact symbolic norms: sqrt of the squared column norm,
/// which collapses to |entry| for single-term columns.
inline QrResult qr(const MatrixExpr& a) {
    std::size_t n = a.rows(), m = a.cols();
    MatrixExpr q = MatrixExpr::filled(n, m, zero());
    MatrixExpr r = MatrixExpr::filled(m, m, zero());
    auto dot = [&](const std::vector<Expr>& x, const std::vector<Expr>& y) {
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < x.size(); ++i) terms.push_back(mul({x[i], y[i]}));
        return rational_normal(expand(add(std::move(terms))));
    };
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<Expr> u;
        for (std::size_t i = 0; i < n; ++i) u.push_back(a.at(i, j));
        for (std::size_t i2 = 0; i2 < j; ++i2) {
            std::vector<Expr> qi;
            for (std::size_t i = 0; i < n; ++i) qi.push_back(q.at(i, i2));
            std::vector<Expr> aj;
            for (std::size_t i = 0; i < n; ++i) aj.push_back(a.at(i, j));
            Expr rij = dot(qi, aj);
            r.at(i2, j) = rij;
            for (std::size_t i = 0; i < n; ++i)
                u[i] = rational_normal(sub(u[i], mul({rij, qi[i]})));
        }
        Expr norm_sq = dot(u, u);
        if (norm_sq.is_zero()) fail(ErrorKind::DependentColumns, "column " + std::to_string(j) +
                                                                     " is structurally dependent");
        Expr norm = pow(norm_sq, constant(BigRational(1, 2)));
        r.at(j, j) = norm;
        for (std::size_t i = 0; i < n; ++i) q.at(i, j) = rational_normal(div(u[i], norm));
    }
    return {std::move(q), std::move(r)};
}

// ---------------------------------------------------------------------------
// Schur complement
// ---------------------------------------------------------------------------

/// D - C A^{-1} B for the 2x2 block partition at k (A is the leading k x k
/// block); entries combined over a common denominator.
inline MatrixExpr schur_complement(const MatrixExpr& m, std::size_t k) {
    if (m.rows() != m.cols()) fail(ErrorKind::ShapeError, "Schur complement of a non-square matrix");
    if (k > m.rows()) fail(ErrorKind::ShapeError, "block size exceeds matrix size");
    std::size_t n = m.rows();
    if (k == n) return MatrixExpr(0, 0, {});
    std::vector<std::size_t> head, tail;
    for (std::size_t i = 0; i < k; ++i) head.push_back(i);
    for (std::size_t i = k; i < n; ++i) tail.push_back(i);
    MatrixExpr d = submatrix(m, tail, tail);
    if (k == 0) return d;
    MatrixExpr a = submatrix(m, head, head);
    MatrixExpr b = submatrix(m, head, tail);
    MatrixExpr c = submatrix(m, tail, head);
    MatrixExpr result = msub(d, matmul(matmul(c, inv(a)), b));
    return normalize_entries(result);
}

}  // namespace symkern
