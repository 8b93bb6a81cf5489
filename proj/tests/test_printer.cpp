#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "symkern/parser.hpp"
#include "symkern/printer.hpp"

using namespace symkern;

namespace {
SymbolTable& tab() {
    static SymbolTable t;
    return t;
}
Expr S(const char* n) { return symbol(tab().intern(n)); }
}  // namespace

TEST_CASE("infix basics") {
    Expr u = S("u"), v = S("v");
    CHECK(to_infix(pow(u, integer(2)) - pow(v, integer(2))) == "u^2 - v^2");
    CHECK(to_infix(constant(BigRational(7, 12))) == "7/12");
    CHECK(to_infix(S("x")) == "x");
    CHECK(to_infix(zero()) == "0");
    CHECK(to_infix(integer(-5)) == "-5");
}

TEST_CASE("lagrange objective prints in display order") {
    Expr a = S("a"), p1 = S("p1"), p2 = S("p2"), p3 = S("p3");
    Expr y1 = S("y1"), y2 = S("y2"), y3 = S("y3");
    Expr L = a * (p1 + p2 + p3 - 1) - y1 * log_(p1) - y2 * log_(p2) - y3 * log_(p3);
    CHECK(to_infix(L) == "a*(p1 + p2 + p3 - 1) - y1*log(p1) - y2*log(p2) - y3*log(p3)");
}

TEST_CASE("polynomial display order") {
    Expr x = S("x"), y = S("y"), z = S("z");
    CHECK(to_infix(pow(x, integer(2)) - 2 * x) == "x^2 - 2*x");
    Expr collected = add({pow(x, integer(3)), mul({pow(x, integer(2)), 2 - z}), mul({x, y + 1}), integer(-3)});
    CHECK(to_infix(collected) == "x^3 + x^2*(2 - z) + x*(y + 1) - 3");
    // graded lex within equal degree
    Expr a = S("a"), b = S("b"), c = S("c"), d = S("d");
    Expr disc = pow(a, integer(2)) - 2 * a * d + 4 * b * c + pow(d, integer(2));
    CHECK(to_infix(disc) == "a^2 - 2*a*d + 4*b*c + d^2");
    // radicals sort after plain monomials of the same degree
    Expr ev = a / 2 + d / 2 - sqrt_(disc) / 2;
    CHECK(to_infix(ev) == "a/2 + d/2 - sqrt(a^2 - 2*a*d + 4*b*c + d^2)/2");
}

TEST_CASE("fractions and radicals in infix") {
    Expr x = S("x"), y1 = S("y1"), y2 = S("y2"), y3 = S("y3");
    CHECK(to_infix(y1 / (y1 + y2 + y3)) == "y1/(y1 + y2 + y3)");
    CHECK(to_infix(neg(y1) / pow(S("p1"), integer(2))) == "-y1/p1^2");
    CHECK(to_infix(sqrt_(x)) == "sqrt(x)");
    CHECK(to_infix(1 / sqrt_(x)) == "1/sqrt(x)");
    CHECK(to_infix(pow(x, constant(BigRational(3, 2)))) == "x^(3/2)");
    CHECK(to_infix(pow(x, integer(-2))) == "1/x^2");
    CHECK(to_infix(div(integer(1), 2 * x)) == "1/(2*x)");
    CHECK(to_infix(x / 2) == "x/2");
    CHECK(to_infix(neg(pow(y1 + y2, integer(2))) / y1) == "-(y1 + y2)^2/y1");
    CHECK(to_infix(abs_(S("b"))) == "abs(b)");
    CHECK(to_infix(S("b") / abs_(S("b"))) == "b/abs(b)");
}

TEST_CASE("order term display") {
    auto x = tab().intern("x");
    Expr ser = add({one(), neg(pow(S("x"), integer(2))) / 2, pow(S("x"), integer(4)) / 24, order_term(x, 5)});
    CHECK(to_infix(ser) == "1 - x^2/2 + x^4/24 + O(x^5)");
    CHECK(to_infix(order_term(x, 1)) == "O(x)");
    CHECK(to_infix(order_term(x, 0)) == "O(1)");
}

TEST_CASE("deferred limit latex matches the pinned string") {
    SymbolTable t;
    auto n = t.intern("n");
    Expr body = pow(1 + 1 / symbol(n), symbol(n));
    Expr lim = deferred_limit(body, n, infinity(1), LimitDir::Both);
    CHECK(to_latex(lim) == "\\lim_{n \\to \\infty} \\left(1 + \\frac{1}{n}\\right)^{n}");
    CHECK(to_infix(lim) == "Limit((1 + 1/n)^n, n, oo)");
}

TEST_CASE("latex fragments") {
    Expr a = S("a"), b = S("b"), c = S("c"), d = S("d");
    CHECK(to_latex(a * d - b * c) == "a d - b c");
    CHECK(to_latex(S("x")) == "x");
    CHECK(to_latex(constant(BigRational(7, 12))) == "\\frac{7}{12}");
    CHECK(to_latex(d / (a * d - b * c)) == "\\frac{d}{a d - b c}");
    CHECK(to_latex(S("y1")) == "y_{1}");
    CHECK(to_latex(S("beta2")) == "\\beta_{2}");
    CHECK(to_latex(S("v2")) == "v_{2}");
    CHECK(to_latex(exp_(one())) == "e");
    CHECK(to_latex(exp_(S("x"))) == "e^{x}");
    CHECK(to_latex(sqrt_(integer(2))) == "\\sqrt{2}");
    CHECK(to_latex(abs_(b)) == "\\left|{b}\\right|");
    CHECK(to_latex(b / abs_(b)) == "\\frac{b}{\\left|{b}\\right|}");
    CHECK(to_latex(cos_(pow(S("x"), integer(2)))) == "\\cos\\left(x^{2}\\right)");
    CHECK(to_latex(pi_constant()) == "\\pi");
}

TEST_CASE("matrix printing") {
    MatrixExpr m(2, 2, {S("a"), S("c"), S("b"), S("d")});
    CHECK(to_infix(m) == "[a, c]\n[b, d]");
    CHECK(to_latex(m) == "\\begin{bmatrix}a & c \\\\ b & d\\end{bmatrix}");
}

TEST_CASE("latex braces and left/right stay balanced") {
    SymbolTable t;
    std::vector<SymbolPtr> syms{t.intern("x"), t.intern("y")};
    for (int i = 0; i < 2000; ++i) {
        Expr e = [&]() -> Expr {
            try {
                return testutil::rand_expr(syms, 4);
            } catch (const Error&) {
                return integer(1);
            }
        }();
        std::string s = to_latex(e);
        long depth = 0;
        for (char ch : s) {
            if (ch == '{') ++depth;
            if (ch == '}') --depth;
            REQUIRE(depth >= 0);
        }
        CHECK(depth == 0);
        std::size_t lefts = 0, rights = 0, pos = 0;
        while ((pos = s.find("\\left", pos)) != std::string::npos) ++lefts, pos += 5;
        pos = 0;
        while ((pos = s.find("\\right", pos)) != std::string::npos) ++rights, pos += 6;
        CHECK(lefts == rights);
    }
}

TEST_CASE("printing is deterministic for equal expressions") {
    Expr x = S("x"), y = S("y");
    Expr e1 = add({mul({integer(2), x}), y, mul({integer(-1), x})});
    Expr e2 = add({x, y});
    REQUIRE(e1 == e2);
    CHECK(to_infix(e1) == to_infix(e2));
    CHECK(to_latex(e1) == to_latex(e2));
}
