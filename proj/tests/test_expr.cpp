#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "helpers.hpp"
#include "symkern/expr.hpp"

using namespace symkern;

namespace {
SymbolTable& tab() {
    static SymbolTable t;
    return t;
}
Expr S(const char* name) { return symbol(tab().intern(name)); }
}  // namespace

TEST_CASE("symbol declaration and assumptions") {
    SymbolTable t;
    auto x = t.declare("x", Assumptions{.real = true});
    CHECK(ask(symbol(x), AskProperty::Real) == Trilean::Yes);
    CHECK(ask(symbol(x), AskProperty::Positive) == Trilean::Unknown);

    auto s1 = t.declare("s1");
    CHECK(s1->name == "s1");

    CHECK_THROWS_AS(t.declare("2bad"), Error);
    CHECK_THROWS_AS(t.declare(""), Error);

    // positive implies real
    auto p = t.declare("p", Assumptions{.positive = true});
    CHECK(p->assumptions.real);

    // re-declaration replaces assumptions session-wide (shared record)
    Expr old_tree = symbol(t.intern("y")) + 1;
    t.declare("y", Assumptions{.positive = true});
    CHECK(ask(old_tree, AskProperty::Positive) == Trilean::Yes);
}

TEST_CASE("constant folding") {
    CHECK(constant(BigRational(1, 3)) + constant(BigRational(1, 4)) == constant(BigRational(7, 12)));
    CHECK(integer(2) + integer(3) * integer(4) == integer(14));
    CHECK(pow(integer(8), constant(BigRational(1, 3))) == integer(2));
    CHECK(pow(integer(2), constant(BigRational(1, 2))).kind() == ExprKind::Pow);  // stays symbolic
    CHECK(pow(integer(0), integer(0)) == one());
    CHECK_THROWS_AS(pow(integer(0), integer(-1)), Error);
}

TEST_CASE("like factors and terms merge") {
    Expr x = S("x");
    CHECK(x * x == pow(x, integer(2)));
    CHECK(x + x == 2 * x);
    CHECK(x - x == zero());
    CHECK(3 * x - 2 * x == x);
    CHECK(mul({x, pow(x, integer(2)), integer(5)}) == 5 * pow(x, integer(3)));
    // x / x = 1 (exponent merge cancels)
    CHECK(x / x == one());
    CHECK(pow(x, S("a")) * pow(x, neg(S("a"))) == one());
}

TEST_CASE("no auto-expansion of products of sums") {
    Expr u = S("u"), v = S("v");
    Expr e = (u - v) * (u + v);
    REQUIRE(e.kind() == ExprKind::Mul);
    CHECK(e.operands().size() == 2);
}

TEST_CASE("rational coefficient distributes over a bare sum") {
    Expr x = S("x"), y = S("y");
    Expr e = mul({constant(BigRational(1, 2)), x + y});
    REQUIRE(e.kind() == ExprKind::Add);
    CHECK(e == x / 2 + y / 2);
    // but a non-constant factor does not distribute
    Expr f = mul({pow(x, integer(2)), 2 - S("z")});
    CHECK(f.kind() == ExprKind::Mul);
}

TEST_CASE("pow base content extraction") {
    Expr a = S("a"), d = S("d");
    // 1/((a - d)/2) = 2/(a - d)
    Expr e = pow(a / 2 - d / 2, integer(-1));
    CHECK(e == 2 * pow(a - d, integer(-1)));
}

TEST_CASE("imaginary unit powers cycle") {
    Expr i = imaginary_unit();
    CHECK(pow(i, integer(2)) == integer(-1));
    CHECK(pow(i, integer(3)) == neg(i));
    CHECK(pow(i, integer(4)) == one());
    CHECK(pow(i, integer(-1)) == neg(i));
}

TEST_CASE("abs simplifications") {
    Expr x = S("x");
    SymbolTable t;
    Expr p = symbol(t.declare("pp", Assumptions{.positive = true}));
    CHECK(abs_(integer(-3)) == integer(3));
    CHECK(abs_(p) == p);
    CHECK(abs_(neg(p)) == p);
    CHECK(abs_(-2 * x) == 2 * abs_(x));
    CHECK(pow(abs_(x), integer(2)) == pow(x, integer(2)));
    CHECK(pow(abs_(x), integer(-2)) == pow(x, integer(-2)));
    // sqrt(x^2) = |x|
    CHECK(sqrt_(pow(x, integer(2))) == abs_(x));
}

TEST_CASE("zero-exponent node survives for unproven base") {
    Expr x = S("x");
    Expr e = pow(x, zero());
    CHECK(e.kind() == ExprKind::Pow);
    SymbolTable t;
    Expr p = symbol(t.declare("q", Assumptions{.positive = true}));
    CHECK(pow(p, zero()) == one());
}

TEST_CASE("subs examples") {
    SymbolTable t;
    auto x = t.declare("x");
    auto a = t.declare("a");
    auto k = t.declare("k");

    Expr f = exp_(pow(symbol(x), integer(2)));
    CHECK(subs(f, x, constant(BigRational(1, 3))) == exp_(constant(BigRational(1, 9))));

    CHECK(subs(symbol(a) + 1, a, symbol(k)) == symbol(k) + 1);

    Expr e = sin_(symbol(x)) + symbol(a);
    CHECK(subs(e, x, symbol(x)) == e);
}

TEST_CASE("subs is simultaneous") {
    SymbolTable t;
    auto x = t.declare("x");
    auto y = t.declare("y");
    Expr e = symbol(x) + 2 * symbol(y);
    Expr swapped = subs(e, {{x, symbol(y)}, {y, symbol(x)}});
    CHECK(swapped == symbol(y) + 2 * symbol(x));
    // swap twice is the identity
    CHECK(subs(swapped, {{x, symbol(y)}, {y, symbol(x)}}) == e);
    // and x+y is fixed under the swap
    Expr s = symbol(x) + symbol(y);
    CHECK(subs(s, {{x, symbol(y)}, {y, symbol(x)}}) == s);
}

TEST_CASE("free symbols") {
    SymbolTable t;
    auto a = t.declare("a");
    auto p1 = t.declare("p1");
    auto p2 = t.declare("p2");
    auto p3 = t.declare("p3");
    Expr L = symbol(a) * (symbol(p1) + symbol(p2) + symbol(p3) - 1);
    auto fs = free_symbols(L);
    CHECK(fs.size() == 4);
    CHECK(fs.count(a) == 1);
    CHECK(fs.count(p3) == 1);

    CHECK(free_symbols(integer(5)).empty());

    auto u = t.declare("u");
    auto v = t.declare("v");
    auto x = t.declare("x");
    Expr g = pow(symbol(u), integer(2)) - pow(symbol(v), integer(2));
    auto fs2 = free_symbols(subs(g, u, symbol(x)));
    CHECK(fs2.size() == 2);
    CHECK(fs2.count(x) == 1);
    CHECK(fs2.count(v) == 1);
    CHECK(fs2.count(u) == 0);
}

TEST_CASE("limit variable is a binder") {
    SymbolTable t;
    auto n = t.declare("n");
    Expr body = pow(1 + 1 / symbol(n), symbol(n));
    Expr lim = deferred_limit(body, n, infinity(1), LimitDir::Both);
    CHECK(free_symbols(lim).empty());
    // substituting the bound variable does not touch the body
    CHECK(subs(lim, n, integer(5)) == lim);
}

TEST_CASE("ask examples") {
    SymbolTable t;
    Expr x = symbol(t.declare("x", Assumptions{.positive = true}));
    Expr y = symbol(t.declare("y", Assumptions{.positive = true}));
    Expr r = symbol(t.declare("r", Assumptions{.real = true}));
    Expr u = symbol(t.declare("u"));

    CHECK(ask(x, AskProperty::Positive) == Trilean::Yes);
    CHECK(ask(integer(-3), AskProperty::Positive) == Trilean::No);
    CHECK(ask(x + y, AskProperty::Positive) == Trilean::Yes);
    CHECK(ask(x * y, AskProperty::Positive) == Trilean::Yes);
    CHECK(ask(pow(r, integer(2)), AskProperty::Real) == Trilean::Yes);
    // square of a real is nonnegative but not provably positive
    CHECK(ask(pow(r, integer(2)), AskProperty::Positive) == Trilean::Unknown);
    CHECK(ask(pow(r, integer(2)) + 1, AskProperty::Positive) == Trilean::Yes);
    CHECK(ask(u, AskProperty::Real) == Trilean::Unknown);
    CHECK(ask(imaginary_unit(), AskProperty::Real) == Trilean::No);
    CHECK(ask(imaginary_unit(), AskProperty::Nonzero) == Trilean::Yes);
    CHECK(ask(pi_constant(), AskProperty::Positive) == Trilean::Yes);
    CHECK(ask(pi_constant(), AskProperty::Integer) == Trilean::No);
    CHECK(ask(exp_(r), AskProperty::Positive) == Trilean::Yes);
    CHECK(ask(integer(3), AskProperty::Integer) == Trilean::Yes);
    CHECK(ask(constant(BigRational(1, 2)), AskProperty::Integer) == Trilean::No);
    Expr k = symbol(t.declare("k", Assumptions{.integer = true}));
    CHECK(ask(k + 1, AskProperty::Integer) == Trilean::Yes);
    CHECK(ask(k + constant(BigRational(1, 2)), AskProperty::Integer) == Trilean::No);
}

TEST_CASE("canonicalize is idempotent on random raw trees") {
    SymbolTable t;
    std::vector<SymbolPtr> syms{t.declare("x"), t.declare("y"), t.declare("z")};
    for (int iter = 0; iter < 500; ++iter) {
        Expr raw = testutil::rand_raw_tree(syms, 4);
        Expr c1 = [&]() -> Expr {
            try {
                return canonicalize(raw);
            } catch (const Error&) {
                return integer(0);  // division by zero in random tree; skip
            }
        }();
        Expr c2 = canonicalize(c1);
        CHECK(c1 == c2);
    }
}

TEST_CASE("canonicalize preserves exact value on random instantiations") {
    SymbolTable t;
    std::vector<SymbolPtr> syms{t.declare("x"), t.declare("y"), t.declare("z")};
    int checked = 0;
    for (int iter = 0; iter < 400 || checked < 150; ++iter) {
        REQUIRE(iter < 5000);
        Expr raw = testutil::rand_raw_tree(syms, 4);
        std::map<std::string, BigRational> env;
        for (auto& s : syms) env[s->name] = testutil::rand_nonzero_rational();
        auto expected = testutil::oracle_eval(raw, env);
        if (!expected) continue;
        Expr canon = [&]() -> Expr {
            try {
                return canonicalize(raw);
            } catch (const Error&) {
                return integer(0);
            }
        }();
        BindingList b;
        for (auto& s : syms) b.emplace_back(s, constant(env[s->name]));
        Expr ground = subs(canon, b);
        auto actual = eval_rational(ground);
        if (!actual) continue;  // e.g. surviving x^0 with zero-valued base
        CHECK(*actual == *expected);
        ++checked;
    }
}

TEST_CASE("ask never contradicts ground arithmetic") {
    SymbolTable t;
    std::vector<SymbolPtr> syms{t.declare("xp", Assumptions{.positive = true}),
                                t.declare("yr", Assumptions{.real = true}), t.declare("zf")};
    int trials = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        Expr e = testutil::rand_raw_tree(syms, 3);
        Expr c = [&]() -> Expr {
            try {
                return canonicalize(e);
            } catch (const Error&) {
                return integer(1);
            }
        }();
        std::map<std::string, BigRational> env;
        env["xp"] = testutil::rand_nonzero_rational().abs();  // positive
        env["yr"] = testutil::rand_rational();
        env["zf"] = testutil::rand_rational();
        auto v = testutil::oracle_eval(c, env);
        if (!v) continue;
        ++trials;
        Trilean pos = ask(c, AskProperty::Positive);
        Trilean nz = ask(c, AskProperty::Nonzero);
        Trilean real = ask(c, AskProperty::Real);
        if (pos == Trilean::Yes) CHECK(v->is_positive());
        if (pos == Trilean::No) CHECK(!v->is_positive());
        if (nz == Trilean::Yes) CHECK(!v->is_zero());
        if (nz == Trilean::No) CHECK(v->is_zero());
        CHECK(real != Trilean::No);  // rational instantiations are always real
    }
    CHECK(trials > 200);
}

TEST_CASE("structural equality is a congruence for unary ops") {
    SymbolTable t;
    auto x = t.declare("x");
    auto y = t.declare("y");
    Expr e1 = symbol(x) + symbol(y) + symbol(x);       // 2x + y
    Expr e2 = 2 * symbol(x) + symbol(y);
    REQUIRE(e1 == e2);
    CHECK(exp_(e1) == exp_(e2));
    CHECK(canonicalize(e1) == canonicalize(e2));
    CHECK(subs(e1, x, integer(3)) == subs(e2, x, integer(3)));
    CHECK(free_symbols(e1) == free_symbols(e2));
}

TEST_CASE("infinity is barred from arithmetic") {
    CHECK_THROWS_AS(add({infinity(1), integer(1)}), Error);
    CHECK_THROWS_AS(mul({infinity(1), integer(2)}), Error);
    CHECK_THROWS_AS(exp_(infinity(1)), Error);
}
