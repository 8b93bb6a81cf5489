#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "symkern/parser.hpp"
#include "symkern/printer.hpp"

using namespace symkern;

TEST_CASE("paper input strings") {
    SymbolTable t;
    Expr e = parse("a * x + b * x^2 + c * sin(x^2)", t);
    REQUIRE(e.kind() == ExprKind::Add);
    CHECK(e.operands().size() == 3);
    Expr x = symbol(t.find("x"));
    Expr c = symbol(t.find("c"));
    Expr third = mul({c, sin_(pow(x, integer(2)))});
    bool found = false;
    for (const Expr& term : e.operands())
        if (term == third) found = true;
    CHECK(found);

    Expr f = parse("(1 + 1/n)^n", t);
    REQUIRE(f.kind() == ExprKind::Pow);
    Expr n = symbol(t.find("n"));
    CHECK(f.exponent() == n);
    CHECK(f.base() == 1 + pow(n, integer(-1)));

    CHECK(parse("2+3*4", t) == integer(14));
}

TEST_CASE("precedence and associativity") {
    SymbolTable t;
    Expr x = symbol(t.intern("x"));
    Expr y = symbol(t.intern("y"));
    Expr z = symbol(t.intern("z"));
    CHECK(parse("-x^2", t) == neg(pow(x, integer(2))));
    CHECK(parse("x^y^z", t) == pow(x, pow(y, z)));
    CHECK(parse("2^-2", t) == constant(BigRational(1, 4)));
    CHECK(parse("x - y - z", t) == sub(sub(x, y), z));
    CHECK(parse("x / y / z", t) == div(div(x, y), z));
    CHECK(parse("x + y * z", t) == add({x, mul({y, z})}));
    CHECK(parse("(x + y) * z", t) == mul({add({x, y}), z}));
    CHECK(parse("2*x^3", t) == 2 * pow(x, integer(3)));
}

TEST_CASE("whitespace insensitive") {
    SymbolTable t;
    CHECK(parse("1+2 * x", t) == parse("  1 + 2*x ", t));
    CHECK(parse("sin( x )", t) == parse("sin(x)", t));
}

TEST_CASE("literals") {
    SymbolTable t;
    CHECK(parse("0.5", t) == constant(BigRational(1, 2)));
    CHECK(parse("1.25", t) == constant(BigRational(5, 4)));
    CHECK(parse("pi", t) == pi_constant());
    CHECK(parse("E", t) == exp_(one()));
    CHECK(parse("I", t) == imaginary_unit());
    CHECK(parse("oo", t).kind() == ExprKind::Infinity);
    CHECK(parse("-oo", t).infinity_sign() == -1);
    CHECK(parse("sqrt(9)", t) == integer(3));
    CHECK(parse("sqrt(2)", t) == pow(integer(2), constant(BigRational(1, 2))));
}

TEST_CASE("syntax errors carry spans") {
    SymbolTable t;
    try {
        parse("2x", t);
        FAIL("expected SyntaxError");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::SyntaxError);
        REQUIRE(err.span().has_value());
        CHECK(err.span()->start == 1);
    }
    try {
        parse("x + ", t);
        FAIL("expected SyntaxError");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::SyntaxError);
    }
    try {
        parse("fresnel(x)", t);
        FAIL("expected UnknownFunction");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::UnknownFunction);
        REQUIRE(err.span().has_value());
        CHECK(err.span()->start == 0);
        CHECK(err.span()->end == 7);
    }
    CHECK_THROWS_AS(parse("(x + 1", t), Error);
    CHECK_THROWS_AS(parse("sin(x, y)", t), Error);
    CHECK_THROWS_AS(parse("1.", t), Error);
    CHECK_THROWS_AS(parse("x $ y", t), Error);
}

TEST_CASE("print/parse round trip on random expressions") {
    SymbolTable t;
    std::vector<SymbolPtr> syms{t.intern("x"), t.intern("y"), t.intern("z")};
    int done = 0;
    for (int i = 0; i < 10000; ++i) {
        Expr e = [&]() -> Expr {
            try {
                return testutil::rand_expr(syms, 4);
            } catch (const Error&) {
                return integer(1);  // random tree hit a domain error while canonicalizing
            }
        }();
        std::string s = to_infix(e);
        INFO("printed: " << s);
        Expr back = parse(s, t);
        CHECK(back == e);
        ++done;
    }
    CHECK(done == 10000);
}
