#include <catch2/catch_amalgamated.hpp>

#include "symkern/rational.hpp"

using namespace symkern;

TEST_CASE("rational arithmetic stays reduced") {
    BigRational a(1, 3), b(1, 4);
    BigRational s = a + b;
    CHECK(s.num() == 7);
    CHECK(s.den() == 12);
    CHECK((a * b).str() == "1/12");
    CHECK((a - a).is_zero());
    CHECK((a - a).den() == 1);
    CHECK(BigRational(-2, -4).str() == "1/2");
    CHECK(BigRational(2, -4).str() == "-1/2");
}

TEST_CASE("rational parse") {
    CHECK(BigRational::parse("7/12")->str() == "7/12");
    CHECK(BigRational::parse("-3")->str() == "-3");
    CHECK(BigRational::parse("0.5")->str() == "1/2");
    CHECK(BigRational::parse("1.25")->str() == "5/4");
    CHECK(BigRational::parse("1/3")->str() == "1/3");
    CHECK(!BigRational::parse("1/0").has_value());
    CHECK(!BigRational::parse("abc").has_value());
    CHECK(!BigRational::parse("1.").has_value());
    CHECK(!BigRational::parse("").has_value());
}

TEST_CASE("integer powers") {
    CHECK(BigRational(2, 3).pow(3).str() == "8/27");
    CHECK(BigRational(2, 3).pow(-2).str() == "9/4");
    CHECK(BigRational(5).pow(0).str() == "1");
    CHECK_THROWS_AS(BigRational(0).pow(-1), Error);
}

TEST_CASE("perfect roots") {
    CHECK(perfect_root(BigInt(8), 3).value() == 2);
    CHECK(perfect_root(BigInt(81), 4).value() == 3);
    CHECK(perfect_root(BigInt(1000000), 2).value() == 1000);
    CHECK(!perfect_root(BigInt(2), 2).has_value());
    CHECK(!perfect_root(BigInt(-8), 3).has_value());
    CHECK(perfect_root(BigInt(0), 5).value() == 0);
    CHECK(perfect_root(BigInt(1), 7).value() == 1);
}

TEST_CASE("exact rational pow") {
    CHECK(exact_rational_pow(BigRational(8), BigRational(1, 3))->str() == "2");
    CHECK(exact_rational_pow(BigRational(-8), BigRational(1, 3))->str() == "-2");
    CHECK(exact_rational_pow(BigRational(4, 9), BigRational(1, 2))->str() == "2/3");
    CHECK(exact_rational_pow(BigRational(4, 9), BigRational(-1, 2))->str() == "3/2");
    CHECK(exact_rational_pow(BigRational(27, 8), BigRational(2, 3))->str() == "9/4");
    CHECK(!exact_rational_pow(BigRational(2), BigRational(1, 2)).has_value());
    CHECK(!exact_rational_pow(BigRational(-4), BigRational(1, 2)).has_value());
    CHECK(exact_rational_pow(BigRational(0), BigRational(0))->str() == "1");
}

TEST_CASE("terminating decimals") {
    CHECK(decimal_terminates(BigRational(1, 4)));
    CHECK(decimal_terminates(BigRational(3, 200)));
    CHECK(!decimal_terminates(BigRational(7, 12)));
    CHECK(decimal_terminates(BigRational(5)));
}

TEST_CASE("round to nearest integer") {
    CHECK(round_nearest(BigRational(5, 2)) == 3);   // half away from zero
    CHECK(round_nearest(BigRational(-5, 2)) == -3);
    CHECK(round_nearest(BigRational(7, 3)) == 2);
    CHECK(round_nearest(BigRational(8, 3)) == 3);
    CHECK(round_nearest(BigRational(-7, 3)) == -2);
}
