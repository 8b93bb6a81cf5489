#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "symkern/error.hpp"

namespace symkern {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number. Always stored reduced with positive denominator;
/// zero is 0/1. Backed by boost cpp_rational which maintains exactly that
/// canonical form.
class BigRational {
  public:
    BigRational() : value_(0) {}
    BigRational(int n) : value_(n) {}
    BigRational(long long n) : value_(static_cast<std::int64_t>(n)) {}
    BigRational(const BigInt& n) : value_(n) {}
    BigRational(const BigInt& num, const BigInt& den) {
        if (den == 0) fail(ErrorKind::DomainError, "rational with zero denominator");
        value_ = den < 0 ? Rep(-num, BigInt(-den)) : Rep(num, den);
    }
    BigRational(long long num, long long den)
        : BigRational(BigInt(static_cast<std::int64_t>(num)), BigInt(static_cast<std::int64_t>(den))) {}

    BigInt num() const { return boost::multiprecision::numerator(value_); }
    BigInt den() const { return boost::multiprecision::denominator(value_); }

    bool is_zero() const { return value_.is_zero(); }
    bool is_one() const { return value_ == 1; }
    bool is_integer() const { return den() == 1; }
    bool is_negative() const { return value_ < 0; }
    bool is_positive() const { return value_ > 0; }

    int sign() const { return value_.sign(); }

    BigRational operator-() const { return wrap(-value_); }
    BigRational operator+(const BigRational& o) const { return wrap(value_ + o.value_); }
    BigRational operator-(const BigRational& o) const { return wrap(value_ - o.value_); }
    BigRational operator*(const BigRational& o) const { return wrap(value_ * o.value_); }
    BigRational operator/(const BigRational& o) const {
        if (o.is_zero()) fail(ErrorKind::DomainError, "division by exact zero");
        return wrap(value_ / o.value_);
    }
    BigRational& operator+=(const BigRational& o) { value_ += o.value_; return *this; }
    BigRational& operator-=(const BigRational& o) { value_ -= o.value_; return *this; }
    BigRational& operator*=(const BigRational& o) { value_ *= o.value_; return *this; }
    BigRational& operator/=(const BigRational& o) { *this = *this / o; return *this; }

    bool operator==(const BigRational& o) const { return value_ == o.value_; }
    bool operator!=(const BigRational& o) const { return value_ != o.value_; }
    bool operator<(const BigRational& o) const { return value_ < o.value_; }
    bool operator<=(const BigRational& o) const { return value_ <= o.value_; }
    bool operator>(const BigRational& o) const { return value_ > o.value_; }
    bool operator>=(const BigRational& o) const { return value_ >= o.value_; }

    BigRational abs() const { return value_ < 0 ? wrap(-value_) : *this; }

    /// Integer power; negative exponents invert (zero base -> DomainError).
    BigRational pow(long long e) const {
        if (e == 0) return BigRational(1);
        if (is_zero()) {
            if (e < 0) fail(ErrorKind::DomainError, "division by exact zero");
            return BigRational(0);
        }
        bool invert = e < 0;
        unsigned long long k = invert ? static_cast<unsigned long long>(-(e + 1)) + 1ULL
                                      : static_cast<unsigned long long>(e);
        BigInt n = boost::multiprecision::pow(num(), static_cast<unsigned>(k));
        BigInt d = boost::multiprecision::pow(den(), static_cast<unsigned>(k));
        return invert ? BigRational(d, n) : BigRational(n, d);
    }

    /// "7/12", "-3", "0"
    std::string str() const {
        std::string s = num().str();
        if (!is_integer()) s += "/" + den().str();
        return s;
    }

    double to_double() const { return value_.convert_to<double>(); }

    /// Parses "7", "-3/4" or a decimal literal like "0.25" (exact: 1/4).
    static std::optional<BigRational> parse(std::string_view text);

  private:
    using Rep = boost::multiprecision::cpp_rational;
    struct WrapTag {};
    BigRational(Rep v, WrapTag) : value_(std::move(v)) {}
    static BigRational wrap(Rep v) { return BigRational(std::move(v), WrapTag{}); }
    Rep value_;
};

inline std::optional<BigRational> BigRational::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '-' || text[i] == '+') {
        neg = text[i] == '-';
        ++i;
    }
    auto digits = [&](BigInt& out) -> std::size_t {
        std::size_t n = 0;
        out = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            out = out * 10 + (text[i] - '0');
            ++i, ++n;
        }
        return n;
    };
    BigInt ip;
    if (digits(ip) == 0) return std::nullopt;
    BigRational r(ip);
    if (i < text.size() && text[i] == '.') {
        ++i;
        std::size_t start = i;
        BigInt fp;
        std::size_t n = digits(fp);
        if (n == 0) return std::nullopt;
        (void)start;
        BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(n));
        r += BigRational(fp, scale);
    } else if (i < text.size() && text[i] == '/') {
        ++i;
        BigInt q;
        if (digits(q) == 0 || q == 0) return std::nullopt;
        r /= BigRational(q);
    }
    if (i != text.size()) return std::nullopt;
    return neg ? -r : r;
}

/// Floor of the exact quotient a/b (b > 0).
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b, r = a % b;
    if (r != 0 && a.sign() < 0) --q;
    return q;
}

/// round(r) to nearest integer, half away from zero.
inline BigInt round_nearest(const BigRational& r) {
    BigInt two_num = 2 * r.num() + (r.is_negative() ? -r.den() : r.den());
    BigInt q = two_num / (2 * r.den());
    // Exact halves round away from zero; the formula already does so.
    return q;
}

/// Exact k-th root of a nonnegative integer, if it exists.
inline std::optional<BigInt> perfect_root(const BigInt& n, unsigned k) {
    if (n < 0) return std::nullopt;
    if (n == 0 || n == 1 || k == 1) return n;
    // Newton iteration for floor(n^(1/k)), then verify.
    BigInt x = BigInt(1) << static_cast<unsigned>((boost::multiprecision::msb(n) / k) + 1);
    while (true) {
        BigInt xk1 = boost::multiprecision::pow(x, k - 1);
        BigInt next = ((k - 1) * x + n / xk1) / k;
        if (next >= x) break;
        x = next;
    }
    if (boost::multiprecision::pow(x, k) == n) return x;
    return std::nullopt;
}

/// Exact rational result of r^(p/q) when it exists (q > 0, gcd(p,q)=1).
inline std::optional<BigRational> exact_rational_pow(const BigRational& base, const BigRational& exp) {
    if (!exp.is_integer()) {
        BigInt q = exp.den();
        if (q > 64) return std::nullopt;  // roots this deep never fold at desk scale
        unsigned k = q.convert_to<unsigned>();
        BigInt n = base.num(), d = base.den();
        bool neg = n < 0;
        if (neg && k % 2 == 0) return std::nullopt;
        auto rn = perfect_root(neg ? BigInt(-n) : n, k);
        auto rd = perfect_root(d, k);
        if (!rn || !rd) return std::nullopt;
        BigRational root(neg ? BigInt(-*rn) : *rn, *rd);
        BigRational p = exp * BigRational(q);
        if (p.num().convert_to<double>() > 1e6 || p.num().convert_to<double>() < -1e6) return std::nullopt;
        return root.pow(p.num().convert_to<long long>());
    }
    BigInt e = exp.num();
    if (e > 100000 || e < -100000) return std::nullopt;  // guard against absurd folds
    if (base.is_zero() && e < 0) fail(ErrorKind::DomainError, "division by exact zero");
    return base.pow(e.convert_to<long long>());
}

/// True when r has a terminating decimal expansion (denominator 2^a * 5^b).
inline bool decimal_terminates(const BigRational& r) {
    BigInt d = r.den();
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
}

}  // namespace symkern
