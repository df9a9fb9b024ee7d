#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "bellsep/errors.hpp"

namespace bellsep {

/// Exact fraction over arbitrary-precision integers, always kept in lowest
/// terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator) {
    if (denominator == 0) throw ParameterError("rational with zero denominator");
    value_ = mpq_class(numerator, 1);
    value_ /= denominator;
    value_.canonicalize();
  }
  explicit Rational(mpq_class value) : value_(std::move(value)) {
    if (value_.get_den() == 0) throw ParameterError("rational with zero denominator");
    value_.canonicalize();
  }

  /// Accepts "n", "-n", "n/d", "-n/d" with decimal digits; d > 0.
  static Rational parse(std::string_view text) {
    auto digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
      negative = body.front() == '-';
      body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!digits(num) || !digits(den))
      throw ParseError("malformed rational \"" + std::string(text) + "\"");
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
    if (negative) n = -n;
    return Rational(mpq_class(n, d));
  }

  /// Exact value of a finite binary64 number.
  static Rational from_double(double value) {
    if (!std::isfinite(value)) throw ParameterError("cannot convert non-finite double to rational");
    return Rational(mpq_class(value));
  }

  [[nodiscard]] std::string str() const {
    if (value_.get_den() == 1) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  [[nodiscard]] double to_double() const { return value_.get_d(); }
  [[nodiscard]] const mpz_class& numerator() const { return value_.get_num(); }
  [[nodiscard]] const mpz_class& denominator() const { return value_.get_den(); }
  [[nodiscard]] const mpq_class& raw() const { return value_; }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }

  Rational& operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw ParameterError("rational division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class value_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Closest fraction to `x` with denominator at most `max_denominator`, from
/// the continued-fraction convergents and the best semiconvergent.
inline Rational limit_denominator(const Rational& x, const mpz_class& max_denominator) {
  if (max_denominator < 1) throw ParameterError("max_denominator must be positive");
  if (x.denominator() <= max_denominator) return x;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpz_class n = x.numerator(), d = x.denominator();
  while (true) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    mpz_class q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    mpz_class p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    mpz_class r = n - a * d;
    n = d;
    d = r;
  }
  mpz_class k;
  mpz_fdiv_q(k.get_mpz_t(), mpz_class(max_denominator - q0).get_mpz_t(), q1.get_mpz_t());
  Rational semi(mpq_class(p0 + k * p1, q0 + k * q1));
  Rational conv(mpq_class(p1, q1));
  return abs(conv - x) <= abs(semi - x) ? conv : semi;
}

/// Continued-fraction rounding of a double; default cap 10^6.
inline Rational rationalize(double value, std::int64_t max_denominator = 1'000'000) {
  return limit_denominator(Rational::from_double(value), mpz_class(static_cast<long>(max_denominator)));
}

}  // namespace bellsep
