#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "bellsep/rational.hpp"

using bellsep::Rational;

TEST_CASE("rational arithmetic stays in lowest terms", "[rational]") {
  Rational a(6, -8);
  CHECK(a.str() == "-3/4");
  CHECK(a.denominator() == 4);

  Rational b = Rational(1, 6) + Rational(1, 3);
  CHECK(b == Rational(1, 2));
  CHECK(b.str() == "1/2");

  CHECK((Rational(3, 4) * Rational(4, 3)).str() == "1");
  CHECK((Rational(1, 2) - Rational(1, 2)).str() == "0");
  CHECK((Rational(-1, 3) / Rational(2, 3)).str() == "-1/2");
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(-Rational(2, 5) == Rational(-2, 5));
}

TEST_CASE("rational errors", "[rational]") {
  CHECK_THROWS_AS(Rational(1, 0), bellsep::ParameterError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), bellsep::ParameterError);
  for (const char* bad : {"", "1/0", "abc", "1/", "/2", "1.5", "1/-2", " 1", "--1"})
    CHECK_THROWS_AS(Rational::parse(bad), bellsep::ParseError);
}

TEST_CASE("parse accepts integer and fraction forms", "[rational]") {
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("-3/9") == Rational(-1, 3));
  CHECK(Rational::parse("+4/8").str() == "1/2");
  CHECK(Rational::parse("123456789012345678901234567890/3").str() == "41152263004115226300411522630");
}

TEST_CASE("parse(format(r)) == r", "[rational][property]") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-1'000'000'007L, 1'000'000'007L);
  std::uniform_int_distribution<long> den(1, 1'000'000'007L);
  for (int i = 0; i < 500; ++i) {
    Rational r(num(rng), den(rng));
    r *= Rational(num(rng), den(rng));  // grow past machine words
    Rational back = Rational::parse(r.str());
    REQUIRE(back == r);
    REQUIRE(back.str() == r.str());
  }
}

TEST_CASE("limit_denominator matches known best approximations", "[rational]") {
  // Frozen from an independent implementation (Python fractions).
  CHECK(bellsep::rationalize(std::numbers::pi, 100) == Rational(311, 99));
  CHECK(bellsep::rationalize(std::numbers::pi, 1000) == Rational(355, 113));
  CHECK(bellsep::rationalize(std::numbers::sqrt2) == Rational(665857, 470832));
  CHECK(bellsep::rationalize(0.1) == Rational(1, 10));
  CHECK(bellsep::rationalize(-std::numbers::e, 50) == Rational(-106, 39));
  CHECK(bellsep::rationalize(0.25) == Rational(1, 4));
}

TEST_CASE("limit_denominator is the closest fraction (brute force)", "[rational][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = u(rng);
    const long K = 1 + trial % 40;
    Rational exact = Rational::from_double(x);
    Rational got = bellsep::rationalize(x, K);
    REQUIRE(got.denominator() <= K);
    // Smallest distance over all p/q with q <= K.
    Rational best_dist(100);
    for (long q = 1; q <= K; ++q) {
      long p0 = static_cast<long>(std::floor(x * static_cast<double>(q)));
      for (long p = p0 - 1; p <= p0 + 2; ++p) {
        Rational d = bellsep::abs(Rational(p, q) - exact);
        if (d < best_dist) best_dist = d;
      }
    }
    REQUIRE(bellsep::abs(got - exact) == best_dist);
  }
}

TEST_CASE("from_double is exact for dyadic values", "[rational]") {
  CHECK(Rational::from_double(0.375) == Rational(3, 8));
  CHECK(Rational::from_double(-2.0) == Rational(-2));
  CHECK_THROWS_AS(Rational::from_double(std::nan("")), bellsep::ParameterError);
}
