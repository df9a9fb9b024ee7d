#include <catch2/catch_amalgamated.hpp>

#include "bellsep/simplex.hpp"
#include "test_support.hpp"

using namespace bellsep;
using bellsep::testing::Rng;

namespace {

using Matrix = std::vector<std::vector<Rational>>;

Rational dot_column(const std::vector<Rational>& y, const Matrix& a, std::size_t j) {
  Rational v(0);
  for (std::size_t i = 0; i < a.size(); ++i) v += y[i] * a[i][j];
  return v;
}

Rational dot(const std::vector<Rational>& y, const std::vector<Rational>& b) {
  Rational v(0);
  for (std::size_t i = 0; i < b.size(); ++i) v += y[i] * b[i];
  return v;
}

void require_solution(const Matrix& a, const std::vector<Rational>& b, const lp::FeasibilityResult& r) {
  REQUIRE(r.feasible);
  REQUIRE(r.infeasibility.is_zero());
  for (const auto& q : r.solution) REQUIRE(q.sign() >= 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational lhs(0);
    for (std::size_t j = 0; j < r.solution.size(); ++j) lhs += a[i][j] * r.solution[j];
    REQUIRE(lhs == b[i]);
  }
}

void require_farkas(const Matrix& a, const std::vector<Rational>& b, const lp::FeasibilityResult& r) {
  REQUIRE_FALSE(r.feasible);
  REQUIRE(r.farkas.size() == a.size());
  for (std::size_t j = 0; j < a.front().size(); ++j) REQUIRE(dot_column(r.farkas, a, j).sign() <= 0);
  REQUIRE(dot(r.farkas, b).sign() > 0);
}

}  // namespace

TEST_CASE("feasible systems return a non-negative solution", "[simplex]") {
  Matrix a{{Rational(1), Rational(1), Rational(1)}, {Rational(1), Rational(-1), Rational(0)}};
  std::vector<Rational> b{Rational(1), Rational(1, 3)};
  require_solution(a, b, lp::find_feasible_point(a, b));

  // Negative right-hand side.
  Matrix c{{Rational(-1), Rational(-2)}};
  std::vector<Rational> d{Rational(-3)};
  require_solution(c, d, lp::find_feasible_point(c, d));
}

TEST_CASE("infeasible systems return a Farkas vector", "[simplex]") {
  // q1 + q2 = 1 and q1 + q2 = 2.
  Matrix a{{Rational(1), Rational(1)}, {Rational(1), Rational(1)}};
  std::vector<Rational> b{Rational(1), Rational(2)};
  require_farkas(a, b, lp::find_feasible_point(a, b));

  // q1 = -1 with q1 >= 0.
  Matrix c{{Rational(1)}};
  std::vector<Rational> d{Rational(-1)};
  require_farkas(c, d, lp::find_feasible_point(c, d));
}

TEST_CASE("ragged input is a shape error", "[simplex]") {
  CHECK_THROWS_AS(lp::find_feasible_point({{Rational(1)}, {Rational(1), Rational(2)}}, {Rational(1), Rational(1)}),
                  ShapeError);
  CHECK_THROWS_AS(lp::find_feasible_point({{Rational(1)}}, {}), ShapeError);
}

TEST_CASE("random systems: solution or certificate, never neither", "[simplex][property]") {
  Rng rng(606);
  std::uniform_int_distribution<long> entry(-3, 3);
  std::size_t feasible = 0, infeasible = 0;
  for (int t = 0; t < 300; ++t) {
    std::size_t m = testing::uniform_index(rng, 1, 4), n = testing::uniform_index(rng, 1, 5);
    Matrix a(m, std::vector<Rational>(n));
    std::vector<Rational> b(m);
    for (auto& row : a)
      for (auto& v : row) v = Rational(entry(rng), 1 + static_cast<long>(testing::uniform_index(rng, 0, 2)));
    // Half the systems are feasible by construction.
    if (t % 2 == 0) {
      std::vector<Rational> q(n);
      for (auto& v : q) v = Rational(static_cast<long>(testing::uniform_index(rng, 0, 4)), 2);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i] += a[i][j] * q[j];
    } else {
      for (auto& v : b) v = Rational(entry(rng));
    }
    auto r = lp::find_feasible_point(a, b);
    if (r.feasible) {
      require_solution(a, b, r);
      ++feasible;
    } else {
      REQUIRE(t % 2 == 1);
      require_farkas(a, b, r);
      ++infeasible;
    }
  }
  CHECK(feasible > 0);
  CHECK(infeasible > 0);
}
