#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "bellsep/determinize.hpp"
#include "bellsep/local_polytope.hpp"
#include "test_support.hpp"

using namespace bellsep;
using bellsep::testing::Rng;

namespace {

/// Independent random distribution in every cell; typically signalling.
ExactBehavior random_cellwise_behavior(Rng& rng, const Scenario& s) {
  ExactBehavior p(s);
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      auto cell = p.cell(x, y);
      auto dist = testing::random_distribution(rng, cell.size(), 16);
      std::copy(dist.begin(), dist.end(), cell.begin());
    }
  return p;
}

void require_sound(const ExactBehavior& p, const MembershipResult<Rational>& r) {
  if (r.is_member()) {
    REQUIRE(r.model.has_value());
    REQUIRE(is_deterministic(*r.model));
    REQUIRE(behavior_of_model(*r.model) == p);
  } else {
    REQUIRE(r.certificate.has_value());
    Rational bound = testing::brute_force_bound(r.certificate->coefficients());
    REQUIRE(bound == r.certificate->local_bound());
    REQUIRE(*r.certificate_value == evaluate_bell_functional(*r.certificate, p).value);
    REQUIRE(bound < *r.certificate_value);
  }
}

}  // namespace

TEST_CASE("strategy enumeration", "[polytope]") {
  CHECK(enumerate_strategies(Scenario::chsh()).size() == 16);
  CHECK(enumerate_strategies(Scenario({3}, {3})).size() == 9);
  auto s332 = Scenario::uniform(3, 2, 3, 2);
  auto all = enumerate_strategies(s332);
  CHECK(all.size() == 64);
  std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> distinct;
  for (const auto& st : all) distinct.insert({st.alice_map, st.bob_map});
  CHECK(distinct.size() == 64);
  // Lexicographic: first all zeros, last digit fastest.
  CHECK(all[0].alice_map == std::vector<std::size_t>{0, 0, 0});
  CHECK(all[1].bob_map == std::vector<std::size_t>{0, 0, 1});
  CHECK(all.back().alice_map == std::vector<std::size_t>{1, 1, 1});
  CHECK(strategy_count(Scenario::uniform(4, 4, 4, 4)) == 65536);
  try {
    strategy_count(Scenario::uniform(6, 10, 6, 10));
    FAIL("expected SizeError");
  } catch (const SizeError& e) {
    CHECK(std::string(e.what()).find("1000000000000 ") != std::string::npos);
  }
  CHECK_THROWS_AS(enumerate_strategies(Scenario::chsh(), 15), SizeError);
}

TEST_CASE("deterministic behaviors are members of themselves", "[polytope]") {
  Scenario s({2, 3}, {3, 2});
  for (const auto& st : enumerate_strategies(s)) {
    auto r = membership(strategy_behavior(s, st));
    REQUIRE(r.is_member());
    REQUIRE(r.model->size() == 1);
    REQUIRE(r.model->components()[0].weight == Rational(1));
    REQUIRE(r.model->components()[0].alice == one_hot(s.alice(), st.alice_map));
    REQUIRE(r.model->components()[0].bob == one_hot(s.bob(), st.bob_map));
  }
}

TEST_CASE("uniform behavior is a member", "[polytope]") {
  ExactBehavior u = uniform_behavior(Scenario::chsh());
  auto r = membership(u);
  REQUIRE(r.is_member());
  CHECK(behavior_of_model(*r.model) == u);
}

TEST_CASE("PR box is a non-member with the CHSH certificate", "[polytope]") {
  auto r = membership(pr_box());
  REQUIRE_FALSE(r.is_member());
  CHECK(r.method == MembershipMethod::exact_lp);
  CHECK(r.certificate->local_bound() == Rational(2));
  CHECK(*r.certificate_value == Rational(4));
  CHECK(testing::brute_force_bound(r.certificate->coefficients()) == Rational(2));
  require_sound(pr_box(), r);
}

TEST_CASE("CHSH values", "[polytope][chsh]") {
  auto u = chsh_all_variants(uniform_behavior(Scenario::chsh()));
  for (const auto& v : u.values) CHECK(v == Rational(0));
  CHECK(u.argmax == 0);

  auto pr = chsh_all_variants(pr_box());
  CHECK(pr.max() == Rational(4));
  CHECK(pr.argmax == 0);
  CHECK(correlator(pr_box(), 1, 1) == Rational(-1));

  for (const auto& st : enumerate_strategies(Scenario::chsh())) {
    auto v = chsh_all_variants(strategy_behavior(Scenario::chsh(), st));
    Rational max_abs(0);
    for (const auto& s : v.values) max_abs = std::max(max_abs, abs(s));
    REQUIRE(max_abs == Rational(2));
  }
  CHECK_THROWS_AS(chsh_value(uniform_behavior(Scenario({2, 2}, {2, 3})), 0), ShapeError);
  CHECK_THROWS_AS(chsh_value(pr_box(), 8), ParameterError);
}

TEST_CASE("evaluate_bell_functional", "[polytope]") {
  BellFunctional chsh = chsh_functional(0);
  CHECK(chsh.local_bound() == Rational(2));
  auto pr = evaluate_bell_functional(chsh, pr_box());
  CHECK(pr.value == Rational(4));
  CHECK(pr.violated);
  auto u = evaluate_bell_functional(chsh, uniform_behavior(Scenario::chsh()));
  CHECK(u.value == Rational(0));
  CHECK_FALSE(u.violated);

  BellFunctional zero{CorrelationTable<Rational>(Scenario({2, 3}, {2}))};
  CHECK(zero.local_bound() == Rational(0));
  Rng rng(1);
  auto z = evaluate_bell_functional(zero, behavior_of_model(testing::random_model(rng, zero.scenario())));
  CHECK(z.value == Rational(0));
  CHECK_FALSE(z.violated);

  CHECK_THROWS_AS(BellFunctional(chsh.coefficients(), Rational(3)), InvariantError);
  CHECK_NOTHROW(BellFunctional(chsh.coefficients(), Rational(2)));
  CHECK_THROWS_AS(evaluate_bell_functional(zero, pr_box()), ShapeError);
}

TEST_CASE("CHSH functional is never violated by local behaviors", "[polytope][property]") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    ExactBehavior p = behavior_of_model(testing::random_model(rng, Scenario::chsh()));
    for (std::size_t v = 0; v < 8; ++v) REQUIRE_FALSE(evaluate_bell_functional(chsh_functional(v), p).violated);
  }
}

TEST_CASE("local bound agrees with brute force", "[polytope][property]") {
  Rng rng(23);
  std::uniform_int_distribution<long> coeff(-5, 5);
  for (int i = 0; i < 100; ++i) {
    Scenario s = testing::random_scenario(rng);
    CorrelationTable<Rational> c(s);
    for (std::size_t x = 0; x < s.alice_settings(); ++x)
      for (std::size_t y = 0; y < s.bob_settings(); ++y)
        for (Rational& v : c.cell(x, y)) v = Rational(coeff(rng), 1 + static_cast<long>(testing::uniform_index(rng, 0, 3)));
    REQUIRE(local_bound_of(c) == testing::brute_force_bound(c));
  }
}

TEST_CASE("membership results are sound on random behaviors", "[polytope][property]") {
  Rng rng(555);
  std::size_t members = 0, non_members = 0;
  for (int i = 0; i < 60; ++i) {
    Scenario s = testing::random_scenario(rng, 2, 3);
    ExactBehavior p = i % 2 == 0 ? behavior_of_model(testing::random_model(rng, s)) : random_cellwise_behavior(rng, s);
    auto r = membership(p);
    require_sound(p, r);
    (r.is_member() ? members : non_members) += 1;
  }
  CHECK(members >= 30);
  CHECK(non_members > 0);
}

TEST_CASE("model behaviors are members, agreeing with determinize", "[polytope][property]") {
  Rng rng(8080);
  for (int i = 0; i < 40; ++i) {
    LocalModel m = testing::random_model(rng);
    ExactBehavior p = behavior_of_model(m);
    auto r = membership(p);
    REQUIRE(r.is_member());
    REQUIRE(behavior_of_model(*r.model) == p);
    REQUIRE(behavior_of_model(determinize(m)) == behavior_of_model(*r.model));
  }
}

TEST_CASE("in (2,2,2), membership matches max CHSH <= 2", "[polytope][property]") {
  Rng rng(90210);
  std::size_t members = 0, non_members = 0;
  for (int i = 0; i < 200; ++i) {
    ExactBehavior p = testing::random_ns_chsh_behavior(rng);
    REQUIRE(check_no_signalling(p).ok);
    auto r = membership(p);
    bool chsh_local = chsh_all_variants(p).max() <= Rational(2);
    REQUIRE(r.is_member() == chsh_local);
    require_sound(p, r);
    (r.is_member() ? members : non_members) += 1;

    auto rf = membership(to_float(p));
    REQUIRE(rf.method == MembershipMethod::chsh_criterion);
    REQUIRE(rf.is_member() == chsh_local);
  }
  CHECK(members > 10);
  CHECK(non_members > 10);
}

TEST_CASE("membership is invariant under relabeling", "[polytope][property]") {
  Rng rng(1001);
  for (int i = 0; i < 40; ++i) {
    Scenario s = testing::random_scenario(rng, 2, 3);
    ExactBehavior p = i % 3 == 0 ? behavior_of_model(testing::random_model(rng, s))
                                 : (s.is_chsh() ? testing::random_ns_chsh_behavior(rng) : random_cellwise_behavior(rng, s));
    bool member = membership(p).is_member();
    for (const ExactBehavior& q : {transpose(p), testing::reversed_outcomes(p), testing::reversed_alice_settings(p)}) {
      auto r = membership(q);
      REQUIRE(r.is_member() == member);
      require_sound(q, r);
    }
  }
}

TEST_CASE("approximate behaviors", "[polytope]") {
  SECTION("(2,2,2) uses the CHSH criterion") {
    auto r = membership(to_float(pr_box()));
    CHECK_FALSE(r.is_member());
    CHECK(r.method == MembershipMethod::chsh_criterion);
    CHECK(r.certificate->local_bound() == Rational(2));
    CHECK(*r.certificate_value == Catch::Approx(4.0));
    CHECK(r.warnings.empty());
    CHECK(membership(to_float(uniform_behavior(Scenario::chsh()))).is_member());
  }
  SECTION("other scenarios are rationalized with a warning") {
    Scenario s({3}, {2, 2});
    Rng rng(4);
    // Denominators well inside the rounding limit keep the behavior exact.
    ExactBehavior p = behavior_of_model(testing::random_model(rng, s, 4, 8));
    auto r = membership(to_float(p));
    CHECK(r.method == MembershipMethod::rationalized_lp);
    CHECK(r.is_member());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("rationalized") != std::string::npos);
    CHECK(behavior_of_model(*r.model) == p);
  }
  SECTION("normalization drift beyond tolerance is rejected") {
    FloatBehavior p = to_float(uniform_behavior(Scenario({3}, {2})));
    p(0, 0, 0, 0) += 1e-6;
    CHECK_THROWS_AS(membership(p), InvariantError);
  }
}

TEST_CASE("(3,3,3) membership completes", "[polytope]") {
  Scenario s = Scenario::uniform(3, 3, 3, 3);
  Rng rng(33);
  ExactBehavior p = behavior_of_model(testing::random_model(rng, s));
  auto r = membership(p);
  CHECK(r.is_member());
  ExactBehavior q = random_cellwise_behavior(rng, s);
  require_sound(q, membership(q));
}
