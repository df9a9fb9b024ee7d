#pragma once

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bellsep/behavior.hpp"
#include "bellsep/errors.hpp"
#include "bellsep/local_model.hpp"
#include "bellsep/rational.hpp"
#include "bellsep/simplex.hpp"

namespace bellsep {

inline constexpr std::size_t kDefaultStrategyCap = 1'000'000;
/// Slack for approximate-mode decisions (CHSH criterion, functional replay).
inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr std::int64_t kRationalizeMaxDenominator = 1'000'000;

/// One extreme point of the local polytope: each setting answered by a
/// fixed outcome.
struct DeterministicStrategy {
  std::vector<std::size_t> alice_map;
  std::vector<std::size_t> bob_map;

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

namespace detail {

inline std::size_t capped_product(const std::vector<std::size_t>& factors, std::size_t start, std::size_t cap,
                                  bool& exceeded) {
  std::size_t total = start;
  for (std::size_t f : factors) {
    if (total > cap / f) {
      exceeded = true;
      return 0;
    }
    total *= f;
  }
  return total;
}

/// Mixed-radix decode, last setting varying fastest.
inline void decode(std::size_t index, const std::vector<std::size_t>& radix, std::vector<std::size_t>& digits) {
  digits.resize(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    digits[i] = index % radix[i];
    index /= radix[i];
  }
}

inline std::string describe_count(const Scenario& s) {
  // Exact even when the product overflows a machine word.
  mpz_class count = 1;
  for (std::size_t n : s.alice()) count *= static_cast<unsigned long>(n);
  for (std::size_t n : s.bob()) count *= static_cast<unsigned long>(n);
  return count.get_str();
}

}  // namespace detail

/// Π_x n_a(x) · Π_y n_b(y); SizeError when above `cap`.
inline std::size_t strategy_count(const Scenario& s, std::size_t cap = kDefaultStrategyCap) {
  bool exceeded = false;
  std::size_t alice = detail::capped_product(s.alice(), 1, cap, exceeded);
  std::size_t total = exceeded ? 0 : detail::capped_product(s.bob(), alice, cap, exceeded);
  if (exceeded)
    throw SizeError("scenario has " + detail::describe_count(s) + " deterministic strategies, above the cap of " +
                    std::to_string(cap));
  return total;
}

/// All deterministic strategies in lexicographic order of
/// (alice_map, bob_map).
inline std::vector<DeterministicStrategy> enumerate_strategies(const Scenario& s,
                                                               std::size_t cap = kDefaultStrategyCap) {
  std::size_t total = strategy_count(s, cap);
  bool unused = false;
  std::size_t bob_count = detail::capped_product(s.bob(), 1, cap, unused);
  std::vector<DeterministicStrategy> out(total);
  for (std::size_t i = 0; i < total; ++i) {
    detail::decode(i / bob_count, s.alice(), out[i].alice_map);
    detail::decode(i % bob_count, s.bob(), out[i].bob_map);
  }
  return out;
}

inline LocalModel strategy_model(const Scenario& s, const DeterministicStrategy& st) {
  return {s, {{Rational(1), one_hot(s.alice(), st.alice_map), one_hot(s.bob(), st.bob_map)}}};
}

inline ExactBehavior strategy_behavior(const Scenario& s, const DeterministicStrategy& st) {
  ExactBehavior p(s);
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) p(x, y, st.alice_map.at(x), st.bob_map.at(y)) = Rational(1);
  return p;
}

/// Exact max over deterministic strategies of Σ c[x][y][a(x)][b(y)]. Alice's
/// strategies are enumerated; Bob's best reply is separable per setting.
inline Rational local_bound_of(const CorrelationTable<Rational>& c, std::size_t cap = kDefaultStrategyCap) {
  const Scenario& s = c.scenario();
  strategy_count(s, cap);
  bool unused = false;
  std::size_t alice_count = detail::capped_product(s.alice(), 1, cap, unused);
  std::optional<Rational> best;
  std::vector<std::size_t> choice;
  for (std::size_t i = 0; i < alice_count; ++i) {
    detail::decode(i, s.alice(), choice);
    Rational total(0);
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      std::optional<Rational> reply;
      for (std::size_t b = 0; b < s.bob_outcomes(y); ++b) {
        Rational v(0);
        for (std::size_t x = 0; x < s.alice_settings(); ++x) v += c(x, y, choice[x], b);
        if (!reply || *reply < v) reply = v;
      }
      total += *reply;
    }
    if (!best || *best < total) best = total;
  }
  return *best;
}

/// Linear functional Σ c·p on behaviors with its local bound.
class BellFunctional {
 public:
  explicit BellFunctional(CorrelationTable<Rational> coefficients, std::size_t cap = kDefaultStrategyCap)
      : coefficients_(std::move(coefficients)), local_bound_(local_bound_of(coefficients_, cap)) {}

  /// Checks a claimed bound against the recomputed one.
  BellFunctional(CorrelationTable<Rational> coefficients, const Rational& claimed_bound,
                 std::size_t cap = kDefaultStrategyCap)
      : BellFunctional(std::move(coefficients), cap) {
    if (claimed_bound != local_bound_)
      throw InvariantError("Bell functional: claimed local bound " + claimed_bound.str() +
                           " differs from recomputed bound " + local_bound_.str());
  }

  [[nodiscard]] const CorrelationTable<Rational>& coefficients() const { return coefficients_; }
  [[nodiscard]] const Rational& local_bound() const { return local_bound_; }
  [[nodiscard]] const Scenario& scenario() const { return coefficients_.scenario(); }

 private:
  CorrelationTable<Rational> coefficients_;
  Rational local_bound_;
};

template <Probability T>
struct FunctionalValue {
  T value;
  bool violated;
};

template <Probability T>
FunctionalValue<T> evaluate_bell_functional(const BellFunctional& f, const Behavior<T>& p) {
  if (!(f.scenario() == p.scenario())) throw ShapeError("evaluate_bell_functional: functional and behavior shapes differ");
  auto coeffs = f.coefficients().values();
  auto probs = p.values();
  T value(0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if constexpr (mode_of<T> == NumericMode::exact)
      value += coeffs[i] * probs[i];
    else
      value += coeffs[i].to_double() * probs[i];
  }
  bool violated;
  if constexpr (mode_of<T> == NumericMode::exact)
    violated = f.local_bound() < value;
  else
    violated = value > f.local_bound().to_double() + kFeasibilityTolerance;
  return {value, violated};
}

// ---- CHSH ------------------------------------------------------------------

/// Sign patterns (E00, E01, E10, E11) with an odd number of minus signs.
/// Variant 0 is the textbook E00 + E01 + E10 − E11.
inline constexpr std::array<std::array<int, 4>, 8> kChshSigns{{
    {+1, +1, +1, -1},
    {+1, +1, -1, +1},
    {+1, -1, +1, +1},
    {+1, -1, -1, -1},
    {-1, +1, +1, +1},
    {-1, +1, -1, -1},
    {-1, -1, +1, -1},
    {-1, -1, -1, +1},
}};

inline void require_chsh_scenario(const Scenario& s) {
  if (!s.is_chsh()) throw ShapeError("CHSH needs two settings with two outcomes for each party");
}

/// E(x,y) = Σ_{a,b} (−1)^{a+b} p(a,b|x,y).
template <Probability T>
T correlator(const Behavior<T>& p, std::size_t x, std::size_t y) {
  return p(x, y, 0, 0) - p(x, y, 0, 1) - p(x, y, 1, 0) + p(x, y, 1, 1);
}

template <Probability T>
T chsh_value(const Behavior<T>& p, std::size_t variant) {
  require_chsh_scenario(p.scenario());
  if (variant >= kChshSigns.size()) throw ParameterError("CHSH variant must be in 0..7");
  const auto& sign = kChshSigns[variant];
  T s(0);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      T e = correlator(p, x, y);
      if (sign[2 * x + y] > 0)
        s += e;
      else
        s -= e;
    }
  return s;
}

template <Probability T>
struct ChshValues {
  std::array<T, 8> values;
  std::size_t argmax = 0;
  [[nodiscard]] const T& max() const { return values[argmax]; }
};

/// All eight variants; ties resolved to the lowest variant index.
template <Probability T>
ChshValues<T> chsh_all_variants(const Behavior<T>& p) {
  ChshValues<T> out;
  for (std::size_t v = 0; v < 8; ++v) {
    out.values[v] = chsh_value(p, v);
    if (out.values[out.argmax] < out.values[v]) out.argmax = v;
  }
  return out;
}

/// The given CHSH variant as a functional on probabilities; local bound 2.
inline BellFunctional chsh_functional(std::size_t variant) {
  if (variant >= kChshSigns.size()) throw ParameterError("CHSH variant must be in 0..7");
  CorrelationTable<Rational> c(Scenario::chsh());
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          c(x, y, a, b) = Rational(kChshSigns[variant][2 * x + y] * (((a + b) % 2 == 0) ? 1 : -1));
  return BellFunctional(std::move(c));
}

// ---- Membership ------------------------------------------------------------

enum class MembershipStatus { member, non_member };

enum class MembershipMethod {
  exact_lp,         ///< exact simplex over the given rational behavior
  chsh_criterion,   ///< approximate (2,2,2) behavior, max CHSH <= 2
  rationalized_lp,  ///< approximate behavior rounded to rationals, then exact simplex
};

inline const char* to_string(MembershipMethod m) {
  switch (m) {
    case MembershipMethod::exact_lp: return "exact_lp";
    case MembershipMethod::chsh_criterion: return "chsh_criterion";
    case MembershipMethod::rationalized_lp: return "rationalized_lp";
  }
  return "unknown";
}

template <Probability T>
struct MembershipResult {
  MembershipStatus status = MembershipStatus::member;
  MembershipMethod method = MembershipMethod::exact_lp;
  /// Deterministic mixture reproducing the behavior; set for LP members.
  std::optional<LocalModel> model;
  /// Violated functional and its value on the behavior; set for non-members.
  std::optional<BellFunctional> certificate;
  std::optional<T> certificate_value;
  std::vector<std::string> warnings;
  std::size_t pivots = 0;

  [[nodiscard]] bool is_member() const { return status == MembershipStatus::member; }
};

struct MembershipOptions {
  std::size_t strategy_cap = kDefaultStrategyCap;
};

namespace detail {

/// Positive rescaling to coprime integers.
inline CorrelationTable<Rational> integer_rescaled(const CorrelationTable<Rational>& c) {
  mpz_class lcm = 1;
  for (const Rational& v : c.values()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.denominator().get_mpz_t());
  mpz_class gcd = 0;
  for (const Rational& v : c.values()) {
    mpz_class n = v.numerator() * (lcm / v.denominator());
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), n.get_mpz_t());
  }
  if (gcd == 0) return c;
  Rational scale(mpq_class(lcm, gcd));
  CorrelationTable<Rational> out(c.scenario());
  const Scenario& s = c.scenario();
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      auto src = c.cell(x, y);
      auto dst = out.cell(x, y);
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * scale;
    }
  return out;
}

/// Shifts each cell to zero mean. Every behavior and every strategy puts
/// total mass one in each cell, so value and bound move by the same amount.
inline CorrelationTable<Rational> cell_centered(const CorrelationTable<Rational>& c) {
  CorrelationTable<Rational> out = c;
  const Scenario& s = c.scenario();
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      auto cell = out.cell(x, y);
      Rational mean(0);
      for (const Rational& v : cell) mean += v;
      mean /= Rational(static_cast<long>(cell.size()));
      for (Rational& v : cell) v -= mean;
    }
  return out;
}

inline MembershipResult<Rational> exact_membership(const ExactBehavior& p, const MembershipOptions& options) {
  require_valid(p);
  const Scenario& s = p.scenario();
  std::vector<DeterministicStrategy> strategies = enumerate_strategies(s, options.strategy_cap);
  const std::size_t entries = p.values().size();

  // Row 0: Σ q = 1. Row 1+i: Σ_s q_s [strategy s hits entry i] = p_i.
  std::vector<std::vector<Rational>> rows(1 + entries, std::vector<Rational>(strategies.size(), Rational(0)));
  std::vector<Rational> rhs(1 + entries);
  rhs[0] = Rational(1);
  auto values = p.values();
  for (std::size_t i = 0; i < entries; ++i) rhs[1 + i] = values[i];

  std::vector<std::size_t> cell_offset;
  {
    std::size_t off = 0;
    for (std::size_t x = 0; x < s.alice_settings(); ++x)
      for (std::size_t y = 0; y < s.bob_settings(); ++y) {
        cell_offset.push_back(off);
        off += s.alice_outcomes(x) * s.bob_outcomes(y);
      }
  }
  for (std::size_t j = 0; j < strategies.size(); ++j) {
    rows[0][j] = Rational(1);
    const auto& st = strategies[j];
    for (std::size_t x = 0; x < s.alice_settings(); ++x)
      for (std::size_t y = 0; y < s.bob_settings(); ++y) {
        std::size_t i = cell_offset[x * s.bob_settings() + y] + st.alice_map[x] * s.bob_outcomes(y) + st.bob_map[y];
        rows[1 + i][j] = Rational(1);
      }
  }

  lp::FeasibilityResult lp = lp::find_feasible_point(rows, rhs);
  MembershipResult<Rational> result;
  result.method = MembershipMethod::exact_lp;
  result.pivots = lp.pivots;
  if (lp.feasible) {
    std::vector<ModelComponent> comps;
    for (std::size_t j = 0; j < strategies.size(); ++j)
      if (lp.solution[j].sign() > 0)
        comps.push_back({lp.solution[j], one_hot(s.alice(), strategies[j].alice_map),
                         one_hot(s.bob(), strategies[j].bob_map)});
    result.status = MembershipStatus::member;
    result.model = LocalModel(s, std::move(comps));
    return result;
  }

  CorrelationTable<Rational> c(s);
  {
    std::size_t i = 0;
    for (std::size_t x = 0; x < s.alice_settings(); ++x)
      for (std::size_t y = 0; y < s.bob_settings(); ++y)
        for (Rational& v : c.cell(x, y)) v = lp.farkas[1 + i++];
  }
  BellFunctional certificate(integer_rescaled(cell_centered(c)), options.strategy_cap);
  auto value = evaluate_bell_functional(certificate, p);
  if (!value.violated)
    throw Error("membership: Farkas certificate does not separate the behavior (value " + value.value.str() +
                ", bound " + certificate.local_bound().str() + ")");
  result.status = MembershipStatus::non_member;
  result.certificate = std::move(certificate);
  result.certificate_value = value.value;
  return result;
}

/// Continued-fraction rounding of each entry, then exact renormalization of
/// each cell.
inline ExactBehavior rationalize_behavior(const FloatBehavior& p, std::int64_t max_denominator) {
  const Scenario& s = p.scenario();
  ExactBehavior q(s);
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      auto src = p.cell(x, y);
      auto dst = q.cell(x, y);
      Rational sum(0);
      for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = src[i] <= 0.0 ? Rational(0) : rationalize(src[i], max_denominator);
        sum += dst[i];
      }
      for (Rational& v : dst) v /= sum;
    }
  return q;
}

}  // namespace detail

/// Exact local-polytope membership of a rational behavior. Members come
/// with a deterministic mixture reproducing the behavior exactly; others
/// with an integer Bell functional it violates.
inline MembershipResult<Rational> membership(const ExactBehavior& p, const MembershipOptions& options = {}) {
  return detail::exact_membership(p, options);
}

/// Approximate behaviors: the CHSH criterion decides (2,2,2); any other
/// scenario is rounded to rationals first and solved exactly, with a warning.
inline MembershipResult<double> membership(const FloatBehavior& p, const MembershipOptions& options = {}) {
  require_valid(p);
  MembershipResult<double> result;
  if (p.scenario().is_chsh()) {
    auto chsh = chsh_all_variants(p);
    result.method = MembershipMethod::chsh_criterion;
    if (chsh.max() <= 2.0 + kFeasibilityTolerance) {
      result.status = MembershipStatus::member;
    } else {
      result.status = MembershipStatus::non_member;
      result.certificate = chsh_functional(chsh.argmax);
      result.certificate_value = evaluate_bell_functional(*result.certificate, p).value;
    }
    return result;
  }
  ExactBehavior rational = detail::rationalize_behavior(p, kRationalizeMaxDenominator);
  auto exact = detail::exact_membership(rational, options);
  result.method = MembershipMethod::rationalized_lp;
  result.status = exact.status;
  result.model = std::move(exact.model);
  result.certificate = std::move(exact.certificate);
  if (exact.certificate_value) result.certificate_value = exact.certificate_value->to_double();
  result.pivots = exact.pivots;
  result.warnings.push_back("approximate behavior rationalized with max denominator " +
                            std::to_string(kRationalizeMaxDenominator) +
                            "; membership refers to the rationalized behavior");
  return result;
}

}  // namespace bellsep
