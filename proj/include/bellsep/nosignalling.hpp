#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bellsep/behavior.hpp"
#include "bellsep/errors.hpp"

namespace bellsep {

/// Default tolerance for approximate-mode behaviors.
inline constexpr double kDefaultSignallingTolerance = 1e-9;

/// One marginal discrepancy: `party`'s outcome distribution at `setting`
/// changes by `discrepancy` at `outcome` when the other party switches
/// between `counterparts.first` and `counterparts.second`.
template <Probability T>
struct SignallingWitness {
  Party party;
  std::size_t setting;
  std::size_t outcome;
  std::pair<std::size_t, std::size_t> counterparts;
  T discrepancy;
};

template <Probability T>
struct NoSignallingReport {
  bool ok = true;
  T worst_violation{0};
  T tolerance{0};
  std::vector<SignallingWitness<T>> witnesses;
};

namespace detail {

template <Probability T>
T absolute(const T& v) {
  if constexpr (std::is_same_v<T, Rational>)
    return abs(v);
  else
    return std::abs(v);
}

}  // namespace detail

/// Compares each party's marginals across every pair of counterpart
/// settings. Exact behaviors require tolerance 0.
template <Probability T>
NoSignallingReport<T> check_no_signalling(const Behavior<T>& p, const T& tolerance) {
  if (!(tolerance >= T(0))) throw ParameterError("check_no_signalling: negative tolerance");
  if constexpr (mode_of<T> == NumericMode::exact)
    if (!tolerance.is_zero()) throw ParameterError("check_no_signalling: exact mode requires tolerance 0");
  require_valid(p);

  const Scenario& s = p.scenario();
  NoSignallingReport<T> report;
  report.tolerance = tolerance;

  auto scan = [&](Party party, std::size_t own_settings, std::size_t other_settings, auto marginal) {
    for (std::size_t own = 0; own < own_settings; ++own) {
      std::vector<std::vector<T>> marginals;
      marginals.reserve(other_settings);
      for (std::size_t other = 0; other < other_settings; ++other) marginals.push_back(marginal(own, other));
      for (std::size_t u = 0; u < other_settings; ++u)
        for (std::size_t v = u + 1; v < other_settings; ++v)
          for (std::size_t o = 0; o < marginals[u].size(); ++o) {
            T d = detail::absolute(T(marginals[u][o] - marginals[v][o]));
            if (report.worst_violation < d) report.worst_violation = d;
            if (tolerance < d) report.witnesses.push_back({party, own, o, {u, v}, d});
          }
    }
  };
  scan(Party::alice, s.alice_settings(), s.bob_settings(),
       [&](std::size_t x, std::size_t y) { return marginal_alice(p, x, y); });
  scan(Party::bob, s.bob_settings(), s.alice_settings(),
       [&](std::size_t y, std::size_t x) { return marginal_bob(p, x, y); });

  report.ok = !(tolerance < report.worst_violation);
  return report;
}

/// Mode default: 0 for exact behaviors, 1e-9 for approximate ones.
template <Probability T>
NoSignallingReport<T> check_no_signalling(const Behavior<T>& p) {
  if constexpr (mode_of<T> == NumericMode::exact)
    return check_no_signalling(p, Rational(0));
  else
    return check_no_signalling(p, kDefaultSignallingTolerance);
}

}  // namespace bellsep
