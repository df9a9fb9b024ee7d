#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "bellsep/local_model.hpp"
#include "bellsep/rational.hpp"

namespace bellsep {

/// A cell [lower, upper) of the unit interval on which every setting's
/// response is constant: uniform α in the cell yields outcome assignment[x]
/// at setting x.
struct IntervalAtom {
  Rational lower;
  Rational upper;
  std::vector<std::size_t> assignment;

  [[nodiscard]] Rational width() const { return upper - lower; }
};

/// Sorted, deduplicated union over settings of the cumulative sums
/// Σ_{i<=j} p(i|x), together with 0. Outcomes are ordered by index.
inline std::vector<Rational> breakpoints(const ResponseTable& table) {
  std::vector<Rational> points{Rational(0)};
  for (const auto& row : table) {
    Rational cumulative(0);
    for (const Rational& p : row) {
      cumulative += p;
      points.push_back(cumulative);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

/// Partition of [0,1) into atoms between consecutive breakpoints, each
/// labelled with the outcome whose cumulative interval contains it.
inline std::vector<IntervalAtom> interval_atoms(const ResponseTable& table) {
  std::vector<Rational> points = breakpoints(table);
  std::vector<IntervalAtom> atoms;
  atoms.reserve(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    IntervalAtom atom{points[i], points[i + 1], std::vector<std::size_t>(table.size())};
    // Half-open convention: the atom's lower end lies in the outcome
    // interval [Σ_{i<j}, Σ_{i<=j}) that owns it.
    for (std::size_t x = 0; x < table.size(); ++x) {
      Rational cumulative(0);
      std::size_t j = 0;
      for (; j < table[x].size(); ++j) {
        cumulative += table[x][j];
        if (atom.lower < cumulative) break;
      }
      atom.assignment[x] = j;
    }
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

/// Deterministic model with the same behavior as `m`: the hidden variable is
/// extended to (λ, α, β) with α, β uniform on [0,1), and each (λ, α-atom,
/// β-atom) rectangle becomes one component of weight ρ(λ)·|A|·|B|.
/// Identical assignments are not merged.
inline LocalModel determinize(const LocalModel& m) {
  require_valid(m);
  const Scenario& s = m.scenario();
  std::vector<ModelComponent> out;
  for (const ModelComponent& c : m.components()) {
    std::vector<IntervalAtom> alice_atoms = interval_atoms(c.alice);
    std::vector<IntervalAtom> bob_atoms = interval_atoms(c.bob);
    for (const IntervalAtom& alpha : alice_atoms) {
      ResponseTable alice = one_hot(s.alice(), alpha.assignment);
      Rational wa = c.weight * alpha.width();
      for (const IntervalAtom& beta : bob_atoms)
        out.push_back({wa * beta.width(), alice, one_hot(s.bob(), beta.assignment)});
    }
  }
  return {s, std::move(out)};
}

}  // namespace bellsep
