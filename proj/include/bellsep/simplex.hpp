#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

#include "bellsep/errors.hpp"
#include "bellsep/rational.hpp"

namespace bellsep::lp {

/// Outcome of a phase-1 feasibility solve of { q : A q = b, q >= 0 }.
struct FeasibilityResult {
  bool feasible = false;
  /// A feasible q (basic solution), when feasible.
  std::vector<Rational> solution;
  /// When infeasible: y with yᵀA_j <= 0 for every column j and yᵀb > 0.
  std::vector<Rational> farkas;
  /// Optimal phase-1 objective (sum of artificials); zero iff feasible.
  Rational infeasibility;
  std::size_t pivots = 0;
};

/// Exact phase-1 primal simplex on a dense tableau with one artificial
/// variable per row. Entering and leaving variables follow Bland's rule
/// (lowest index), so the pivot sequence is deterministic and cannot cycle.
///
/// `rows` is the constraint matrix A (m x n), `rhs` is b (m).
inline FeasibilityResult find_feasible_point(const std::vector<std::vector<Rational>>& rows,
                                             const std::vector<Rational>& rhs) {
  const std::size_t m = rows.size();
  if (rhs.size() != m) throw ShapeError("find_feasible_point: rhs has " + std::to_string(rhs.size()) +
                                        " entries for " + std::to_string(m) + " rows");
  const std::size_t n = m == 0 ? 0 : rows.front().size();
  for (std::size_t i = 0; i < m; ++i)
    if (rows[i].size() != n) throw ShapeError("find_feasible_point: ragged constraint row " + std::to_string(i));
  const std::size_t width = n + m;

  // Rows with negative rhs are negated so the artificial basis is feasible.
  std::vector<int> flipped(m, 1);
  std::vector<std::vector<mpq_class>> tab(m, std::vector<mpq_class>(width));
  std::vector<mpq_class> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i].sign() < 0) flipped[i] = -1;
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = flipped[i] < 0 ? mpq_class(-rows[i][j].raw()) : rows[i][j].raw();
    tab[i][n + i] = 1;
    b[i] = flipped[i] < 0 ? mpq_class(-rhs[i].raw()) : rhs[i].raw();
  }

  // Reduced costs of the phase-1 objective Σ artificials, and its value.
  std::vector<mpq_class> reduced(width);
  mpq_class objective = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) reduced[j] -= tab[i][j];
    objective += b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  FeasibilityResult result;
  std::vector<std::size_t> support;
  mpq_class factor, ratio, best_ratio, tmp;
  while (true) {
    std::size_t entering = width;
    for (std::size_t j = 0; j < width; ++j)
      if (sgn(reduced[j]) < 0) {
        entering = j;
        break;
      }
    if (entering == width) break;

    std::size_t leaving = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(tab[i][entering]) <= 0) continue;
      ratio = b[i] / tab[i][entering];
      if (leaving == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    // Phase 1 is bounded below by zero, so some row always blocks.
    if (leaving == m) throw Error("find_feasible_point: unbounded phase-1 direction");

    std::vector<mpq_class>& pivot_row = tab[leaving];
    mpq_class pivot = pivot_row[entering];
    support.clear();
    for (std::size_t j = 0; j < width; ++j)
      if (sgn(pivot_row[j]) != 0) {
        pivot_row[j] /= pivot;
        support.push_back(j);
      }
    b[leaving] /= pivot;

    for (std::size_t i = 0; i < m; ++i) {
      if (i == leaving || sgn(tab[i][entering]) == 0) continue;
      factor = tab[i][entering];
      for (std::size_t j : support) {
        tmp = factor * pivot_row[j];
        tab[i][j] -= tmp;
      }
      tmp = factor * b[leaving];
      b[i] -= tmp;
    }
    factor = reduced[entering];
    for (std::size_t j : support) {
      tmp = factor * pivot_row[j];
      reduced[j] -= tmp;
    }
    tmp = factor * b[leaving];
    objective += tmp;
    basis[leaving] = entering;
    ++result.pivots;
  }

  result.infeasibility = Rational(objective);
  result.feasible = sgn(objective) == 0;
  if (result.feasible) {
    result.solution.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) result.solution[basis[i]] = Rational(b[i]);
  } else {
    // Artificial i has cost 1, so its reduced cost is 1 - y_i.
    result.farkas.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      mpq_class y = 1 - reduced[n + i];
      if (flipped[i] < 0) y = -y;
      result.farkas.emplace_back(y);
    }
  }
  return result;
}

}  // namespace bellsep::lp
