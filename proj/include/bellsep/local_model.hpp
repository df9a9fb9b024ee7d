#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bellsep/behavior.hpp"
#include "bellsep/errors.hpp"
#include "bellsep/rational.hpp"
#include "bellsep/scenario.hpp"

namespace bellsep {

/// Response probabilities of one party for one hidden-variable value,
/// indexed [setting][outcome].
using ResponseTable = std::vector<std::vector<Rational>>;

struct ModelComponent {
  Rational weight;
  ResponseTable alice;
  ResponseTable bob;

  friend bool operator==(const ModelComponent&, const ModelComponent&) = default;
};

/// Finite mixture over hidden-variable values λ_k with weights ρ_k and
/// factorized responses p(a|x,λ_k), p(b|y,λ_k).
///
/// Construction checks table shapes only; value invariants (weights summing
/// to one, rows being distributions) are reported by validate_model and
/// enforced by the operations that consume a model.
class LocalModel {
 public:
  LocalModel(Scenario scenario, std::vector<ModelComponent> components)
      : scenario_(std::move(scenario)), components_(std::move(components)) {
    for (std::size_t k = 0; k < components_.size(); ++k) {
      check_shape(components_[k].alice, scenario_.alice(), "alice", k);
      check_shape(components_[k].bob, scenario_.bob(), "bob", k);
    }
  }

  [[nodiscard]] const Scenario& scenario() const { return scenario_; }
  [[nodiscard]] const std::vector<ModelComponent>& components() const { return components_; }
  [[nodiscard]] std::size_t size() const { return components_.size(); }

  friend bool operator==(const LocalModel&, const LocalModel&) = default;

 private:
  static void check_shape(const ResponseTable& table, const std::vector<std::size_t>& outcomes, const char* who,
                          std::size_t k) {
    std::string where = "component " + std::to_string(k) + " " + who;
    if (table.size() != outcomes.size())
      throw ShapeError(where + ": got " + std::to_string(table.size()) + " settings, expected " +
                       std::to_string(outcomes.size()));
    for (std::size_t x = 0; x < table.size(); ++x)
      if (table[x].size() != outcomes[x])
        throw ShapeError(where + " setting " + std::to_string(x) + ": got " + std::to_string(table[x].size()) +
                         " outcomes, expected " + std::to_string(outcomes[x]));
  }

  Scenario scenario_;
  std::vector<ModelComponent> components_;
};

inline ValidationReport validate_model(const LocalModel& m) {
  ValidationReport report;
  if (m.components().empty())
    report.violations.push_back({Violation::Kind::weight_sum, "weights", "model has no components"});
  Rational total(0);
  for (std::size_t k = 0; k < m.size(); ++k) {
    const ModelComponent& c = m.components()[k];
    std::string comp = "component " + std::to_string(k);
    if (c.weight.sign() < 0)
      report.violations.push_back({Violation::Kind::negative_weight, comp, "negative weight " + c.weight.str() +
                                                                               " at " + comp});
    total += c.weight;
    auto check_rows = [&](const ResponseTable& table, const char* who) {
      for (std::size_t x = 0; x < table.size(); ++x) {
        std::string where = comp + " " + who + " setting " + std::to_string(x);
        Rational row_sum(0);
        for (std::size_t j = 0; j < table[x].size(); ++j) {
          if (table[x][j].sign() < 0)
            report.violations.push_back({Violation::Kind::negative_response, where,
                                         "negative response " + table[x][j].str() + " at " + where + " outcome " +
                                             std::to_string(j)});
          row_sum += table[x][j];
        }
        if (row_sum != Rational(1))
          report.violations.push_back(
              {Violation::Kind::response_sum, where, "response sum " + row_sum.str() + " != 1 at " + where});
      }
    };
    check_rows(c.alice, "alice");
    check_rows(c.bob, "bob");
  }
  if (!m.components().empty() && total != Rational(1))
    report.violations.push_back({Violation::Kind::weight_sum, "weights", "weights sum to " + total.str() + " != 1"});
  return report;
}

inline void require_valid(const LocalModel& m) {
  auto report = validate_model(m);
  if (!report.ok()) throw InvariantError("invalid local model: " + report.violations.front().message);
}

/// p(a,b|x,y) = Σ_k ρ_k p(a|x,λ_k) p(b|y,λ_k), exactly. Invalid models are
/// rejected, never renormalized.
inline ExactBehavior behavior_of_model(const LocalModel& m) {
  require_valid(m);
  const Scenario& s = m.scenario();
  ExactBehavior p(s);
  for (const ModelComponent& c : m.components()) {
    if (c.weight.is_zero()) continue;
    for (std::size_t x = 0; x < s.alice_settings(); ++x)
      for (std::size_t a = 0; a < s.alice_outcomes(x); ++a) {
        if (c.alice[x][a].is_zero()) continue;
        Rational wa = c.weight * c.alice[x][a];
        for (std::size_t y = 0; y < s.bob_settings(); ++y)
          for (std::size_t b = 0; b < s.bob_outcomes(y); ++b)
            if (!c.bob[y][b].is_zero()) p(x, y, a, b) += wa * c.bob[y][b];
      }
  }
  return p;
}

/// True iff every response entry is exactly 0 or 1.
inline bool is_deterministic(const LocalModel& m) {
  auto zero_one = [](const ResponseTable& t) {
    for (const auto& row : t)
      for (const Rational& v : row)
        if (!(v.is_zero() || v == Rational(1))) return false;
    return true;
  };
  for (const ModelComponent& c : m.components())
    if (!zero_one(c.alice) || !zero_one(c.bob)) return false;
  return true;
}

/// Response table answering outcome choice[x] with certainty.
inline ResponseTable one_hot(const std::vector<std::size_t>& outcomes, const std::vector<std::size_t>& choice) {
  ResponseTable t(outcomes.size());
  for (std::size_t x = 0; x < outcomes.size(); ++x) {
    t[x].assign(outcomes[x], Rational(0));
    t[x].at(choice.at(x)) = Rational(1);
  }
  return t;
}

/// w·first + (1−w)·second as one model (components concatenated).
inline LocalModel blend(const LocalModel& first, const LocalModel& second, const Rational& w) {
  if (!(first.scenario() == second.scenario())) throw ScenarioMismatch("blend: models have different scenarios");
  if (w.sign() < 0 || w > Rational(1)) throw ParameterError("blend: weight must lie in [0,1]");
  std::vector<ModelComponent> comps;
  comps.reserve(first.size() + second.size());
  for (const auto& c : first.components()) comps.push_back({c.weight * w, c.alice, c.bob});
  for (const auto& c : second.components()) comps.push_back({c.weight * (Rational(1) - w), c.alice, c.bob});
  return {first.scenario(), std::move(comps)};
}

}  // namespace bellsep
