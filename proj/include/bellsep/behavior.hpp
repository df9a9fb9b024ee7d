#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "bellsep/errors.hpp"
#include "bellsep/rational.hpp"
#include "bellsep/scenario.hpp"

namespace bellsep {

enum class NumericMode { exact, approximate };

template <class T>
concept Probability = std::is_same_v<T, Rational> || std::is_same_v<T, double>;

template <Probability T>
inline constexpr NumericMode mode_of = std::is_same_v<T, Rational> ? NumericMode::exact : NumericMode::approximate;

// Approximate-mode acceptance thresholds.
inline constexpr double kNegativityFloor = -1e-12;
inline constexpr double kNormalizationTolerance = 1e-9;

inline std::string format_value(const Rational& r) { return r.str(); }
inline std::string format_value(double d) {
  std::ostringstream os;
  os.precision(12);
  os << d;
  return os.str();
}

inline std::string cell_label(std::size_t x, std::size_t y) {
  return "(x=" + std::to_string(x) + ",y=" + std::to_string(y) + ")";
}
inline std::string entry_label(std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
  return "(x=" + std::to_string(x) + ",y=" + std::to_string(y) + ",a=" + std::to_string(a) +
         ",b=" + std::to_string(b) + ")";
}

/// Dense table indexed [x][y][a][b] over a scenario's ragged outcome counts.
/// Used for behaviors p(a,b|x,y) and for Bell-functional coefficients.
template <Probability T>
class CorrelationTable {
 public:
  using value_type = T;
  using Nested = std::vector<std::vector<std::vector<std::vector<T>>>>;

  explicit CorrelationTable(Scenario scenario) : scenario_(std::move(scenario)) {
    std::size_t total = 0;
    offsets_.reserve(scenario_.alice_settings() * scenario_.bob_settings());
    for (std::size_t x = 0; x < scenario_.alice_settings(); ++x)
      for (std::size_t y = 0; y < scenario_.bob_settings(); ++y) {
        offsets_.push_back(total);
        total += scenario_.alice_outcomes(x) * scenario_.bob_outcomes(y);
      }
    data_.assign(total, T(0));
  }

  /// Builds from nested arrays [x][y][a][b]; any length mismatch raises a
  /// ShapeError naming the offending index.
  static CorrelationTable from_nested(Scenario scenario, const Nested& nested) {
    CorrelationTable t(std::move(scenario));
    const Scenario& s = t.scenario_;
    auto mismatch = [](const std::string& where, std::size_t got, std::size_t want) {
      return ShapeError("shape mismatch at " + where + ": got " + std::to_string(got) + " entries, expected " +
                        std::to_string(want));
    };
    if (nested.size() != s.alice_settings()) throw mismatch("[x]", nested.size(), s.alice_settings());
    for (std::size_t x = 0; x < nested.size(); ++x) {
      if (nested[x].size() != s.bob_settings())
        throw mismatch("[x=" + std::to_string(x) + "][y]", nested[x].size(), s.bob_settings());
      for (std::size_t y = 0; y < nested[x].size(); ++y) {
        if (nested[x][y].size() != s.alice_outcomes(x))
          throw mismatch(cell_label(x, y) + "[a]", nested[x][y].size(), s.alice_outcomes(x));
        for (std::size_t a = 0; a < nested[x][y].size(); ++a) {
          const auto& row = nested[x][y][a];
          if (row.size() != s.bob_outcomes(y))
            throw mismatch("(x=" + std::to_string(x) + ",y=" + std::to_string(y) + ",a=" + std::to_string(a) +
                               ")[b]",
                           row.size(), s.bob_outcomes(y));
          for (std::size_t b = 0; b < row.size(); ++b) t(x, y, a, b) = row[b];
        }
      }
    }
    return t;
  }

  [[nodiscard]] Nested to_nested() const {
    Nested out(scenario_.alice_settings());
    for (std::size_t x = 0; x < out.size(); ++x) {
      out[x].resize(scenario_.bob_settings());
      for (std::size_t y = 0; y < out[x].size(); ++y) {
        out[x][y].assign(scenario_.alice_outcomes(x), std::vector<T>(scenario_.bob_outcomes(y)));
        for (std::size_t a = 0; a < scenario_.alice_outcomes(x); ++a)
          for (std::size_t b = 0; b < scenario_.bob_outcomes(y); ++b) out[x][y][a][b] = (*this)(x, y, a, b);
      }
    }
    return out;
  }

  [[nodiscard]] const Scenario& scenario() const { return scenario_; }

  T& operator()(std::size_t x, std::size_t y, std::size_t a, std::size_t b) { return data_[index(x, y, a, b)]; }
  const T& operator()(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return data_[index(x, y, a, b)];
  }

  const T& at(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    check_index(x, y, a, b);
    return data_[index(x, y, a, b)];
  }

  /// Row-major block of cell (x,y): entry a*nb(y)+b.
  [[nodiscard]] std::span<const T> cell(std::size_t x, std::size_t y) const {
    return {data_.data() + offsets_[x * scenario_.bob_settings() + y],
            scenario_.alice_outcomes(x) * scenario_.bob_outcomes(y)};
  }
  [[nodiscard]] std::span<T> cell(std::size_t x, std::size_t y) {
    return {data_.data() + offsets_[x * scenario_.bob_settings() + y],
            scenario_.alice_outcomes(x) * scenario_.bob_outcomes(y)};
  }

  [[nodiscard]] std::span<const T> values() const { return data_; }

  friend bool operator==(const CorrelationTable& l, const CorrelationTable& r) {
    return l.scenario_ == r.scenario_ && l.data_ == r.data_;
  }

 private:
  [[nodiscard]] std::size_t index(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return offsets_[x * scenario_.bob_settings() + y] + a * scenario_.bob_outcomes(y) + b;
  }
  void check_index(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    if (x >= scenario_.alice_settings() || y >= scenario_.bob_settings() || a >= scenario_.alice_outcomes(x) ||
        b >= scenario_.bob_outcomes(y))
      throw std::out_of_range("index " + entry_label(x, y, a, b) + " out of range");
  }

  Scenario scenario_;
  std::vector<std::size_t> offsets_;
  std::vector<T> data_;
};

template <Probability T>
using Behavior = CorrelationTable<T>;
using ExactBehavior = Behavior<Rational>;
using FloatBehavior = Behavior<double>;

struct Violation {
  enum class Kind { negative_entry, normalization, negative_weight, weight_sum, negative_response, response_sum };
  Kind kind;
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

namespace detail {

template <Probability T>
bool is_negative(const T& v) {
  if constexpr (std::is_same_v<T, Rational>)
    return v.sign() < 0;
  else
    return !(v >= kNegativityFloor);
}

template <Probability T>
bool is_unit_sum(const T& s) {
  if constexpr (std::is_same_v<T, Rational>)
    return s == Rational(1);
  else
    return std::abs(s - 1.0) <= kNormalizationTolerance;
}

}  // namespace detail

/// Checks positivity and per-cell normalization; reports every violation.
template <Probability T>
ValidationReport validate_behavior(const Behavior<T>& p) {
  ValidationReport report;
  const Scenario& s = p.scenario();
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      T sum(0);
      for (std::size_t a = 0; a < s.alice_outcomes(x); ++a)
        for (std::size_t b = 0; b < s.bob_outcomes(y); ++b) {
          const T& v = p(x, y, a, b);
          if (detail::is_negative(v))
            report.violations.push_back({Violation::Kind::negative_entry, entry_label(x, y, a, b),
                                         "negative entry " + format_value(v) + " at " + entry_label(x, y, a, b)});
          sum += v;
        }
      if (!detail::is_unit_sum(sum))
        report.violations.push_back({Violation::Kind::normalization, cell_label(x, y),
                                     "sum " + format_value(sum) + " != 1 at " + cell_label(x, y)});
    }
  return report;
}

template <Probability T>
void require_valid(const Behavior<T>& p) {
  auto report = validate_behavior(p);
  if (!report.ok()) throw InvariantError("invalid behavior: " + report.violations.front().message);
}

/// Alice's marginal Σ_b p(a,b|x,y).
template <Probability T>
std::vector<T> marginal_alice(const Behavior<T>& p, std::size_t x, std::size_t y) {
  const Scenario& s = p.scenario();
  if (x >= s.alice_settings() || y >= s.bob_settings())
    throw std::out_of_range("marginal_alice: setting pair " + cell_label(x, y) + " out of range");
  std::vector<T> out(s.alice_outcomes(x), T(0));
  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = 0; b < s.bob_outcomes(y); ++b) out[a] += p(x, y, a, b);
  return out;
}

/// Bob's marginal Σ_a p(a,b|x,y).
template <Probability T>
std::vector<T> marginal_bob(const Behavior<T>& p, std::size_t x, std::size_t y) {
  const Scenario& s = p.scenario();
  if (x >= s.alice_settings() || y >= s.bob_settings())
    throw std::out_of_range("marginal_bob: setting pair " + cell_label(x, y) + " out of range");
  std::vector<T> out(s.bob_outcomes(y), T(0));
  for (std::size_t b = 0; b < out.size(); ++b)
    for (std::size_t a = 0; a < s.alice_outcomes(x); ++a) out[b] += p(x, y, a, b);
  return out;
}

/// Swaps the roles of the parties: q(b,a|y,x) = p(a,b|x,y).
template <Probability T>
Behavior<T> transpose(const Behavior<T>& p) {
  const Scenario& s = p.scenario();
  Behavior<T> q(s.transposed());
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y)
      for (std::size_t a = 0; a < s.alice_outcomes(x); ++a)
        for (std::size_t b = 0; b < s.bob_outcomes(y); ++b) q(y, x, b, a) = p(x, y, a, b);
  return q;
}

inline FloatBehavior to_float(const ExactBehavior& p) {
  FloatBehavior q(p.scenario());
  auto src = p.values();
  const Scenario& s = p.scenario();
  std::size_t i = 0;
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y)
      for (auto& v : q.cell(x, y)) v = src[i++].to_double();
  return q;
}

/// Uniformly random outcomes in every cell.
inline ExactBehavior uniform_behavior(const Scenario& s) {
  ExactBehavior p(s);
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      Rational v(1, static_cast<long>(s.alice_outcomes(x) * s.bob_outcomes(y)));
      for (auto& e : p.cell(x, y)) e = v;
    }
  return p;
}

/// PR box: p(a,b|x,y) = 1/2 when a xor b = x*y, else 0.
inline ExactBehavior pr_box() {
  ExactBehavior p(Scenario::chsh());
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) p(x, y, a, b) = ((a ^ b) == (x & y)) ? Rational(1, 2) : Rational(0);
  return p;
}

}  // namespace bellsep
