#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "bellsep/behavior.hpp"
#include "bellsep/errors.hpp"
#include "bellsep/local_model.hpp"
#include "bellsep/random.hpp"

namespace bellsep {

inline constexpr double kDefaultZThreshold = 5.0;
inline constexpr std::size_t kDefaultSamplesPerCell = 100'000;

struct SampleRecord {
  std::size_t x;
  std::size_t y;
  std::size_t a;
  std::size_t b;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Setting pairs to measure, in order.
using SettingsSchedule = std::vector<std::pair<std::size_t, std::size_t>>;

/// Every (x,y) cell repeated `per_cell` times, cell by cell.
inline SettingsSchedule full_grid_schedule(const Scenario& s, std::size_t per_cell) {
  SettingsSchedule out;
  out.reserve(s.alice_settings() * s.bob_settings() * per_cell);
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y)
      for (std::size_t i = 0; i < per_cell; ++i) out.emplace_back(x, y);
  return out;
}

namespace detail {

/// Inverse-CDF tables of a model in binary64. Cumulative sums are formed
/// exactly and rounded once; the last entry of each table is exactly 1.
class ModelSampler {
 public:
  explicit ModelSampler(const LocalModel& m) : scenario_(m.scenario()) {
    require_valid(m);
    Rational cumulative(0);
    for (const ModelComponent& c : m.components()) {
      cumulative += c.weight;
      weights_.push_back(cumulative.to_double());
      alice_.push_back(tables(c.alice));
      bob_.push_back(tables(c.bob));
    }
  }

  SampleRecord draw(std::size_t x, std::size_t y, Xoshiro256& rng) const {
    std::size_t k = pick(weights_, rng.uniform());
    std::size_t a = pick(alice_[k][x], rng.uniform());
    std::size_t b = pick(bob_[k][y], rng.uniform());
    return {x, y, a, b};
  }

 private:
  static std::vector<std::vector<double>> tables(const ResponseTable& t) {
    std::vector<std::vector<double>> out;
    for (const auto& row : t) {
      std::vector<double> cdf;
      Rational cumulative(0);
      for (const Rational& p : row) {
        cumulative += p;
        cdf.push_back(cumulative.to_double());
      }
      out.push_back(std::move(cdf));
    }
    return out;
  }

  // First index whose cumulative value exceeds u; zero-mass entries never win.
  static std::size_t pick(const std::vector<double>& cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<std::size_t>(it - cdf.begin());
  }

  Scenario scenario_;
  std::vector<double> weights_;
  std::vector<std::vector<std::vector<double>>> alice_;
  std::vector<std::vector<std::vector<double>>> bob_;
};

}  // namespace detail

/// Draws one record per scheduled (x,y): λ by weight, then a and b
/// independently from the component's responses. Each (x,y) cell consumes
/// its own stream seeded by derive_seed(seed, {x, y}), so the output does
/// not depend on how the schedule interleaves cells.
inline std::vector<SampleRecord> sample_model(const LocalModel& m, const SettingsSchedule& schedule,
                                              std::uint64_t seed) {
  if (schedule.empty()) throw ParameterError("sample_model: empty schedule");
  const Scenario& s = m.scenario();
  for (const auto& [x, y] : schedule)
    if (x >= s.alice_settings() || y >= s.bob_settings())
      throw ParameterError("sample_model: scheduled setting pair " + cell_label(x, y) + " out of range");
  detail::ModelSampler sampler(m);
  std::vector<std::optional<Xoshiro256>> streams(s.alice_settings() * s.bob_settings());
  std::vector<SampleRecord> out;
  out.reserve(schedule.size());
  for (const auto& [x, y] : schedule) {
    auto& stream = streams[x * s.bob_settings() + y];
    if (!stream) stream.emplace(derive_seed(seed, {x, y}));
    out.push_back(sampler.draw(x, y, *stream));
  }
  return out;
}

struct EmpiricalBehavior {
  FloatBehavior behavior;
  /// Outcome counts in the behavior's storage order (cell by cell, a*nb+b).
  std::vector<std::uint64_t> counts;
  /// Records per (x,y) cell, index x*|Y|+y.
  std::vector<std::uint64_t> cell_totals;
};

/// Relative frequencies per cell. Every (x,y) cell of the scenario must
/// occur at least once.
inline EmpiricalBehavior empirical_behavior(const std::vector<SampleRecord>& records, const Scenario& s) {
  std::vector<std::size_t> offsets;
  std::size_t total = 0;
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      offsets.push_back(total);
      total += s.alice_outcomes(x) * s.bob_outcomes(y);
    }
  std::vector<std::uint64_t> counts(total, 0);
  std::vector<std::uint64_t> cell_totals(offsets.size(), 0);
  for (const SampleRecord& r : records) {
    if (r.x >= s.alice_settings() || r.y >= s.bob_settings() || r.a >= s.alice_outcomes(r.x) ||
        r.b >= s.bob_outcomes(r.y))
      throw ParameterError("empirical_behavior: record " + entry_label(r.x, r.y, r.a, r.b) + " out of range");
    std::size_t cell = r.x * s.bob_settings() + r.y;
    ++counts[offsets[cell] + r.a * s.bob_outcomes(r.y) + r.b];
    ++cell_totals[cell];
  }
  FloatBehavior p(s);
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      std::size_t cell = x * s.bob_settings() + y;
      if (cell_totals[cell] == 0) throw CoverageError("empirical_behavior: no records for cell " + cell_label(x, y));
      auto dst = p.cell(x, y);
      for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = static_cast<double>(counts[offsets[cell] + i]) / static_cast<double>(cell_totals[cell]);
    }
  return {std::move(p), std::move(counts), std::move(cell_totals)};
}

/// Comparison of one (x,y) cell. `z_first` holds the first model's sampled
/// frequencies scored against the second model's exact behavior;
/// `z_second` the reverse. Entries are in storage order (a*nb+b).
struct CellComparison {
  std::size_t x;
  std::size_t y;
  double max_abs_deviation = 0.0;
  double max_abs_z = 0.0;
  std::vector<double> z_first;
  std::vector<double> z_second;
};

struct ComparisonReport {
  bool pass = true;
  double threshold = kDefaultZThreshold;
  std::size_t samples_per_cell = 0;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<CellComparison> cells;

  [[nodiscard]] double max_abs_z() const {
    double m = 0.0;
    for (const auto& c : cells) m = std::max(m, c.max_abs_z);
    return m;
  }
};

/// z = (f − p)/√(p(1−p)/N). For p ∈ {0,1} the frequency must match exactly;
/// a mismatch scores +∞.
inline double z_score(double frequency, const Rational& p, std::size_t n) {
  if (p.is_zero() || p == Rational(1)) {
    return frequency == p.to_double() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  const double q = p.to_double();
  return (frequency - q) / std::sqrt(q * (1.0 - q) / static_cast<double>(n));
}

/// Samples both models on the full grid (`per_cell` draws per cell, streams
/// derive_seed(seed, {1}) and derive_seed(seed, {2})) and scores each
/// empirical table against the other model's exact behavior.
inline ComparisonReport compare_empirical(const LocalModel& first, const LocalModel& second, std::size_t per_cell,
                                          std::uint64_t seed, double threshold = kDefaultZThreshold) {
  if (!(first.scenario() == second.scenario())) throw ScenarioMismatch("compare_empirical: scenarios differ");
  if (per_cell == 0) throw ParameterError("compare_empirical: samples per cell must be positive");
  if (!(threshold > 0.0)) throw ParameterError("compare_empirical: threshold must be positive");
  const Scenario& s = first.scenario();
  SettingsSchedule schedule = full_grid_schedule(s, per_cell);
  ExactBehavior exact_first = behavior_of_model(first);
  ExactBehavior exact_second = behavior_of_model(second);
  EmpiricalBehavior sampled_first = empirical_behavior(sample_model(first, schedule, derive_seed(seed, {1})), s);
  EmpiricalBehavior sampled_second = empirical_behavior(sample_model(second, schedule, derive_seed(seed, {2})), s);

  ComparisonReport report;
  report.threshold = threshold;
  report.samples_per_cell = per_cell;
  report.sample_count = 2 * schedule.size();
  report.seed = seed;
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      CellComparison cell{x, y, 0.0, 0.0, {}, {}};
      auto f1 = sampled_first.behavior.cell(x, y);
      auto f2 = sampled_second.behavior.cell(x, y);
      auto p1 = exact_first.cell(x, y);
      auto p2 = exact_second.cell(x, y);
      for (std::size_t i = 0; i < f1.size(); ++i) {
        double z1 = z_score(f1[i], p2[i], per_cell);
        double z2 = z_score(f2[i], p1[i], per_cell);
        cell.z_first.push_back(z1);
        cell.z_second.push_back(z2);
        cell.max_abs_z = std::max({cell.max_abs_z, std::abs(z1), std::abs(z2)});
        cell.max_abs_deviation =
            std::max({cell.max_abs_deviation, std::abs(f1[i] - p2[i].to_double()), std::abs(f2[i] - p1[i].to_double())});
      }
      if (cell.max_abs_z > threshold) report.pass = false;
      report.cells.push_back(std::move(cell));
    }
  return report;
}

}  // namespace bellsep
