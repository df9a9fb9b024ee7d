#pragma once

// JSON and CSV encodings of the library's documents. Output uses
// ordered_json with a fixed key order, so equal objects serialize to equal
// bytes; parsing accepts keys in any order.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bellsep/behavior.hpp"
#include "bellsep/errors.hpp"
#include "bellsep/local_model.hpp"
#include "bellsep/local_polytope.hpp"
#include "bellsep/monte_carlo.hpp"
#include "bellsep/nosignalling.hpp"
#include "bellsep/quantum.hpp"
#include "bellsep/rational.hpp"

namespace bellsep::io {

using Json = nlohmann::ordered_json;

using AnyBehavior = std::variant<ExactBehavior, FloatBehavior>;

namespace detail {

inline const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing key \"" + key + "\"");
  return *it;
}

inline const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  return j;
}

inline std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw ParseError(path + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace detail

// ---- scalars ---------------------------------------------------------------

inline Json to_json(const Rational& r) { return r.str(); }

/// "n/d" or "n" strings, or JSON integers. Floating-point numbers are
/// rejected with a ModeError: exact documents never carry binary64 values.
inline Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float())
    throw ModeError(path + ": floating-point value in an exact document; write probabilities as \"num/den\" strings");
  throw ParseError(path + ": expected a rational string");
}

inline double double_from_json(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

// ---- scenario --------------------------------------------------------------

inline Json to_json(const Scenario& s) {
  Json j;
  j["alice"] = s.alice();
  j["bob"] = s.bob();
  return j;
}

inline Scenario scenario_from_json(const Json& j, const std::string& path = "scenario") {
  auto counts = [&](const char* who) {
    const Json& arr = detail::array(detail::member(j, who, path), path + "." + who);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(detail::count(arr[i], path + "." + who + "[" + std::to_string(i) + "]"));
    return out;
  };
  try {
    return {counts("alice"), counts("bob")};
  } catch (const InvariantError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---- behaviors and tables ----------------------------------------------------

template <Probability T>
Json table_to_json(const CorrelationTable<T>& t) {
  Json out = Json::array();
  const Scenario& s = t.scenario();
  for (std::size_t x = 0; x < s.alice_settings(); ++x) {
    Json xs = Json::array();
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      Json ys = Json::array();
      for (std::size_t a = 0; a < s.alice_outcomes(x); ++a) {
        Json as = Json::array();
        for (std::size_t b = 0; b < s.bob_outcomes(y); ++b) {
          if constexpr (mode_of<T> == NumericMode::exact)
            as.push_back(t(x, y, a, b).str());
          else
            as.push_back(t(x, y, a, b));
        }
        ys.push_back(std::move(as));
      }
      xs.push_back(std::move(ys));
    }
    out.push_back(std::move(xs));
  }
  return out;
}

template <Probability T>
CorrelationTable<T> table_from_json(const Scenario& s, const Json& j, const std::string& path) {
  typename CorrelationTable<T>::Nested nested;
  detail::array(j, path);
  for (std::size_t x = 0; x < j.size(); ++x) {
    std::string px = path + "[" + std::to_string(x) + "]";
    const Json& jx = detail::array(j[x], px);
    auto& nx = nested.emplace_back();
    for (std::size_t y = 0; y < jx.size(); ++y) {
      std::string py = px + "[" + std::to_string(y) + "]";
      const Json& jy = detail::array(jx[y], py);
      auto& ny = nx.emplace_back();
      for (std::size_t a = 0; a < jy.size(); ++a) {
        std::string pa = py + "[" + std::to_string(a) + "]";
        const Json& ja = detail::array(jy[a], pa);
        auto& na = ny.emplace_back();
        for (std::size_t b = 0; b < ja.size(); ++b) {
          std::string pb = pa + "[" + std::to_string(b) + "]";
          if constexpr (mode_of<T> == NumericMode::exact)
            na.push_back(rational_from_json(ja[b], pb));
          else
            na.push_back(double_from_json(ja[b], pb));
        }
      }
    }
  }
  return CorrelationTable<T>::from_nested(s, nested);
}

template <Probability T>
Json to_json(const Behavior<T>& p) {
  Json j;
  j["scenario"] = to_json(p.scenario());
  j["mode"] = mode_of<T> == NumericMode::exact ? "exact" : "float";
  j["p"] = table_to_json(p);
  return j;
}

inline Json to_json(const AnyBehavior& p) {
  return std::visit([](const auto& b) { return to_json(b); }, p);
}

inline AnyBehavior behavior_from_json(const Json& j, const std::string& path = "behavior") {
  Scenario s = scenario_from_json(detail::member(j, "scenario", path), path + ".scenario");
  std::string mode = "exact";
  if (j.contains("mode")) {
    const Json& m = j["mode"];
    if (!m.is_string()) throw ParseError(path + ".mode: expected \"exact\" or \"float\"");
    mode = m.get<std::string>();
  }
  const Json& table = detail::member(j, "p", path);
  if (mode == "exact") return table_from_json<Rational>(s, table, path + ".p");
  if (mode == "float") return table_from_json<double>(s, table, path + ".p");
  throw ParseError(path + ".mode: unknown mode \"" + mode + "\"");
}

// ---- local models ----------------------------------------------------------

inline Json response_to_json(const ResponseTable& t) {
  Json out = Json::array();
  for (const auto& row : t) {
    Json r = Json::array();
    for (const Rational& v : row) r.push_back(v.str());
    out.push_back(std::move(r));
  }
  return out;
}

inline ResponseTable response_from_json(const Json& j, const std::string& path) {
  ResponseTable t;
  detail::array(j, path);
  for (std::size_t x = 0; x < j.size(); ++x) {
    std::string px = path + "[" + std::to_string(x) + "]";
    const Json& row = detail::array(j[x], px);
    auto& r = t.emplace_back();
    for (std::size_t o = 0; o < row.size(); ++o) r.push_back(rational_from_json(row[o], px + "[" + std::to_string(o) + "]"));
  }
  return t;
}

inline Json to_json(const LocalModel& m) {
  Json j;
  j["scenario"] = to_json(m.scenario());
  Json comps = Json::array();
  for (const ModelComponent& c : m.components()) {
    Json jc;
    jc["weight"] = c.weight.str();
    jc["alice"] = response_to_json(c.alice);
    jc["bob"] = response_to_json(c.bob);
    comps.push_back(std::move(jc));
  }
  j["components"] = std::move(comps);
  return j;
}

inline LocalModel model_from_json(const Json& j, const std::string& path = "model") {
  Scenario s = scenario_from_json(detail::member(j, "scenario", path), path + ".scenario");
  const Json& comps = detail::array(detail::member(j, "components", path), path + ".components");
  std::vector<ModelComponent> out;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    std::string pk = path + ".components[" + std::to_string(k) + "]";
    out.push_back({rational_from_json(detail::member(comps[k], "weight", pk), pk + ".weight"),
                   response_from_json(detail::member(comps[k], "alice", pk), pk + ".alice"),
                   response_from_json(detail::member(comps[k], "bob", pk), pk + ".bob")});
  }
  return {std::move(s), std::move(out)};
}

// ---- reports -----------------------------------------------------------------

inline Json to_json(const ValidationReport& r) {
  Json j;
  j["ok"] = r.ok();
  Json v = Json::array();
  for (const Violation& e : r.violations) v.push_back(e.message);
  j["violations"] = std::move(v);
  return j;
}

template <Probability T>
Json scalar_json(const T& v) {
  if constexpr (mode_of<T> == NumericMode::exact)
    return v.str();
  else
    return v;
}

template <Probability T>
Json to_json(const NoSignallingReport<T>& r) {
  Json j;
  j["ok"] = r.ok;
  j["worst"] = scalar_json(r.worst_violation);
  Json w = Json::array();
  for (const auto& e : r.witnesses) {
    Json jw;
    jw["party"] = to_string(e.party);
    jw["setting"] = e.setting;
    jw["outcome"] = e.outcome;
    jw["counterparts"] = {e.counterparts.first, e.counterparts.second};
    jw["discrepancy"] = scalar_json(e.discrepancy);
    w.push_back(std::move(jw));
  }
  j["witnesses"] = std::move(w);
  return j;
}

inline Json to_json(const BellFunctional& f) {
  Json j;
  j["scenario"] = to_json(f.scenario());
  j["c"] = table_to_json(f.coefficients());
  j["bound"] = f.local_bound().str();
  return j;
}

/// Reads {"scenario", "c"[, "bound"]}; a given bound must match the
/// recomputed one.
inline BellFunctional functional_from_json(const Json& j, const std::string& path = "functional") {
  Scenario s = scenario_from_json(detail::member(j, "scenario", path), path + ".scenario");
  auto c = table_from_json<Rational>(s, detail::member(j, "c", path), path + ".c");
  if (j.contains("bound")) {
    try {
      return {std::move(c), rational_from_json(j["bound"], path + ".bound")};
    } catch (const InvariantError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  return BellFunctional(std::move(c));
}

template <Probability T>
Json to_json(const MembershipResult<T>& r) {
  Json j;
  j["status"] = r.is_member() ? "member" : "non_member";
  j["method"] = to_string(r.method);
  if (r.model) j["model"] = to_json(*r.model);
  if (r.certificate) {
    Json c = to_json(*r.certificate);
    c["value"] = scalar_json(*r.certificate_value);
    j["certificate"] = std::move(c);
  }
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

template <Probability T>
Json to_json(const ChshValues<T>& v) {
  Json j;
  Json values = Json::array();
  for (const T& s : v.values) values.push_back(scalar_json(s));
  j["values"] = std::move(values);
  j["argmax"] = v.argmax;
  j["max"] = scalar_json(v.max());
  return j;
}

inline Json to_json(const ComparisonReport& r) {
  auto finite_or_string = [](double z) -> Json {
    if (std::isinf(z)) return z > 0 ? "inf" : "-inf";
    return z;
  };
  Json j;
  j["pass"] = r.pass;
  j["threshold"] = r.threshold;
  j["samples_per_cell"] = r.samples_per_cell;
  j["sample_count"] = r.sample_count;
  j["seed"] = r.seed;
  j["max_abs_z"] = finite_or_string(r.max_abs_z());
  Json cells = Json::array();
  for (const CellComparison& c : r.cells) {
    Json jc;
    jc["x"] = c.x;
    jc["y"] = c.y;
    jc["max_abs_deviation"] = c.max_abs_deviation;
    jc["max_abs_z"] = finite_or_string(c.max_abs_z);
    Json z1 = Json::array(), z2 = Json::array();
    for (double z : c.z_first) z1.push_back(finite_or_string(z));
    for (double z : c.z_second) z2.push_back(finite_or_string(z));
    jc["z_first"] = std::move(z1);
    jc["z_second"] = std::move(z2);
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  return j;
}

// ---- quantum documents -------------------------------------------------------

inline Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Nested rows of [re, im] pairs; a bare number is read as a real entry.
inline ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
  detail::array(j, path);
  if (j.empty()) throw ParseError(path + ": empty matrix");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<Complex> data;
  for (std::size_t i = 0; i < rows; ++i) {
    std::string pi = path + "[" + std::to_string(i) + "]";
    const Json& row = detail::array(j[i], pi);
    if (i == 0) cols = row.size();
    if (row.size() != cols || cols == 0) throw ParseError(pi + ": ragged or empty matrix row");
    for (std::size_t k = 0; k < cols; ++k) {
      std::string pk = pi + "[" + std::to_string(k) + "]";
      const Json& z = row[k];
      if (z.is_number()) {
        data.emplace_back(z.get<double>(), 0.0);
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        data.emplace_back(z[0].get<double>(), z[1].get<double>());
      } else {
        throw ParseError(pk + ": expected [re, im]");
      }
    }
  }
  try {
    return {rows, cols, std::move(data)};
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Json to_json(const QuantumSetup& q) {
  Json state;
  state["dim_a"] = q.state.dim_a();
  state["dim_b"] = q.state.dim_b();
  state["rho"] = to_json(q.state.rho());
  auto party = [](const std::vector<Measurement>& settings) {
    Json out = Json::array();
    for (const Measurement& m : settings) {
      Json effects = Json::array();
      for (const ComplexMatrix& e : m) effects.push_back(to_json(e));
      out.push_back(std::move(effects));
    }
    return out;
  };
  Json meas;
  meas["alice"] = party(q.measurements.alice());
  meas["bob"] = party(q.measurements.bob());
  Json j;
  j["state"] = std::move(state);
  j["measurements"] = std::move(meas);
  return j;
}

/// {"state": {"dim_a", "dim_b", "rho"}, "measurements": {"alice": [[effect, ...], ...], "bob": ...}}.
/// Invariant violations in the physics (non-PSD, incomplete POVM) surface as
/// InvariantError; structural problems as ParseError.
inline QuantumSetup quantum_setup_from_json(const Json& j, const std::string& path = "quantum") {
  const Json& js = detail::member(j, "state", path);
  std::size_t da = detail::count(detail::member(js, "dim_a", path + ".state"), path + ".state.dim_a");
  std::size_t db = detail::count(detail::member(js, "dim_b", path + ".state"), path + ".state.dim_b");
  ComplexMatrix rho = matrix_from_json(detail::member(js, "rho", path + ".state"), path + ".state.rho");
  const Json& jm = detail::member(j, "measurements", path);
  auto party = [&](const char* who) {
    std::string pw = path + ".measurements." + who;
    const Json& settings = detail::array(detail::member(jm, who, path + ".measurements"), pw);
    std::vector<Measurement> out;
    for (std::size_t x = 0; x < settings.size(); ++x) {
      std::string px = pw + "[" + std::to_string(x) + "]";
      const Json& effects = detail::array(settings[x], px);
      Measurement m;
      for (std::size_t o = 0; o < effects.size(); ++o)
        m.push_back(matrix_from_json(effects[o], px + "[" + std::to_string(o) + "]"));
      out.push_back(std::move(m));
    }
    return out;
  };
  auto alice = party("alice");
  auto bob = party("bob");
  return {QuantumState(da, db, std::move(rho)), MeasurementAssemblage(std::move(alice), std::move(bob))};
}

// ---- sample records ------------------------------------------------------------

/// One "x,y,a,b" line per record, LF terminated, no header.
inline void write_csv(std::ostream& os, const std::vector<SampleRecord>& records) {
  for (const SampleRecord& r : records) os << r.x << ',' << r.y << ',' << r.a << ',' << r.b << '\n';
}

inline std::vector<SampleRecord> read_csv(std::istream& is) {
  std::vector<SampleRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    SampleRecord r{};
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ls >> r.x >> c1 >> r.y >> c2 >> r.a >> c3 >> r.b) || c1 != ',' || c2 != ',' || c3 != ',')
      throw ParseError("records line " + std::to_string(line_no) + ": expected x,y,a,b");
    std::string rest;
    if (ls >> rest) throw ParseError("records line " + std::to_string(line_no) + ": trailing characters");
    out.push_back(r);
  }
  return out;
}

}  // namespace bellsep::io
