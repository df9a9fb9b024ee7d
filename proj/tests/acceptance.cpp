// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. The CLI binary path is passed as the first argument.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "bellsep/bellsep.hpp"
#include "bellsep/json_io.hpp"
#include "test_support.hpp"

using namespace bellsep;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

/// The 200 models shared by criteria 1-3.
std::vector<LocalModel> shared_models() {
  testing::Rng rng(20260101);
  std::vector<LocalModel> out;
  for (int i = 0; i < 200; ++i) out.push_back(testing::random_model(rng, testing::random_scenario(rng, 3, 3), 4, 64));
  return out;
}

Outcome theorem_exactness(const std::vector<LocalModel>& models) {
  std::size_t components = 0;
  for (const auto& m : models) {
    LocalModel d = determinize(m);
    if (!is_deterministic(d)) return {false, "non-deterministic output"};
    if (!(behavior_of_model(d) == behavior_of_model(m))) return {false, "behavior changed"};
    components += d.size();
  }
  return {true, std::to_string(models.size()) + " models, " + std::to_string(components) + " deterministic components"};
}

Outcome local_implies_nosig(const std::vector<LocalModel>& models) {
  for (const auto& m : models) {
    auto r = check_no_signalling(behavior_of_model(m), Rational(0));
    if (!r.ok) return {false, "signalling of " + r.worst_violation.str()};
  }
  return {true, std::to_string(models.size()) + " behaviors, worst violation 0"};
}

Outcome membership_round_trip(const std::vector<LocalModel>& models) {
  std::size_t pivots = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    ExactBehavior p = behavior_of_model(models[i]);
    auto r = membership(p);
    if (!r.is_member()) return {false, "model behavior " + std::to_string(i) + " classified non_member"};
    if (!(behavior_of_model(*r.model) == p)) return {false, "returned mixture differs from input"};
    LocalModel d = determinize(models[i]);
    if (!is_deterministic(d) || !(behavior_of_model(d) == p)) return {false, "determinized witness differs"};
    pivots += r.pivots;
  }
  return {true, "100 members, " + std::to_string(pivots) + " pivots total"};
}

Outcome pr_box_criterion() {
  ExactBehavior p = pr_box();
  if (!check_no_signalling(p, Rational(0)).ok) return {false, "PR box signals"};
  Rational chsh = chsh_all_variants(p).max();
  if (chsh != Rational(4)) return {false, "CHSH max " + chsh.str()};
  auto r = membership(p);
  if (r.is_member()) return {false, "classified member"};
  Rational bound = testing::brute_force_bound(r.certificate->coefficients());
  Rational value = evaluate_bell_functional(*r.certificate, p).value;
  if (!(bound < value)) return {false, "certificate value " + value.str() + " not above bound " + bound.str()};
  return {true, "CHSH 4, certificate value " + value.str() + " > brute-force bound " + bound.str()};
}

Outcome singlet_criterion() {
  QuantumSetup s = singlet_setup();
  FloatBehavior p = quantum_behavior(s.state, s.measurements);
  auto ns = check_no_signalling(p, 1e-9);
  if (!ns.ok) return {false, "signalling " + format_value(ns.worst_violation)};
  double chsh = chsh_all_variants(p).max();
  if (std::abs(chsh - 2 * std::numbers::sqrt2) > 1e-9) return {false, "CHSH max " + format_value(chsh)};
  auto r = membership(p);
  if (r.is_member() || r.method != MembershipMethod::chsh_criterion) return {false, "not non_member via CHSH"};
  std::ostringstream os;
  os.precision(12);
  os << "CHSH " << chsh << ", non_member via chsh_criterion";
  return {true, os.str()};
}

Outcome fine_criterion() {
  testing::Rng rng(6060);
  std::size_t members = 0;
  for (int i = 0; i < 100; ++i) {
    ExactBehavior p = testing::random_ns_chsh_behavior(rng);
    bool lp = membership(p).is_member();
    bool chsh = chsh_all_variants(p).max() <= Rational(2);
    if (lp != chsh) return {false, "disagreement on behavior " + std::to_string(i)};
    members += lp ? 1 : 0;
  }
  return {true, "100 behaviors agree (" + std::to_string(members) + " members)"};
}

Outcome monte_carlo_criterion() {
  testing::Rng rng(7070);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    LocalModel m = testing::random_model(rng);
    auto r = compare_empirical(m, determinize(m), 100'000, static_cast<std::uint64_t>(i));
    if (!r.pass) return {false, "model " + std::to_string(i) + " failed with max |z| " + format_value(r.max_abs_z())};
    worst = std::max(worst, r.max_abs_z());
  }
  Scenario s({2}, {2});
  LocalModel fair(s, {{Rational(1), {{Rational(1, 2), Rational(1, 2)}}, {{Rational(1), Rational(0)}}}});
  LocalModel planted(s, {{Rational(1), {{Rational(3, 5), Rational(2, 5)}}, {{Rational(1), Rational(0)}}}});
  auto control = compare_empirical(fair, planted, 100'000, 99);
  if (control.pass) return {false, "planted 0.1 discrepancy passed"};
  std::ostringstream os;
  os.precision(3);
  os << "20 models pass (max |z| " << worst << "), control fails (|z| " << control.max_abs_z() << ")";
  return {true, os.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome reproducibility_criterion(const std::string& cli) {
  fs::path dir = fs::temp_directory_path() / ("bellsep_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  testing::Rng rng(8080);
  std::ofstream(dir / "model.json") << io::to_json(testing::random_model(rng)).dump();
  auto sample = [&](const std::string& seed, const std::string& name) {
    std::string cmd = "\"" + cli + "\" sample \"" + (dir / "model.json").string() + "\" --samples 20000 --seed " + seed +
                      " -o \"" + (dir / name).string() + "\" 2>/dev/null";
    return std::system(cmd.c_str());
  };
  Outcome out{true, ""};
  if (sample("12345", "a.csv") != 0 || sample("12345", "b.csv") != 0 || sample("54321", "c.csv") != 0) {
    out = {false, "sample command failed"};
  } else {
    std::string a = slurp(dir / "a.csv"), b = slurp(dir / "b.csv"), c = slurp(dir / "c.csv");
    if (a.empty() || a != b)
      out = {false, "outputs differ for the same seed"};
    else if (a == c)
      out = {false, "different seeds gave identical output"};
    else
      out = {true, "two runs byte-identical (" + std::to_string(a.size()) + " bytes); another seed differs"};
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: bellsep_acceptance <path-to-bellsep-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  std::vector<LocalModel> models = shared_models();

  struct Criterion {
    const char* name;
    double limit_seconds;  // 0: no limit
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"determinize preserves behavior exactly", 10.0, [&] { return theorem_exactness(models); }},
      {"local models are no-signalling", 0.0, [&] { return local_implies_nosig(models); }},
      {"membership round-trip", 0.0, [&] { return membership_round_trip(models); }},
      {"PR box", 1.0, pr_box_criterion},
      {"singlet fixture", 1.0, singlet_criterion},
      {"CHSH criterion equivalence in (2,2,2)", 0.0, fine_criterion},
      {"Monte Carlo indistinguishability", 60.0, monte_carlo_criterion},
      {"sample reproducibility", 0.0, [&] { return reproducibility_criterion(cli); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + format_value(c.limit_seconds) + " s limit";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << c.name << ": " << o.detail << " (" << timing
              << ")\n";
    failures += o.pass ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
