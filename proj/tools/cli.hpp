#pragma once

// Subcommand front end. `run` takes the argument list without the program
// name and writes the JSON result to `out`, summaries and errors to `err`.
//
// Exit codes: 0 the operation ran and its property holds (valid,
// no-signalling, member, pass); 1 it ran and the property fails; 2 usage or
// input error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bellsep/bellsep.hpp"
#include "bellsep/json_io.hpp"

namespace bellsep::cli {

enum ExitCode : int { kHolds = 0, kFails = 1, kUsage = 2 };

namespace detail {

struct InputError : Error {
  using Error::Error;
};

inline std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Parses JSON, reporting syntax errors as "path:line:column: message".
inline io::Json read_json(const std::string& path) {
  std::string text = read_text(path);
  try {
    return io::Json::parse(text);
  } catch (const io::Json::parse_error& e) {
    std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
    std::size_t line_start = text.rfind('\n', offset == 0 ? 0 : offset - 1);
    std::size_t column = line_start == std::string::npos || offset == 0 ? offset + 1 : offset - line_start;
    std::string what = e.what();
    auto pos = what.find("parse error");
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                     (pos == std::string::npos ? what : what.substr(pos)));
  }
}

/// Writes `text` to stdout, or atomically to `path` via a sibling temp file.
inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError(path + ": cannot open for writing");
    f << text;
    if (!f.flush()) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw InputError(path + ": write failed");
    }
  }
  std::filesystem::rename(tmp, target);
}

inline std::string dump(const io::Json& j) { return j.dump() + "\n"; }

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bipartite correlation behaviors: local models, determinization, no-signalling, local-polytope "
               "membership, CHSH, quantum fixtures and sampling.",
               "bellsep"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string output;
  app.add_option("-o,--output", output, "Write the JSON/CSV result to this file instead of standard output");

  std::string input, second_input;
  double tolerance = kDefaultSignallingTolerance;
  std::uint64_t seed = 0;
  std::size_t samples = kDefaultSamplesPerCell;
  std::size_t cap = kDefaultStrategyCap;
  double threshold = kDefaultZThreshold;
  std::string mode = "exact";
  std::string schedule_path;
  bool singlet = false;
  bool emit_setup = false;

  auto* validate = app.add_subcommand("validate", "Check a behavior or local model document against its invariants");
  validate->add_option("input", input, "Behavior or model JSON ('-' for stdin)")->required();

  auto* behavior = app.add_subcommand("behavior", "Behavior p(a,b|x,y) of a local model, computed exactly");
  behavior->add_option("input", input, "Local model JSON")->required();
  behavior->add_option("--mode", mode, "Output numeric mode")->check(CLI::IsMember({"exact", "float"}));

  auto* nosig = app.add_subcommand("nosig", "No-signalling report for a behavior");
  nosig->add_option("input", input, "Behavior JSON")->required();
  auto* tol_opt = nosig->add_option("--tolerance", tolerance,
                                    "Tolerance for float behaviors (default 1e-9; exact behaviors use 0)");

  auto* determinize_cmd = app.add_subcommand("determinize", "Deterministic local model with the same behavior");
  determinize_cmd->add_option("input", input, "Local model JSON with exact rational entries")->required();

  auto* membership_cmd = app.add_subcommand("membership", "Local-polytope membership with model or Bell certificate");
  membership_cmd->add_option("input", input, "Behavior JSON")->required();
  membership_cmd->add_option("--cap", cap, "Maximum number of deterministic strategies (default 1000000)");

  auto* chsh = app.add_subcommand("chsh", "All eight CHSH values of a (2,2,2) behavior");
  chsh->add_option("input", input, "Behavior JSON")->required();

  auto* quantum = app.add_subcommand("quantum", "Born-rule behavior of a state and measurement assemblage");
  quantum->add_option("input", input, "Quantum setup JSON {state, measurements}");
  quantum->add_flag("--singlet", singlet, "Use the built-in singlet fixture instead of an input file");
  quantum->add_flag("--emit-setup", emit_setup, "Print the setup document instead of its behavior");

  auto* sample = app.add_subcommand("sample", "Seeded samples x,y,a,b from a local model (CSV)");
  sample->add_option("input", input, "Local model JSON")->required();
  sample->add_option("--samples", samples, "Draws per (x,y) cell on the full grid (default 100000)");
  sample->add_option("--seed", seed, "64-bit seed (default 0)");
  sample->add_option("--schedule", schedule_path, "CSV of x,y lines to use instead of the full grid");

  auto* compare = app.add_subcommand("compare", "z-score comparison of two models' sampled statistics");
  compare->add_option("first", input, "First local model JSON")->required();
  compare->add_option("second", second_input, "Second local model JSON")->required();
  compare->add_option("--samples", samples, "Draws per (x,y) cell (default 100000)");
  compare->add_option("--seed", seed, "64-bit seed (default 0)");
  compare->add_option("--threshold", threshold, "Largest admissible |z| (default 5)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "bellsep: " << e.what() << "\n";
    return kUsage;
  }

  try {
    std::string text;
    int code = kHolds;

    if (validate->parsed()) {
      io::Json doc = detail::read_json(input);
      ValidationReport report;
      if (doc.contains("components")) {
        report = validate_model(io::model_from_json(doc));
      } else {
        report = std::visit([](const auto& p) { return validate_behavior(p); }, io::behavior_from_json(doc));
      }
      text = detail::dump(io::to_json(report));
      code = report.ok() ? kHolds : kFails;
      err << "validate: " << (report.ok() ? "ok" : std::to_string(report.violations.size()) + " violation(s)") << "\n";
    } else if (behavior->parsed()) {
      ExactBehavior p = behavior_of_model(io::model_from_json(detail::read_json(input)));
      text = detail::dump(mode == "float" ? io::to_json(to_float(p)) : io::to_json(p));
    } else if (nosig->parsed()) {
      io::AnyBehavior any = io::behavior_from_json(detail::read_json(input));
      if (auto* exact = std::get_if<ExactBehavior>(&any)) {
        if (tol_opt->count() > 0 && tolerance != 0.0)
          throw ParameterError("exact behaviors are checked with tolerance 0");
        auto report = check_no_signalling(*exact);
        text = detail::dump(io::to_json(report));
        code = report.ok ? kHolds : kFails;
        err << "nosig: " << (report.ok ? "ok" : "signalling") << ", worst " << report.worst_violation << "\n";
      } else {
        auto report = check_no_signalling(std::get<FloatBehavior>(any), tolerance);
        text = detail::dump(io::to_json(report));
        code = report.ok ? kHolds : kFails;
        err << "nosig: " << (report.ok ? "ok" : "signalling") << ", worst " << report.worst_violation << "\n";
      }
    } else if (determinize_cmd->parsed()) {
      LocalModel m = io::model_from_json(detail::read_json(input));
      LocalModel d = determinize(m);
      text = detail::dump(io::to_json(d));
      err << "determinize: " << m.size() << " -> " << d.size() << " components\n";
    } else if (membership_cmd->parsed()) {
      io::AnyBehavior any = io::behavior_from_json(detail::read_json(input));
      MembershipOptions options{cap};
      std::visit(
          [&](const auto& p) {
            auto r = membership(p, options);
            text = detail::dump(io::to_json(r));
            code = r.is_member() ? kHolds : kFails;
            for (const auto& w : r.warnings) err << "warning: " << w << "\n";
            err << "membership: " << (r.is_member() ? "member" : "non_member") << " (" << to_string(r.method) << ")";
            if (r.certificate)
              err << ", certificate value " << *r.certificate_value << " > bound " << r.certificate->local_bound();
            err << "\n";
          },
          any);
    } else if (chsh->parsed()) {
      io::AnyBehavior any = io::behavior_from_json(detail::read_json(input));
      std::visit(
          [&](const auto& p) {
            auto v = chsh_all_variants(p);
            text = detail::dump(io::to_json(v));
            err << "chsh: max " << v.max() << " at variant " << v.argmax << "\n";
          },
          any);
    } else if (quantum->parsed()) {
      if (singlet == !input.empty())
        throw ParameterError("quantum: give exactly one of an input file or --singlet");
      QuantumSetup setup = singlet ? singlet_setup() : io::quantum_setup_from_json(detail::read_json(input));
      if (emit_setup) {
        text = detail::dump(io::to_json(setup));
      } else {
        text = detail::dump(io::to_json(quantum_behavior(setup.state, setup.measurements)));
      }
    } else if (sample->parsed()) {
      LocalModel m = io::model_from_json(detail::read_json(input));
      SettingsSchedule schedule;
      if (!schedule_path.empty()) {
        std::istringstream in(detail::read_text(schedule_path));
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
          ++line_no;
          if (line.empty()) continue;
          std::istringstream ls(line);
          std::size_t x = 0, y = 0;
          char comma = 0;
          if (!(ls >> x >> comma >> y) || comma != ',')
            throw detail::InputError(schedule_path + ":" + std::to_string(line_no) + ": expected x,y");
          schedule.emplace_back(x, y);
        }
      } else {
        schedule = full_grid_schedule(m.scenario(), samples);
      }
      std::ostringstream csv;
      io::write_csv(csv, sample_model(m, schedule, seed));
      text = csv.str();
      err << "sample: " << schedule.size() << " records, seed " << seed << "\n";
    } else if (compare->parsed()) {
      LocalModel first = io::model_from_json(detail::read_json(input));
      LocalModel second = io::model_from_json(detail::read_json(second_input));
      auto report = compare_empirical(first, second, samples, seed, threshold);
      text = detail::dump(io::to_json(report));
      code = report.pass ? kHolds : kFails;
      err << "compare: " << (report.pass ? "pass" : "fail") << ", max |z| " << report.max_abs_z() << "\n";
    }

    detail::emit(text, output, out);
    return code;
  } catch (const std::exception& e) {
    err << "bellsep: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace bellsep::cli
