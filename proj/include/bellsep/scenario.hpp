#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bellsep/errors.hpp"

namespace bellsep {

enum class Party { alice, bob };

inline const char* to_string(Party p) { return p == Party::alice ? "alice" : "bob"; }

/// Measurement settings of both parties, each carrying its outcome count.
/// Outcomes of a setting are labelled 0..count-1; counts may differ between
/// settings.
class Scenario {
 public:
  Scenario(std::vector<std::size_t> alice, std::vector<std::size_t> bob)
      : alice_(std::move(alice)), bob_(std::move(bob)) {
    check(alice_, "alice");
    check(bob_, "bob");
  }

  /// Same outcome count for every setting of a party.
  static Scenario uniform(std::size_t alice_settings, std::size_t alice_outcomes, std::size_t bob_settings,
                          std::size_t bob_outcomes) {
    return {std::vector<std::size_t>(alice_settings, alice_outcomes),
            std::vector<std::size_t>(bob_settings, bob_outcomes)};
  }

  /// Two settings and two outcomes per party.
  static Scenario chsh() { return uniform(2, 2, 2, 2); }

  [[nodiscard]] const std::vector<std::size_t>& alice() const { return alice_; }
  [[nodiscard]] const std::vector<std::size_t>& bob() const { return bob_; }
  [[nodiscard]] const std::vector<std::size_t>& settings(Party p) const { return p == Party::alice ? alice_ : bob_; }

  [[nodiscard]] std::size_t alice_settings() const { return alice_.size(); }
  [[nodiscard]] std::size_t bob_settings() const { return bob_.size(); }
  [[nodiscard]] std::size_t alice_outcomes(std::size_t x) const { return alice_.at(x); }
  [[nodiscard]] std::size_t bob_outcomes(std::size_t y) const { return bob_.at(y); }

  [[nodiscard]] bool is_chsh() const { return *this == chsh(); }

  /// Parties swapped.
  [[nodiscard]] Scenario transposed() const { return {bob_, alice_}; }

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  static void check(const std::vector<std::size_t>& settings, const char* who) {
    if (settings.empty()) throw InvariantError(std::string("scenario: ") + who + " needs at least one setting");
    for (std::size_t i = 0; i < settings.size(); ++i)
      if (settings[i] == 0)
        throw InvariantError(std::string("scenario: ") + who + " setting " + std::to_string(i) +
                             " has zero outcomes");
  }

  std::vector<std::size_t> alice_;
  std::vector<std::size_t> bob_;
};

}  // namespace bellsep
