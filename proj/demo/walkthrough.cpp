// Walks through the library on three behaviors: a stochastic local model,
// the PR box and the singlet with optimal spin angles.

#include <cstdio>
#include <iostream>

#include "bellsep/bellsep.hpp"

using namespace bellsep;

namespace {

void print_behavior(const ExactBehavior& p) {
  const Scenario& s = p.scenario();
  for (std::size_t x = 0; x < s.alice_settings(); ++x)
    for (std::size_t y = 0; y < s.bob_settings(); ++y) {
      std::cout << "  " << cell_label(x, y) << ":";
      for (const Rational& v : p.cell(x, y)) std::cout << ' ' << v;
      std::cout << '\n';
    }
}

}  // namespace

int main() {
  // A stochastic model: Alice's responses are random, Bob's are fixed.
  Scenario s({2, 2}, {2});
  LocalModel stochastic(s, {{Rational(1),
                             {{Rational(1, 2), Rational(1, 2)}, {Rational(1, 4), Rational(3, 4)}},
                             {{Rational(1), Rational(0)}}}});
  ExactBehavior p = behavior_of_model(stochastic);
  std::cout << "stochastic model behavior:\n";
  print_behavior(p);

  LocalModel deterministic = determinize(stochastic);
  std::cout << "determinized into " << deterministic.size() << " deterministic components:\n";
  for (const auto& c : deterministic.components()) {
    std::cout << "  weight " << c.weight << ", alice outcomes";
    for (const auto& row : c.alice)
      for (std::size_t a = 0; a < row.size(); ++a)
        if (row[a] == Rational(1)) std::cout << ' ' << a;
    std::cout << '\n';
  }
  std::cout << "same behavior: " << (behavior_of_model(deterministic) == p ? "yes" : "no") << "\n\n";

  ExactBehavior box = pr_box();
  auto ns = check_no_signalling(box);
  auto pr = membership(box);
  std::cout << "PR box: no-signalling " << (ns.ok ? "yes" : "no") << ", CHSH max " << chsh_all_variants(box).max()
            << ", membership " << (pr.is_member() ? "member" : "non_member") << " (certificate value "
            << *pr.certificate_value << ", local bound " << pr.certificate->local_bound() << ")\n\n";

  QuantumSetup setup = singlet_setup();
  FloatBehavior q = quantum_behavior(setup.state, setup.measurements);
  auto chsh = chsh_all_variants(q);
  auto qm = membership(q);
  std::printf("singlet: no-signalling %s, CHSH max %.10f (variant %zu), membership %s via %s\n",
              check_no_signalling(q).ok ? "yes" : "no", chsh.max(), chsh.argmax,
              qm.is_member() ? "member" : "non_member", to_string(qm.method));

  auto report = compare_empirical(stochastic, deterministic, 100'000, 1);
  std::printf("sampled comparison with the determinized model: %s (max |z| %.2f)\n", report.pass ? "pass" : "fail",
              report.max_abs_z());
  return 0;
}
