#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "bellsep/behavior.hpp"
#include "bellsep/errors.hpp"
#include "bellsep/linalg.hpp"

namespace bellsep {

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-9;
inline constexpr double kCompletenessTolerance = 1e-9;

namespace detail {

inline void require_hermitian_psd(const ComplexMatrix& m, const std::string& what) {
  if (!m.is_square()) throw ShapeError(what + " is not square");
  if (!m.is_hermitian(kHermitianTolerance)) throw InvariantError(what + " is not Hermitian");
  auto eig = hermitian_eigenvalues(m);
  if (eig.front() < kEigenvalueFloor)
    throw InvariantError(what + " is not positive semidefinite (eigenvalue " + format_value(eig.front()) + ")");
}

}  // namespace detail

/// Density operator on C^dim_a ⊗ C^dim_b.
class QuantumState {
 public:
  QuantumState(std::size_t dim_a, std::size_t dim_b, ComplexMatrix rho)
      : dim_a_(dim_a), dim_b_(dim_b), rho_(std::move(rho)) {
    if (dim_a == 0 || dim_b == 0) throw ShapeError("QuantumState: dimensions must be positive");
    if (rho_.rows() != dim_a * dim_b || rho_.cols() != dim_a * dim_b)
      throw ShapeError("QuantumState: rho must be " + std::to_string(dim_a * dim_b) + "x" +
                       std::to_string(dim_a * dim_b));
    detail::require_hermitian_psd(rho_, "QuantumState: rho");
    if (std::abs(rho_.trace() - Complex(1.0)) > kTraceTolerance)
      throw InvariantError("QuantumState: trace is not 1");
  }

  /// |ψ><ψ| after normalizing ψ.
  static QuantumState pure(std::size_t dim_a, std::size_t dim_b, std::vector<Complex> psi) {
    double norm = 0.0;
    for (const Complex& z : psi) norm += std::norm(z);
    if (!(norm > 0.0)) throw ParameterError("QuantumState::pure: zero vector");
    for (Complex& z : psi) z /= std::sqrt(norm);
    return {dim_a, dim_b, ComplexMatrix::outer(psi)};
  }

  static QuantumState product(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b) {
    return {rho_a.rows(), rho_b.rows(), kron(rho_a, rho_b)};
  }

  static QuantumState maximally_mixed(std::size_t dim_a, std::size_t dim_b) {
    return {dim_a, dim_b, ComplexMatrix::identity(dim_a * dim_b) * Complex(1.0 / static_cast<double>(dim_a * dim_b))};
  }

  [[nodiscard]] std::size_t dim_a() const { return dim_a_; }
  [[nodiscard]] std::size_t dim_b() const { return dim_b_; }
  [[nodiscard]] const ComplexMatrix& rho() const { return rho_; }

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  ComplexMatrix rho_;
};

/// One list of effects per setting, per party.
using Measurement = std::vector<ComplexMatrix>;

class MeasurementAssemblage {
 public:
  MeasurementAssemblage(std::vector<Measurement> alice, std::vector<Measurement> bob)
      : alice_(std::move(alice)), bob_(std::move(bob)) {
    dim_a_ = check(alice_, "alice");
    dim_b_ = check(bob_, "bob");
  }

  [[nodiscard]] const std::vector<Measurement>& alice() const { return alice_; }
  [[nodiscard]] const std::vector<Measurement>& bob() const { return bob_; }
  [[nodiscard]] std::size_t dim_a() const { return dim_a_; }
  [[nodiscard]] std::size_t dim_b() const { return dim_b_; }

  [[nodiscard]] Scenario scenario() const {
    std::vector<std::size_t> a, b;
    for (const auto& m : alice_) a.push_back(m.size());
    for (const auto& m : bob_) b.push_back(m.size());
    return {a, b};
  }

 private:
  static std::size_t check(const std::vector<Measurement>& settings, const std::string& who) {
    if (settings.empty()) throw InvariantError("MeasurementAssemblage: " + who + " has no settings");
    const std::size_t dim = settings.front().empty() ? 0 : settings.front().front().rows();
    for (std::size_t x = 0; x < settings.size(); ++x) {
      std::string where = "MeasurementAssemblage: " + who + " setting " + std::to_string(x);
      if (settings[x].empty()) throw InvariantError(where + " has no effects");
      ComplexMatrix sum(dim, dim);
      for (std::size_t o = 0; o < settings[x].size(); ++o) {
        const ComplexMatrix& e = settings[x][o];
        if (e.rows() != dim || e.cols() != dim)
          throw ShapeError(where + " effect " + std::to_string(o) + " has inconsistent dimension");
        detail::require_hermitian_psd(e, where + " effect " + std::to_string(o));
        sum += e;
      }
      if (sum.max_abs_diff(ComplexMatrix::identity(dim)) > kCompletenessTolerance)
        throw InvariantError(where + " effects do not sum to the identity");
    }
    return dim;
  }

  std::vector<Measurement> alice_;
  std::vector<Measurement> bob_;
  std::size_t dim_a_ = 0;
  std::size_t dim_b_ = 0;
};

/// Born rule p(a,b|x,y) = tr(ρ (M_{a|x} ⊗ N_{b|y})). Rounding residue in
/// [−1e−12, 0) is clamped to zero.
inline FloatBehavior quantum_behavior(const QuantumState& state, const MeasurementAssemblage& meas) {
  if (state.dim_a() != meas.dim_a() || state.dim_b() != meas.dim_b())
    throw ShapeError("quantum_behavior: state is " + std::to_string(state.dim_a()) + "x" +
                     std::to_string(state.dim_b()) + " but effects act on " + std::to_string(meas.dim_a()) + "x" +
                     std::to_string(meas.dim_b()));
  const ComplexMatrix& rho = state.rho();
  const std::size_t n = rho.rows();
  FloatBehavior p(meas.scenario());
  for (std::size_t x = 0; x < meas.alice().size(); ++x)
    for (std::size_t y = 0; y < meas.bob().size(); ++y)
      for (std::size_t a = 0; a < meas.alice()[x].size(); ++a)
        for (std::size_t b = 0; b < meas.bob()[y].size(); ++b) {
          ComplexMatrix effect = kron(meas.alice()[x][a], meas.bob()[y][b]);
          Complex t = 0.0;
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) t += rho(i, j) * effect(j, i);
          double v = t.real();
          if (v < 0.0 && v >= kNegativityFloor) v = 0.0;
          p(x, y, a, b) = v;
        }
  require_valid(p);
  return p;
}

inline ComplexMatrix pauli_x() { return {2, 2, {0.0, 1.0, 1.0, 0.0}}; }
inline ComplexMatrix pauli_z() { return {2, 2, {1.0, 0.0, 0.0, -1.0}}; }

/// Spin measurement along cos θ·σz + sin θ·σx: projectors (I ± n·σ)/2,
/// aligned outcome first.
inline Measurement qubit_projective(double angle) {
  ComplexMatrix n = pauli_z() * Complex(std::cos(angle)) + pauli_x() * Complex(std::sin(angle));
  ComplexMatrix id = ComplexMatrix::identity(2);
  return {(id + n) * Complex(0.5), (id - n) * Complex(0.5)};
}

/// (|01> − |10>)/√2.
inline QuantumState singlet_state() {
  const double r = 1.0 / std::numbers::sqrt2;
  return QuantumState::pure(2, 2, {0.0, r, -r, 0.0});
}

struct QuantumSetup {
  QuantumState state;
  MeasurementAssemblage measurements;
};

inline constexpr double kSingletAliceAngles[2] = {0.0, std::numbers::pi / 2};
inline constexpr double kSingletBobAngles[2] = {std::numbers::pi / 4, 3 * std::numbers::pi / 4};

/// Singlet with the angles reaching CHSH = 2√2.
inline QuantumSetup singlet_setup() {
  return {singlet_state(),
          MeasurementAssemblage({qubit_projective(kSingletAliceAngles[0]), qubit_projective(kSingletAliceAngles[1])},
                                {qubit_projective(kSingletBobAngles[0]), qubit_projective(kSingletBobAngles[1])})};
}

}  // namespace bellsep
