#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace qdc {

using Amplitude = std::complex<double>;

/// Tolerance policy shared across the library.
inline constexpr double kNormTol = 1e-9;      // state norms, probability sums
inline constexpr double kUnitaryTol = 1e-10;  // unitarity, circuit/target fidelity
inline constexpr double kAlgebraTol = 1e-12;  // exact algebraic identities

/// Pure state over a small register. Basis ordering is big-endian: qubit 0 is
/// the leftmost factor, so for n qubits the basis index of |b0 b1 ... b_{n-1}⟩
/// is Σ b_q · 2^(n-1-q).
class StateVector {
 public:
  /// Takes ownership of the amplitudes; length must be a power of two and the
  /// squared norm must be 1 within 1e-9. Components must be finite.
  explicit StateVector(std::vector<Amplitude> amps);

  /// Basis state |index⟩ on num_qubits qubits.
  static StateVector basis(int num_qubits, std::size_t index);

  /// State with the given real amplitudes (same checks as the main ctor).
  static StateVector from_real(const std::vector<double>& amps);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

 private:
  std::vector<Amplitude> amps_;
  int num_qubits_ = 0;
};

/// Dense square matrix checked to be unitary (max |U†U − I| < 1e-10) at
/// construction. Row/column indices use the same big-endian basis ordering
/// as StateVector.
class Unitary {
 public:
  /// Row-major entries; dim must be a power of two.
  Unitary(std::size_t dim, std::vector<Amplitude> entries);

  std::size_t dim() const { return dim_; }
  int num_qubits() const { return num_qubits_; }
  const Amplitude& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * dim_ + c];
  }

  Unitary dagger() const;
  /// Matrix product this · rhs.
  Unitary operator*(const Unitary& rhs) const;

 private:
  std::size_t dim_ = 0;
  int num_qubits_ = 0;
  std::vector<Amplitude> entries_;
};

/// One outcome of a projective single-qubit measurement. post_state is absent
/// exactly when the branch has probability zero.
struct MeasurementBranch {
  int outcome = 0;
  double probability = 0.0;
  std::optional<StateVector> post_state;
};

// ---- standard gates ------------------------------------------------------

Unitary gate_h();
Unitary gate_x();
/// Full-angle y-rotation: Ry(θ)|0⟩ = cosθ|0⟩ + sinθ|1⟩,
/// Ry(θ)|1⟩ = −sinθ|0⟩ + cosθ|1⟩. Additive: Ry(a)Ry(b) = Ry(a+b).
Unitary gate_ry(double theta);
/// Control on qubit 0 (leftmost), target qubit 1.
Unitary gate_cnot();
Unitary gate_identity(int num_qubits);

// ---- operations ----------------------------------------------------------

/// Applies u to the listed qubits (identity elsewhere). targets[0] corresponds
/// to u's leftmost qubit. Targets must be distinct and in range.
StateVector apply(const StateVector& state, const Unitary& u,
                  const std::vector<int>& targets);

/// Kronecker products with a's qubits leftmost.
StateVector tensor(const StateVector& a, const StateVector& b);
Unitary tensor(const Unitary& a, const Unitary& b);

/// ⟨a|b⟩, conjugating a.
Amplitude inner(const StateVector& a, const StateVector& b);

/// Born-rule branches for measuring one qubit; post-states renormalized.
/// Deterministic — sampling is layered above with seeded randomness.
std::array<MeasurementBranch, 2> measure_qubit(const StateVector& state,
                                               int qubit);

}  // namespace qdc
