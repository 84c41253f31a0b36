#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qdc/qstate.hpp"

namespace qdc {

/// Real feature vector; the pipeline works with lengths 2 and 4.
using FeatureVector = std::vector<double>;

/// Feature scaling applied before unit-norm encoding:
///   normalize   — unit norm only;
///   standardize — per-feature z-score (zero mean, unit variance over the
///                 dataset), then unit norm;
///   rescale     — per-feature affine map onto [−1, 1] (min/max over the
///                 dataset), then unit norm. Default for the shipped tables:
///                 this is the scaling that reproduces the published results.
enum class PreprocessMode { normalize, standardize, rescale };

std::string to_string(PreprocessMode mode);
PreprocessMode preprocess_mode_from_string(const std::string& name);

/// Per-feature affine transform fitted on a dataset, followed by unit-norm.
/// Fitting uses full-dataset statistics; the fitted object can then transform
/// previously unseen vectors (e.g. a user-supplied test point) consistently.
class Preprocessor {
 public:
  static Preprocessor fit(const std::vector<FeatureVector>& raw,
                          PreprocessMode mode);

  /// Affine step only (no normalization).
  FeatureVector affine(const FeatureVector& x) const;
  /// Full transform: affine step, then unit-norm. Throws DataError on a
  /// zero vector.
  FeatureVector operator()(const FeatureVector& x) const;

  PreprocessMode mode() const { return mode_; }

 private:
  PreprocessMode mode_ = PreprocessMode::normalize;
  std::vector<double> offset_, scale_;  // y_f = (x_f − offset_f) · scale_f
};

/// Fits on `raw` and transforms every row. Errors carry the offending row or
/// feature index (zero vector / zero-variance feature).
std::vector<FeatureVector> preprocess(const std::vector<FeatureVector>& raw,
                                      PreprocessMode mode);

/// Amplitude encoding: components become basis amplitudes (2 features →
/// 1 qubit, 4 features → 2 qubits). Requires unit norm within 1e-9.
StateVector encode(const FeatureVector& x);

/// (|0⟩ψ_test + |1⟩ψ_sample)/√2 with the ancilla qubit leftmost.
StateVector comparison_state(const FeatureVector& test,
                             const FeatureVector& sample);

/// Polar angle of a 2-feature unit vector: atan2(x1, x0).
double polar_angle(const FeatureVector& x);

/// Rotation angles of the 2-feature preparation circuit.
struct PrepAngles {
  double alpha1 = 0.0;  // π/4 + (φ_test − φ_m)/2
  double alpha2 = 0.0;  // −π/4 + (φ_test + φ_m)/2
};
PrepAngles prep_angles(double phi_test, double phi_m);

// ---- circuits ------------------------------------------------------------

struct Gate {
  enum class Kind { h, x, ry, cnot };
  Kind kind = Kind::h;
  double param = 0.0;  // Ry angle
  int target = 0;
  int control = -1;  // cnot only
};

/// Gate list plus the state the circuit is declared to produce from |0…0⟩.
/// Synthesis constructors verify the declaration (up to global phase) within
/// 1e-10 before returning.
struct Circuit {
  int num_qubits;
  std::vector<Gate> gates;
  StateVector target;
};

StateVector apply_circuit(const Circuit& circuit, StateVector state);
/// Runs the circuit on |0…0⟩.
StateVector circuit_output(const Circuit& circuit);
/// 1 − |⟨target|output⟩| (global phase ignored).
double circuit_residual(const Circuit& circuit);

struct GateCensus {
  int rotations = 0;  // parameterized Ry count
  int cnots = 0;
  int hadamards = 0;
};
GateCensus census(const Circuit& circuit);

/// Two-qubit preparation circuit for 2-feature states (ancilla qubit 0,
/// feature qubit 1): [Ry(α1) f; H a; CNOT(a→f); Ry(α2) f; H a]. Dropping the
/// final H yields the comparison state of the two encoded angles; the full
/// circuit output is (H⊗1) of it.
Circuit prep_circuit_2f(double phi_test, double phi_m);

/// Three-qubit preparation circuit for 4-feature states (ancilla qubit 0,
/// feature qubits 1–2), synthesized exactly by recursive amplitude bisection:
/// one controlled rotation level on qubit 1, then a four-rotation/three-CNOT
/// cascade on qubit 2, then the final ancilla H. Dropping the final H yields
/// the comparison state. Throws VerifyError (reporting the residual) if the
/// synthesized circuit misses its target beyond 1e-10.
Circuit prep_circuit_4f(const FeatureVector& test, const FeatureVector& sample);

// ---- classical reference classifier --------------------------------------

struct KernelDecision {
  int label = 0;       // +1 / −1; 0 when tied
  double score = 0.0;  // Σ y_i κ(x_i, test)
  bool tie = false;    // |score| ≤ 1e-12
};

/// Distance-kernel classifier: sign of Σ y_i (1 − |x_i − test|²/(4M)).
/// Labels must be ±1. A tie (score exactly zero, within 1e-12) is reported
/// explicitly rather than broken arbitrarily.
KernelDecision kernel_classify(
    const FeatureVector& test,
    const std::vector<std::pair<FeatureVector, int>>& train);

}  // namespace qdc
