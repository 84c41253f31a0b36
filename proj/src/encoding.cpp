#include "qdc/encoding.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qdc/errors.hpp"

namespace qdc {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const FeatureVector& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void check_arity(const std::vector<FeatureVector>& rows) {
  if (rows.empty()) throw DataError("empty feature list");
  const std::size_t k = rows.front().size();
  if (k == 0) throw DataError("features must have positive arity");
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].size() != k)
      throw DataError("inconsistent feature arity at row " + std::to_string(i));
}

}  // namespace

std::string to_string(PreprocessMode mode) {
  switch (mode) {
    case PreprocessMode::normalize: return "normalize";
    case PreprocessMode::standardize: return "standardize";
    case PreprocessMode::rescale: return "rescale";
  }
  return "?";
}

PreprocessMode preprocess_mode_from_string(const std::string& name) {
  if (name == "normalize") return PreprocessMode::normalize;
  if (name == "standardize") return PreprocessMode::standardize;
  if (name == "rescale") return PreprocessMode::rescale;
  throw std::invalid_argument("unknown preprocessing mode: " + name);
}

Preprocessor Preprocessor::fit(const std::vector<FeatureVector>& raw,
                               PreprocessMode mode) {
  check_arity(raw);
  const std::size_t k = raw.front().size();
  const double n = static_cast<double>(raw.size());
  Preprocessor p;
  p.mode_ = mode;
  p.offset_.assign(k, 0.0);
  p.scale_.assign(k, 1.0);
  if (mode == PreprocessMode::standardize) {
    for (std::size_t f = 0; f < k; ++f) {
      double mean = 0.0;
      for (const auto& row : raw) mean += row[f];
      mean /= n;
      double var = 0.0;
      for (const auto& row : raw) var += (row[f] - mean) * (row[f] - mean);
      var /= n;  // population variance
      if (var == 0.0)
        throw DataError("feature " + std::to_string(f) + " has zero variance");
      p.offset_[f] = mean;
      p.scale_[f] = 1.0 / std::sqrt(var);
    }
  } else if (mode == PreprocessMode::rescale) {
    for (std::size_t f = 0; f < k; ++f) {
      double lo = raw.front()[f], hi = lo;
      for (const auto& row : raw) {
        lo = std::min(lo, row[f]);
        hi = std::max(hi, row[f]);
      }
      if (hi == lo)
        throw DataError("feature " + std::to_string(f) + " has zero variance");
      p.offset_[f] = 0.5 * (lo + hi);  // midpoint → 0, range → [−1, 1]
      p.scale_[f] = 2.0 / (hi - lo);
    }
  }
  return p;
}

FeatureVector Preprocessor::affine(const FeatureVector& x) const {
  if (x.size() != offset_.size())
    throw DataError("feature arity does not match fitted preprocessor");
  FeatureVector y(x.size());
  for (std::size_t f = 0; f < x.size(); ++f)
    y[f] = (x[f] - offset_[f]) * scale_[f];
  return y;
}

FeatureVector Preprocessor::operator()(const FeatureVector& x) const {
  FeatureVector y = affine(x);
  const double n2 = norm2(y);
  if (n2 == 0.0) throw DataError("zero vector");
  const double inv = 1.0 / std::sqrt(n2);
  for (double& v : y) v *= inv;
  return y;
}

std::vector<FeatureVector> preprocess(const std::vector<FeatureVector>& raw,
                                      PreprocessMode mode) {
  const Preprocessor p = Preprocessor::fit(raw, mode);
  std::vector<FeatureVector> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    FeatureVector y = p.affine(raw[i]);
    const double n2 = norm2(y);
    if (n2 == 0.0) throw DataError("zero vector at index " + std::to_string(i));
    const double inv = 1.0 / std::sqrt(n2);
    for (double& v : y) v *= inv;
    out.push_back(std::move(y));
  }
  return out;
}

StateVector encode(const FeatureVector& x) {
  if (x.size() != 2 && x.size() != 4)
    throw std::invalid_argument("encode expects 2 or 4 features");
  if (std::abs(norm2(x) - 1.0) > kNormTol)
    throw std::invalid_argument("encode expects a unit-norm vector");
  return StateVector::from_real(x);
}

StateVector comparison_state(const FeatureVector& test,
                             const FeatureVector& sample) {
  if (test.size() != sample.size())
    throw std::invalid_argument("comparison_state length mismatch");
  encode(test);  // validates arity and norm
  encode(sample);
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<double> amps;
  amps.reserve(2 * test.size());
  for (double v : test) amps.push_back(v * s);
  for (double v : sample) amps.push_back(v * s);
  return StateVector::from_real(amps);
}

double polar_angle(const FeatureVector& x) {
  if (x.size() != 2)
    throw std::invalid_argument("polar_angle expects 2 features");
  return std::atan2(x[1], x[0]);
}

PrepAngles prep_angles(double phi_test, double phi_m) {
  return {kPi / 4 + (phi_test - phi_m) / 2, -kPi / 4 + (phi_test + phi_m) / 2};
}

StateVector apply_circuit(const Circuit& circuit, StateVector state) {
  for (const Gate& g : circuit.gates) {
    switch (g.kind) {
      case Gate::Kind::h:
        state = apply(state, gate_h(), {g.target});
        break;
      case Gate::Kind::x:
        state = apply(state, gate_x(), {g.target});
        break;
      case Gate::Kind::ry:
        state = apply(state, gate_ry(g.param), {g.target});
        break;
      case Gate::Kind::cnot:
        state = apply(state, gate_cnot(), {g.control, g.target});
        break;
    }
  }
  return state;
}

StateVector circuit_output(const Circuit& circuit) {
  return apply_circuit(circuit, StateVector::basis(circuit.num_qubits, 0));
}

double circuit_residual(const Circuit& circuit) {
  return 1.0 - std::abs(inner(circuit.target, circuit_output(circuit)));
}

GateCensus census(const Circuit& circuit) {
  GateCensus c;
  for (const Gate& g : circuit.gates) {
    if (g.kind == Gate::Kind::ry) ++c.rotations;
    if (g.kind == Gate::Kind::cnot) ++c.cnots;
    if (g.kind == Gate::Kind::h) ++c.hadamards;
  }
  return c;
}

Circuit prep_circuit_2f(double phi_test, double phi_m) {
  const auto [a1, a2] = prep_angles(phi_test, phi_m);
  const FeatureVector t{std::cos(phi_test), std::sin(phi_test)};
  const FeatureVector m{std::cos(phi_m), std::sin(phi_m)};
  StateVector target = apply(comparison_state(t, m), gate_h(), {0});
  Circuit c{2,
            {
                {Gate::Kind::ry, a1, 1, -1},
                {Gate::Kind::h, 0.0, 0, -1},
                {Gate::Kind::cnot, 0.0, 1, 0},
                {Gate::Kind::ry, a2, 1, -1},
                {Gate::Kind::h, 0.0, 0, -1},
            },
            std::move(target)};
  const double residual = circuit_residual(c);
  if (residual > kUnitaryTol)
    throw VerifyError("2-feature circuit synthesis residual " +
                      std::to_string(residual));
  return c;
}

namespace {

// Controlled-rotation angle pair hitting branch angle g0 when the control is
// |0⟩ and g1 when it is |1⟩, via [Ry(first); CNOT(control→target); Ry(second)].
std::pair<double, double> branch_pair(double g0, double g1) {
  return {kPi / 4 + (g0 - g1) / 2, -kPi / 4 + (g0 + g1) / 2};
}

}  // namespace

Circuit prep_circuit_4f(const FeatureVector& test,
                        const FeatureVector& sample) {
  if (test.size() != 4 || sample.size() != 4)
    throw std::invalid_argument("prep_circuit_4f expects 4-feature vectors");
  StateVector comp = comparison_state(test, sample);  // validates norms

  // Recursive amplitude bisection over the comparison state. The ancilla
  // level is an exact H (both branches carry weight 1/√2 by construction).
  // Level on qubit 1: branch pair norms; level on qubit 2: pair directions.
  const FeatureVector* branch[2] = {&test, &sample};
  double beta[2];        // qubit-1 branch angles per ancilla value
  double gamma[2][2];    // qubit-2 branch angles per (ancilla, qubit-1) value
  for (int a = 0; a < 2; ++a) {
    const FeatureVector& w = *branch[a];
    const double t0 = std::hypot(w[0], w[1]);
    const double t1 = std::hypot(w[2], w[3]);
    beta[a] = std::atan2(t1, t0);
    gamma[a][0] = t0 > 0.0 ? std::atan2(w[1], w[0]) : 0.0;
    gamma[a][1] = t1 > 0.0 ? std::atan2(w[3], w[2]) : 0.0;
  }
  const auto [b1, b2] = branch_pair(beta[0], beta[1]);
  // Cascade on qubit 2: effective rotation for control bits (a, f) is
  // Ry(t4)·X^a·Ry(t3)·X^f·Ry(t2)·X^a·Ry(t1); solving the four branch-angle
  // equations on |0⟩ is a 4×4 sign-pattern system.
  const double s1 = gamma[0][0];
  const double s2 = kPi / 2 - gamma[0][1];
  const double s3 = gamma[1][0];
  const double s4 = kPi / 2 - gamma[1][1];
  const double t1 = (s1 + s2 + s3 + s4) / 4;
  const double t2 = (s1 + s2 - s3 - s4) / 4;
  const double t3 = (s1 - s2 - s3 + s4) / 4;
  const double t4 = (s1 - s2 + s3 - s4) / 4;

  StateVector target = apply(comp, gate_h(), {0});
  Circuit c{3,
            {
                {Gate::Kind::h, 0.0, 0, -1},
                {Gate::Kind::ry, b1, 1, -1},
                {Gate::Kind::cnot, 0.0, 1, 0},
                {Gate::Kind::ry, b2, 1, -1},
                {Gate::Kind::ry, t1, 2, -1},
                {Gate::Kind::cnot, 0.0, 2, 0},
                {Gate::Kind::ry, t2, 2, -1},
                {Gate::Kind::cnot, 0.0, 2, 1},
                {Gate::Kind::ry, t3, 2, -1},
                {Gate::Kind::cnot, 0.0, 2, 0},
                {Gate::Kind::ry, t4, 2, -1},
                {Gate::Kind::h, 0.0, 0, -1},
            },
            std::move(target)};
  const double residual = circuit_residual(c);
  if (residual > kUnitaryTol)
    throw VerifyError("4-feature circuit synthesis residual " +
                      std::to_string(residual));
  return c;
}

KernelDecision kernel_classify(
    const FeatureVector& test,
    const std::vector<std::pair<FeatureVector, int>>& train) {
  if (train.empty()) throw std::invalid_argument("empty training set");
  const double m = static_cast<double>(train.size());
  double score = 0.0;
  for (const auto& [x, y] : train) {
    if (x.size() != test.size())
      throw std::invalid_argument("kernel feature length mismatch");
    if (y != 1 && y != -1)
      throw std::invalid_argument("kernel labels must be +1 or -1");
    double d2 = 0.0;
    for (std::size_t f = 0; f < x.size(); ++f)
      d2 += (x[f] - test[f]) * (x[f] - test[f]);
    score += y * (1.0 - d2 / (4.0 * m));
  }
  KernelDecision d;
  d.score = score;
  d.tie = std::abs(score) <= kAlgebraTol;
  d.label = d.tie ? 0 : (score > 0 ? 1 : -1);
  return d;
}

}  // namespace qdc
