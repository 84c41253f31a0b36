#include "qdc/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qdc/errors.hpp"
#include "qdc/qstate.hpp"
#include "qdc/rng.hpp"

namespace qdc {

namespace {

double dot(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

int label_slot(const std::vector<int>& class_labels, int label) {
  for (std::size_t i = 0; i < class_labels.size(); ++i)
    if (class_labels[i] == label) return static_cast<int>(i);
  throw std::invalid_argument("label not in class list");
}

}  // namespace

TrainingSet TrainingSet::from(std::vector<FeatureVector> states,
                              std::vector<int> labels) {
  if (states.empty()) throw std::invalid_argument("empty training set");
  if (states.size() != labels.size())
    throw std::invalid_argument("state/label count mismatch");
  TrainingSet t;
  for (const auto& s : states) encode(s);  // validates arity and unit norm
  t.states = std::move(states);
  t.labels = std::move(labels);
  for (int y : t.labels)
    if (std::find(t.class_labels.begin(), t.class_labels.end(), y) ==
        t.class_labels.end())
      t.class_labels.push_back(y);
  return t;
}

double success_probability(const FeatureVector& test,
                           const FeatureVector& sample) {
  if (test.size() != sample.size())
    throw std::invalid_argument("feature length mismatch");
  return std::clamp(0.5 * (1.0 + dot(test, sample)), 0.0, 1.0);
}

ClassDistribution class_distribution(const FeatureVector& test,
                                     const TrainingSet& train) {
  if (train.size() == 0) throw std::invalid_argument("empty training set");
  ClassDistribution dist;
  dist.class_labels = train.class_labels;
  dist.joint.assign(dist.class_labels.size(), 0.0);
  const double inv_m = 1.0 / static_cast<double>(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const int slot = label_slot(dist.class_labels, train.labels[i]);
    dist.joint[slot] += inv_m * success_probability(test, train.states[i]);
  }
  for (double j : dist.joint) dist.p0 += j;
  if (dist.p0 > 0.0) {
    std::vector<double> cond(dist.joint.size());
    for (std::size_t c = 0; c < cond.size(); ++c)
      cond[c] = dist.joint[c] / dist.p0;
    dist.conditional = std::move(cond);
  }
  return dist;
}

int argmax_class(const ClassDistribution& dist) {
  if (!dist.conditional)
    throw VerifyError("conditional distribution undefined (p(0) = 0)");
  const auto& cond = *dist.conditional;
  return static_cast<int>(std::max_element(cond.begin(), cond.end()) -
                          cond.begin());
}

ClassDistribution class_distribution_via_register(const FeatureVector& test,
                                                  const TrainingSet& train) {
  const std::size_t m = train.size();
  if (m == 0 || m > 4)
    throw std::invalid_argument("register oracle supports 1..4 samples");
  if (test.size() != 2)
    throw std::invalid_argument("register oracle supports 2 features");
  if (train.class_labels.size() > 2)
    throw std::invalid_argument("register oracle supports at most 2 classes");
  // Register layout: index (2 qubits) ⊗ ancilla ⊗ feature ⊗ class, qubit 0
  // leftmost. Amplitude of |i⟩|a⟩|f⟩|y_i⟩ is (1/√(2M)) ψ_f, with ψ the test
  // state for a = 0 and sample i for a = 1.
  const int num_qubits = 5;
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits, 0.0);
  const double w = 1.0 / std::sqrt(2.0 * static_cast<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const int y_bit = label_slot(train.class_labels, train.labels[i]);
    for (int a = 0; a < 2; ++a) {
      const FeatureVector& psi = (a == 0) ? test : train.states[i];
      for (int f = 0; f < 2; ++f) {
        const std::size_t idx = (i << 3) | (std::size_t(a) << 2) |
                                (std::size_t(f) << 1) | std::size_t(y_bit);
        amps[idx] = w * psi[f];
      }
    }
  }
  StateVector state{std::move(amps)};
  state = apply(state, gate_h(), {2});  // interference on the ancilla qubit
  ClassDistribution dist;
  dist.class_labels = train.class_labels;
  dist.joint.assign(dist.class_labels.size(), 0.0);
  const auto& out = state.amplitudes();
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    if ((idx >> 2) & 1) continue;  // keep ancilla outcome 0
    const std::size_t y_bit = idx & 1;
    if (y_bit < dist.joint.size()) dist.joint[y_bit] += std::norm(out[idx]);
  }
  for (double j : dist.joint) dist.p0 += j;
  if (dist.p0 > 0.0) {
    std::vector<double> cond(dist.joint.size());
    for (std::size_t c = 0; c < cond.size(); ++c)
      cond[c] = dist.joint[c] / dist.p0;
    dist.conditional = std::move(cond);
  }
  return dist;
}

namespace {

/// Ancilla-0 probability for one drawn sample, realized per the chosen path.
double branch_probability(const FeatureVector& test, const FeatureVector& sample,
                          PrepPath path) {
  if (path == PrepPath::direct) return success_probability(test, sample);
  Circuit circuit =
      test.size() == 2
          ? prep_circuit_2f(polar_angle(test), polar_angle(sample))
          : prep_circuit_4f(test, sample);
  const StateVector out = circuit_output(circuit);
  return measure_qubit(out, 0)[0].probability;
}

}  // namespace

ClassificationTranscript sample_classify(const FeatureVector& test,
                                         const TrainingSet& train,
                                         std::uint64_t seed, int max_attempts,
                                         PrepPath path) {
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  if (train.size() == 0) throw std::invalid_argument("empty training set");
  Rng rng(seed);
  ClassificationTranscript tr;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::size_t i = rng.uniform_index(train.size());
    tr.sampled_indices.push_back(static_cast<int>(i));
    ++tr.attempts;
    const double p0 = branch_probability(test, train.states[i], path);
    if (rng.uniform01() < p0) {
      tr.succeeded = true;
      tr.final_label = train.labels[i];
      return tr;
    }
  }
  return tr;
}

LoocvTables loocv_report(const LabeledDataset& data, PreprocessMode mode,
                         bool fold_local_stats) {
  const auto folds = loocv_folds(data, mode, fold_local_stats);
  const int k = static_cast<int>(data.class_names.size());
  std::vector<int> per_class(k, 0);
  for (int y : data.labels) ++per_class.at(y);
  for (int c = 0; c < k; ++c)
    if (per_class[c] < 2)
      throw DataError("class " + data.class_names[c] +
                      " has fewer than 2 samples");
  LoocvTables tables;
  tables.class_names = data.class_names;
  tables.success.assign(k, std::vector<double>(k, 0.0));
  tables.conditional.assign(k, std::vector<double>(k, 0.0));
  // Per-class mean of per-fold quantities; folds grouped by test class.
  std::vector<std::vector<double>> success_sum(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<int>> success_count(k, std::vector<int>(k, 0));
  std::vector<int> fold_count(k, 0);
  for (const auto& fold : folds) {
    const int r = fold.test_label;
    ++fold_count[r];
    // Mean success probability by sample class within this fold.
    std::vector<double> sum(k, 0.0);
    std::vector<int> count(k, 0);
    for (std::size_t i = 0; i < fold.train_states.size(); ++i) {
      const int c = fold.train_labels[i];
      sum[c] += success_probability(fold.test_state, fold.train_states[i]);
      ++count[c];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      success_sum[r][c] += sum[c] / count[c];
      ++success_count[r][c];
    }
    // Conditional class distribution of this fold's exact channel.
    const TrainingSet train =
        TrainingSet::from(fold.train_states, fold.train_labels);
    const ClassDistribution dist = class_distribution(fold.test_state, train);
    if (!dist.conditional)
      throw VerifyError("undefined conditional in cross-validation fold");
    for (std::size_t c = 0; c < dist.class_labels.size(); ++c)
      tables.conditional[r][dist.class_labels[c]] += (*dist.conditional)[c];
  }
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      if (success_count[r][c] > 0)
        tables.success[r][c] = success_sum[r][c] / success_count[r][c];
      tables.conditional[r][c] /= fold_count[r];
    }
    tables.diagonal.push_back(tables.conditional[r][r]);
  }
  return tables;
}

}  // namespace qdc
