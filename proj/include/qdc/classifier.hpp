#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdc/data.hpp"
#include "qdc/encoding.hpp"

namespace qdc {

/// Unit-norm training samples with integer class labels. The implied
/// superposition normalization constant is 1/√M.
struct TrainingSet {
  std::vector<FeatureVector> states;
  std::vector<int> labels;
  std::vector<int> class_labels;  // distinct labels, first-appearance order

  /// Validates unit norms and derives class_labels.
  static TrainingSet from(std::vector<FeatureVector> states,
                          std::vector<int> labels);

  std::size_t size() const { return states.size(); }
};

/// Joint and conditional class probabilities of the exact classifier channel.
/// `conditional` is absent exactly when p0 = 0 (every sample antipodal to the
/// test point), where the conditional distribution is undefined.
struct ClassDistribution {
  std::vector<int> class_labels;
  std::vector<double> joint;  // p(0, y), aligned with class_labels
  double p0 = 0.0;            // Σ_y p(0, y)
  std::optional<std::vector<double>> conditional;  // p(y | 0)
};

/// Record of one repeat-until-success classification run.
struct ClassificationTranscript {
  int attempts = 0;
  std::vector<int> sampled_indices;  // one per attempt
  bool succeeded = false;
  std::optional<int> final_label;  // label of the last sampled index
};

/// How sample_classify realizes the comparison state: constructed directly,
/// or prepared by running the synthesized circuit (identical branch
/// probabilities within 1e-10; exercised by the equivalence tests).
enum class PrepPath { direct, circuit };

/// (1 + ⟨ψ_test|ψ_sample⟩)/2 = |ψ_test + ψ_sample|²/4 for unit vectors:
/// probability of the ancilla-0 outcome after the interference Hadamard.
double success_probability(const FeatureVector& test,
                           const FeatureVector& sample);

/// Exact channel probabilities: p(0,y) = (1/M) Σ_{i: y_i=y} success(test, i).
ClassDistribution class_distribution(const FeatureVector& test,
                                     const TrainingSet& train);

/// Index (into dist.class_labels) of the most probable class given success;
/// ties resolve to the earliest label. Requires a defined conditional.
int argmax_class(const ClassDistribution& dist);

/// Same probabilities computed from the full index ⊗ ancilla ⊗ feature ⊗
/// class register superposition built gate-by-gate (2 features, at most two
/// classes, M ≤ 4). Used as an independent oracle for the channel form.
ClassDistribution class_distribution_via_register(const FeatureVector& test,
                                                  const TrainingSet& train);

/// Repeat-until-success sampler: draw a training index uniformly, prepare the
/// comparison state, apply the ancilla Hadamard, measure; outcome 0 emits the
/// drawn sample's label. Deterministic for a given seed.
ClassificationTranscript sample_classify(const FeatureVector& test,
                                         const TrainingSet& train,
                                         std::uint64_t seed,
                                         int max_attempts = 1000,
                                         PrepPath path = PrepPath::direct);

/// Leave-one-out cross-validation summary over a labeled dataset (computed
/// exactly, no sampling):
///   success[r][c]     — mean success probability of class-c samples against
///                       class-r test points (held-out sample excluded);
///   conditional[r][c] — mean conditional class distribution p(c|0) for
///                       class-r test points;
///   diagonal          — the diagonal of `conditional`.
struct LoocvTables {
  std::vector<std::string> class_names;
  std::vector<std::vector<double>> success;
  std::vector<std::vector<double>> conditional;
  std::vector<double> diagonal;
};

LoocvTables loocv_report(const LabeledDataset& data, PreprocessMode mode,
                         bool fold_local_stats = false);

}  // namespace qdc
