#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdc/classifier.hpp"
#include "qdc/oqw.hpp"
#include "qdc/qstate.hpp"

namespace qdc {

/// One round of the recycling protocol. An ancilla outcome of 0 terminates
/// the sequence (the label is emitted); outcome 1 hands the rotated
/// post-measurement state to the next round.
struct RecycleStep {
  int sampled_index = 0;
  int ancilla_outcome = 0;
  StateVector pre_state;   // test-register state entering the round
  StateVector post_state;  // normalized post-measurement state
};

struct RecycleResult {
  bool succeeded = false;
  std::optional<int> label;
  std::vector<RecycleStep> steps;
};

/// Post-measurement state of the interference measurement between `current`
/// and the encoded sample: outcome 0 → ((1+⟨c|s⟩)/2, (c+s)/‖c+s‖);
/// outcome 1 → ((1−⟨c|s⟩)/2, (c−s)/‖c−s‖). Requesting a zero-probability
/// branch (antipodal pair for 0, identical pair for 1) is an error.
std::pair<double, StateVector> post_measure_state(const StateVector& current,
                                                  const FeatureVector& sample,
                                                  int outcome);

/// Seeded recycling run: round 1 draws a uniformly random training index; on
/// outcome 1 the rotated state replaces the test state and the next index is
/// drawn uniformly from the current node's out-neighbors in `graph`; on
/// outcome 0 the current sample's label is emitted. Exhausting max_steps
/// without outcome 0 reports failure (no label).
RecycleResult recycle_classify(const FeatureVector& test,
                               const TrainingSet& train,
                               const WalkGraph& graph, std::uint64_t seed,
                               int max_steps);

/// Same, on the default complete graph over the training samples.
RecycleResult recycle_classify(const FeatureVector& test,
                               const TrainingSet& train, std::uint64_t seed,
                               int max_steps);

/// Exact success probability of the 1- or 2-step recycling protocol,
/// conditioned on post-selection success within the step budget, for a
/// two-class training set. Step 2 enumerates (first index, out-neighbor)
/// pairs on the complete graph; every branch weight comes from
/// post_measure_state, no sampling.
double exact_multistep_success(const FeatureVector& test, int true_label,
                               const TrainingSet& train, int steps);

/// Per-class comparison of the 1-step and 2-step schemes over a two-class
/// LOOCV (scaling fitted on the full dataset): class means of both exact
/// success probabilities plus the per-class fraction of samples whose 2-step
/// value strictly beats their 1-step value.
struct SchemeComparison {
  std::vector<std::string> class_names;  // the two selected classes
  std::vector<double> one_step;
  std::vector<double> two_step;
  std::vector<double> win_fraction;
};

SchemeComparison scheme_comparison(const LabeledDataset& data, int class_a,
                                   int class_b, PreprocessMode mode);

}  // namespace qdc
