#include "qdc/recycling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qdc/errors.hpp"
#include "qdc/rng.hpp"

namespace qdc {

namespace {

double dot_with(const StateVector& c, const FeatureVector& s) {
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) d += c[i].real() * s[i];
  return d;
}

}  // namespace

std::pair<double, StateVector> post_measure_state(const StateVector& current,
                                                  const FeatureVector& sample,
                                                  int outcome) {
  if (current.dim() != sample.size())
    throw std::invalid_argument("state/sample dimension mismatch");
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("outcome must be 0 or 1");
  const double d = dot_with(current, sample);
  const double sign = outcome == 0 ? 1.0 : -1.0;
  const double p = std::clamp(0.5 * (1.0 + sign * d), 0.0, 1.0);
  if (p <= 0.0)
    throw std::invalid_argument("zero-probability branch requested");
  std::vector<double> v(sample.size());
  double n2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = current[i].real() + sign * sample[i];
    n2 += v[i] * v[i];
  }
  const double inv = 1.0 / std::sqrt(n2);
  for (double& x : v) x *= inv;
  return {p, StateVector::from_real(v)};
}

RecycleResult recycle_classify(const FeatureVector& test,
                               const TrainingSet& train,
                               const WalkGraph& graph, std::uint64_t seed,
                               int max_steps) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (graph.num_nodes() != static_cast<int>(train.size()))
    throw std::invalid_argument("graph does not cover the training set");
  std::vector<int> node_of_sample(train.size(), -1);
  for (int p = 0; p < graph.num_nodes(); ++p)
    node_of_sample[graph.nodes[p].sample] = p;
  for (int p : node_of_sample)
    if (p < 0)
      throw std::invalid_argument("graph does not cover the training set");
  Rng rng(seed);
  RecycleResult result;
  StateVector current = encode(test);
  int index = static_cast<int>(rng.uniform_index(train.size()));
  for (int step = 0; step < max_steps; ++step) {
    const FeatureVector& sample = train.states[index];
    const double p0 =
        std::clamp(0.5 * (1.0 + dot_with(current, sample)), 0.0, 1.0);
    const int outcome = rng.uniform01() < p0 ? 0 : 1;
    auto [prob, post] = post_measure_state(current, sample, outcome);
    result.steps.push_back({index, outcome, current, post});
    if (outcome == 0) {
      result.succeeded = true;
      result.label = train.labels[index];
      return result;
    }
    current = std::move(post);
    const int node = node_of_sample[index];
    const auto& next = graph.out[node];
    index = graph.nodes[next[rng.uniform_index(next.size())]].sample;
  }
  return result;  // max_steps exhausted, no label
}

RecycleResult recycle_classify(const FeatureVector& test,
                               const TrainingSet& train, std::uint64_t seed,
                               int max_steps) {
  const WalkGraph graph =
      build_graph(GraphKind::complete, train.labels, Arrangement::given);
  return recycle_classify(test, train, graph, seed, max_steps);
}

double exact_multistep_success(const FeatureVector& test, int true_label,
                               const TrainingSet& train, int steps) {
  if (steps != 1 && steps != 2)
    throw std::invalid_argument("exact mode supports 1 or 2 steps");
  if (train.class_labels.size() != 2)
    throw std::invalid_argument("exact recycling needs a two-class set");
  const std::size_t m = train.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  const StateVector start = encode(test);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double p0 =
        std::clamp(0.5 * (1.0 + dot_with(start, train.states[i])), 0.0, 1.0);
    const double hit = train.labels[i] == true_label ? 1.0 : 0.0;
    num += inv_m * p0 * hit;
    den += inv_m * p0;
    if (steps == 1) continue;
    const double fail = 1.0 - p0;
    if (fail <= 0.0) continue;  // zero-weight branch: rotation undefined
    const auto [p1, rotated] = post_measure_state(start, train.states[i], 1);
    // second comparison against the current node's out-neighbors (complete
    // graph: every j ≠ i, uniformly)
    const double inv_d = 1.0 / static_cast<double>(m - 1);
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double p0j = std::clamp(
          0.5 * (1.0 + dot_with(rotated, train.states[j])), 0.0, 1.0);
      const double hit_j = train.labels[j] == true_label ? 1.0 : 0.0;
      num += inv_m * fail * inv_d * p0j * hit_j;
      den += inv_m * fail * inv_d * p0j;
    }
  }
  if (den <= 0.0)
    throw VerifyError("no post-selection mass within the step budget");
  return num / den;
}

SchemeComparison scheme_comparison(const LabeledDataset& data, int class_a,
                                   int class_b, PreprocessMode mode) {
  if (class_a == class_b)
    throw std::invalid_argument("scheme comparison needs two distinct classes");
  const PreparedDataset prepared = prepare(data, mode);
  const PreparedDataset pair = select_classes(prepared, {class_a, class_b});
  const std::size_t n = pair.states.size();
  std::vector<int> per_class(2, 0);
  for (int y : pair.labels) ++per_class.at(y);
  for (int c = 0; c < 2; ++c)
    if (per_class[c] < 2)
      throw DataError("class " + pair.class_names[c] +
                      " has fewer than 2 samples");
  SchemeComparison cmp;
  cmp.class_names = pair.class_names;
  cmp.one_step.assign(2, 0.0);
  cmp.two_step.assign(2, 0.0);
  cmp.win_fraction.assign(2, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<FeatureVector> train_states;
    std::vector<int> train_labels;
    train_states.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == t) continue;
      train_states.push_back(pair.states[i]);
      train_labels.push_back(pair.labels[i]);
    }
    const TrainingSet train =
        TrainingSet::from(std::move(train_states), std::move(train_labels));
    const int y = pair.labels[t];
    const double s1 = exact_multistep_success(pair.states[t], y, train, 1);
    const double s2 = exact_multistep_success(pair.states[t], y, train, 2);
    cmp.one_step[y] += s1;
    cmp.two_step[y] += s2;
    if (s2 > s1) cmp.win_fraction[y] += 1.0;
  }
  for (int c = 0; c < 2; ++c) {
    cmp.one_step[c] /= per_class[c];
    cmp.two_step[c] /= per_class[c];
    cmp.win_fraction[c] /= per_class[c];
  }
  return cmp;
}

}  // namespace qdc
