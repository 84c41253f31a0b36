#include "qdc/oqw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qdc/errors.hpp"
#include "qdc/qstate.hpp"

namespace qdc {

// ---- matrices ------------------------------------------------------------

RealMat RealMat::identity(int d) {
  RealMat m = zero(d);
  for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
  return m;
}

RealMat RealMat::outer(const std::vector<double>& v) {
  const int d = static_cast<int>(v.size());
  RealMat m = zero(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m.at(r, c) = v[r] * v[c];
  return m;
}

double RealMat::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim; ++i) t += at(i, i);
  return t;
}

RealMat mat_mul(const RealMat& x, const RealMat& y) {
  if (x.dim != y.dim) throw std::invalid_argument("matrix dimension mismatch");
  RealMat out = RealMat::zero(x.dim);
  for (int r = 0; r < x.dim; ++r)
    for (int k = 0; k < x.dim; ++k) {
      const double v = x.at(r, k);
      if (v == 0.0) continue;
      for (int c = 0; c < x.dim; ++c) out.at(r, c) += v * y.at(k, c);
    }
  return out;
}

RealMat mat_transpose(const RealMat& x) {
  RealMat out = RealMat::zero(x.dim);
  for (int r = 0; r < x.dim; ++r)
    for (int c = 0; c < x.dim; ++c) out.at(c, r) = x.at(r, c);
  return out;
}

double mat_max_diff(const RealMat& x, const RealMat& y) {
  if (x.dim != y.dim) throw std::invalid_argument("matrix dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i)
    worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
  return worst;
}

// ---- graphs --------------------------------------------------------------

GraphKind graph_kind_from_string(const std::string& name) {
  if (name == "cycle") return GraphKind::cycle;
  if (name == "complete") return GraphKind::complete;
  if (name == "bipartite") return GraphKind::bipartite;
  throw std::invalid_argument("unknown graph kind: " + name);
}

Arrangement arrangement_from_string(const std::string& name) {
  if (name == "clustered") return Arrangement::clustered;
  if (name == "interleaved") return Arrangement::interleaved;
  if (name == "given") return Arrangement::given;
  throw std::invalid_argument("unknown arrangement: " + name);
}

KrausKind kraus_kind_from_string(const std::string& name) {
  if (name == "reset") return KrausKind::reset;
  if (name == "conditional") return KrausKind::conditional;
  throw std::invalid_argument("unknown transition kind: " + name);
}

namespace {

std::vector<int> node_order(const std::vector<int>& labels,
                            Arrangement arrangement) {
  const int n = static_cast<int>(labels.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (arrangement == Arrangement::given) return perm;
  if (arrangement == Arrangement::clustered) {
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return labels[a] < labels[b]; });
    return perm;
  }
  // interleaved: round-robin over the classes in ascending label order
  std::vector<int> distinct(labels);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  std::vector<std::vector<int>> by_class(distinct.size());
  for (int i = 0; i < n; ++i) {
    const auto c = std::lower_bound(distinct.begin(), distinct.end(),
                                    labels[i]) -
                   distinct.begin();
    by_class[c].push_back(i);
  }
  std::vector<int> out;
  out.reserve(n);
  for (std::size_t round = 0; out.size() < static_cast<std::size_t>(n);
       ++round)
    for (const auto& cls : by_class)
      if (round < cls.size()) out.push_back(cls[round]);
  return out;
}

}  // namespace

WalkGraph build_graph(GraphKind kind, const std::vector<int>& labels,
                      Arrangement arrangement) {
  const int n = static_cast<int>(labels.size());
  if (n < 2) throw std::invalid_argument("graph needs at least 2 nodes");
  const std::vector<int> perm = node_order(labels, arrangement);
  WalkGraph g;
  g.nodes.reserve(n);
  for (int p = 0; p < n; ++p)
    g.nodes.push_back({perm[p], labels[perm[p]]});
  g.out.assign(n, {});
  switch (kind) {
    case GraphKind::cycle:
      for (int i = 0; i < n; ++i) {
        g.out[i] = {(i + n - 1) % n, (i + 1) % n};
        std::sort(g.out[i].begin(), g.out[i].end());
        g.out[i].erase(std::unique(g.out[i].begin(), g.out[i].end()),
                       g.out[i].end());
      }
      break;
    case GraphKind::complete:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (j != i) g.out[i].push_back(j);
      break;
    case GraphKind::bipartite: {
      bool mixed = false;
      for (int i = 1; i < n; ++i) mixed |= labels[i] != labels[0];
      if (!mixed)
        throw std::invalid_argument(
            "bipartite graph requires at least two classes");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (g.nodes[i].label != g.nodes[j].label) g.out[i].push_back(j);
      break;
    }
  }
  for (int i = 0; i < n; ++i)
    if (g.out[i].empty())
      throw std::invalid_argument("node " + std::to_string(i) +
                                  " has no outgoing edges");
  return g;
}

// ---- transitions ---------------------------------------------------------

EdgeOperator kraus_for_edge(const WalkGraph& graph, int from, int to,
                            KrausKind kind,
                            const std::optional<FeatureVector>& test,
                            const FeatureVector& sample_to) {
  if (from < 0 || from >= graph.num_nodes() || to < 0 ||
      to >= graph.num_nodes() ||
      !std::binary_search(graph.out[from].begin(), graph.out[from].end(), to))
    throw std::invalid_argument("edge (" + std::to_string(from) + "," +
                                std::to_string(to) + ") is not in the graph");
  EdgeOperator op;
  op.from = from;
  op.to = to;
  op.kind = kind;
  op.scale = 1.0 / std::sqrt(static_cast<double>(graph.d_out(from)));
  if (kind == KrausKind::reset) {
    if (!test)
      throw std::invalid_argument(
          "reset transitions need the test vector (comparison state)");
    const StateVector comp = comparison_state(*test, sample_to);
    op.psi.reserve(comp.dim());
    for (const auto& a : comp.amplitudes()) op.psi.push_back(a.real());
  } else {
    encode(sample_to);  // validates unit norm
    op.psi = sample_to;
  }
  return op;
}

TransitionSet make_transitions(const WalkGraph& graph,
                               const std::vector<FeatureVector>& sample_states,
                               KrausKind kind,
                               const std::optional<FeatureVector>& test) {
  TransitionSet ts;
  ts.kind = kind;
  ts.incoming.assign(graph.num_nodes(), {});
  for (int i = 0; i < graph.num_nodes(); ++i) {
    for (int j : graph.out[i]) {
      const FeatureVector& sample = sample_states.at(graph.nodes[j].sample);
      EdgeOperator op = kraus_for_edge(graph, i, j, kind, test, sample);
      ts.k = kind == KrausKind::reset
                 ? static_cast<int>(op.psi.size())
                 : static_cast<int>(op.psi.size()) * 2;
      ts.incoming[j].push_back(std::move(op));
    }
  }
  return ts;
}

std::vector<RealMat> kraus_family(const EdgeOperator& op, int k) {
  std::vector<RealMat> family;
  if (op.kind == KrausKind::reset) {
    if (static_cast<int>(op.psi.size()) != k)
      throw std::invalid_argument("reset operator dimension mismatch");
    for (int b = 0; b < k; ++b) {
      RealMat m = RealMat::zero(k);
      for (int r = 0; r < k; ++r) m.at(r, b) = op.scale * op.psi[r];
      family.push_back(std::move(m));
    }
    return family;
  }
  const int half = k / 2;
  if (static_cast<int>(op.psi.size()) != half)
    throw std::invalid_argument("conditional operator dimension mismatch");
  RealMat m = RealMat::zero(k);
  for (int r = 0; r < half; ++r) m.at(r, r) = op.scale;  // keep |0⟩ branch
  for (int r = 0; r < half; ++r)
    for (int c = 0; c < half; ++c)
      m.at(half + r, half + c) = op.scale * op.psi[r];  // |1⟩ ← ψ_j
  family.push_back(std::move(m));
  return family;
}

double completeness_deviation(const TransitionSet& transitions, int node) {
  RealMat sum = RealMat::zero(transitions.k);
  for (const auto& ops : transitions.incoming)
    for (const EdgeOperator& op : ops) {
      if (op.from != node) continue;
      for (const RealMat& kmat : kraus_family(op, transitions.k)) {
        const RealMat prod = mat_mul(mat_transpose(kmat), kmat);
        for (std::size_t i = 0; i < sum.a.size(); ++i) sum.a[i] += prod.a[i];
      }
    }
  return mat_max_diff(sum, RealMat::identity(transitions.k));
}

// ---- walk evolution ------------------------------------------------------

double WalkState::total_trace() const {
  double t = 0.0;
  for (const RealMat& b : blocks) t += b.trace();
  return t;
}

WalkState initial_state_at(const WalkGraph& graph, int node,
                           const std::vector<double>& psi) {
  if (node < 0 || node >= graph.num_nodes())
    throw std::invalid_argument("start node out of range");
  WalkState state;
  state.k = static_cast<int>(psi.size());
  state.blocks.assign(graph.num_nodes(), RealMat::zero(state.k));
  state.blocks[node] = RealMat::outer(psi);
  return state;
}

WalkState walk_step(const WalkState& state, const WalkGraph& graph,
                    const TransitionSet& transitions, double* deficit) {
  if (static_cast<int>(transitions.incoming.size()) != graph.num_nodes())
    throw std::invalid_argument("transition set does not match graph");
  if (transitions.k != state.k)
    throw std::invalid_argument("transition/state dimension mismatch");
  std::size_t total_ops = 0, total_edges = 0;
  for (const auto& ops : transitions.incoming) total_ops += ops.size();
  for (const auto& out_list : graph.out) total_edges += out_list.size();
  if (total_ops != total_edges)
    throw VerifyError("transition set does not cover the graph's edges");
  WalkState out;
  out.k = state.k;
  out.blocks.assign(graph.num_nodes(), RealMat::zero(state.k));
  for (int j = 0; j < graph.num_nodes(); ++j) {
    for (const EdgeOperator& op : transitions.incoming[j]) {
      const RealMat& src = state.blocks[op.from];
      if (op.kind == KrausKind::reset) {
        // Σ_b K ρ K† collapses to (tr ρ / d_out) |ψ(j)⟩⟨ψ(j)|.
        const double w = op.scale * op.scale * src.trace();
        if (w == 0.0) continue;
        for (int r = 0; r < state.k; ++r)
          for (int c = 0; c < state.k; ++c)
            out.blocks[j].at(r, c) += w * op.psi[r] * op.psi[c];
      } else {
        const RealMat kmat = kraus_family(op, state.k).front();
        const RealMat t = mat_mul(mat_mul(kmat, src), mat_transpose(kmat));
        for (std::size_t i = 0; i < t.a.size(); ++i)
          out.blocks[j].a[i] += t.a[i];
      }
    }
  }
  const double tr_in = state.total_trace();
  const double tr_out = out.total_trace();
  if (deficit) *deficit = std::abs(tr_out - tr_in);
  if (transitions.kind == KrausKind::conditional) {
    if (tr_out <= 0.0) throw VerifyError("walk state vanished");
    const double fix = tr_in / tr_out;
    for (RealMat& b : out.blocks)
      for (double& v : b.a) v *= fix;
  }
  return out;
}

std::vector<double> position_marginal(const WalkState& state) {
  std::vector<double> m;
  m.reserve(state.blocks.size());
  for (const RealMat& b : state.blocks) m.push_back(std::max(0.0, b.trace()));
  return m;
}

double block_success_mass(const RealMat& block) {
  const int half = block.dim / 2;
  double s = 0.0;
  for (int f = 0; f < half; ++f)
    s += block.at(f, f) + block.at(half + f, half + f) +
         block.at(f, half + f) + block.at(half + f, f);
  return 0.5 * s;
}

SuccessCurve success_curve(const WalkGraph& graph,
                           const std::vector<FeatureVector>& sample_states,
                           int num_classes, const FeatureVector& test,
                           int true_class, KrausKind kind, int steps,
                           int start_node) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  const TransitionSet transitions =
      make_transitions(graph, sample_states, kind, test);
  const StateVector comp = comparison_state(
      test, sample_states.at(graph.nodes[start_node].sample));
  std::vector<double> psi0;
  psi0.reserve(comp.dim());
  for (const auto& a : comp.amplitudes()) psi0.push_back(a.real());
  WalkState state = initial_state_at(graph, start_node, psi0);
  SuccessCurve curve;
  for (int t = 0; t < steps; ++t) {
    double deficit = 0.0;
    state = walk_step(state, graph, transitions, &deficit);
    curve.deficits.push_back(deficit);
    std::vector<double> joint(num_classes, 0.0);
    for (int p = 0; p < graph.num_nodes(); ++p)
      joint.at(graph.nodes[p].label) +=
          std::max(0.0, block_success_mass(state.blocks[p]));
    const double p0 = std::accumulate(joint.begin(), joint.end(), 0.0);
    if (p0 <= 0.0)
      throw VerifyError("no success mass at step " + std::to_string(t + 1));
    for (double& v : joint) v /= p0;
    curve.true_class.push_back(joint.at(true_class));
    curve.per_class.push_back(std::move(joint));
  }
  return curve;
}

std::vector<double> classical_marginal_step(const WalkGraph& graph,
                                            const std::vector<double>& m) {
  std::vector<double> out(m.size(), 0.0);
  for (int i = 0; i < graph.num_nodes(); ++i) {
    if (m[i] == 0.0) continue;
    const double w = m[i] / graph.d_out(i);
    for (int j : graph.out[i]) out[j] += w;
  }
  return out;
}

std::vector<std::vector<double>> class_mean_curves(
    const WalkGraph& graph, const std::vector<FeatureVector>& sample_states,
    const std::vector<int>& sample_labels, int num_classes, int steps,
    int start_node) {
  const int n = graph.num_nodes();
  const int tests = static_cast<int>(sample_states.size());
  // success matrix: test i vs the sample at node p
  std::vector<std::vector<double>> smat(tests, std::vector<double>(n));
  for (int i = 0; i < tests; ++i)
    for (int p = 0; p < n; ++p) {
      const FeatureVector& a = sample_states[i];
      const FeatureVector& b = sample_states[graph.nodes[p].sample];
      double dot = 0.0;
      for (std::size_t f = 0; f < a.size(); ++f) dot += a[f] * b[f];
      smat[i][p] = 0.5 * (1.0 + dot);
    }
  std::vector<int> class_count(num_classes, 0);
  for (int y : sample_labels) ++class_count.at(y);
  std::vector<double> m(n, 0.0);
  m[start_node] = 1.0;
  std::vector<std::vector<double>> curves(
      steps, std::vector<double>(num_classes, 0.0));
  for (int t = 0; t < steps; ++t) {
    m = classical_marginal_step(graph, m);
    for (int i = 0; i < tests; ++i) {
      std::vector<double> joint(num_classes, 0.0);
      const auto& row = smat[i];
      for (int p = 0; p < n; ++p) joint[graph.nodes[p].label] += m[p] * row[p];
      const double p0 = std::accumulate(joint.begin(), joint.end(), 0.0);
      if (p0 <= 0.0)
        throw VerifyError("no success mass at step " + std::to_string(t + 1));
      curves[t][sample_labels[i]] += joint[sample_labels[i]] / p0;
    }
    for (int c = 0; c < num_classes; ++c) curves[t][c] /= class_count[c];
  }
  return curves;
}

int cycle_mixing_horizon(int n) {
  // 1 − cos(x) = 2 sin²(x/2), which avoids cancellation near x = 0; the
  // small slack keeps round-off in π/n from inflating an exact bound
  const double s = std::sin(std::numbers::pi / n);
  const double gap = 2.0 * s * s;
  return static_cast<int>(std::ceil(1.0 / gap - 1e-9));
}

// ---- distributed protocol ------------------------------------------------

Agent::Agent(int id, std::vector<FeatureVector> states,
             std::vector<int> labels)
    : id_(id), states_(std::move(states)), labels_(std::move(labels)) {
  if (states_.empty()) throw std::invalid_argument("agent with no samples");
  if (states_.size() != labels_.size())
    throw std::invalid_argument("agent state/label count mismatch");
  for (const auto& s : states_) encode(s);  // validates unit norm
}

double Agent::imprint(std::vector<double>& branch1, Rng& rng) {
  if (branch1.size() != states_.front().size())
    throw std::invalid_argument("traveling state dimension mismatch");
  const std::size_t pick = rng.uniform_index(states_.size());
  // The hop operator's ancilla-1 factor Σ_f |ψ⟩⟨f| maps the branch to
  // (Σ_f v_f) ψ; perfect balance needs |Σ_f v_f| = 1.
  double sigma = 0.0;
  for (double v : branch1) sigma += v;
  const double deficit = std::abs(std::abs(sigma) - 1.0);
  branch1 = states_[pick];
  last_ = static_cast<int>(pick);
  return deficit;
}

int Agent::announce_label() const {
  if (last_ < 0) throw std::logic_error("agent has not acted yet");
  return labels_[last_];
}

std::vector<Agent> make_agents(const std::vector<FeatureVector>& states,
                               const std::vector<int>& labels,
                               const std::vector<std::vector<int>>& partition) {
  std::vector<char> seen(states.size(), 0);
  std::vector<Agent> agents;
  for (std::size_t a = 0; a < partition.size(); ++a) {
    std::vector<FeatureVector> own_states;
    std::vector<int> own_labels;
    for (int idx : partition[a]) {
      if (idx < 0 || idx >= static_cast<int>(states.size()))
        throw std::invalid_argument("partition index out of range");
      if (seen[idx])
        throw std::invalid_argument("partition repeats sample " +
                                    std::to_string(idx));
      seen[idx] = 1;
      own_states.push_back(states[idx]);
      own_labels.push_back(labels[idx]);
    }
    agents.emplace_back(static_cast<int>(a), std::move(own_states),
                        std::move(own_labels));
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw std::invalid_argument("partition misses sample " +
                                  std::to_string(i));
  return agents;
}

DistributedTranscript run_distributed(std::vector<Agent>& agents,
                                      const WalkGraph& graph,
                                      const FeatureVector& test,
                                      std::uint64_t seed, const StopRule& stop,
                                      int max_restarts) {
  if (agents.empty()) throw std::invalid_argument("no agents");
  if (graph.num_nodes() != static_cast<int>(agents.size()))
    throw std::invalid_argument("agent graph size mismatch");
  if (stop.kind == StopRule::Kind::fixed_hops && stop.hops < 1)
    throw std::invalid_argument("stop rule needs at least one hop");
  encode(test);  // validates unit norm
  Rng rng(seed);
  DistributedTranscript tr;
  for (int attempt = 0; attempt <= max_restarts; ++attempt) {
    ++tr.attempts;
    // traveling state (|0⟩ψ_test + |1⟩|1⟩)/√2, tracked by its two branches;
    // the |0⟩ branch stays ψ_test throughout.
    std::vector<double> branch1(test.size(), 0.0);
    branch1[1] = 1.0;
    int current = 0;  // handed to the first agent
    int hops = 0;
    bool measure_now = false;
    while (!measure_now) {
      tr.deficits.push_back(agents[current].imprint(branch1, rng));
      tr.hop_agents.push_back(agents[current].id());
      ++hops;
      if (stop.kind == StopRule::Kind::fixed_hops) {
        measure_now = hops >= stop.hops;
      } else {
        measure_now = rng.bernoulli(stop.stop_prob);
        if (!measure_now && hops >= stop.max_hops)
          throw VerifyError("stop condition not reached within " +
                            std::to_string(stop.max_hops) + " hops");
      }
      if (!measure_now) {
        const auto& next = graph.out[current];
        current = next[rng.uniform_index(next.size())];
      }
    }
    double dot = 0.0;
    for (std::size_t f = 0; f < test.size(); ++f) dot += test[f] * branch1[f];
    const double p0 = std::clamp(0.5 * (1.0 + dot), 0.0, 1.0);
    if (rng.uniform01() < p0) {
      tr.succeeded = true;
      tr.restarts = attempt;
      tr.label = agents[current].announce_label();
      return tr;
    }
  }
  tr.restarts = max_restarts;  // exhausted: every attempt failed
  return tr;
}

}  // namespace qdc
