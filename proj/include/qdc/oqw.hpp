#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qdc/encoding.hpp"
#include "qdc/rng.hpp"

namespace qdc {

// ---- small real matrices -------------------------------------------------
// All prepared states are real, so walk blocks and Kraus operators stay in
// real arithmetic (Hermitian = symmetric). Internal dimension k ≤ 8.

struct RealMat {
  int dim = 0;
  std::vector<double> a;  // row-major dim×dim

  static RealMat zero(int d) { return {d, std::vector<double>(d * d, 0.0)}; }
  static RealMat identity(int d);
  static RealMat outer(const std::vector<double>& v);  // |v⟩⟨v|

  double& at(int r, int c) { return a[r * dim + c]; }
  double at(int r, int c) const { return a[r * dim + c]; }
  double trace() const;
};

RealMat mat_mul(const RealMat& x, const RealMat& y);
RealMat mat_transpose(const RealMat& x);
/// max |x − y| entrywise.
double mat_max_diff(const RealMat& x, const RealMat& y);

// ---- graphs --------------------------------------------------------------

enum class GraphKind { cycle, complete, bipartite };
enum class Arrangement { clustered, interleaved, given };

GraphKind graph_kind_from_string(const std::string& name);
Arrangement arrangement_from_string(const std::string& name);

/// Directed labeled graph over training-sample nodes. Node p carries the
/// dataset index of its sample and that sample's class label.
struct WalkGraph {
  struct Node {
    int sample = 0;
    int label = 0;
  };
  std::vector<Node> nodes;
  std::vector<std::vector<int>> out;  // ascending out-neighbor lists

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int d_out(int i) const { return static_cast<int>(out[i].size()); }
};

/// Builds a graph over the given per-sample labels (dataset order).
/// Arrangement fixes the node order: clustered sorts samples into contiguous
/// label blocks (stable), interleaved round-robins the classes, given keeps
/// dataset order. Kinds: cycle (i → i±1), complete (all ordered pairs i≠j),
/// bipartite (exactly the cross-class ordered pairs).
WalkGraph build_graph(GraphKind kind, const std::vector<int>& labels,
                      Arrangement arrangement);

// ---- transitions ---------------------------------------------------------

/// reset: the hop replaces the internal state with the comparison state of
///   the destination (test embedded); one Kraus family per edge, one member
///   per internal basis state, each |ψ(j)⟩⟨b|/√d_out(i).
/// conditional: a single operator per edge that keeps the ancilla-0 branch
///   and overwrites the ancilla-1 branch with the destination's sample state
///   (test not embedded), scaled by 1/√d_out(i). Not trace-preserving in
///   general — the deviation is measured, never assumed away.
enum class KrausKind { reset, conditional };

KrausKind kraus_kind_from_string(const std::string& name);

struct EdgeOperator {
  int from = 0, to = 0;
  KrausKind kind = KrausKind::reset;
  double scale = 1.0;       // 1/√d_out(from)
  std::vector<double> psi;  // reset: ψ(to), dim k; conditional: sample state, dim k/2
};

struct TransitionSet {
  KrausKind kind = KrausKind::reset;
  int k = 0;  // internal dimension
  std::vector<std::vector<EdgeOperator>> incoming;  // per destination node
};

/// Operator for one edge. Reset kind requires the test vector (the
/// destination comparison state embeds it); conditional kind must not get one.
EdgeOperator kraus_for_edge(const WalkGraph& graph, int from, int to,
                            KrausKind kind,
                            const std::optional<FeatureVector>& test,
                            const FeatureVector& sample_to);

/// All edge operators for the graph. sample_states holds the unit-norm
/// training states indexed by dataset sample index.
TransitionSet make_transitions(const WalkGraph& graph,
                               const std::vector<FeatureVector>& sample_states,
                               KrausKind kind,
                               const std::optional<FeatureVector>& test);

/// Materializes the edge's Kraus family as explicit matrices (reset: one per
/// internal basis state; conditional: a single operator).
std::vector<RealMat> kraus_family(const EdgeOperator& op, int k);

/// max |Σ_{j ∈ out(node)} Σ_b K†K − I| — 0 within tolerance for reset kind,
/// measured and surfaced for conditional kind.
double completeness_deviation(const TransitionSet& transitions, int node);

// ---- walk state and evolution --------------------------------------------

/// Block-diagonal mixed state: one k×k positive block per node position.
struct WalkState {
  int k = 0;
  std::vector<RealMat> blocks;  // per node

  double total_trace() const;
};

/// Point mass at `node` with internal state |psi⟩⟨psi|.
WalkState initial_state_at(const WalkGraph& graph, int node,
                           const std::vector<double>& psi);

/// One channel application: block_j' = Σ_{i→j} Σ_b K block_i K†. For the
/// conditional kind the result is renormalized to the incoming trace and the
/// pre-renormalization deficit (|trace_out − trace_in|) is written to
/// *deficit when given; the reset kind preserves trace (deficit 0).
WalkState walk_step(const WalkState& state, const WalkGraph& graph,
                    const TransitionSet& transitions,
                    double* deficit = nullptr);

/// Block traces (clamped at 0); sums to the total trace.
std::vector<double> position_marginal(const WalkState& state);

/// Steps 1..T of the would-be classification outcome: at each step, every
/// block goes through the ancilla Hadamard + outcome-0 post-selection and the
/// per-class success masses are accumulated and conditioned on success.
/// The walk itself is not collapsed by this read-out.
struct SuccessCurve {
  std::vector<std::vector<double>> per_class;  // T × num_classes conditionals
  std::vector<double> true_class;              // conditional of the true class
  std::vector<double> deficits;                // per-step (conditional kind)
};

SuccessCurve success_curve(const WalkGraph& graph,
                           const std::vector<FeatureVector>& sample_states,
                           int num_classes, const FeatureVector& test,
                           int true_class, KrausKind kind, int steps,
                           int start_node);

/// Ancilla-0 success mass of one internal block:
/// ½(tr b00 + tr b11 + tr b01 + tr b10) over the k/2-dim feature quadrants.
double block_success_mass(const RealMat& block);

/// Batch curves for the reset kind over a whole dataset: entry [t][c] is the
/// mean, over test points of class c, of the conditional probability of class
/// c at step t+1, with each test's walk started at start_node. Uses the exact
/// classical-marginal reduction of the reset walk (verified against the block
/// evolution by the test suite).
std::vector<std::vector<double>> class_mean_curves(
    const WalkGraph& graph, const std::vector<FeatureVector>& sample_states,
    const std::vector<int>& sample_labels, int num_classes, int steps,
    int start_node);

/// Classical random-walk marginal iteration (probability 1/d_out per edge),
/// used as the independent oracle for the reset walk's position marginal.
std::vector<double> classical_marginal_step(const WalkGraph& graph,
                                            const std::vector<double>& m);

/// Smallest t with t ≥ 1/(1 − cos(2π/n)): relaxation-time scale of the
/// n-cycle's classical walk.
int cycle_mixing_horizon(int n);

// ---- distributed protocol ------------------------------------------------

/// One participant in the distributed protocol. An agent privately holds its
/// share of the training samples; the driver can only ask it to imprint a
/// traveling state and, at measurement time, to announce the label of the
/// sample it last used.
class Agent {
 public:
  Agent(int id, std::vector<FeatureVector> states, std::vector<int> labels);

  int id() const { return id_; }
  std::size_t sample_count() const { return states_.size(); }

  /// Applies the agent's hop operator: picks one of its samples (uniformly,
  /// re-drawn each visit) and overwrites the ancilla-1 branch with that
  /// sample's state. The operator's |1⟩-branch factor is Σ_f ψ[f], so it is
  /// not norm-preserving; the branch is re-balanced back to equal weight and
  /// the deviation ||σ| − 1| is returned as the hop's normalization deficit.
  double imprint(std::vector<double>& branch1, Rng& rng);

  /// Label of the sample used by the most recent imprint.
  int announce_label() const;

 private:
  int id_ = 0;
  std::vector<FeatureVector> states_;
  std::vector<int> labels_;
  int last_ = -1;
};

/// Splits a prepared dataset into agents along the given index partition
/// (must cover every sample exactly once).
std::vector<Agent> make_agents(const std::vector<FeatureVector>& states,
                               const std::vector<int>& labels,
                               const std::vector<std::vector<int>>& partition);

struct StopRule {
  enum class Kind { fixed_hops, geometric } kind = Kind::fixed_hops;
  int hops = 1;             // fixed_hops: measure after this many hops
  double stop_prob = 0.0;   // geometric: per-hop stopping probability
  int max_hops = 1000000;   // geometric safety cap per attempt
};

struct DistributedTranscript {
  std::vector<int> hop_agents;   // acting agent id per hop, all attempts
  std::vector<double> deficits;  // per-hop normalization deficits
  int attempts = 0;
  int restarts = 0;
  bool succeeded = false;
  std::optional<int> label;
};

/// Runs the distributed protocol: the traveling state (|0⟩ψ_test + |1⟩|1⟩)/√2
/// is handed to the first graph node's agent, each hop applies that agent's
/// conditional operator, and the stop rule triggers the final Hadamard +
/// measurement. Post-selection failure restarts from the first agent, up to
/// max_restarts. graph nodes index into `agents`.
DistributedTranscript run_distributed(std::vector<Agent>& agents,
                                      const WalkGraph& graph,
                                      const FeatureVector& test,
                                      std::uint64_t seed, const StopRule& stop,
                                      int max_restarts = 1000);

}  // namespace qdc
