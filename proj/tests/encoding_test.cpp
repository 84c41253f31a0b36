#include "qdc/encoding.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qdc/classifier.hpp"
#include "qdc/errors.hpp"
#include "test_util.hpp"

using namespace qdc;
using qdc::testutil::max_amp_diff;
using qdc::testutil::random_unit_vector;

namespace {
constexpr double kPi = std::numbers::pi;

Circuit drop_last_gate(Circuit c) {
  c.gates.pop_back();
  return c;
}
}  // namespace

TEST_CASE("normalize mode scales vectors to unit norm") {
  const auto out = preprocess({{3.0, 4.0}}, PreprocessMode::normalize);
  CHECK(out[0][0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(out[0][1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("two symmetric samples standardize to unit z-scores") {
  // features all vary; the affine step maps feature 0 of {1,−1} to {+1,−1}
  const std::vector<FeatureVector> raw{{1.0, 2.0}, {-1.0, 4.0}};
  for (const auto mode :
       {PreprocessMode::standardize, PreprocessMode::rescale}) {
    const Preprocessor p = Preprocessor::fit(raw, mode);
    CHECK(p.affine(raw[0])[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.affine(raw[1])[0] == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero vectors are rejected with their index") {
  try {
    preprocess({{1.0, 1.0}, {0.0, 0.0}}, PreprocessMode::normalize);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
}

TEST_CASE("constant features are rejected with the feature index") {
  for (const auto mode :
       {PreprocessMode::standardize, PreprocessMode::rescale}) {
    try {
      preprocess({{1.0, 2.0}, {2.0, 2.0}}, mode);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("feature 1") != std::string::npos);
    }
  }
}

TEST_CASE("encoding writes features straight into amplitudes") {
  const StateVector s = encode({0.6, 0.8});
  CHECK(s.num_qubits() == 1);
  CHECK(s[0].real() == 0.6);  // exact round-trip
  CHECK(s[1].real() == 0.8);
  CHECK(max_amp_diff(encode({1.0, 0.0, 0.0, 0.0}), StateVector::basis(2, 0)) ==
        0.0);
  const StateVector uniform = encode({0.5, 0.5, 0.5, 0.5});
  for (std::size_t i = 0; i < 4; ++i) CHECK(uniform[i].real() == 0.5);
  CHECK_THROWS_AS(encode({0.6, 0.9}), std::invalid_argument);
  CHECK_THROWS_AS(encode({1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("comparison states put the ancilla leftmost") {
  const double s2 = 1.0 / std::sqrt(2.0);
  const StateVector same = comparison_state({1.0, 0.0}, {1.0, 0.0});
  CHECK(same[0].real() == doctest::Approx(s2).epsilon(1e-12));
  CHECK(same[2].real() == doctest::Approx(s2).epsilon(1e-12));
  const StateVector cross = comparison_state({1.0, 0.0}, {0.0, 1.0});
  CHECK(cross[0].real() == doctest::Approx(s2).epsilon(1e-12));
  CHECK(cross[3].real() == doctest::Approx(s2).epsilon(1e-12));
  const auto branches = measure_qubit(cross, 0);
  CHECK(branches[0].probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(branches[1].probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(comparison_state({1.0, 0.0}, {1.0, 0.0, 0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("preparation angles satisfy their defining identities") {
  const auto at_zero = prep_angles(0.0, 0.0);
  CHECK(at_zero.alpha1 == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(at_zero.alpha2 == doctest::Approx(-kPi / 4).epsilon(1e-15));
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double phi = (rng.uniform01() - 0.5) * 2 * kPi;
    const double phi_m = (rng.uniform01() - 0.5) * 2 * kPi;
    const auto [a1, a2] = prep_angles(phi, phi_m);
    CHECK(a1 + a2 == doctest::Approx(phi).epsilon(1e-12));
    CHECK(kPi / 2 - a1 + a2 == doctest::Approx(phi_m).epsilon(1e-12));
  }
}

TEST_CASE("2-feature circuit prepares the comparison state") {
  SUBCASE("equal angles factorize before the final interference") {
    const double phi = 0.6;
    const Circuit c = prep_circuit_2f(phi, phi);
    const StateVector before = circuit_output(drop_last_gate(c));
    const double s2 = 1.0 / std::sqrt(2.0);
    CHECK(before[0].real() == doctest::Approx(s2 * std::cos(phi)).epsilon(1e-12));
    CHECK(before[1].real() == doctest::Approx(s2 * std::sin(phi)).epsilon(1e-12));
    CHECK(before[2].real() == doctest::Approx(s2 * std::cos(phi)).epsilon(1e-12));
    CHECK(before[3].real() == doctest::Approx(s2 * std::sin(phi)).epsilon(1e-12));
  }
  SUBCASE("random angle pairs hit the declared target") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
      const double phi = (rng.uniform01() - 0.5) * 2 * kPi;
      const double phi_m = (rng.uniform01() - 0.5) * 2 * kPi;
      const Circuit c = prep_circuit_2f(phi, phi_m);
      CHECK(circuit_residual(c) < 1e-10);
      // dropping the final interference leaves the comparison state itself
      const StateVector before = circuit_output(drop_last_gate(c));
      const StateVector comp = comparison_state(
          {std::cos(phi), std::sin(phi)}, {std::cos(phi_m), std::sin(phi_m)});
      CHECK(max_amp_diff(before, comp) < 1e-10);
    }
  }
  SUBCASE("gate census matches the two-qubit template") {
    const GateCensus c = census(prep_circuit_2f(0.3, 1.1));
    CHECK(c.rotations == 2);
    CHECK(c.cnots == 1);
    CHECK(c.hadamards == 2);
  }
}

TEST_CASE("4-feature circuit prepares the comparison state") {
  SUBCASE("identical basis pair degenerates to the bare ancilla superposition") {
    const FeatureVector e0{1.0, 0.0, 0.0, 0.0};
    const Circuit c = prep_circuit_4f(e0, e0);
    const StateVector before = circuit_output(drop_last_gate(c));
    CHECK(max_amp_diff(before, comparison_state(e0, e0)) < 1e-10);
    // full circuit: the final interference maps it onto |000⟩
    CHECK(max_amp_diff(circuit_output(c), StateVector::basis(3, 0)) < 1e-10);
  }
  SUBCASE("random pairs hit the declared target and the comparison state") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const FeatureVector t = random_unit_vector(rng, 4);
      const FeatureVector s = random_unit_vector(rng, 4);
      const Circuit c = prep_circuit_4f(t, s);
      CHECK(circuit_residual(c) < 1e-10);
      const StateVector before = circuit_output(drop_last_gate(c));
      CHECK(max_amp_diff(before, comparison_state(t, s)) < 1e-10);
    }
  }
  SUBCASE("the cascade on the last qubit is the four-rotation/three-CNOT block") {
    Rng rng(41);
    const Circuit c = prep_circuit_4f(random_unit_vector(rng, 4),
                                      random_unit_vector(rng, 4));
    REQUIRE(c.gates.size() == 12);
    // gates 4..10: Ry, CNOT(0→2), Ry, CNOT(1→2), Ry, CNOT(0→2), Ry
    const int controls[] = {0, 1, 0};
    int ctrl = 0;
    for (int g = 4; g <= 10; ++g) {
      if (g % 2 == 0) {
        CHECK(c.gates[g].kind == Gate::Kind::ry);
        CHECK(c.gates[g].target == 2);
      } else {
        CHECK(c.gates[g].kind == Gate::Kind::cnot);
        CHECK(c.gates[g].target == 2);
        CHECK(c.gates[g].control == controls[ctrl++]);
      }
    }
    const GateCensus counts = census(c);
    CHECK(counts.rotations == 6);
    CHECK(counts.cnots == 4);
    CHECK(counts.hadamards == 2);
  }
}

TEST_CASE("kernel classifier reproduces worked examples") {
  const KernelDecision self =
      kernel_classify({1.0, 0.0}, {{{1.0, 0.0}, 1}});
  CHECK(self.label == 1);
  CHECK(self.score == doctest::Approx(1.0).epsilon(1e-12));

  const KernelDecision two = kernel_classify(
      {0.6, 0.8}, {{{1.0, 0.0}, 1}, {{0.0, 1.0}, -1}});
  CHECK(two.label == -1);
  CHECK(two.score == doctest::Approx(0.9 - 0.95).epsilon(1e-9));

  const double s2 = 1.0 / std::sqrt(2.0);
  const KernelDecision tie = kernel_classify(
      {s2, s2}, {{{1.0, 0.0}, 1}, {{0.0, 1.0}, -1}});
  CHECK(tie.tie);
  CHECK(tie.label == 0);

  CHECK_THROWS_AS(kernel_classify({1.0, 0.0}, {}), std::invalid_argument);
}

TEST_CASE("kernel sign agrees with the quantum conditional argmax") {
  Rng rng(77);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<FeatureVector> states;
    std::vector<int> labels;
    std::vector<std::pair<FeatureVector, int>> kernel_train;
    for (int i = 0; i < 6; ++i) {
      const FeatureVector v = random_unit_vector(rng, 2);
      const int y = i < 3 ? 1 : -1;  // balanced
      states.push_back(v);
      labels.push_back(y);
      kernel_train.push_back({v, y});
    }
    const FeatureVector test = random_unit_vector(rng, 2);
    const KernelDecision k = kernel_classify(test, kernel_train);
    if (k.tie) continue;
    ++checked;
    const TrainingSet train = TrainingSet::from(states, labels);
    const ClassDistribution dist = class_distribution(test, train);
    const int best = train.class_labels[argmax_class(dist)];
    CHECK(best == k.label);
  }
  CHECK(checked > 90);
}
