#include "qdc/classifier.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "qdc/errors.hpp"
#include "test_util.hpp"

using namespace qdc;
using qdc::testutil::random_unit_vector;

namespace {

double dot(const FeatureVector& a, const FeatureVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool same_transcript(const ClassificationTranscript& a,
                     const ClassificationTranscript& b) {
  return a.attempts == b.attempts && a.sampled_indices == b.sampled_indices &&
         a.succeeded == b.succeeded && a.final_label == b.final_label;
}

}  // namespace

TEST_CASE("success probability spans identical, orthogonal, antipodal pairs") {
  CHECK(success_probability({1.0, 0.0}, {1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(success_probability({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(0.5));
  CHECK(success_probability({1.0, 0.0}, {-1.0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("success probability equals one minus a quarter squared distance") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = trial % 2 == 0 ? 2 : 4;
    const FeatureVector t = random_unit_vector(rng, dim);
    const FeatureVector s = random_unit_vector(rng, dim);
    double d2 = 0;
    for (std::size_t i = 0; i < dim; ++i) d2 += (t[i] - s[i]) * (t[i] - s[i]);
    CHECK(std::abs(success_probability(t, s) - (1.0 - d2 / 4.0)) < 1e-12);
  }
}

TEST_CASE("success probability is monotone in the inner product") {
  Rng rng(6);
  const FeatureVector t = random_unit_vector(rng, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const FeatureVector a = random_unit_vector(rng, 4);
    const FeatureVector b = random_unit_vector(rng, 4);
    if (dot(t, a) >= dot(t, b)) {
      CHECK(success_probability(t, a) >= success_probability(t, b) - 1e-15);
    } else {
      CHECK(success_probability(t, b) >= success_probability(t, a) - 1e-15);
    }
  }
}

TEST_CASE("class distributions reproduce the worked channel examples") {
  const FeatureVector t{1.0, 0.0};
  SUBCASE("a single coincident sample") {
    const TrainingSet train = TrainingSet::from({{1.0, 0.0}}, {0});
    const ClassDistribution d = class_distribution(t, train);
    REQUIRE(d.joint.size() == 1);
    CHECK(d.joint[0] == doctest::Approx(1.0));
    CHECK(d.p0 == doctest::Approx(1.0));
    REQUIRE(d.conditional.has_value());
    CHECK((*d.conditional)[0] == doctest::Approx(1.0));
    CHECK(argmax_class(d) == 0);
  }
  SUBCASE("a coincident and an antipodal sample split the mass") {
    const TrainingSet train =
        TrainingSet::from({{1.0, 0.0}, {-1.0, 0.0}}, {0, 1});
    const ClassDistribution d = class_distribution(t, train);
    CHECK(d.joint[0] == doctest::Approx(0.5));
    CHECK(d.joint[1] == doctest::Approx(0.0));
    CHECK(d.p0 == doctest::Approx(0.5));
    REQUIRE(d.conditional.has_value());
    CHECK((*d.conditional)[0] == doctest::Approx(1.0));
    CHECK((*d.conditional)[1] == doctest::Approx(0.0));
    CHECK(train.class_labels[argmax_class(d)] == 0);
  }
  SUBCASE("an all-antipodal set leaves the conditional undefined") {
    const TrainingSet train = TrainingSet::from({{-1.0, 0.0}}, {0});
    const ClassDistribution d = class_distribution(t, train);
    CHECK(d.p0 == doctest::Approx(0.0));
    CHECK(!d.conditional.has_value());
    CHECK_THROWS_AS(argmax_class(d), VerifyError);
  }
  SUBCASE("non-unit training vectors are rejected") {
    CHECK_THROWS_AS(TrainingSet::from({{0.5, 0.0}}, {0}),
                    std::invalid_argument);
  }
}

TEST_CASE("the channel form matches the explicit register construction") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 1 + rng.uniform_index(4);
    std::vector<FeatureVector> states;
    std::vector<int> labels;
    for (std::size_t i = 0; i < m; ++i) {
      states.push_back(random_unit_vector(rng, 2));
      labels.push_back(static_cast<int>(rng.uniform_index(2)));
    }
    const TrainingSet train = TrainingSet::from(states, labels);
    const FeatureVector test = random_unit_vector(rng, 2);
    const ClassDistribution a = class_distribution(test, train);
    const ClassDistribution b = class_distribution_via_register(test, train);
    REQUIRE(a.joint.size() == b.joint.size());
    CHECK(std::abs(a.p0 - b.p0) < 1e-12);
    for (std::size_t c = 0; c < a.joint.size(); ++c) {
      CHECK(std::abs(a.joint[c] - b.joint[c]) < 1e-12);
      if (a.conditional && b.conditional) {
        CHECK(std::abs((*a.conditional)[c] - (*b.conditional)[c]) < 1e-12);
      }
    }
    CHECK(a.conditional.has_value() == b.conditional.has_value());
  }
}

TEST_CASE("the repeat-until-success sampler honors its transcript contract") {
  const FeatureVector t{1.0, 0.0};
  SUBCASE("a coincident sample succeeds on the first attempt") {
    const TrainingSet train = TrainingSet::from({{1.0, 0.0}}, {7});
    const ClassificationTranscript tr = sample_classify(t, train, 1);
    CHECK(tr.attempts == 1);
    CHECK(tr.sampled_indices == std::vector<int>{0});
    CHECK(tr.succeeded);
    REQUIRE(tr.final_label.has_value());
    CHECK(*tr.final_label == 7);
  }
  SUBCASE("an antipodal-only set exhausts the attempt budget") {
    const TrainingSet train = TrainingSet::from({{-1.0, 0.0}}, {0});
    const ClassificationTranscript tr = sample_classify(t, train, 1, 25);
    CHECK(tr.attempts == 25);
    CHECK(!tr.succeeded);
    CHECK(!tr.final_label.has_value());
    CHECK(tr.sampled_indices.size() == 25);
  }
  SUBCASE("runs are reproducible for a fixed seed") {
    const TrainingSet train = TrainingSet::from(
        {{0.6, 0.8}, {0.0, 1.0}, {-0.8, 0.6}}, {0, 1, 0});
    const auto a = sample_classify(t, train, 99);
    const auto b = sample_classify(t, train, 99);
    CHECK(same_transcript(a, b));
  }
  SUBCASE("the circuit path reproduces the direct path exactly in law") {
    Rng rng(23);
    for (const std::size_t dim : {std::size_t{2}, std::size_t{4}}) {
      std::vector<FeatureVector> states;
      std::vector<int> labels;
      for (int i = 0; i < 3; ++i) {
        states.push_back(random_unit_vector(rng, dim));
        labels.push_back(i % 2);
      }
      const TrainingSet train = TrainingSet::from(states, labels);
      const FeatureVector test = random_unit_vector(rng, dim);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto direct =
            sample_classify(test, train, seed, 1000, PrepPath::direct);
        const auto circuit =
            sample_classify(test, train, seed, 1000, PrepPath::circuit);
        CHECK(same_transcript(direct, circuit));
      }
    }
  }
}

TEST_CASE("leave-one-out tables are stochastic and mutually consistent") {
  const LabeledDataset data = load_iris("data/iris.csv");
  const LoocvTables tables = loocv_report(data, PreprocessMode::rescale);
  REQUIRE(tables.class_names.size() == 3);
  REQUIRE(tables.success.size() == 3);
  REQUIRE(tables.conditional.size() == 3);
  for (std::size_t r = 0; r < 3; ++r) {
    double row_sum = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(tables.success[r][c] >= 0.0);
      CHECK(tables.success[r][c] <= 1.0);
      row_sum += tables.conditional[r][c];
    }
    CHECK(std::abs(row_sum - 1.0) < 1e-12);
    // the per-class accuracy column is exactly the conditional diagonal
    CHECK(tables.diagonal[r] == tables.conditional[r][r]);
  }
}
