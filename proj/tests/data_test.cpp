#include "qdc/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "qdc/errors.hpp"

using namespace qdc;

namespace {

/// Writes content to a unique temp file and returns its path.
class TempCsv {
 public:
  explicit TempCsv(const std::string& content) {
    static int counter = 0;
    path_ = "/tmp/qdc_data_test_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path_, std::ios::binary);
    out << content;
  }
  ~TempCsv() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("the bundled flower dataset loads with three classes") {
  const LabeledDataset data = load_iris("data/iris.csv");
  REQUIRE(data.features.size() == 150);
  REQUIRE(data.labels.size() == 150);
  CHECK(data.features[0].size() == 4);
  REQUIRE(data.class_names.size() == 3);
  CHECK(data.class_names[0] == "A");
  CHECK(data.class_names[1] == "B");
  CHECK(data.class_names[2] == "C");
  REQUIRE(data.species_names.size() == 3);
  CHECK(data.species_names[0] == "setosa");
  // labels appear in first-appearance order: 50 of each in contiguous blocks
  for (int i = 0; i < 150; ++i) CHECK(data.labels[i] == i / 50);
  CHECK(data.features[0][0] == doctest::Approx(5.1).epsilon(1e-12));

  const LabeledDataset renamed =
      load_iris("data/iris.csv", {"one", "two", "three"});
  CHECK(renamed.class_names[2] == "three");
}

TEST_CASE("headerless files load identically") {
  TempCsv with_header("a,b,c,d,label\n1.0,2.0,3.0,4.0,x\n5.0,6.0,7.0,8.0,y\n");
  TempCsv without_header("1.0,2.0,3.0,4.0,x\n5.0,6.0,7.0,8.0,y\n");
  const LabeledDataset a = load_iris(with_header.path());
  const LabeledDataset b = load_iris(without_header.path());
  REQUIRE(a.features.size() == 2);
  REQUIRE(b.features.size() == 2);
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  CHECK(a.species_names == b.species_names);
}

TEST_CASE("loader errors carry line numbers") {
  SUBCASE("wrong arity") {
    // the first data row fixes the arity; a later row must match it
    TempCsv bad("1.0,2.0,3.0,4.0,x\n1.0,2.0,3.0,x\n");
    try {
      load_iris(bad.path());
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("non-numeric feature after a valid row") {
    TempCsv bad("1.0,2.0,3.0,4.0,x\n1.0,oops,3.0,4.0,x\n");
    try {
      load_iris(bad.path());
      FAIL("expected DataError");
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("line 2") != std::string::npos);
      CHECK(msg.find("column 2") != std::string::npos);
    }
  }
  SUBCASE("missing label") {
    TempCsv bad("1.0,2.0,3.0,4.0,\n");
    CHECK_THROWS_AS(load_iris(bad.path()), DataError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_iris("/nonexistent/nope.csv"), DataError);
  }
}

TEST_CASE("prepared datasets hold normalized encoded states") {
  LabeledDataset raw;
  raw.features = {{3.0, 0.0, 4.0, 0.0}, {0.0, 5.0, 0.0, 12.0}};
  raw.labels = {0, 1};
  raw.class_names = {"A", "B"};
  raw.species_names = {"a", "b"};
  const PreparedDataset prep = prepare(raw, PreprocessMode::normalize);
  REQUIRE(prep.states.size() == 2);
  CHECK(prep.states[0][0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(prep.states[0][2] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(prep.mode == PreprocessMode::normalize);
}

TEST_CASE("class selection keeps requested classes and reindexes labels") {
  const LabeledDataset data = load_iris("data/iris.csv");
  const PreparedDataset prepared = prepare(data, PreprocessMode::rescale);
  const PreparedDataset ab = select_classes(prepared, {0, 2});
  CHECK(ab.states.size() == 100);
  CHECK(ab.class_names == std::vector<std::string>{"A", "C"});
  CHECK(ab.labels.front() == 0);
  CHECK(ab.labels.back() == 1);
  CHECK_THROWS_AS(select_classes(prepared, {0, 7}), DataError);
}

TEST_CASE("leave-one-out folds exclude exactly the held-out row") {
  const LabeledDataset data = load_iris("data/iris.csv");
  const auto folds = loocv_folds(data, PreprocessMode::rescale);
  REQUIRE(folds.size() == 150);
  for (const std::size_t i : {std::size_t{0}, std::size_t{80}}) {
    CHECK(folds[i].test_index == i);
    CHECK(folds[i].train_states.size() == 149);
    CHECK(folds[i].test_label == data.labels[i]);
  }
  SUBCASE("fold-local statistics change the test encoding") {
    // row 0 is the unique maximum of feature 0, so holding it out shrinks
    // the fold-local feature range and shifts the test's scaling
    TempCsv extremum("10,1,x\n1,2,x\n2,1,y\n3,2,y\n4,1,x\n");
    const LabeledDataset small = load_iris(extremum.path());
    const auto full = loocv_folds(small, PreprocessMode::rescale);
    const auto local = loocv_folds(small, PreprocessMode::rescale, true);
    bool any_diff = false;
    for (std::size_t k = 0; k < 2; ++k) {
      if (std::abs(local[0].test_state[k] - full[0].test_state[k]) > 1e-12) {
        any_diff = true;
      }
    }
    CHECK(any_diff);
  }
}

TEST_CASE("reports format deterministically in both layouts") {
  Report r;
  r.metadata = {{"seed", "0"}, {"timestamp", "-"}};
  Table t;
  t.name = "demo";
  t.row_header = "class";
  t.col_labels = {"x", "y"};
  t.row_labels = {"A", "B"};
  t.cells = {{0.5, 1.0 / 3.0}, {0.25, 1.23456789}};
  r.tables = {t};

  const std::string csv = format_report(r, ReportFormat::csv);
  CHECK(csv.find("# metadata\n") != std::string::npos);
  CHECK(csv.find("seed,0\n") != std::string::npos);
  CHECK(csv.find("# table demo\n") != std::string::npos);
  CHECK(csv.find("class,x,y\n") != std::string::npos);
  CHECK(csv.find("A,0.5,0.333333\n") != std::string::npos);  // %.6g
  CHECK(csv.find("B,0.25,1.23457\n") != std::string::npos);

  const std::string text = format_report(r, ReportFormat::text);
  CHECK(text.find("demo") != std::string::npos);
  CHECK(text.find("0.333333") != std::string::npos);

  SUBCASE("writing twice produces identical bytes") {
    TempCsv sink1("");
    TempCsv sink2("");
    write_report(r, sink1.path(), ReportFormat::csv);
    write_report(r, sink2.path(), ReportFormat::csv);
    CHECK(slurp(sink1.path()) == slurp(sink2.path()));
    CHECK(slurp(sink1.path()) == csv);
  }
  SUBCASE("the csv layout parses back to the same report") {
    TempCsv round_trip(csv);
    const Report back = read_report_csv(round_trip.path());
    REQUIRE(back.tables.size() == 1);
    CHECK(back.metadata == r.metadata);
    CHECK(back.tables[0].name == "demo");
    CHECK(back.tables[0].col_labels == t.col_labels);
    CHECK(back.tables[0].row_labels == t.row_labels);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(back.tables[0].cells[i][j] ==
              doctest::Approx(t.cells[i][j]).epsilon(1e-5));
  }
}

TEST_CASE("mode names round-trip through their parser") {
  for (const auto mode : {PreprocessMode::normalize, PreprocessMode::standardize,
                          PreprocessMode::rescale}) {
    CHECK(preprocess_mode_from_string(to_string(mode)) == mode);
  }
  CHECK_THROWS_AS(preprocess_mode_from_string("bogus"), std::invalid_argument);
  CHECK(report_format_from_string("csv") == ReportFormat::csv);
  CHECK(report_format_from_string("text") == ReportFormat::text);
}
