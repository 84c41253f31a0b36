#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qdc/encoding.hpp"

namespace qdc {

/// Dataset as loaded from disk: raw (unscaled) features plus integer class
/// labels. Labels are assigned to species names in order of first appearance
/// (0 → "A", 1 → "B", ...), overridable with explicit class names.
struct LabeledDataset {
  std::vector<FeatureVector> features;
  std::vector<int> labels;
  std::vector<std::string> class_names;    // display names, e.g. A/B/C
  std::vector<std::string> species_names;  // source strings, first-appearance order
  std::string source;
};

/// Loads a CSV of "f1,...,fk,label" rows (k ≥ 1; the shipped flower set has
/// k = 4). A header line is auto-detected (first field non-numeric and the
/// line does not parse as a data row). Malformed rows — wrong arity,
/// non-numeric fields, empty label — raise DataError naming the line number.
/// class_name_override, when nonempty, must have one name per distinct
/// species and replaces the default A/B/C… naming.
LabeledDataset load_iris(
    const std::string& path,
    const std::vector<std::string>& class_name_override = {});

/// Dataset after scaling + unit-norm encoding.
struct PreparedDataset {
  std::vector<FeatureVector> states;  // unit-norm vectors
  std::vector<int> labels;
  std::vector<std::string> class_names;
  PreprocessMode mode = PreprocessMode::normalize;
};

/// Applies the given scaling fitted on the full dataset.
PreparedDataset prepare(const LabeledDataset& data, PreprocessMode mode);

/// Keeps only samples of the listed classes (indices into class_names),
/// preserving order and the already-applied full-dataset scaling. Labels are
/// re-indexed to 0..k-1 in the order given by `keep`.
PreparedDataset select_classes(const PreparedDataset& data,
                               const std::vector<int>& keep);

/// One leave-one-out fold: the held-out sample and the remaining training
/// data. Scaling statistics come from the full dataset once (default) or
/// from each fold's own training rows (fold_local_stats).
struct LoocvFold {
  int test_index = 0;
  FeatureVector test_state;
  int test_label = 0;
  std::vector<FeatureVector> train_states;
  std::vector<int> train_labels;
};

std::vector<LoocvFold> loocv_folds(const LabeledDataset& data,
                                   PreprocessMode mode,
                                   bool fold_local_stats = false);

// ---- reports -------------------------------------------------------------

/// Named numeric table with explicit row and column labels.
struct Table {
  std::string name;
  std::string row_header;               // label of the row-name column
  std::vector<std::string> col_labels;  // data column names
  std::vector<std::string> row_labels;
  std::vector<std::vector<double>> cells;  // row-major

  std::size_t rows() const { return row_labels.size(); }
};

/// Ordered metadata plus tables. Values print with 6 significant digits.
/// Output is byte-identical for identical inputs: nothing time- or
/// environment-dependent is written unless explicitly placed in metadata.
struct Report {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Table> tables;
};

enum class ReportFormat { csv, text };
ReportFormat report_format_from_string(const std::string& name);

std::string format_report(const Report& report, ReportFormat format);
void write_report(const Report& report, const std::string& path,
                  ReportFormat format);

/// Parses a report previously written in csv format (round-trip check).
Report read_report_csv(const std::string& path);

}  // namespace qdc
