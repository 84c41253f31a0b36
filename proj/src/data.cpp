#include "qdc/data.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qdc/errors.hpp"

namespace qdc {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = strip(s);
  if (t.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(t, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == t.size();
}

std::string default_class_name(std::size_t i) {
  std::string name;
  do {
    name.insert(name.begin(), static_cast<char>('A' + i % 26));
    i = i / 26;
  } while (i-- > 0);
  return name;
}

void format_cell(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  out += buf;
}

}  // namespace

LabeledDataset load_iris(const std::string& path,
                         const std::vector<std::string>& class_name_override) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);
  LabeledDataset data;
  data.source = path;
  std::string line;
  int line_no = 0;
  std::size_t arity = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (first_content_line) {
      first_content_line = false;
      double dummy;
      if (!fields.empty() && !parse_double(fields.front(), dummy))
        continue;  // header row
    }
    if (fields.size() < 2)
      throw DataError("malformed row at line " + std::to_string(line_no) +
                      ": expected features and a label");
    if (arity == 0) arity = fields.size() - 1;
    if (fields.size() - 1 != arity)
      throw DataError("wrong arity at line " + std::to_string(line_no) +
                      ": expected " + std::to_string(arity) + " features, got " +
                      std::to_string(fields.size() - 1));
    FeatureVector row(arity);
    for (std::size_t f = 0; f < arity; ++f)
      if (!parse_double(fields[f], row[f]))
        throw DataError("non-numeric feature at line " +
                        std::to_string(line_no) + ", column " +
                        std::to_string(f + 1));
    const std::string species = strip(fields.back());
    if (species.empty())
      throw DataError("missing label at line " + std::to_string(line_no));
    auto it = std::find(data.species_names.begin(), data.species_names.end(),
                        species);
    int label;
    if (it == data.species_names.end()) {
      label = static_cast<int>(data.species_names.size());
      data.species_names.push_back(species);
    } else {
      label = static_cast<int>(it - data.species_names.begin());
    }
    data.features.push_back(std::move(row));
    data.labels.push_back(label);
  }
  if (data.features.empty()) throw DataError("dataset is empty: " + path);
  if (!class_name_override.empty()) {
    if (class_name_override.size() != data.species_names.size())
      throw DataError("class name override must list " +
                      std::to_string(data.species_names.size()) + " names");
    data.class_names = class_name_override;
  } else {
    for (std::size_t i = 0; i < data.species_names.size(); ++i)
      data.class_names.push_back(default_class_name(i));
  }
  return data;
}

PreparedDataset prepare(const LabeledDataset& data, PreprocessMode mode) {
  PreparedDataset out;
  out.states = preprocess(data.features, mode);
  out.labels = data.labels;
  out.class_names = data.class_names;
  out.mode = mode;
  return out;
}

PreparedDataset select_classes(const PreparedDataset& data,
                               const std::vector<int>& keep) {
  PreparedDataset out;
  out.mode = data.mode;
  for (int c : keep) {
    if (c < 0 || c >= static_cast<int>(data.class_names.size()))
      throw DataError("class index out of range: " + std::to_string(c));
    out.class_names.push_back(data.class_names[c]);
  }
  for (std::size_t i = 0; i < data.states.size(); ++i) {
    auto it = std::find(keep.begin(), keep.end(), data.labels[i]);
    if (it == keep.end()) continue;
    out.states.push_back(data.states[i]);
    out.labels.push_back(static_cast<int>(it - keep.begin()));
  }
  return out;
}

std::vector<LoocvFold> loocv_folds(const LabeledDataset& data,
                                   PreprocessMode mode,
                                   bool fold_local_stats) {
  const int n = static_cast<int>(data.features.size());
  std::vector<LoocvFold> folds;
  folds.reserve(n);
  if (!fold_local_stats) {
    const PreparedDataset prep = prepare(data, mode);
    for (int t = 0; t < n; ++t) {
      LoocvFold fold;
      fold.test_index = t;
      fold.test_state = prep.states[t];
      fold.test_label = prep.labels[t];
      for (int i = 0; i < n; ++i) {
        if (i == t) continue;
        fold.train_states.push_back(prep.states[i]);
        fold.train_labels.push_back(prep.labels[i]);
      }
      folds.push_back(std::move(fold));
    }
    return folds;
  }
  for (int t = 0; t < n; ++t) {
    std::vector<FeatureVector> train_raw;
    LoocvFold fold;
    fold.test_index = t;
    fold.test_label = data.labels[t];
    for (int i = 0; i < n; ++i) {
      if (i == t) continue;
      train_raw.push_back(data.features[i]);
      fold.train_labels.push_back(data.labels[i]);
    }
    const Preprocessor p = Preprocessor::fit(train_raw, mode);
    for (const auto& row : train_raw) fold.train_states.push_back(p(row));
    fold.test_state = p(data.features[t]);
    folds.push_back(std::move(fold));
  }
  return folds;
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "text") return ReportFormat::text;
  throw std::invalid_argument("unknown report format: " + name);
}

std::string format_report(const Report& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::csv) {
    out += "# metadata\nkey,value\n";
    for (const auto& [k, v] : report.metadata) out += k + "," + v + "\n";
    for (const Table& t : report.tables) {
      out += "# table " + t.name + "\n";
      out += t.row_header;
      for (const auto& c : t.col_labels) out += "," + c;
      out += "\n";
      for (std::size_t r = 0; r < t.rows(); ++r) {
        out += t.row_labels[r];
        for (double v : t.cells[r]) {
          out += ",";
          format_cell(out, v);
        }
        out += "\n";
      }
    }
    return out;
  }
  // text format: aligned columns for human reading
  out += "metadata\n";
  for (const auto& [k, v] : report.metadata) out += "  " + k + ": " + v + "\n";
  for (const Table& t : report.tables) {
    out += "\ntable " + t.name + "\n";
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head{t.row_header};
    for (const auto& c : t.col_labels) head.push_back(c);
    grid.push_back(head);
    for (std::size_t r = 0; r < t.rows(); ++r) {
      std::vector<std::string> row{t.row_labels[r]};
      for (double v : t.cells[r]) {
        std::string cell;
        format_cell(cell, v);
        row.push_back(cell);
      }
      grid.push_back(row);
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : grid)
      for (std::size_t c = 0; c < row.size(); ++c)
        width[c] = std::max(width[c], row[c].size());
    for (const auto& row : grid) {
      out += "  ";
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) out += "  ";
        out += row[c];
        out.append(width[c] - row[c].size(), ' ');
      }
      while (!out.empty() && out.back() == ' ') out.pop_back();
      out += "\n";
    }
  }
  return out;
}

void write_report(const Report& report, const std::string& path,
                  ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + path);
  out << format_report(report, format);
  if (!out) throw DataError("failed writing output file: " + path);
}

Report read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report file: " + path);
  Report report;
  std::string line;
  enum class Section { none, metadata, table } section = Section::none;
  bool header_pending = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    if (line.rfind("# metadata", 0) == 0) {
      section = Section::metadata;
      header_pending = true;
      continue;
    }
    if (line.rfind("# table ", 0) == 0) {
      section = Section::table;
      header_pending = true;
      report.tables.push_back(Table{strip(line.substr(8)), "", {}, {}, {}});
      continue;
    }
    const auto fields = split_csv_line(line);
    if (section == Section::metadata) {
      if (header_pending) {  // "key,value" header
        header_pending = false;
        continue;
      }
      if (fields.size() != 2)
        throw DataError("malformed metadata at line " + std::to_string(line_no));
      report.metadata.emplace_back(fields[0], fields[1]);
    } else if (section == Section::table) {
      Table& t = report.tables.back();
      if (header_pending) {
        header_pending = false;
        t.row_header = fields.at(0);
        t.col_labels.assign(fields.begin() + 1, fields.end());
        continue;
      }
      if (fields.size() != t.col_labels.size() + 1)
        throw DataError("malformed table row at line " + std::to_string(line_no));
      t.row_labels.push_back(fields[0]);
      std::vector<double> cells(fields.size() - 1);
      for (std::size_t c = 1; c < fields.size(); ++c)
        if (!parse_double(fields[c], cells[c - 1]))
          throw DataError("non-numeric cell at line " + std::to_string(line_no));
      t.cells.push_back(std::move(cells));
    } else {
      throw DataError("unexpected content at line " + std::to_string(line_no));
    }
  }
  return report;
}

}  // namespace qdc
