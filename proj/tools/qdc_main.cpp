// qdc — command-line front end for the distance-classifier toolkit.
//
// Subcommands: tables, walk, recycle, prep-check, classify. Every subcommand
// writes a report whose metadata block names all parameters needed to re-run
// it, and identical arguments (plus seed) produce byte-identical output
// unless --stamp is given.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical
// verification failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qdc/classifier.hpp"
#include "qdc/data.hpp"
#include "qdc/encoding.hpp"
#include "qdc/errors.hpp"
#include "qdc/oqw.hpp"
#include "qdc/recycling.hpp"
#include "qdc/rng.hpp"

namespace {

using namespace qdc;

struct GlobalOpts {
  std::string data = "data/iris.csv";
  std::string preprocess = "rescale";
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "csv";
  bool stamp = false;
};

/// "-" when --stamp is off, so default output stays byte-identical run to run.
std::string generated_value(bool stamp) {
  if (!stamp) return "-";
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Common metadata prefix: the subcommand plus the global options.
std::vector<std::pair<std::string, std::string>> base_metadata(
    const GlobalOpts& g, const std::string& command) {
  return {
      {"command", command},
      {"data", g.data},
      {"preprocess", g.preprocess},
      {"seed", std::to_string(g.seed)},
      {"generated", generated_value(g.stamp)},
  };
}

void emit(const Report& report, const GlobalOpts& g) {
  const ReportFormat fmt = report_format_from_string(g.format);
  if (g.out == "-") {
    const std::string text = format_report(report, fmt);
    std::fputs(text.c_str(), stdout);
  } else {
    write_report(report, g.out, fmt);
  }
}

std::string trimmed(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) {
      out.push_back(trimmed(text.substr(pos)));
      return out;
    }
    out.push_back(trimmed(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
}

std::vector<double> parse_feature_values(const std::string& text) {
  std::vector<double> out;
  for (const std::string& tok : split_commas(text)) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (...) {
      throw std::invalid_argument("--features: '" + tok + "' is not a number");
    }
  }
  return out;
}

/// Accepts either a class display name or a 0-based class index.
int resolve_class(const std::vector<std::string>& names,
                  const std::string& token) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == token) return static_cast<int>(i);
  }
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used == token.size() && v >= 0 &&
        v < static_cast<int>(names.size())) {
      return v;
    }
  } catch (...) {
  }
  throw std::invalid_argument("unknown class '" + token + "'");
}

/// Node position in the middle of the first class's block — the natural
/// deep-inside-one-cluster start for the clustered arrangement.
int middle_node_of_first_class(const WalkGraph& graph) {
  std::vector<int> positions;
  for (int p = 0; p < graph.num_nodes(); ++p) {
    if (graph.nodes[p].label == 0) positions.push_back(p);
  }
  if (positions.empty()) {
    throw std::invalid_argument("graph has no nodes of the first class");
  }
  return positions[positions.size() / 2];
}

// ---- subcommands ----------------------------------------------------------

int run_tables(const GlobalOpts& g, bool fold_stats) {
  const LabeledDataset data = load_iris(g.data);
  const PreprocessMode mode = preprocess_mode_from_string(g.preprocess);
  const LoocvTables tables = loocv_report(data, mode, fold_stats);

  Report report;
  report.metadata = base_metadata(g, "tables");
  report.metadata.emplace_back("fold_stats", fold_stats ? "1" : "0");

  Table success{"success_matrix", "test_class", tables.class_names,
                tables.class_names, tables.success};
  Table conditional{"conditional_matrix", "test_class", tables.class_names,
                    tables.class_names, tables.conditional};
  Table diagonal{"class_diagonal", "class", {"p_true_class"},
                 tables.class_names, {}};
  for (double d : tables.diagonal) diagonal.cells.push_back({d});

  report.tables = {std::move(success), std::move(conditional),
                   std::move(diagonal)};
  emit(report, g);
  return 0;
}

int run_walk(const GlobalOpts& g, const std::string& scenario,
             const std::string& graph_name, int steps,
             const std::string& start_arg) {
  const LabeledDataset data = load_iris(g.data);
  const PreprocessMode mode = preprocess_mode_from_string(g.preprocess);
  const PreparedDataset prepared = prepare(data, mode);
  const int num_classes = static_cast<int>(prepared.class_names.size());

  const GraphKind kind = graph_kind_from_string(graph_name);
  const Arrangement arrangement = arrangement_from_string(scenario);
  const WalkGraph graph = build_graph(kind, prepared.labels, arrangement);

  int start = 0;
  if (start_arg == "mid-A") {
    start = middle_node_of_first_class(graph);
  } else if (start_arg == "auto") {
    start = (arrangement == Arrangement::clustered)
                ? middle_node_of_first_class(graph)
                : 0;
  } else {
    try {
      std::size_t used = 0;
      start = std::stoi(start_arg, &used);
      if (used != start_arg.size()) throw std::invalid_argument(start_arg);
    } catch (...) {
      throw std::invalid_argument("--start expects 'auto', 'mid-A', or a node index");
    }
    if (start < 0 || start >= graph.num_nodes()) {
      throw std::invalid_argument("--start node index out of range (graph has " +
                                  std::to_string(graph.num_nodes()) + " nodes)");
    }
  }

  const std::vector<std::vector<double>> curves = class_mean_curves(
      graph, prepared.states, prepared.labels, num_classes, steps, start);

  Report report;
  report.metadata = base_metadata(g, "walk");
  report.metadata.emplace_back("scenario", scenario);
  report.metadata.emplace_back("graph", graph_name);
  report.metadata.emplace_back("steps", std::to_string(steps));
  report.metadata.emplace_back("start", std::to_string(start));

  Table curve{"walk_curve", "step", {}, {}, {}};
  for (const std::string& name : prepared.class_names) {
    curve.col_labels.push_back("p_" + name);
  }
  for (int t = 0; t < steps; ++t) {
    curve.row_labels.push_back(std::to_string(t + 1));
    curve.cells.push_back(curves[static_cast<std::size_t>(t)]);
  }
  report.tables = {std::move(curve)};
  emit(report, g);
  return 0;
}

int run_recycle(const GlobalOpts& g, const std::string& classes_arg) {
  const LabeledDataset data = load_iris(g.data);
  const PreprocessMode mode = preprocess_mode_from_string(g.preprocess);

  int class_a = 0;
  int class_b = 1;
  if (!classes_arg.empty()) {
    const std::vector<std::string> tokens = split_commas(classes_arg);
    if (tokens.size() != 2) {
      throw std::invalid_argument("--classes expects exactly two classes, e.g. A,B");
    }
    class_a = resolve_class(data.class_names, tokens[0]);
    class_b = resolve_class(data.class_names, tokens[1]);
  }
  if (static_cast<int>(data.class_names.size()) < 2) {
    throw std::invalid_argument("dataset has fewer than two classes");
  }

  const SchemeComparison cmp = scheme_comparison(data, class_a, class_b, mode);

  Report report;
  report.metadata = base_metadata(g, "recycle");
  report.metadata.emplace_back(
      "class_a", data.class_names[static_cast<std::size_t>(class_a)]);
  report.metadata.emplace_back(
      "class_b", data.class_names[static_cast<std::size_t>(class_b)]);

  Table table{"scheme_comparison",
              "class",
              {"success_1step", "success_2step", "win_fraction"},
              cmp.class_names,
              {}};
  for (std::size_t i = 0; i < cmp.class_names.size(); ++i) {
    table.cells.push_back({cmp.one_step[i], cmp.two_step[i], cmp.win_fraction[i]});
  }
  report.tables = {std::move(table)};
  emit(report, g);
  return 0;
}

int run_prep_check(const GlobalOpts& g, int features, int trials) {
  std::vector<int> arities;
  if (features == 0) {
    arities = {2, 4};
  } else {
    arities = {features};
  }

  Report report;
  report.metadata = base_metadata(g, "prep-check");
  report.metadata.emplace_back("features",
                               features == 0 ? "both" : std::to_string(features));
  report.metadata.emplace_back("trials", std::to_string(trials));

  Table table{"prep_residuals", "features", {"max_residual"}, {}, {}};
  bool ok = true;
  for (const int arity : arities) {
    Rng rng(derive_seed(g.seed, static_cast<std::uint64_t>(arity)));
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      Circuit circuit = [&] {
        if (arity == 2) {
          const double phi_test = (2.0 * rng.uniform01() - 1.0) * std::numbers::pi;
          const double phi_m = (2.0 * rng.uniform01() - 1.0) * std::numbers::pi;
          return prep_circuit_2f(phi_test, phi_m);
        }
        const auto random_unit4 = [&] {
          while (true) {
            FeatureVector v(4);
            double norm2 = 0.0;
            for (double& c : v) {
              c = 2.0 * rng.uniform01() - 1.0;
              norm2 += c * c;
            }
            if (norm2 > 1e-12) {
              const double inv = 1.0 / std::sqrt(norm2);
              for (double& c : v) c *= inv;
              return v;
            }
          }
        };
        return prep_circuit_4f(random_unit4(), random_unit4());
      }();
      worst = std::max(worst, circuit_residual(circuit));
    }
    const bool pass = worst <= kUnitaryTol;
    ok = ok && pass;
    std::printf("prep-check features=%d trials=%d max residual %.6g (tolerance %g): %s\n",
                arity, trials, worst, kUnitaryTol, pass ? "ok" : "FAIL");
    table.row_labels.push_back(std::to_string(arity));
    table.cells.push_back({worst});
  }

  if (g.out != "-") {
    report.tables = {std::move(table)};
    emit(report, g);
  }
  return ok ? 0 : 4;
}

int run_classify(const GlobalOpts& g, const std::string& features_arg,
                 const std::string& method, int max_attempts, int max_steps) {
  const LabeledDataset data = load_iris(g.data);
  const PreprocessMode mode = preprocess_mode_from_string(g.preprocess);
  const PreparedDataset prepared = prepare(data, mode);
  const TrainingSet train = TrainingSet::from(prepared.states, prepared.labels);

  const std::vector<double> raw = parse_feature_values(features_arg);
  const std::size_t arity = data.features.empty() ? 0 : data.features[0].size();
  if (raw.size() != arity) {
    throw std::invalid_argument("--features expects " + std::to_string(arity) +
                                " comma-separated values for this dataset");
  }
  const Preprocessor preproc = Preprocessor::fit(data.features, mode);
  const FeatureVector test = preproc(raw);

  int attempts = 0;
  bool succeeded = false;
  std::optional<int> label;
  if (method == "sample") {
    const ClassificationTranscript tr =
        sample_classify(test, train, g.seed, max_attempts);
    attempts = tr.attempts;
    succeeded = tr.succeeded;
    label = tr.final_label;
  } else {
    const RecycleResult rr = recycle_classify(test, train, g.seed, max_steps);
    attempts = static_cast<int>(rr.steps.size());
    succeeded = rr.succeeded;
    label = rr.label;
  }

  const std::string predicted =
      (succeeded && label)
          ? data.class_names[static_cast<std::size_t>(*label)]
          : "-";

  Report report;
  report.metadata = base_metadata(g, "classify");
  std::string features_meta = features_arg;  // keep the CSV cell comma-free
  std::replace(features_meta.begin(), features_meta.end(), ',', ' ');
  report.metadata.emplace_back("features", features_meta);
  report.metadata.emplace_back("method", method);
  report.metadata.emplace_back("max_attempts", std::to_string(max_attempts));
  report.metadata.emplace_back("max_steps", std::to_string(max_steps));
  report.metadata.emplace_back("predicted_class", predicted);

  Table table{"classify_result",
              "quantity",
              {"value"},
              {"attempts", "succeeded", "label_index"},
              {{static_cast<double>(attempts)},
               {succeeded ? 1.0 : 0.0},
               {label ? static_cast<double>(*label) : -1.0}}};
  report.tables = {std::move(table)};
  emit(report, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distance-based quantum classifier toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from an INI/TOML file "
                                 "(explicit flags take precedence)");

  GlobalOpts g;
  app.add_option("--data", g.data, "Dataset CSV (f1,...,fk,label rows)")
      ->capture_default_str();
  app.add_option("--preprocess", g.preprocess, "Feature scaling before encoding")
      ->check(CLI::IsMember({"normalize", "standardize", "rescale"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Master seed for all randomized runs")
      ->capture_default_str();
  app.add_option("--out", g.out, "Output path ('-' = stdout)")
      ->capture_default_str();
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"csv", "text"}))
      ->capture_default_str();
  app.add_flag("--stamp", g.stamp,
               "Record a UTC timestamp in the metadata (off by default so "
               "identical runs are byte-identical)");

  bool fold_stats = false;
  CLI::App* tables = app.add_subcommand(
      "tables", "Leave-one-out success and conditional class matrices");
  tables->fallthrough();
  tables->add_flag("--fold-stats", fold_stats,
                   "Refit scaling statistics on each fold's training rows "
                   "instead of the full dataset");

  std::string scenario = "clustered";
  std::string graph_name = "cycle";
  int steps = 100;
  std::string start_arg = "auto";
  CLI::App* walk = app.add_subcommand(
      "walk", "Per-class success curves of the open-quantum-walk classifier");
  walk->fallthrough();
  walk->add_option("--scenario", scenario, "Node arrangement along the graph")
      ->check(CLI::IsMember({"clustered", "interleaved"}))
      ->capture_default_str();
  walk->add_option("--graph", graph_name, "Graph topology")
      ->check(CLI::IsMember({"cycle", "complete", "bipartite"}))
      ->capture_default_str();
  walk->add_option("--steps", steps, "Number of walk steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  walk->add_option("--start", start_arg,
                   "Start node: 'auto', 'mid-A' (middle of the first class's "
                   "block), or a node index")
      ->capture_default_str();

  std::string classes_arg;
  CLI::App* recycle = app.add_subcommand(
      "recycle", "1-step vs 2-step state-recycling comparison for a class pair");
  recycle->fallthrough();
  recycle->add_option("--classes", classes_arg,
                      "Two classes as names or indices, e.g. A,B "
                      "(default: the first two classes)");

  int features = 0;
  int trials = 1000;
  CLI::App* prep = app.add_subcommand(
      "prep-check", "Verify preparation circuits against their target states");
  prep->fallthrough();
  prep->add_option("--features", features, "Feature count to check (2 or 4; "
                                           "default: both)")
      ->check(CLI::IsMember({2, 4}));
  prep->add_option("--trials", trials, "Random pairs per feature count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string features_arg;
  std::string method = "sample";
  int max_attempts = 1000;
  int max_steps = 100;
  CLI::App* classify = app.add_subcommand(
      "classify", "Classify one raw feature vector against the dataset");
  classify->fallthrough();
  classify->add_option("--features", features_arg,
                       "Raw feature values, comma separated")
      ->required();
  classify->add_option("--method", method, "Measurement strategy")
      ->check(CLI::IsMember({"sample", "recycle"}))
      ->capture_default_str();
  classify->add_option("--max-attempts", max_attempts,
                       "Attempt budget for the sampling method")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  classify->add_option("--max-steps", max_steps,
                       "Round budget for the recycling method")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (tables->parsed()) return run_tables(g, fold_stats);
    if (walk->parsed()) return run_walk(g, scenario, graph_name, steps, start_arg);
    if (recycle->parsed()) return run_recycle(g, classes_arg);
    if (prep->parsed()) return run_prep_check(g, features, trials);
    if (classify->parsed()) {
      return run_classify(g, features_arg, method, max_attempts, max_steps);
    }
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const VerifyError& e) {
    std::fprintf(stderr, "verification error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
