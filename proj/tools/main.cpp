// vsparse command line: simulate | contaminate | check-condition | scree |
// embed | loo | sweep | mc. Experiments are described by a JSON config; every
// output embeds the config hash and seed so runs can be reproduced exactly.

#include "vsparse/classify.hpp"
#include "vsparse/dataio.hpp"
#include "vsparse/evaluate.hpp"
#include "vsparse/graph.hpp"
#include "vsparse/parallel.hpp"
#include "vsparse/rng.hpp"
#include "vsparse/sbm.hpp"
#include "vsparse/sparse.hpp"
#include "vsparse/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace vsparse::cli {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DatasetSpec {
  std::string graph_path;
  std::string format;  // "gml" | "edgelist" | "" (infer from extension)
  std::string labels_path;
  int index_base = 0;
  bool augment_diagonal = false;
};

struct Config {
  json raw;
  std::optional<BlockModel> model;
  std::optional<DatasetSpec> dataset;
  int n = 0;
  std::uint64_t seed = 0;
  int replicates = 1;
  ContaminationSpec contamination;
  ClassifierSpec classifier;
  std::optional<SweepVariable> sweep_variable;
  std::vector<double> sweep_grid;
  std::string output;
};

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hash_hex(std::uint64_t hash) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

BlockModel parse_model(const json& j) {
  if (!j.is_object() || !j.contains("K") || !j.contains("B") || !j.contains("pi")) {
    throw ConfigError("model: expected {\"K\": int, \"B\": [[...]], \"pi\": [...]}");
  }
  const int k = j.at("K").get<int>();
  if (k < 1) throw ConfigError("model.K: must be >= 1");
  const auto& b = j.at("B");
  const auto& pi = j.at("pi");
  if (!b.is_array() || static_cast<int>(b.size()) != k) throw ConfigError("model.B: need K rows");
  if (!pi.is_array() || static_cast<int>(pi.size()) != k) throw ConfigError("model.pi: need K entries");
  Matrix block_probs(k, k);
  for (int i = 0; i < k; ++i) {
    if (!b[i].is_array() || static_cast<int>(b[i].size()) != k) {
      throw ConfigError("model.B: row " + std::to_string(i) + " needs K entries");
    }
    for (int c = 0; c < k; ++c) block_probs(i, c) = b[i][c].get<double>();
  }
  Vector prior(k);
  for (int i = 0; i < k; ++i) prior(i) = pi[i].get<double>();
  try {
    return make_model(std::move(block_probs), std::move(prior));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

json model_to_json(const BlockModel& model) {
  json b = json::array();
  for (int i = 0; i < model.num_blocks; ++i) {
    json row = json::array();
    for (int c = 0; c < model.num_blocks; ++c) row.push_back(model.block_probs(i, c));
    b.push_back(row);
  }
  json pi = json::array();
  for (int i = 0; i < model.num_blocks; ++i) pi.push_back(model.prior(i));
  return json{{"K", model.num_blocks}, {"B", b}, {"pi", pi}};
}

ContaminationSpec parse_contamination(const json& j) {
  ContaminationSpec spec;
  const std::string type = j.value("type", "none");
  if (type == "none") spec.type = ContaminationType::None;
  else if (type == "occlusion") spec.type = ContaminationType::Occlusion;
  else if (type == "reversion") spec.type = ContaminationType::Reversion;
  else if (type == "mixed") spec.type = ContaminationType::Mixed;
  else throw ConfigError("contamination.type: expected none|occlusion|reversion|mixed");
  spec.rate = j.value("rate", 0.0);
  if (!(spec.rate >= 0.0 && spec.rate <= 1.0)) {
    throw ConfigError("contamination.rate: must lie in [0,1]");
  }
  return spec;
}

void parse_embedding(const json& j, ClassifierSpec& spec) {
  if (j.contains("d_hat")) {
    const auto& d = j.at("d_hat");
    if (d.is_string()) {
      if (d.get<std::string>() != "auto") throw ConfigError("embedding.d_hat: integer or \"auto\"");
      spec.d_auto = true;
    } else {
      spec.d_hat = d.get<int>();
      if (spec.d_hat < 1) throw ConfigError("embedding.d_hat: must be >= 1");
    }
  }
  const std::string ordering = j.value("ordering", "magnitude");
  if (ordering == "magnitude") spec.ordering = EigenOrdering::Magnitude;
  else if (ordering == "algebraic") spec.ordering = EigenOrdering::Algebraic;
  else throw ConfigError("embedding.ordering: expected magnitude|algebraic");
  spec.refold_embedding = j.value("refold", false);
}

void parse_classifier(const json& j, ClassifierSpec& spec) {
  const std::string type = j.value("type", "src");
  if (type == "src") spec.type = ClassifierType::Src;
  else if (type == "knn") spec.type = ClassifierType::Knn;
  else if (type == "lda") spec.type = ClassifierType::Lda;
  else throw ConfigError("classifier.type: expected src|knn|lda");
  spec.sparsity = j.value("s", 5);
  if (spec.sparsity < 1) throw ConfigError("classifier.s: must be >= 1");
  spec.neighbors = j.value("k", 1);
  if (spec.neighbors < 1) throw ConfigError("classifier.k: must be >= 1");
  spec.ridge = j.value("ridge", 1e-6);
  if (spec.ridge < 0.0) throw ConfigError("classifier.ridge: must be >= 0");
  spec.normalize = j.value("normalize", true);
  const std::string variant = j.value("variant", "plain");
  if (variant == "plain") spec.variant = OmpVariant::Plain;
  else if (variant == "nonnegative") spec.variant = OmpVariant::NonNegative;
  else throw ConfigError("classifier.variant: expected plain|nonnegative");
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  Config config;
  try {
    in >> config.raw;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const json& j = config.raw;

  const bool has_model = j.contains("model");
  const bool has_dataset = j.contains("dataset");
  if (has_model == has_dataset) {
    throw ConfigError("config: exactly one of model/dataset must be present");
  }
  if (has_model) config.model = parse_model(j.at("model"));
  if (has_dataset) {
    const json& d = j.at("dataset");
    DatasetSpec spec;
    if (!d.contains("graph")) throw ConfigError("dataset.graph: path required");
    spec.graph_path = d.at("graph").get<std::string>();
    spec.format = d.value("format", "");
    spec.labels_path = d.value("labels", "");
    spec.index_base = d.value("index_base", 0);
    if (spec.index_base != 0 && spec.index_base != 1) {
      throw ConfigError("dataset.index_base: must be 0 or 1");
    }
    spec.augment_diagonal = d.value("diagonal_augment", false);
    config.dataset = spec;
  }

  config.n = j.value("n", 0);
  if (j.contains("n") && config.n < 1) throw ConfigError("n: must be >= 1");
  config.seed = j.value("seed", std::uint64_t{0});
  config.replicates = j.value("replicates", 1);
  if (config.replicates < 1) throw ConfigError("replicates: must be >= 1");

  if (j.contains("contamination")) config.contamination = parse_contamination(j.at("contamination"));
  if (j.contains("embedding")) parse_embedding(j.at("embedding"), config.classifier);
  if (j.contains("classifier")) parse_classifier(j.at("classifier"), config.classifier);

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    if (!s.contains("variable")) throw ConfigError("sweep.variable: required");
    try {
      config.sweep_variable = sweep_variable_from_string(s.at("variable").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (!s.contains("grid") || !s.at("grid").is_array() || s.at("grid").empty()) {
      throw ConfigError("sweep.grid: non-empty array required");
    }
    for (const auto& g : s.at("grid")) config.sweep_grid.push_back(g.get<double>());
  }

  config.output = j.value("output", "");
  return config;
}

std::string config_stamp(const Config& config) {
  return "config_hash=" + hash_hex(fnv1a64(config.raw.dump())) +
         " seed=" + std::to_string(config.seed);
}

LabeledGraph load_dataset(const DatasetSpec& spec) {
  std::string format = spec.format;
  if (format.empty()) {
    format = spec.graph_path.size() > 4 &&
                     spec.graph_path.compare(spec.graph_path.size() - 4, 4, ".gml") == 0
                 ? "gml"
                 : "edgelist";
  }
  RawDataset raw;
  if (format == "gml") {
    raw = read_gml(spec.graph_path);
  } else if (format == "edgelist") {
    raw = read_edge_list(spec.graph_path, spec.index_base);
  } else {
    throw ConfigError("dataset.format: expected gml|edgelist");
  }

  LabeledGraph g;
  g.adjacency = preprocess(to_dense(raw));
  if (spec.augment_diagonal) g.adjacency = diagonal_augment(g.adjacency);
  g.provenance.model = "dataset:" + spec.graph_path;

  if (!spec.labels_path.empty()) {
    const LabelsWithMapping read = read_labels(spec.labels_path);
    if (read.labels.n() != g.adjacency.n()) {
      std::ostringstream msg;
      msg << "labels file has " << read.labels.n() << " entries but the graph has "
          << g.adjacency.n() << " vertices";
      throw std::runtime_error(msg.str());
    }
    g.labels = read.labels;
  } else if (raw.has_classes) {
    g.labels = labels_from_dataset(raw).labels;
  }
  return g;
}

/// Sample (and contaminate) a graph from the config model, or load the
/// configured dataset.
LabeledGraph materialize_graph(const Config& config) {
  if (config.dataset) return load_dataset(*config.dataset);
  if (config.n < 1) throw ConfigError("n: must be >= 1 when sampling from a model");
  LabeledGraph g = sample(*config.model, config.n, config.seed);
  if (config.contamination.type != ContaminationType::None) {
    g = apply_contamination(g, config.contamination, derive_seed(config.seed, 1));
  }
  return g;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  return out;
}

std::string require_output(const Config& config, const std::string& fallback) {
  if (!config.output.empty()) return config.output;
  if (!fallback.empty()) return fallback;
  throw ConfigError("output: path required (config \"output\" or --output)");
}

json provenance_to_json(const Provenance& provenance) {
  json out;
  out["model"] = provenance.model;
  if (provenance.seed) out["seed"] = *provenance.seed;
  json passes = json::array();
  for (const auto& record : provenance.contamination) {
    passes.push_back(json{{"type", record.type},
                          {"rate", record.rate},
                          {"seed", record.seed},
                          {"vertices", record.vertices}});
  }
  out["contamination"] = passes;
  return out;
}

void write_graph_outputs(const Config& config, const LabeledGraph& g, const std::string& path) {
  write_edge_list(path, g.adjacency, {config_stamp(config)});
  if (g.labels.n() > 0) write_labels(path + ".labels", g.labels, {}, {config_stamp(config)});
  json sidecar;
  sidecar["config_hash"] = hash_hex(fnv1a64(config.raw.dump()));
  sidecar["seed"] = config.seed;
  if (config.model) sidecar["model"] = model_to_json(*config.model);
  sidecar["n"] = g.adjacency.n();
  sidecar["provenance"] = provenance_to_json(g.provenance);
  std::ofstream side = open_output(path + ".provenance.json");
  side << sidecar.dump(2) << "\n";
}

int run_simulate(const Config& config) {
  if (!config.model) throw ConfigError("simulate: config must carry a model");
  const LabeledGraph g = materialize_graph(config);
  write_graph_outputs(config, g, require_output(config, ""));
  return 0;
}

int run_contaminate(const Config& config) {
  if (!config.dataset) throw ConfigError("contaminate: config must carry a dataset");
  if (config.contamination.type == ContaminationType::None) {
    throw ConfigError("contaminate: contamination.type must not be none");
  }
  LabeledGraph g = load_dataset(*config.dataset);
  g = apply_contamination(g, config.contamination, config.seed);
  write_graph_outputs(config, g, require_output(config, ""));
  return 0;
}

int run_check_condition(const Config& config) {
  if (!config.model) throw ConfigError("check-condition: config must carry a model");
  const BlockModel& model = *config.model;
  const ConditionReport report = check_src_condition(model);
  const MomentTable table = moments(model);

  json out;
  out["overall"] = report.overall;
  json per_class = json::array();
  for (bool ok : report.satisfied_for_class) per_class.push_back(ok);
  out["satisfied_for_class"] = per_class;
  json pairs = json::array();
  for (int q = 0; q < model.num_blocks; ++q) {
    for (int r = 0; r < model.num_blocks; ++r) {
      if (q == r) continue;
      pairs.push_back(json{{"q", q + 1},
                           {"r", r + 1},
                           {"lhs", report.lhs(q, r)},
                           {"rhs", report.rhs(q, r)},
                           {"holds", static_cast<bool>(report.pairwise[q][r])}});
    }
  }
  out["pairs"] = pairs;
  json m;
  for (int q = 0; q < model.num_blocks; ++q) {
    m["m1"].push_back(table.m1(q));
    m["m2"].push_back(table.m2(q));
  }
  out["moments"] = m;

  std::cout << "condition " << (report.overall ? "SATISFIED" : "VIOLATED") << "\n";
  std::cout << "pair   lhs = rho^2*E(Qr^2)/E(Qq^2)   rhs = E(Qr)/E(Qq)   holds\n";
  for (const auto& p : pairs) {
    std::cout << "(" << p["q"] << "," << p["r"] << ")  " << std::setw(24)
              << p["lhs"].get<double>() << "  " << std::setw(18) << p["rhs"].get<double>() << "  "
              << (p["holds"].get<bool>() ? "yes" : "NO") << "\n";
  }

  if (!config.output.empty()) {
    std::ofstream file = open_output(config.output);
    file << out.dump(2) << "\n";
  }
  return 0;  // reporting either way; a violated condition is not a failure
}

int run_scree(const Config& config) {
  const LabeledGraph g = materialize_graph(config);
  const ScreeData data = scree(g.adjacency);
  std::ofstream out = open_output(require_output(config, ""));
  CsvWriter csv(out);
  csv.comment(config_stamp(config));
  csv.row({"index", "eigenvalue", "sign", "magnitude"});
  for (int i = 0; i < data.eigenvalues.size(); ++i) {
    const double v = data.eigenvalues(i);
    const int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    csv.row({CsvWriter::number(i), CsvWriter::number(v), CsvWriter::number(sign),
             CsvWriter::number(std::abs(v))});
  }
  return 0;
}

int run_embed(const Config& config) {
  const LabeledGraph g = materialize_graph(config);
  const int d_hat =
      config.classifier.d_auto ? select_dimension(g.adjacency) : config.classifier.d_hat;
  const Embedding embedding = ase(g.adjacency, d_hat, config.classifier.ordering);

  std::ofstream out = open_output(require_output(config, ""));
  CsvWriter csv(out);
  csv.comment(config_stamp(config));
  csv.comment("d_hat=" + std::to_string(embedding.d_hat));
  std::vector<std::string> header{"vertex"};
  for (int c = 0; c < embedding.d_hat; ++c) header.push_back("z" + std::to_string(c + 1));
  csv.row(header);
  for (int i = 0; i < embedding.z.rows(); ++i) {
    std::vector<std::string> cells{CsvWriter::number(i)};
    for (int c = 0; c < embedding.d_hat; ++c) cells.push_back(CsvWriter::number(embedding.z(i, c)));
    csv.row(cells);
  }
  return 0;
}

int run_loo(const Config& config, int threads) {
  const LabeledGraph g = materialize_graph(config);
  if (g.labels.n() == 0) throw ConfigError("loo: the graph carries no labels");
  const LooResult result = loo_run(g, config.classifier, threads);

  std::ofstream out = open_output(require_output(config, ""));
  CsvWriter csv(out);
  csv.comment(config_stamp(config));
  csv.row({"vertex", "true_label", "predicted", "correct", "flag"});
  for (int v = 0; v < g.labels.n(); ++v) {
    const bool excluded = result.excluded[v];
    std::string flag = excluded ? "excluded" : (result.degenerate[v] ? "degenerate" : "");
    const int predicted = result.predicted[v];
    csv.row({CsvWriter::number(v), CsvWriter::number(g.labels.labels[v]),
             excluded ? "" : CsvWriter::number(predicted),
             excluded ? "" : CsvWriter::number(predicted == g.labels.labels[v] ? 1 : 0), flag});
  }
  std::ostringstream summary;
  summary << "summary classifier=" << result.classifier << " error=" << CsvWriter::number(result.error)
          << " chance=" << CsvWriter::number(result.chance) << " evaluated=" << result.evaluated
          << " excluded=" << result.excluded_count;
  csv.comment(summary.str());
  std::cout << summary.str() << "\n";
  return 0;
}

void write_curve(const Config& config, const ErrorCurve& curve, const std::string& path) {
  std::ofstream out = open_output(path);
  CsvWriter csv(out);
  csv.comment(config_stamp(config));
  csv.row({"variable", "value", "mean_error", "std_error", "replicates", "chance"});
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    csv.row({to_string(curve.variable), CsvWriter::number(curve.grid[i]),
             CsvWriter::number(curve.mean_errors[i]), CsvWriter::number(curve.std_errors[i]),
             CsvWriter::number(curve.replicates), CsvWriter::number(curve.chances[i])});
  }
}

int run_sweep(const Config& config, int threads) {
  if (!config.sweep_variable) throw ConfigError("sweep: config must carry a sweep block");
  ErrorCurve curve;
  if (config.model) {
    curve = sweep(*config.model, config.n, config.contamination, config.classifier,
                  *config.sweep_variable, config.sweep_grid, config.replicates, config.seed,
                  threads);
  } else {
    const LabeledGraph g = materialize_graph(config);
    if (g.labels.n() == 0) throw ConfigError("sweep: the dataset carries no labels");
    curve = sweep_graph(g, config.classifier, *config.sweep_variable, config.sweep_grid, threads);
  }
  write_curve(config, curve, require_output(config, ""));
  return 0;
}

int run_mc(const Config& config, int threads) {
  if (!config.model) throw ConfigError("mc: config must carry a model");
  const McPoint point = monte_carlo(*config.model, config.n, config.contamination,
                                    config.classifier, config.replicates, config.seed, threads);
  ErrorCurve curve;
  curve.variable = SweepVariable::Rate;
  curve.grid = {config.contamination.rate};
  curve.mean_errors = {point.mean_error};
  curve.std_errors = {point.std_error};
  curve.chances = {point.mean_chance};
  curve.replicates = point.replicates;
  write_curve(config, curve, require_output(config, ""));
  std::cout << "mean_error=" << CsvWriter::number(point.mean_error)
            << " std_error=" << CsvWriter::number(point.std_error)
            << " replicates=" << point.replicates << "\n";
  return 0;
}

}  // namespace vsparse::cli

int main(int argc, char** argv) {
  using namespace vsparse;
  using namespace vsparse::cli;

  CLI::App app{"Robust vertex classification: blockmodel simulation, spectral embedding, "
               "sparse-representation classification, and evaluation harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  std::int64_t seed_override = -1;
  int threads = 0;  // 0: VSPARSE_THREADS or hardware

  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--seed", seed_override, "override the config seed");
  app.add_option("--output", output_override, "override the config output path");
  app.add_option("--threads", threads, "worker threads (speed only, results unchanged)");

  const auto names = {"simulate", "contaminate", "check-condition", "scree",
                      "embed",    "loo",         "sweep",           "mc"};
  for (const char* name : names) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Config config = load_config(config_path);
    if (seed_override >= 0) {
      config.seed = static_cast<std::uint64_t>(seed_override);
      config.raw["seed"] = config.seed;
    }
    if (!output_override.empty()) config.output = output_override;

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "simulate") return run_simulate(config);
    if (sub == "contaminate") return run_contaminate(config);
    if (sub == "check-condition") return run_check_condition(config);
    if (sub == "scree") return run_scree(config);
    if (sub == "embed") return run_embed(config);
    if (sub == "loo") return run_loo(config, threads);
    if (sub == "sweep") return run_sweep(config, threads);
    if (sub == "mc") return run_mc(config, threads);
    std::cerr << "unknown subcommand\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
