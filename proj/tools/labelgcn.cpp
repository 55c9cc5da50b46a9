// labelgcn: graph construction, synthetic data, training, search and evaluation.

#include <CLI11.hpp>

#include <omp.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "labelgcn/checkpoint.hpp"
#include "labelgcn/dataset.hpp"
#include "labelgcn/embedding.hpp"
#include "labelgcn/error.hpp"
#include "labelgcn/graph_io.hpp"
#include "labelgcn/synthetic.hpp"
#include "labelgcn/training.hpp"

#ifndef LABELGCN_VERSION
#define LABELGCN_VERSION "0.0.0"
#endif

namespace lg = labelgcn;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kData = 3,
  kShape = 4,
  kNumeric = 5,
  kIndex = 6,
  kInvariant = 7,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- settings

std::string to_text(const std::string& v) { return v; }
std::string to_text(std::size_t v) { return std::to_string(v); }
std::string to_text(double v) { return lg::format_double(v); }
std::string to_text(bool v) { return v ? "true" : "false"; }

void from_text(const std::string& s, std::string& out) { out = s; }

void from_text(const std::string& s, std::size_t& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw UsageError("expected a non-negative integer, got '" + s + "'");
}

void from_text(const std::string& s, double& out) {
  try {
    out = lg::parse_double(s, "value", 0);
  } catch (const lg::ParseError&) {
    throw UsageError("expected a number, got '" + s + "'");
  }
}

void from_text(const std::string& s, bool& out) {
  if (s == "true" || s == "1") {
    out = true;
  } else if (s == "false" || s == "0") {
    out = false;
  } else {
    throw UsageError("expected true or false, got '" + s + "'");
  }
}

/// Named settings bound to variables. The same table drives command-line
/// flags, `key = value` config files and the run manifest.
class Settings {
 public:
  template <class T>
  void add(const std::string& name, T& target, const std::string& help) {
    entries_.push_back({name,
                        [&target](const std::string& s) { from_text(s, target); },
                        [&target] { return to_text(target); },
                        [&target, name, help](CLI::App& app) {
                          std::string flags = "--" + name;
                          std::string dashed = name;
                          std::replace(dashed.begin(), dashed.end(), '_', '-');
                          if (dashed != name) flags += ",--" + dashed;
                          app.add_option(flags, target, help)->capture_default_str();
                        }});
  }

  void bind(CLI::App& app) const {
    for (const auto& e : entries_) e.bind(app);
  }

  void apply(const std::map<std::string, std::string>& values, const std::string& source) {
    for (const auto& [key, value] : values) {
      auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.name == key; });
      if (it == entries_.end()) throw UsageError(source + ": unknown setting '" + key + "'");
      try {
        it->set(value);
      } catch (const UsageError& err) {
        throw UsageError(source + ": " + key + ": " + err.what());
      }
    }
  }

  std::string dump() const {
    std::string out;
    for (const auto& e : entries_) out += e.name + " = " + e.get() + "\n";
    return out;
  }

 private:
  struct Entry {
    std::string name;
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
    std::function<void(CLI::App&)> bind;
  };
  std::vector<Entry> entries_;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Flat `key = value` file. `command` must match when present; `version`
/// and `input_digest.*` (written by manifests) are informational.
std::map<std::string, std::string> read_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "version" || key.rfind("input_digest.", 0) == 0) continue;
    if (key == "command") {
      if (value != command) throw UsageError(path + ": config is for '" + value + "', not '" + command + "'");
      continue;
    }
    if (!out.emplace(key, value).second) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------- manifests

std::string fnv1a_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lg::DataError("cannot open '" + path + "'");
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char out[32];
  std::snprintf(out, sizeof out, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return out;
}

using Inputs = std::vector<std::pair<std::string, std::string>>;  // setting name, path

void check_outputs_distinct(const Inputs& inputs, const std::vector<std::string>& outputs) {
  namespace fs = std::filesystem;
  for (const auto& out : outputs) {
    if (out.empty()) continue;
    for (const auto& [name, in] : inputs) {
      std::error_code ec;
      if (out == in || fs::equivalent(out, in, ec)) {
        throw UsageError("output '" + out + "' would overwrite input " + name);
      }
    }
  }
}

/// Written before any work starts. Feeding it back through --config
/// re-executes the run.
void write_manifest(const std::string& path, const std::string& command, const Settings& settings,
                    const Inputs& inputs) {
  std::ostringstream m;
  m << "# labelgcn run manifest\n";
  m << "version = " << LABELGCN_VERSION << "\n";
  m << "command = " << command << "\n";
  m << settings.dump();
  for (const auto& [name, file] : inputs) m << "input_digest." << name << " = " << fnv1a_digest(file) << "\n";
  if (path.empty()) {
    std::cerr << m.str();
    return;
  }
  std::ofstream out(path);
  if (!out) throw lg::DataError("cannot write manifest '" + path + "'");
  out << m.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw lg::DataError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw lg::DataError("failed writing '" + path + "'");
}

std::string default_manifest(const std::string& manifest, const std::string& primary_output) {
  if (!manifest.empty()) return manifest;
  return primary_output.empty() ? "" : primary_output + ".manifest";
}

void require(const std::string& value, const std::string& name) {
  if (value.empty()) throw UsageError("--" + name + " is required");
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& name) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    T v{};
    try {
      from_text(trim(item), v);
    } catch (const UsageError& e) {
      throw UsageError("--" + name + ": " + e.what());
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--" + name + " must list at least one value");
  return out;
}

// ---------------------------------------------------------------- build-graph

struct BuildGraphArgs {
  std::string definitions, word_vectors, similarity_out, edges_out, manifest;
  double percentile = 75.0;

  void declare(Settings& s) {
    s.add("definitions", definitions, "label definitions: label<TAB>tokens per line");
    s.add("word_vectors", word_vectors, "word vectors: token v1 v2 ... per line");
    s.add("percentile", percentile, "similarity percentile used as the edge threshold");
    s.add("similarity_out", similarity_out, "output: dense similarity matrix");
    s.add("edges_out", edges_out, "output: thresholded edge list");
    s.add("manifest", manifest, "run manifest path (default <edges_out>.manifest)");
  }
};

int run_build_graph(const BuildGraphArgs& a, const Settings& s) {
  require(a.definitions, "definitions");
  require(a.word_vectors, "word_vectors");
  require(a.edges_out, "edges_out");
  const Inputs inputs{{"definitions", a.definitions}, {"word_vectors", a.word_vectors}};
  const std::string manifest = default_manifest(a.manifest, a.edges_out);
  check_outputs_distinct(inputs, {a.similarity_out, a.edges_out, manifest});
  write_manifest(manifest, "build-graph", s, inputs);

  const auto defs = lg::load_definitions(a.definitions);
  const auto vectors = lg::load_word_vectors(a.word_vectors);
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> names;
  for (const auto& d : defs) {
    docs.push_back(d.tokens);
    names.push_back(d.label);
  }
  const auto idf = lg::inverse_document_frequency(docs);
  std::vector<std::vector<double>> mu;
  std::size_t dropped = 0;
  for (const auto& d : defs) {
    auto v = lg::definition_vector(d.tokens, idf, vectors);
    dropped += v.dropped_tokens;
    mu.push_back(std::move(v.values));
  }
  if (dropped > 0) std::cerr << "labelgcn: dropped " << dropped << " definition tokens with no word vector\n";

  const lg::Matrix similarity = lg::cosine_similarity_matrix(mu);
  const lg::LabelGraph graph = lg::threshold_similarity(similarity, a.percentile, names);
  if (!a.similarity_out.empty()) lg::save_similarity(a.similarity_out, similarity);
  lg::save_edge_list(a.edges_out, graph);

  const double n = static_cast<double>(graph.size());
  const double e = static_cast<double>(graph.edge_count());
  const double pairs = n * (n - 1) / 2;
  std::cout << "labels\t" << graph.size() << "\n"
            << "edges\t" << graph.edge_count() << "\n"
            << "edge_density\t" << lg::format_double(pairs > 0 ? e / pairs : 0.0) << "\n"
            << "mean_degree\t" << lg::format_double(2 * e / n) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  lg::SynthConfig config;
  std::string graph_kind = "tree";
  std::string graph_out, data_out, manifest;

  void declare(Settings& s) {
    s.add("labels", config.labels, "number of labels L");
    s.add("graph_kind", graph_kind, "tree | similarity");
    s.add("feature_dim", config.feature_dim, "feature dimension");
    s.add("train_per_label", config.train_per_label, "training examples per label");
    s.add("valid_per_label", config.valid_per_label, "validation examples per label");
    s.add("test_per_label", config.test_per_label, "test examples per label");
    s.add("smoothing", config.smoothing, "rounds of prototype smoothing over the graph");
    s.add("noise", config.noise, "noise scale sigma");
    s.add("similarity_percentile", config.similarity_percentile, "edge threshold for the similarity graph");
    s.add("seed", config.seed, "random seed");
    s.add("graph_out", graph_out, "output: edge list");
    s.add("data_out", data_out, "output: feature file with split column");
    s.add("manifest", manifest, "run manifest path (default <data_out>.manifest)");
  }
};

int run_synth(SynthArgs a, const Settings& s) {
  require(a.graph_out, "graph_out");
  require(a.data_out, "data_out");
  a.config.graph = lg::parse_synth_graph_kind(a.graph_kind);
  a.config.validate();
  const std::string manifest = default_manifest(a.manifest, a.data_out);
  write_manifest(manifest, "synth", s, {});

  const auto data = lg::generate_synthetic(a.config);
  lg::save_edge_list(a.graph_out, data.graph);
  lg::save_dataset(a.data_out, data.dataset, data.graph);
  std::cout << "labels\t" << data.graph.size() << "\n"
            << "edges\t" << data.graph.edge_count() << "\n"
            << "examples\t" << data.dataset.examples.size() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- train / search

struct DataArgs {
  std::string graph, data, input = "features";
  std::uint64_t split_seed = 1;
  std::size_t vocab_max = 100000;
  bool bigrams = true;

  void declare(Settings& s) {
    s.add("graph", graph, "label graph edge list");
    s.add("data", data, "examples: label[<TAB>split]<TAB>payload per line");
    s.add("input", input, "features | tokens");
    s.add("split_seed", split_seed, "shuffle seed for files without a split column");
    s.add("vocab_max", vocab_max, "token input: vocabulary size limit");
    s.add("bigrams", bigrams, "token input: add adjacent-token bigrams");
  }

  Inputs inputs() const { return {{"graph", graph}, {"data", data}}; }
};

struct Loaded {
  lg::LabelGraph graph;
  lg::Dataset dataset;
};

Loaded load_inputs(const DataArgs& a, const lg::Vocabulary* fixed = nullptr) {
  require(a.graph, "graph");
  require(a.data, "data");
  lg::LabelGraph graph = lg::load_edge_list(a.graph);
  lg::LoadOptions opts;
  opts.split_seed = a.split_seed;
  opts.vocabulary = {.max_size = a.vocab_max, .bigrams = a.bigrams};
  opts.fixed_vocabulary = fixed;
  lg::Dataset dataset = lg::load_dataset(a.data, lg::parse_input_kind(a.input), graph, opts);
  return {std::move(graph), std::move(dataset)};
}

struct TrainArgs {
  DataArgs data;
  lg::TrainConfig config;
  std::string kind = "gcntd", normalization = "symmetric";
  std::string crf_thetas = "-1,-0.5,-0.1,0,0.1,0.5,1", crf_iterations = "1,3,5";
  std::string checkpoint_out, history_out, manifest;

  void declare(Settings& s) {
    data.declare(s);
    s.add("kind", kind, "mlp | mlp-crf | gcntd | gcntd-id | gcntd-fc");
    s.add("hidden_dim", config.model.hidden_dim, "latent width d of z and the label vectors");
    s.add("embed_dim", config.model.embed_dim, "token input: CBoW embedding width");
    s.add("mlp_layers", config.model.mlp_layers, "encoder depth");
    s.add("gcn_layers", config.model.gcn_layers, "GCN propagation layers");
    s.add("gcn_hidden", config.model.gcn_hidden, "inner GCN width (0 = hidden_dim)");
    s.add("normalization", normalization, "symmetric | row-stochastic (gcntd)");
    s.add("crf_thetas", crf_thetas, "mlp-crf: comma-separated theta grid");
    s.add("crf_iterations", crf_iterations, "mlp-crf: comma-separated iteration grid");
    s.add("lr", config.lr, "initial Adam learning rate");
    s.add("anneal_factor", config.anneal_factor, "lr multiplier after a non-improving epoch");
    s.add("patience", config.patience, "stop after this many non-improving epochs");
    s.add("max_epochs", config.max_epochs, "epoch limit");
    s.add("batch_size", config.batch_size, "mini-batch size");
    s.add("seed", config.seed, "random seed");
    s.add("k", config.k, "top-k for metrics");
  }

  lg::TrainConfig resolved() const {
    lg::TrainConfig c = config;
    c.model.kind = lg::parse_model_kind(kind);
    c.model.normalization = lg::parse_normalization(normalization);
    c.crf_theta_grid = parse_list<double>(crf_thetas, "crf_thetas");
    c.crf_iteration_grid = parse_list<std::size_t>(crf_iterations, "crf_iterations");
    c.validate();
    return c;
  }
};

lg::Checkpoint make_checkpoint(const lg::Model& model, const lg::Dataset& dataset) {
  lg::Checkpoint cp = model.to_checkpoint();
  if (dataset.kind == lg::InputKind::kTokens) {
    cp.vocabulary = dataset.vocabulary.tokens();
    cp.hyper.emplace_back("bigrams", dataset.vocabulary.bigrams() ? "true" : "false");
  }
  return cp;
}

void print_train_summary(const lg::TrainResult& r) {
  std::cout << "epochs\t" << r.history.epochs.size() << "\n"
            << "best_epoch\t" << r.history.best_epoch << "\n"
            << "best_valid_top1\t" << lg::format_double(r.history.best_valid_top1) << "\n";
  if (r.crf) {
    std::cout << "crf_theta\t" << lg::format_double(r.crf->theta) << "\n"
              << "crf_iterations\t" << r.crf->iterations << "\n"
              << "crf_valid_top1\t" << lg::format_double(r.crf->valid_top1) << "\n";
  }
}

struct TrainCommand {
  TrainArgs args;
  void declare(Settings& s) {
    args.declare(s);
    s.add("checkpoint_out", args.checkpoint_out, "output: trained parameters");
    s.add("history_out", args.history_out, "output: per-epoch log");
    s.add("manifest", args.manifest, "run manifest path (default <checkpoint_out>.manifest)");
  }
};

int run_train(const TrainArgs& a, const Settings& s) {
  require(a.checkpoint_out, "checkpoint_out");
  const lg::TrainConfig config = a.resolved();
  const Inputs inputs = a.data.inputs();
  const std::string manifest = default_manifest(a.manifest, a.checkpoint_out);
  check_outputs_distinct(inputs, {a.checkpoint_out, a.history_out, manifest});
  write_manifest(manifest, "train", s, inputs);

  const Loaded in = load_inputs(a.data);
  const lg::TrainResult result = lg::train(in.dataset, in.graph, config);
  lg::save_checkpoint(a.checkpoint_out, make_checkpoint(result.model, in.dataset));
  if (!a.history_out.empty()) write_text(a.history_out, lg::format_history(result.history));
  print_train_summary(result);
  return kOk;
}

struct SearchCommand {
  TrainArgs args;
  lg::SearchSpace space;
  std::size_t budget = 10;
  std::string trials_out, best_config_out;

  void declare(Settings& s) {
    args.declare(s);
    s.add("budget", budget, "number of sampled configurations");
    s.add("embed_dim_min", space.embed_dim_min, "search range: smallest width");
    s.add("embed_dim_max", space.embed_dim_max, "search range: largest width");
    s.add("lr_min", space.lr_min, "search range: smallest learning rate");
    s.add("lr_max", space.lr_max, "search range: largest learning rate");
    s.add("trials_out", trials_out, "output: one line per trial");
    s.add("best_config_out", best_config_out, "output: train config file for the winner");
    s.add("checkpoint_out", args.checkpoint_out, "output: winner retrained and saved (optional)");
    s.add("manifest", args.manifest, "run manifest path (default <trials_out>.manifest)");
  }
};

int run_search(const SearchCommand& c, const Settings& s) {
  require(c.trials_out, "trials_out");
  const lg::TrainConfig base = c.args.resolved();
  const Inputs inputs = c.args.data.inputs();
  const std::string manifest = default_manifest(c.args.manifest, c.trials_out);
  check_outputs_distinct(inputs, {c.trials_out, c.best_config_out, c.args.checkpoint_out, manifest});
  write_manifest(manifest, "search", s, inputs);

  const Loaded in = load_inputs(c.args.data);
  const lg::SearchResult result = lg::random_search(c.space, c.budget, in.dataset, in.graph, base);
  write_text(c.trials_out, lg::format_trials(result.trials));

  const lg::SearchTrial& best = result.trials[result.best_trial];
  TrainCommand winner;
  winner.args = c.args;
  winner.args.config.lr = best.lr;
  winner.args.config.seed = best.seed;
  if (in.dataset.kind == lg::InputKind::kTokens) {
    winner.args.config.model.embed_dim = best.embed_dim;
  } else {
    winner.args.config.model.hidden_dim = best.embed_dim;
  }
  winner.args.manifest.clear();
  if (!c.best_config_out.empty()) {
    Settings ws;
    winner.declare(ws);
    write_text(c.best_config_out, "command = train\n" + ws.dump());
  }
  if (!c.args.checkpoint_out.empty()) {
    const lg::TrainResult r = lg::train(in.dataset, in.graph, result.best);
    lg::save_checkpoint(c.args.checkpoint_out, make_checkpoint(r.model, in.dataset));
  }
  std::cout << "best_trial\t" << best.index << "\n"
            << "embed_dim\t" << best.embed_dim << "\n"
            << "lr\t" << lg::format_double(best.lr) << "\n"
            << "seed\t" << best.seed << "\n"
            << "valid_top1\t" << lg::format_double(best.valid_top1) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  DataArgs data;
  std::string checkpoint, split = "test", report_out, record_out, manifest;
  std::size_t k = 10;
  bool leaf_only = false;

  void declare(Settings& s) {
    data.declare(s);
    s.add("checkpoint", checkpoint, "trained parameters");
    s.add("split", split, "train | valid | test");
    s.add("k", k, "top-k for metrics");
    s.add("leaf_only", leaf_only, "keep only examples whose true label is a leaf");
    s.add("report_out", report_out, "output: key<TAB>value report (default stdout)");
    s.add("record_out", record_out, "output: header plus one tab-separated record");
    s.add("manifest", manifest, "run manifest path (default <report_out>.manifest)");
  }
};

int run_eval(const EvalArgs& a, const Settings& s) {
  require(a.checkpoint, "checkpoint");
  Inputs inputs = a.data.inputs();
  inputs.emplace_back("checkpoint", a.checkpoint);
  const std::string manifest = default_manifest(a.manifest, a.report_out);
  check_outputs_distinct(inputs, {a.report_out, a.record_out, manifest});
  const lg::Split split = lg::parse_split(a.split);
  write_manifest(manifest, "eval", s, inputs);

  const lg::Checkpoint cp = lg::load_checkpoint(a.checkpoint);
  lg::Vocabulary vocab;
  const lg::Vocabulary* fixed = nullptr;
  if (!cp.vocabulary.empty()) {
    vocab = lg::Vocabulary(cp.vocabulary);
    vocab.set_bigrams(cp.has_hyper("bigrams") && cp.hyper_value("bigrams") == "true");
    fixed = &vocab;
  }
  const Loaded in = load_inputs(a.data, fixed);
  const lg::Model model = lg::Model::from_checkpoint(cp, in.graph);
  const lg::MetricsReport report =
      lg::evaluate(model, in.dataset, split, in.graph, {.k = a.k, .leaf_only = a.leaf_only});

  const std::string block = lg::format_report_block(report);
  if (a.report_out.empty()) {
    std::cout << block;
  } else {
    write_text(a.report_out, block);
  }
  if (!a.record_out.empty()) {
    write_text(a.record_out, lg::report_record_header() + "\n" + lg::format_report_record(report) + "\n");
  }
  return kOk;
}

// ---------------------------------------------------------------- main

/// The subcommand name and --config value, found before CLI11 parses so the
/// config can seed the option defaults (flags then override them).
std::pair<std::string, std::string> prescan(int argc, char** argv, const std::vector<std::string>& commands) {
  std::string command, config;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (command.empty() && std::find(commands.begin(), commands.end(), arg) != commands.end()) command = arg;
    if (arg == "--config" && i + 1 < argc) config = argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) config = arg.substr(9);
  }
  return {command, config};
}

int run(int argc, char** argv) {
  CLI::App app{"Classifiers over a label graph: GCN label decoders, MLP and mean-field CRF baselines"};
  app.set_version_flag("--version", LABELGCN_VERSION);
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default); results do not depend on it");

  BuildGraphArgs build_args;
  SynthArgs synth_args;
  TrainCommand train_cmd;
  SearchCommand search_cmd;
  EvalArgs eval_args;
  Settings build_s, synth_s, train_s, search_s, eval_s;
  build_args.declare(build_s);
  synth_args.declare(synth_s);
  train_cmd.declare(train_s);
  search_cmd.declare(search_s);
  eval_args.declare(eval_s);

  struct Sub {
    const char* name;
    const char* help;
    Settings* settings;
    CLI::App* app = nullptr;
  };
  std::vector<Sub> subs{
      {"build-graph", "build a label graph from definitions and word vectors", &build_s},
      {"synth", "generate a synthetic graph-structured dataset", &synth_s},
      {"train", "train one model", &train_s},
      {"search", "random search over width and learning rate", &search_s},
      {"eval", "evaluate a checkpoint", &eval_s},
  };

  std::vector<std::string> names;
  for (const auto& sub : subs) names.push_back(sub.name);
  const auto [command, config] = prescan(argc, argv, names);
  for (auto& sub : subs) {
    if (!config.empty() && command == sub.name) sub.settings->apply(read_config(config, sub.name), config);
    sub.app = app.add_subcommand(sub.name, sub.help);
    sub.app->add_option("--config", "flat key = value file; flags override it");
    sub.settings->bind(*sub.app);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (threads > 0) omp_set_num_threads(static_cast<int>(threads));

  if (subs[0].app->parsed()) return run_build_graph(build_args, build_s);
  if (subs[1].app->parsed()) return run_synth(synth_args, synth_s);
  if (subs[2].app->parsed()) return run_train(train_cmd.args, train_s);
  if (subs[3].app->parsed()) return run_search(search_cmd, search_s);
  return run_eval(eval_args, eval_s);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "labelgcn: usage error: " << e.what() << "\n(run with --help for usage)\n";
    return kUsage;
  } catch (const lg::ArgumentError& e) {
    std::cerr << "labelgcn: invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const lg::ShapeError& e) {
    std::cerr << "labelgcn: shape error: " << e.what() << "\n";
    return kShape;
  } catch (const lg::NumericError& e) {
    std::cerr << "labelgcn: numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const lg::DataError& e) {
    std::cerr << "labelgcn: data error: " << e.what() << "\n";
    return kData;
  } catch (const lg::IndexError& e) {
    std::cerr << "labelgcn: index error: " << e.what() << "\n";
    return kIndex;
  } catch (const lg::InvariantError& e) {
    std::cerr << "labelgcn: invariant violated: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "labelgcn: error: " << e.what() << "\n";
    return kFailure;
  }
}
