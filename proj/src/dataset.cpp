#include "labelgcn/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>

#include "labelgcn/error.hpp"
#include "labelgcn/graph_io.hpp"
#include "labelgcn/rng.hpp"

namespace labelgcn {

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "valid") return Split::kValid;
  if (text == "test") return Split::kTest;
  throw ArgumentError("unknown split '" + std::string(text) + "' (train, valid, test)");
}

std::vector<std::size_t> Dataset::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < examples.size(); ++i)
    if (examples[i].split == split) out.push_back(i);
  return out;
}

std::size_t Dataset::input_dim() const { return kind == InputKind::kTokens ? vocabulary.size() : feature_dim; }

void Dataset::validate(std::size_t label_count) const {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const Example& e = examples[i];
    if (e.label >= label_count) {
      throw DataError("example " + std::to_string(i) + " has label " + std::to_string(e.label) + " but the graph has " +
                      std::to_string(label_count) + " labels");
    }
    if (kind == InputKind::kFeatures) {
      if (e.features.size() != feature_dim || !e.tokens.empty()) {
        throw DataError("example " + std::to_string(i) + " does not match feature dimension " +
                        std::to_string(feature_dim));
      }
    } else {
      if (e.tokens.empty() || !e.features.empty()) throw DataError("example " + std::to_string(i) + " has no tokens");
      for (std::size_t t : e.tokens)
        if (t >= vocabulary.size()) throw DataError("example " + std::to_string(i) + " has an out-of-vocabulary index");
    }
  }
}

void assign_random_splits(std::vector<Example>& examples, std::uint64_t seed) {
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const auto n = static_cast<double>(examples.size());
  const auto n_train = static_cast<std::size_t>(std::llround(0.6 * n));
  const auto n_valid = static_cast<std::size_t>(std::llround(0.2 * n));
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    Split s = Split::kTest;
    if (pos < n_train) {
      s = Split::kTrain;
    } else if (pos < n_train + n_valid) {
      s = Split::kValid;
    }
    examples[order[pos]].split = s;
  }
}

namespace {

struct RawLine {
  std::size_t line_no;
  std::size_t label;
  std::optional<Split> split;
  std::string payload;
};

}  // namespace

Dataset read_dataset(std::istream& in, InputKind kind, const LabelGraph& graph, const LoadOptions& options,
                     const std::string& source) {
  std::vector<RawLine> lines;
  std::string line;
  std::size_t line_no = 0;
  std::optional<bool> has_split;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError(source, line_no, "expected 'label<TAB>...'");
    const std::string label = line.substr(0, tab);
    const auto idx = graph.index_of(label);
    if (!idx) throw ParseError(source, line_no, "unknown label '" + label + "' (not in the graph's name table)");

    std::string rest = line.substr(tab + 1);
    std::optional<Split> split;
    const auto tab2 = rest.find('\t');
    if (tab2 != std::string::npos) {
      const std::string tag = rest.substr(0, tab2);
      if (tag != "train" && tag != "valid" && tag != "test") {
        throw ParseError(source, line_no, "unexpected second column '" + tag + "' (split must be train|valid|test)");
      }
      split = parse_split(tag);
      rest = rest.substr(tab2 + 1);
    }
    if (!has_split) has_split = split.has_value();
    if (*has_split != split.has_value()) throw ParseError(source, line_no, "split column must be on every line or none");
    lines.push_back({line_no, *idx, split, std::move(rest)});
  }
  if (lines.empty()) throw ParseError(source, line_no, "no examples found");

  Dataset ds;
  ds.kind = kind;
  ds.examples.reserve(lines.size());
  if (kind == InputKind::kFeatures) {
    for (const RawLine& raw : lines) {
      Example e;
      e.label = raw.label;
      e.split = raw.split.value_or(Split::kTrain);
      for (const auto& tok : split_whitespace(raw.payload)) e.features.push_back(parse_double(tok, source, raw.line_no));
      if (e.features.empty()) throw ParseError(source, raw.line_no, "example has no feature values");
      if (ds.examples.empty()) ds.feature_dim = e.features.size();
      if (e.features.size() != ds.feature_dim) {
        throw ParseError(source, raw.line_no, "ragged feature row: " + std::to_string(e.features.size()) +
                                                  " values, expected " + std::to_string(ds.feature_dim));
      }
      ds.examples.push_back(std::move(e));
    }
  } else {
    for (const RawLine& raw : lines) {
      Example e;
      e.label = raw.label;
      e.split = raw.split.value_or(Split::kTrain);
      e.words = split_whitespace(raw.payload);
      if (e.words.empty()) throw ParseError(source, raw.line_no, "empty document");
      ds.examples.push_back(std::move(e));
    }
    if (options.fixed_vocabulary) {
      ds.vocabulary = *options.fixed_vocabulary;
    } else {
      std::vector<std::vector<std::string>> docs;
      docs.reserve(ds.examples.size());
      for (const auto& e : ds.examples) docs.push_back(e.words);
      ds.vocabulary = Vocabulary::build(docs, options.vocabulary);
    }
    for (std::size_t i = 0; i < ds.examples.size(); ++i) {
      ds.examples[i].tokens = ds.vocabulary.encode(ds.examples[i].words);
      if (ds.examples[i].tokens.empty()) {
        throw ParseError(source, lines[i].line_no, "document has no in-vocabulary tokens");
      }
    }
  }

  if (!*has_split) assign_random_splits(ds.examples, options.split_seed);
  ds.validate(graph.size());
  return ds;
}

Dataset load_dataset(const std::string& path, InputKind kind, const LabelGraph& graph, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  return read_dataset(in, kind, graph, options, path);
}

void write_dataset(std::ostream& out, const Dataset& dataset, const LabelGraph& graph) {
  for (const Example& e : dataset.examples) {
    out << graph.name(e.label) << '\t' << to_string(e.split) << '\t';
    if (dataset.kind == InputKind::kFeatures) {
      for (std::size_t j = 0; j < e.features.size(); ++j) {
        if (j) out << ' ';
        out << format_double(e.features[j]);
      }
    } else {
      for (std::size_t j = 0; j < e.words.size(); ++j) {
        if (j) out << ' ';
        out << e.words[j];
      }
    }
    out << '\n';
  }
}

void save_dataset(const std::string& path, const Dataset& dataset, const LabelGraph& graph) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write_dataset(out, dataset, graph);
}

}  // namespace labelgcn
