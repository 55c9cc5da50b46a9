#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "labelgcn/embedding.hpp"
#include "labelgcn/label_graph.hpp"
#include "labelgcn/models.hpp"

namespace labelgcn {

enum class Split { kTrain, kValid, kTest };

std::string to_string(Split split);
Split parse_split(std::string_view text);

struct Example {
  std::vector<double> features;       // feature datasets
  std::vector<std::string> words;     // token datasets: raw tokens as read
  std::vector<std::size_t> tokens;    // token datasets: vocabulary indices
  std::size_t label = 0;
  Split split = Split::kTrain;

  ModelInput input() const { return {features, tokens}; }
  friend bool operator==(const Example&, const Example&) = default;
};

struct Dataset {
  InputKind kind = InputKind::kFeatures;
  std::size_t feature_dim = 0;
  Vocabulary vocabulary;
  std::vector<Example> examples;

  std::vector<std::size_t> indices(Split split) const;
  /// Feature dimension, or vocabulary size for token input.
  std::size_t input_dim() const;
  /// Homogeneous input, labels < label_count, consistent dimensions.
  void validate(std::size_t label_count) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.kind == b.kind && a.feature_dim == b.feature_dim && a.vocabulary == b.vocabulary &&
           a.examples == b.examples;
  }
};

struct LoadOptions {
  std::uint64_t split_seed = 1;    // used only when the file has no split column
  VocabularyOptions vocabulary;    // token input: how to build the vocabulary
  const Vocabulary* fixed_vocabulary = nullptr;  // token input: reuse instead of building
};

// Line formats (tab separated; `#` comment lines and blank lines skipped):
//   features:  label_name [<TAB>split] <TAB> v1 v2 ... vd
//   documents: label_name [<TAB>split] <TAB> token token ...
// The optional split column (train|valid|test) must be present on every
// line or on none; without it examples are shuffled with `split_seed` and
// split 60/20/20.

Dataset read_dataset(std::istream& in, InputKind kind, const LabelGraph& graph, const LoadOptions& options = {},
                     const std::string& source = "<dataset>");
Dataset load_dataset(const std::string& path, InputKind kind, const LabelGraph& graph,
                     const LoadOptions& options = {});
/// Always writes the split column, so reading back reproduces the dataset.
void write_dataset(std::ostream& out, const Dataset& dataset, const LabelGraph& graph);
void save_dataset(const std::string& path, const Dataset& dataset, const LabelGraph& graph);

/// Seeded shuffle, then the first round(0.6 n) train, next round(0.2 n) valid, rest test.
void assign_random_splits(std::vector<Example>& examples, std::uint64_t seed);

}  // namespace labelgcn
