#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "labelgcn/dataset.hpp"
#include "labelgcn/label_graph.hpp"
#include "labelgcn/matrix.hpp"

namespace labelgcn {

enum class SynthGraphKind { kRandomTree, kSimilarity };

std::string to_string(SynthGraphKind kind);
SynthGraphKind parse_synth_graph_kind(std::string_view text);

struct SynthConfig {
  std::size_t labels = 30;
  SynthGraphKind graph = SynthGraphKind::kRandomTree;
  std::size_t feature_dim = 16;
  std::size_t train_per_label = 20;
  std::size_t valid_per_label = 5;
  std::size_t test_per_label = 5;
  std::size_t smoothing = 3;             // λ: rounds of neighbour averaging of the prototypes
  double noise = 1.0;                    // σ
  double similarity_percentile = 75.0;   // kSimilarity only
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticData {
  Dataset dataset;
  LabelGraph graph;
  Matrix prototypes;  // L × feature_dim
};

/// Random recursive tree: node i > 0 attaches to a uniform parent in [0, i).
LabelGraph random_tree(std::size_t labels, Rng& rng);

/// Label prototypes: i.i.d. standard normal rows, then `rounds` applications
/// of the self-looped row-stochastic adjacency D̃^-1 Ã, then each row rescaled
/// to unit RMS.
Matrix smooth_prototypes(const LabelGraph& graph, std::size_t dim, std::size_t rounds, Rng& rng);

/// Graph-structured classification data: each example is its label's
/// prototype plus σ-scaled Gaussian noise. Bit-reproducible per seed.
SyntheticData generate_synthetic(const SynthConfig& config);

}  // namespace labelgcn
