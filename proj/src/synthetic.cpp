#include "labelgcn/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "labelgcn/embedding.hpp"
#include "labelgcn/error.hpp"
#include "labelgcn/rng.hpp"

namespace labelgcn {

std::string to_string(SynthGraphKind kind) { return kind == SynthGraphKind::kSimilarity ? "similarity" : "tree"; }

SynthGraphKind parse_synth_graph_kind(std::string_view text) {
  if (text == "tree") return SynthGraphKind::kRandomTree;
  if (text == "similarity") return SynthGraphKind::kSimilarity;
  throw ArgumentError("unknown synthetic graph kind '" + std::string(text) + "' (tree, similarity)");
}

void SynthConfig::validate() const {
  if (labels < 2) throw ArgumentError("synthetic data needs at least 2 labels");
  if (feature_dim == 0) throw ArgumentError("feature_dim must be positive");
  if (train_per_label == 0 || valid_per_label == 0 || test_per_label == 0) {
    throw ArgumentError("per-label example counts must be >= 1");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ArgumentError("noise must be finite and >= 0");
  if (!(similarity_percentile > 0.0 && similarity_percentile < 100.0)) {
    throw ArgumentError("similarity_percentile must lie in (0, 100)");
  }
}

namespace {

std::vector<std::string> label_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "label_%03zu", i);
    names.emplace_back(buf);
  }
  return names;
}

LabelGraph similarity_graph(std::size_t labels, double percentile, Rng& rng) {
  constexpr std::size_t kLatentDim = 8;
  std::vector<std::vector<double>> latent(labels, std::vector<double>(kLatentDim));
  for (auto& v : latent)
    for (double& x : v) x = rng.normal();
  return threshold_similarity(cosine_similarity_matrix(latent), percentile);
}

}  // namespace

LabelGraph random_tree(std::size_t labels, Rng& rng) {
  std::vector<Edge> edges;
  edges.reserve(labels > 0 ? labels - 1 : 0);
  for (std::size_t i = 1; i < labels; ++i) edges.push_back({rng.index(i), i, 1.0});
  return LabelGraph::from_edges(labels, edges);
}

Matrix smooth_prototypes(const LabelGraph& graph, std::size_t dim, std::size_t rounds, Rng& rng) {
  const std::size_t n = graph.size();
  Matrix p(n, dim);
  for (double& v : p.data()) v = rng.normal();
  const Matrix mix = normalize_adjacency(graph, Normalization::kRowStochastic).matrix;
  for (std::size_t r = 0; r < rounds; ++r) p = matmul(mix, p);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (double v : p.row(i)) sq += v * v;
    const double rms = std::sqrt(sq / static_cast<double>(dim));
    if (rms > 0.0)
      for (double& v : p.row(i)) v /= rms;
  }
  return p;
}

SyntheticData generate_synthetic(const SynthConfig& config) {
  config.validate();
  Rng master(config.seed);
  Rng graph_rng = master.split();
  Rng proto_rng = master.split();
  Rng noise_rng = master.split();

  LabelGraph structure = config.graph == SynthGraphKind::kRandomTree
                             ? random_tree(config.labels, graph_rng)
                             : similarity_graph(config.labels, config.similarity_percentile, graph_rng);
  LabelGraph graph(structure.adjacency(), label_names(config.labels));

  SyntheticData out{Dataset{}, graph, smooth_prototypes(graph, config.feature_dim, config.smoothing, proto_rng)};
  Dataset& ds = out.dataset;
  ds.kind = InputKind::kFeatures;
  ds.feature_dim = config.feature_dim;

  const std::pair<Split, std::size_t> plan[] = {
      {Split::kTrain, config.train_per_label},
      {Split::kValid, config.valid_per_label},
      {Split::kTest, config.test_per_label},
  };
  for (const auto& [split, count] : plan) {
    for (std::size_t label = 0; label < config.labels; ++label) {
      for (std::size_t c = 0; c < count; ++c) {
        Example e;
        e.label = label;
        e.split = split;
        e.features.resize(config.feature_dim);
        for (std::size_t j = 0; j < config.feature_dim; ++j) {
          e.features[j] = out.prototypes(label, j) + config.noise * noise_rng.normal();
        }
        ds.examples.push_back(std::move(e));
      }
    }
  }
  return out;
}

}  // namespace labelgcn
