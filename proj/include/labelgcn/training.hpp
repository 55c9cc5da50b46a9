#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "labelgcn/dataset.hpp"
#include "labelgcn/metrics.hpp"
#include "labelgcn/models.hpp"

namespace labelgcn {

struct TrainConfig {
  /// Architecture. label_count, input and input_dim are filled from the
  /// dataset/graph by resolve(); the rest is taken as given.
  ModelConfig model;
  double lr = 1e-3;
  double anneal_factor = 0.5;
  std::size_t patience = 10;
  std::size_t max_epochs = 200;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
  std::size_t k = 10;
  /// MLP-CRF post-hoc tuning grid, searched on validation top-1.
  std::vector<double> crf_theta_grid = {-1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0};
  std::vector<std::size_t> crf_iteration_grid = {1, 3, 5};

  void validate() const;
  /// Copy with the data-dependent model fields filled in.
  TrainConfig resolve(const Dataset& dataset, const LabelGraph& graph) const;
};

struct EpochRecord {
  std::size_t epoch = 0;    // 1-based
  double train_nll = 0.0;   // mean per-example NLL over the epoch's batches
  double valid_top1 = 0.0;
  double lr = 0.0;          // learning rate used during the epoch
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 1-based; 0 if no epoch ran
  double best_valid_top1 = 0.0;
};

struct CrfTuning {
  double theta = 0.0;
  std::size_t iterations = 1;
  double valid_top1 = 0.0;
};

struct TrainResult {
  Model model;
  TrainHistory history;
  std::optional<CrfTuning> crf;  // MLP-CRF only
};

/// Mini-batch NLL training with Adam. After each epoch the learning rate is
/// multiplied by anneal_factor if validation top-1 did not improve, and
/// training stops after `patience` such epochs in a row. Returns the
/// parameters of the best validation epoch. For MLP-CRF the unary network is
/// trained with θ = 0, then (θ, T) is grid-searched on validation top-1.
TrainResult train(const Dataset& dataset, const LabelGraph& graph, const TrainConfig& config);

/// Per-example rankings for one split; forwards run in parallel.
std::vector<Ranking> rank_split(const Model& model, const Dataset& dataset, Split split);
double top1_accuracy(const Model& model, const Dataset& dataset, Split split);

struct EvalOptions {
  std::size_t k = 10;
  bool leaf_only = false;  // keep only examples whose truth is a degree <= 1 node
};

MetricsReport evaluate(const Model& model, const Dataset& dataset, Split split, const LabelGraph& graph,
                       const EvalOptions& options = {});

struct SearchSpace {
  std::size_t embed_dim_min = 32;
  std::size_t embed_dim_max = 256;
  double lr_min = 1e-4;
  double lr_max = 1e-2;
};

struct SearchTrial {
  std::size_t index = 0;
  std::size_t embed_dim = 0;
  double lr = 0.0;
  std::uint64_t seed = 0;
  double valid_top1 = 0.0;
  std::size_t epochs = 0;
};

struct SearchResult {
  TrainConfig best;
  std::size_t best_trial = 0;
  std::vector<SearchTrial> trials;
};

/// Draws `budget` (embed_dim, lr, seed) triples, log-uniform over the space,
/// from a generator seeded with base.seed. For token input embed_dim sets the
/// CBoW width d_e; for feature input it sets the latent width d.
std::vector<SearchTrial> sample_trials(const SearchSpace& space, std::size_t budget, std::uint64_t master_seed);
/// Index of the highest valid_top1; ties go to the earliest trial.
std::size_t select_best_trial(std::span<const SearchTrial> trials);
TrainConfig apply_trial(const TrainConfig& base, const SearchTrial& trial);

/// Trains every sampled trial (concurrently when threads are available) and
/// returns the configuration with the best validation top-1.
SearchResult random_search(const SearchSpace& space, std::size_t budget, const Dataset& dataset,
                           const LabelGraph& graph, const TrainConfig& base);

std::string format_history(const TrainHistory& history);
std::string format_trials(std::span<const SearchTrial> trials);

}  // namespace labelgcn
