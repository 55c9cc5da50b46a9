#include "labelgcn/training.hpp"

#include <cmath>
#include <exception>
#include <numeric>
#include <optional>
#include <sstream>

#include "labelgcn/adam.hpp"
#include "labelgcn/error.hpp"
#include "labelgcn/graph_io.hpp"
#include "labelgcn/rng.hpp"

namespace labelgcn {

void TrainConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ArgumentError("lr must be positive");
  if (!(anneal_factor > 0.0 && anneal_factor < 1.0)) throw ArgumentError("anneal_factor must lie in (0, 1)");
  if (patience < 1) throw ArgumentError("patience must be >= 1");
  if (max_epochs < 1) throw ArgumentError("max_epochs must be >= 1");
  if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
  if (k < 1) throw ArgumentError("k must be >= 1");
  if (model.kind == ModelKind::kMlpCrf && (crf_theta_grid.empty() || crf_iteration_grid.empty())) {
    throw ArgumentError("MLP-CRF needs a non-empty theta and iteration grid");
  }
  for (auto t : crf_iteration_grid)
    if (t == 0) throw ArgumentError("crf iteration grid entries must be >= 1");
}

TrainConfig TrainConfig::resolve(const Dataset& dataset, const LabelGraph& graph) const {
  TrainConfig c = *this;
  c.model.label_count = graph.size();
  c.model.input = dataset.kind;
  c.model.input_dim = dataset.input_dim();
  return c;
}

std::vector<Ranking> rank_split(const Model& model, const Dataset& dataset, Split split) {
  if (model.config().input != dataset.kind || model.config().input_dim != dataset.input_dim()) {
    throw ShapeError("model expects " + to_string(model.config().input) + " input of dimension " +
                     std::to_string(model.config().input_dim) + ", dataset provides " + to_string(dataset.kind) +
                     " of dimension " + std::to_string(dataset.input_dim()));
  }
  const auto idx = dataset.indices(split);
  std::vector<Ranking> out(idx.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(idx.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const Example& e = dataset.examples[idx[static_cast<std::size_t>(i)]];
      out[i] = Ranking{rank_labels(model.scores(e.input())), e.label};
    } catch (...) {
#pragma omp critical(labelgcn_rank_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double top1_accuracy(const Model& model, const Dataset& dataset, Split split) {
  const auto rankings = rank_split(model, dataset, split);
  if (rankings.empty()) return 0.0;
  return accuracy_at_k(rankings, 1);
}

namespace {

bool all_finite(const ParameterSet& params) {
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!params[i].all_finite()) return false;
  return true;
}

CrfTuning tune_crf(Model& model, const Dataset& dataset, const TrainConfig& config) {
  CrfTuning best;
  bool have = false;
  for (double theta : config.crf_theta_grid) {
    for (std::size_t iterations : config.crf_iteration_grid) {
      model.set_crf(theta, iterations);
      const double acc = top1_accuracy(model, dataset, Split::kValid);
      if (!have || acc > best.valid_top1) {
        best = {theta, iterations, acc};
        have = true;
      }
    }
  }
  model.set_crf(best.theta, best.iterations);
  return best;
}

}  // namespace

TrainResult train(const Dataset& dataset, const LabelGraph& graph, const TrainConfig& raw_config) {
  const TrainConfig config = raw_config.resolve(dataset, graph);
  config.validate();
  dataset.validate(graph.size());
  auto train_idx = dataset.indices(Split::kTrain);
  if (train_idx.empty()) throw DataError("training split is empty");
  if (dataset.indices(Split::kValid).empty()) throw DataError("validation split is empty");

  Rng rng(config.seed);
  Rng init_rng = rng.split();
  Rng order_rng = rng.split();
  Model model = Model::create(config.model, graph, init_rng);
  if (model.kind() == ModelKind::kMlpCrf) model.set_crf(0.0, config.model.crf_iterations);

  Adam adam(model.parameters(), AdamOptions{.lr = config.lr});
  TrainHistory history;
  ParameterSet best_params = model.parameters();
  double best_valid = -1.0;
  std::size_t stale = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(train_idx));
    const double epoch_lr = adam.lr();
    double nll_sum = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < train_idx.size(); start += config.batch_size, ++batch_no) {
      const std::size_t end = std::min(start + config.batch_size, train_idx.size());
      const std::string where = "epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch_no);
      try {
        Tape tape(model.parameters());
        std::optional<Var> total;
        for (std::size_t i = start; i < end; ++i) {
          const Example& e = dataset.examples[train_idx[i]];
          const Var loss = tape.softmax_nll(model.forward(tape, e.input()), e.label);
          total = total ? tape.add(*total, loss) : loss;
        }
        const Var mean_loss = tape.scale(*total, 1.0 / static_cast<double>(end - start));
        const double batch_loss = tape.value(*total)(0, 0);
        if (!std::isfinite(batch_loss)) throw NumericError("non-finite training loss");
        nll_sum += batch_loss;
        Gradients grads = model.parameters().zeros_like();
        tape.backward(mean_loss, grads);
        adam.step(model.parameters(), grads);
        if (!all_finite(model.parameters())) throw NumericError("non-finite parameters after update");
      } catch (const NumericError& e) {
        throw NumericError(where + ": " + e.what());
      }
    }

    const double valid = top1_accuracy(model, dataset, Split::kValid);
    history.epochs.push_back({epoch, nll_sum / static_cast<double>(train_idx.size()), valid, epoch_lr});
    if (valid > best_valid) {
      best_valid = valid;
      best_params = model.parameters();
      history.best_epoch = epoch;
      history.best_valid_top1 = valid;
      stale = 0;
    } else {
      adam.set_lr(adam.lr() * config.anneal_factor);
      if (++stale >= config.patience) break;
    }
  }

  model.parameters() = best_params;
  TrainResult result{std::move(model), std::move(history), std::nullopt};
  if (result.model.kind() == ModelKind::kMlpCrf) result.crf = tune_crf(result.model, dataset, config);
  return result;
}

MetricsReport evaluate(const Model& model, const Dataset& dataset, Split split, const LabelGraph& graph,
                       const EvalOptions& options) {
  if (graph.size() != model.label_count()) {
    throw ShapeError("model has " + std::to_string(model.label_count()) + " labels, graph has " +
                     std::to_string(graph.size()));
  }
  auto rankings = rank_split(model, dataset, split);
  if (options.leaf_only) {
    const auto leaves = graph.leaf_nodes();
    rankings = filter_by_truth(rankings, leaves);
  }
  return compute_metrics(rankings, graph, options.k);
}

std::vector<SearchTrial> sample_trials(const SearchSpace& space, std::size_t budget, std::uint64_t master_seed) {
  if (budget == 0) throw ArgumentError("random search budget must be >= 1");
  if (space.embed_dim_min == 0 || space.embed_dim_max < space.embed_dim_min) {
    throw ArgumentError("invalid embed_dim search range");
  }
  Rng rng(master_seed);
  std::vector<SearchTrial> trials(budget);
  for (std::size_t i = 0; i < budget; ++i) {
    SearchTrial& t = trials[i];
    t.index = i;
    const double d = rng.log_uniform(static_cast<double>(space.embed_dim_min), static_cast<double>(space.embed_dim_max));
    t.embed_dim = std::clamp(static_cast<std::size_t>(std::llround(d)), space.embed_dim_min, space.embed_dim_max);
    t.lr = rng.log_uniform(space.lr_min, space.lr_max);
    t.seed = rng.next();
  }
  return trials;
}

std::size_t select_best_trial(std::span<const SearchTrial> trials) {
  if (trials.empty()) throw ArgumentError("no trials to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < trials.size(); ++i)
    if (trials[i].valid_top1 > trials[best].valid_top1) best = i;
  return best;
}

TrainConfig apply_trial(const TrainConfig& base, const SearchTrial& trial) {
  TrainConfig c = base;
  if (c.model.input == InputKind::kTokens) {
    c.model.embed_dim = trial.embed_dim;
  } else {
    c.model.hidden_dim = trial.embed_dim;
  }
  c.lr = trial.lr;
  c.seed = trial.seed;
  return c;
}

SearchResult random_search(const SearchSpace& space, std::size_t budget, const Dataset& dataset,
                           const LabelGraph& graph, const TrainConfig& base) {
  const TrainConfig resolved = base.resolve(dataset, graph);
  SearchResult result;
  result.trials = sample_trials(space, budget, base.seed);

  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(result.trials.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      SearchTrial& trial = result.trials[static_cast<std::size_t>(i)];
      const TrainResult run = train(dataset, graph, apply_trial(resolved, trial));
      trial.valid_top1 = run.crf ? run.crf->valid_top1 : run.history.best_valid_top1;
      trial.epochs = run.history.epochs.size();
    } catch (...) {
#pragma omp critical(labelgcn_search_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  result.best_trial = select_best_trial(result.trials);
  result.best = apply_trial(resolved, result.trials[result.best_trial]);
  return result;
}

std::string format_history(const TrainHistory& history) {
  std::ostringstream out;
  out << "epoch\ttrain_nll\tvalid_top1\tlr\n";
  for (const auto& e : history.epochs) {
    out << e.epoch << '\t' << format_double(e.train_nll) << '\t' << format_double(e.valid_top1) << '\t'
        << format_double(e.lr) << '\n';
  }
  return out.str();
}

std::string format_trials(std::span<const SearchTrial> trials) {
  std::ostringstream out;
  out << "trial\tembed_dim\tlr\tseed\tvalid_top1\tepochs\n";
  for (const auto& t : trials) {
    out << t.index << '\t' << t.embed_dim << '\t' << format_double(t.lr) << '\t' << t.seed << '\t'
        << format_double(t.valid_top1) << '\t' << t.epochs << '\n';
  }
  return out.str();
}

}  // namespace labelgcn
