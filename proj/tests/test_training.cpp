#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "labelgcn/error.hpp"
#include "labelgcn/synthetic.hpp"
#include "labelgcn/training.hpp"
#include "oracles.hpp"

using namespace labelgcn;

namespace {

Example feature_example(std::vector<double> x, std::size_t label, Split split) {
  Example e;
  e.features = std::move(x);
  e.label = label;
  e.split = split;
  return e;
}

Dataset features(std::size_t dim, std::vector<Example> examples) {
  Dataset d;
  d.kind = InputKind::kFeatures;
  d.feature_dim = dim;
  d.examples = std::move(examples);
  return d;
}

TrainConfig small(ModelKind kind) {
  TrainConfig c;
  c.model.kind = kind;
  c.model.hidden_dim = 8;
  c.max_epochs = 30;
  c.lr = 1e-2;
  c.seed = 5;
  return c;
}

SyntheticData tiny_synth() {
  SynthConfig s;
  s.labels = 8;
  s.feature_dim = 6;
  s.train_per_label = 6;
  s.valid_per_label = 3;
  s.test_per_label = 3;
  s.noise = 0.5;
  return generate_synthetic(s);
}

}  // namespace

TEST_CASE("a single example is memorized") {
  const LabelGraph g(Matrix(2, 2));
  const Dataset d = features(3, {feature_example({0.2, -0.4, 1.0}, 1, Split::kTrain),
                                 feature_example({0.2, -0.4, 1.0}, 1, Split::kValid)});
  TrainConfig c = small(ModelKind::kMlp);
  // Validation top-1 saturates at once, so every later epoch anneals.
  c.lr = 0.1;
  c.anneal_factor = 0.95;
  c.max_epochs = 300;
  c.patience = 1000;
  const auto r = train(d, g, c);
  CHECK(r.history.epochs.back().train_nll < 0.01);
}

TEST_CASE("patience 1 stops one epoch after the last improvement") {
  const LabelGraph g(Matrix(2, 2));
  // Two identical validation inputs with different labels: top-1 is always 1/2.
  const Dataset d = features(2, {feature_example({1, 0}, 0, Split::kTrain), feature_example({0, 1}, 1, Split::kTrain),
                                 feature_example({1, 1}, 0, Split::kValid), feature_example({1, 1}, 1, Split::kValid)});
  TrainConfig c = small(ModelKind::kMlp);
  c.patience = 1;
  const auto r = train(d, g, c);
  CHECK(r.history.epochs.size() == 2);
  CHECK(r.history.best_epoch == 1);
  CHECK(r.history.epochs[1].lr == doctest::Approx(c.lr));
}

TEST_CASE("training is deterministic and its history is consistent") {
  const auto s = tiny_synth();
  for (ModelKind kind : {ModelKind::kMlp, ModelKind::kGcntd, ModelKind::kMlpCrf}) {
    const TrainConfig c = small(kind);
    const auto a = train(s.dataset, s.graph, c);
    const auto b = train(s.dataset, s.graph, c);
    CHECK(format_history(a.history) == format_history(b.history));
    CHECK(a.model.parameters() == b.model.parameters());

    double best = -1;
    std::size_t best_epoch = 0;
    double prev_lr = c.lr;
    for (const auto& e : a.history.epochs) {
      CHECK(std::isfinite(e.train_nll));
      CHECK(e.lr <= prev_lr);
      prev_lr = e.lr;
      if (e.valid_top1 > best) {
        best = e.valid_top1;
        best_epoch = e.epoch;
      }
    }
    CHECK(a.history.best_epoch == best_epoch);
    CHECK(a.history.epochs.size() <= c.max_epochs);
    if (kind == ModelKind::kMlpCrf) {
      REQUIRE(a.crf.has_value());
      CHECK(a.crf->valid_top1 >= best);
      CHECK(top1_accuracy(a.model, s.dataset, Split::kValid) == a.crf->valid_top1);
    } else {
      CHECK(top1_accuracy(a.model, s.dataset, Split::kValid) == best);
    }
  }
}

TEST_CASE("empty splits and bad configs are rejected") {
  const LabelGraph g(Matrix(2, 2));
  const Dataset no_valid = features(1, {feature_example({1}, 0, Split::kTrain)});
  CHECK_THROWS_AS(train(no_valid, g, small(ModelKind::kMlp)), DataError);
  const Dataset no_train = features(1, {feature_example({1}, 0, Split::kValid)});
  CHECK_THROWS_AS(train(no_train, g, small(ModelKind::kMlp)), DataError);

  const Dataset ok = features(1, {feature_example({1}, 0, Split::kTrain), feature_example({1}, 0, Split::kValid)});
  TrainConfig c = small(ModelKind::kMlp);
  c.anneal_factor = 1.0;
  CHECK_THROWS_AS(train(ok, g, c), ArgumentError);
  c = small(ModelKind::kMlp);
  c.patience = 0;
  CHECK_THROWS_AS(train(ok, g, c), ArgumentError);
  c = small(ModelKind::kMlp);
  c.lr = 0;
  CHECK_THROWS_AS(train(ok, g, c), ArgumentError);
}

TEST_CASE("a diverging run reports a numeric error with context") {
  const LabelGraph g(Matrix(2, 2));
  const double inf = std::numeric_limits<double>::infinity();
  const Dataset d = features(1, {feature_example({inf}, 0, Split::kTrain), feature_example({1}, 0, Split::kValid)});
  CHECK_THROWS_WITH_AS(train(d, g, small(ModelKind::kMlp)), doctest::Contains("epoch 1, batch 0"), NumericError);
}

TEST_CASE("evaluate with oracle scores") {
  // x = one-hot(truth); encoder 5·I and identity class vectors rank the truth first.
  const std::size_t n = 4;
  const LabelGraph g = LabelGraph::from_edges(n, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  std::vector<Example> ex;
  for (std::size_t y = 0; y < n; ++y) {
    std::vector<double> x(n, 0.0);
    x[y] = 1.0;
    ex.push_back(feature_example(x, y, Split::kTest));
  }
  const Dataset d = features(n, ex);
  ModelConfig mc;
  mc.kind = ModelKind::kMlp;
  mc.label_count = n;
  mc.input_dim = n;
  mc.hidden_dim = n;
  Rng rng(1);
  Model m = Model::create(mc, g, rng);
  m.parameters()[m.parameters().index_of("encoder.w0")] = 5.0 * Matrix::identity(n);
  m.parameters()[m.parameters().index_of("class_vectors")] = Matrix::identity(n);
  const auto report = evaluate(m, d, Split::kTest, g, {.k = 2});
  CHECK(report.top1_accuracy == 1.0);
  CHECK(report.top1_distance.mean == 0.0);
  CHECK(report.examples == n);
  CHECK(report.topk_accuracy >= report.top1_accuracy);
  CHECK(report.diameter.mean.has_value());

  const auto leaves = evaluate(m, d, Split::kTest, g, {.k = 2, .leaf_only = true});
  CHECK(leaves.examples == 2);

  const Dataset wrong = features(3, {feature_example({1, 0, 0}, 0, Split::kTest)});
  CHECK_THROWS_AS(evaluate(m, wrong, Split::kTest, g), ShapeError);
}

TEST_CASE("uniform random scores give top-k accuracy near k/L") {
  const std::size_t labels = 170, k = 10, n = 4000;
  Rng rng(9);
  std::vector<Ranking> r(n);
  for (auto& x : r) {
    std::vector<double> s(labels);
    for (double& v : s) v = rng.uniform();
    x.order = rank_labels(s);
    x.truth = rng.index(labels);
  }
  const double p = static_cast<double>(k) / labels;
  const double sd = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(accuracy_at_k(r, k) - p) < 4 * sd);
}

TEST_CASE("random search sampling and selection") {
  CHECK_THROWS_AS(sample_trials({}, 0, 1), ArgumentError);
  const auto a = sample_trials({}, 6, 77);
  const auto b = sample_trials({}, 6, 77);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a[i].embed_dim == b[i].embed_dim);
    CHECK(a[i].lr == b[i].lr);
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].embed_dim >= 32);
    CHECK(a[i].embed_dim <= 256);
    CHECK(a[i].lr >= 1e-4);
    CHECK(a[i].lr <= 1e-2);
  }

  std::vector<SearchTrial> two(2);
  two[0].valid_top1 = 0.4;
  two[1].valid_top1 = 0.6;
  CHECK(select_best_trial(two) == 1);
  two[0].valid_top1 = 0.6;
  CHECK(select_best_trial(two) == 0);
}

TEST_CASE("random search with budget 1 returns the sampled config") {
  const auto s = tiny_synth();
  TrainConfig base = small(ModelKind::kMlp);
  base.max_epochs = 5;
  const SearchSpace space{.embed_dim_min = 4, .embed_dim_max = 12};
  const auto r = random_search(space, 1, s.dataset, s.graph, base);
  REQUIRE(r.trials.size() == 1);
  CHECK(r.best.model.hidden_dim == r.trials[0].embed_dim);
  CHECK(r.best.lr == r.trials[0].lr);
  CHECK(r.best.seed == r.trials[0].seed);

  const auto again = random_search(space, 3, s.dataset, s.graph, base);
  const auto repeat = random_search(space, 3, s.dataset, s.graph, base);
  CHECK(format_trials(again.trials) == format_trials(repeat.trials));
  CHECK(again.trials[again.best_trial].valid_top1 >= again.trials[0].valid_top1);
}
