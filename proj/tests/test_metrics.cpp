#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include "labelgcn/error.hpp"
#include "labelgcn/metrics.hpp"
#include "oracles.hpp"

using namespace labelgcn;

namespace {

LabelGraph path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1.0});
  return LabelGraph::from_edges(n, e);
}

Ranking ranked(std::vector<std::size_t> head, std::size_t truth, std::size_t labels) {
  Ranking r{std::move(head), truth};
  for (std::size_t i = 0; i < labels; ++i)
    if (std::find(r.order.begin(), r.order.end(), i) == r.order.end()) r.order.push_back(i);
  return r;
}

}  // namespace

TEST_CASE("rank_labels is descending and stable on ties") {
  const std::vector<double> s{0.5, 2.0, 0.5, -1.0, 2.0};
  CHECK(rank_labels(s) == std::vector<std::size_t>{1, 4, 0, 2, 3});
}

TEST_CASE("accuracy at k") {
  const std::vector<Ranking> perfect{ranked({0}, 0, 12), ranked({5}, 5, 12)};
  for (std::size_t k = 1; k <= 12; ++k) CHECK(accuracy_at_k(perfect, k) == 1.0);

  // Truth at ranks 1, 4 and 11.
  const std::vector<Ranking> r{ranked({3}, 3, 12), ranked({0, 1, 2, 3}, 3, 12),
                               ranked({0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 3}, 3, 12)};
  CHECK(accuracy_at_k(r, 10) == doctest::Approx(2.0 / 3.0));
  CHECK(accuracy_at_k(r, 12) == 1.0);
  CHECK_THROWS_AS(accuracy_at_k(r, 13), ArgumentError);
  CHECK_THROWS_AS(accuracy_at_k(r, 0), ArgumentError);
}

TEST_CASE("one-hop precision and recall") {
  const LabelGraph star = LabelGraph::from_edges(12, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
  // |T| = 4, all inside the top 4.
  const auto full = one_hop_precision_recall(ranked({3, 0, 2, 1}, 0, 12), star, 4);
  CHECK(full.precision == 1.0);
  CHECK(full.recall == 1.0);

  const auto lonely = one_hop_precision_recall(ranked({7}, 7, 12), star, 10);
  CHECK(lonely.precision == doctest::Approx(0.1));
  CHECK(lonely.recall == 1.0);

  const auto partial = one_hop_precision_recall(ranked({0, 1, 2, 5, 6, 7, 8, 9, 10, 11}, 0, 12), star, 10);
  CHECK(partial.overlap == 3);
  CHECK(partial.truth_set == 4);
  CHECK(partial.precision == doctest::Approx(0.3));
  CHECK(partial.recall == doctest::Approx(0.75));
}

TEST_CASE("distances on a path") {
  const LabelGraph g = path(5);
  const std::vector<Ranking> exact{ranked({2}, 2, 5)};
  CHECK(mean_distance_at_k(exact, g, 1).mean == 0.0);
  const std::vector<Ranking> neighbour{ranked({3}, 2, 5)};
  CHECK(mean_distance_at_k(neighbour, g, 1).mean == 1.0);
  const std::vector<Ranking> three{ranked({2, 0, 4}, 2, 5)};
  CHECK(*mean_distance_at_k(three, g, 3).mean == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("diameters on a path") {
  const LabelGraph g = path(5);
  const std::vector<Ranking> r{ranked({0, 2, 4}, 1, 5)};
  CHECK(mean_prediction_diameter(r, g, 1).mean == 0.0);
  CHECK(mean_prediction_diameter(r, g, 3).mean == 4.0);
  const std::vector<Ranking> adjacent{ranked({3, 4}, 0, 5)};
  CHECK(mean_prediction_diameter(adjacent, g, 2).mean == 1.0);
}

TEST_CASE("disconnected pairs and examples are excluded and counted") {
  const LabelGraph g = LabelGraph::from_edges(4, std::vector<Edge>{{0, 1}, {2, 3}});
  const std::vector<Ranking> r{ranked({0, 2, 1}, 0, 4), ranked({2, 0}, 3, 4)};
  const auto d = mean_distance_at_k(r, g, 3);
  // Example 1: pairs (0,0)=0, (2,0)=X, (1,0)=1. Example 2: (2,3)=1, (0,3)=X, (1,3)=X.
  CHECK(d.excluded == 3);
  CHECK(*d.mean == doctest::Approx((0.5 + 1.0) / 2.0));
  const std::vector<Ranking> split{ranked({0, 2}, 0, 4)};
  const auto diam = mean_prediction_diameter(split, g, 2);
  CHECK_FALSE(diam.mean.has_value());
  CHECK(diam.excluded == 1);
}

TEST_CASE("compute_metrics matches the quadratic reference and its identities") {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t labels = 2 + rng.index(19);
    const LabelGraph g = oracle::random_graph(labels, rng.uniform(0.05, 0.5), rng);
    const auto rankings = oracle::random_rankings(50, labels, rng);
    const std::size_t k = 1 + rng.index(labels);
    const auto report = compute_metrics(rankings, g, k);
    const auto ref = oracle::reference_metrics(rankings, g, k);

    CHECK(report.top1_accuracy == ref.top1);
    CHECK(report.topk_accuracy == ref.topk);
    CHECK(report.precision_at_k == doctest::Approx(ref.precision).epsilon(1e-14));
    CHECK(report.recall_at_k == doctest::Approx(ref.recall).epsilon(1e-14));
    CHECK(report.top1_distance.mean.has_value() == ref.top1_distance.has_value());
    if (ref.top1_distance) CHECK(*report.top1_distance.mean == doctest::Approx(*ref.top1_distance).epsilon(1e-14));
    if (ref.topk_distance) CHECK(*report.topk_distance.mean == doctest::Approx(*ref.topk_distance).epsilon(1e-14));
    if (ref.diameter) CHECK(*report.diameter.mean == doctest::Approx(*ref.diameter).epsilon(1e-14));
    CHECK(report.top1_distance.excluded == ref.top1_excluded);
    CHECK(report.topk_distance.excluded == ref.topk_excluded);
    CHECK(report.diameter.excluded == ref.diameter_excluded);

    for (std::size_t i = 0; i < rankings.size(); ++i) {
      const auto pr = one_hop_precision_recall(rankings[i], g, k);
      CHECK(pr.overlap == ref.overlap_each[i]);
      // Both products are |T ∩ P|; compare as integers after rounding.
      const double via_p = pr.precision * static_cast<double>(k);
      const double via_r = pr.recall * static_cast<double>(pr.truth_set);
      CHECK(std::llround(via_p) == std::llround(via_r));
      CHECK(std::abs(via_p - via_r) < 1e-12);
      const auto top1 = shortest_path_distance(g, rankings[i].order[0], rankings[i].truth);
      if (top1) CHECK((*top1 == 0) == (rankings[i].order[0] == rankings[i].truth));
    }
    double prev = 0;
    for (std::size_t kk = 1; kk <= labels; ++kk) {
      const double a = accuracy_at_k(rankings, kk);
      CHECK(a >= prev);
      prev = a;
    }
    CHECK(mean_prediction_diameter(rankings, g, 1).mean == 0.0);
  }
}

TEST_CASE("compute_metrics does not depend on the thread count") {
  Rng rng(2);
  const LabelGraph g = oracle::random_graph(20, 0.2, rng);
  const auto rankings = oracle::random_rankings(200, 20, rng);
  omp_set_num_threads(1);
  const std::string one = format_report_block(compute_metrics(rankings, g, 10));
  omp_set_num_threads(5);
  const std::string five = format_report_block(compute_metrics(rankings, g, 10));
  CHECK(one == five);
}

TEST_CASE("report formats") {
  const LabelGraph g = path(3);
  const std::vector<Ranking> r{ranked({0, 1, 2}, 0, 3)};
  const auto report = compute_metrics(r, g, 2);
  const std::string block = format_report_block(report);
  CHECK(block.find("top1_accuracy\t1\n") != std::string::npos);
  CHECK(block.find("mean_diameter\t1\n") != std::string::npos);
  const std::string record = format_report_record(report);
  const std::string header = report_record_header();
  CHECK(std::count(record.begin(), record.end(), '\t') == 14);
  CHECK(std::count(header.begin(), header.end(), '\t') == 14);
  CHECK(header.rfind("examples\tk\t", 0) == 0);

  const LabelGraph split = LabelGraph::from_edges(2, std::vector<Edge>{});
  const std::vector<Ranking> apart{ranked({1, 0}, 0, 2)};
  CHECK(format_report_block(compute_metrics(apart, split, 2)).find("mean_diameter\tNA") != std::string::npos);
}

TEST_CASE("leaf filter keeps examples by truth") {
  const std::vector<Ranking> r{ranked({0}, 0, 3), ranked({0}, 1, 3), ranked({0}, 2, 3)};
  const std::vector<std::size_t> leaves{0, 2};
  const auto kept = filter_by_truth(r, leaves);
  REQUIRE(kept.size() == 2);
  CHECK(kept[1].truth == 2);
}
