#include "labelgcn/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "labelgcn/error.hpp"
#include "labelgcn/graph_io.hpp"

namespace labelgcn {

namespace {

void check_k(std::span<const Ranking> rankings, std::size_t k) {
  if (k == 0) throw ArgumentError("k must be >= 1");
  for (const Ranking& r : rankings) {
    if (k > r.order.size()) {
      throw ArgumentError("k = " + std::to_string(k) + " exceeds ranking length " + std::to_string(r.order.size()));
    }
  }
}

struct ExampleDistance {
  double sum = 0.0;
  std::size_t connected = 0;
  std::size_t skipped = 0;
};

ExampleDistance example_distance(const Ranking& r, const DistanceTable& distances, std::size_t k) {
  ExampleDistance out;
  for (std::size_t i = 0; i < k; ++i) {
    if (auto d = distances(r.order[i], r.truth)) {
      out.sum += static_cast<double>(*d);
      ++out.connected;
    } else {
      ++out.skipped;
    }
  }
  return out;
}

MeanHops reduce_distances(std::span<const ExampleDistance> per_example) {
  MeanHops out;
  double total = 0.0;
  for (const auto& e : per_example) {
    out.excluded += e.skipped;
    if (e.connected == 0) continue;
    total += e.sum / static_cast<double>(e.connected);
    ++out.included;
  }
  if (out.included > 0) out.mean = total / static_cast<double>(out.included);
  return out;
}

MeanHops reduce_diameters(std::span<const SubsetDiameter> per_example) {
  MeanHops out;
  double total = 0.0;
  for (const auto& d : per_example) {
    if (!d.diameter) {
      ++out.excluded;
      continue;
    }
    total += static_cast<double>(*d.diameter);
    ++out.included;
  }
  if (out.included > 0) out.mean = total / static_cast<double>(out.included);
  return out;
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

std::vector<std::string> report_values(const MetricsReport& r) {
  return {
      std::to_string(r.examples),
      std::to_string(r.k),
      format_double(r.top1_accuracy),
      format_double(r.topk_accuracy),
      format_double(r.precision_at_k),
      format_double(r.recall_at_k),
      optional_text(r.top1_distance.mean),
      std::to_string(r.top1_distance.excluded),
      optional_text(r.topk_distance.mean),
      std::to_string(r.topk_distance.excluded),
      optional_text(r.diameter.mean),
      std::to_string(r.diameter.excluded),
      std::to_string(r.top1_distance.included),
      std::to_string(r.topk_distance.included),
      std::to_string(r.diameter.included),
  };
}

}  // namespace

std::vector<std::size_t> rank_labels(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

double accuracy_at_k(std::span<const Ranking> rankings, std::size_t k) {
  check_k(rankings, k);
  if (rankings.empty()) return 0.0;
  std::size_t hits = 0;
  for (const Ranking& r : rankings) {
    if (std::find(r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(k), r.truth) !=
        r.order.begin() + static_cast<std::ptrdiff_t>(k)) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

PrecisionRecall one_hop_precision_recall(const Ranking& ranking, const LabelGraph& graph, std::size_t k) {
  check_k({&ranking, 1}, k);
  std::vector<bool> in_truth(graph.size(), false);
  if (ranking.truth >= graph.size()) throw IndexError("true label out of range");
  in_truth[ranking.truth] = true;
  for (std::size_t j : graph.neighbor_lists()[ranking.truth]) in_truth[j] = true;

  PrecisionRecall out;
  out.truth_set = 1 + graph.neighbor_lists()[ranking.truth].size();
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t p = ranking.order[i];
    if (p >= graph.size()) throw IndexError("predicted label out of range");
    if (in_truth[p]) ++out.overlap;
  }
  out.precision = static_cast<double>(out.overlap) / static_cast<double>(k);
  out.recall = static_cast<double>(out.overlap) / static_cast<double>(out.truth_set);
  return out;
}

MeanHops mean_distance_at_k(std::span<const Ranking> rankings, const DistanceTable& distances, std::size_t k) {
  check_k(rankings, k);
  std::vector<ExampleDistance> per_example;
  per_example.reserve(rankings.size());
  for (const Ranking& r : rankings) per_example.push_back(example_distance(r, distances, k));
  return reduce_distances(per_example);
}

MeanHops mean_distance_at_k(std::span<const Ranking> rankings, const LabelGraph& graph, std::size_t k) {
  return mean_distance_at_k(rankings, DistanceTable(graph), k);
}

MeanHops mean_prediction_diameter(std::span<const Ranking> rankings, const DistanceTable& distances, std::size_t k) {
  check_k(rankings, k);
  std::vector<SubsetDiameter> per_example;
  per_example.reserve(rankings.size());
  for (const Ranking& r : rankings) per_example.push_back(diameter_of_subset(distances, {r.order.data(), k}));
  return reduce_diameters(per_example);
}

MeanHops mean_prediction_diameter(std::span<const Ranking> rankings, const LabelGraph& graph, std::size_t k) {
  return mean_prediction_diameter(rankings, DistanceTable(graph), k);
}

MetricsReport compute_metrics(std::span<const Ranking> rankings, const LabelGraph& graph, std::size_t k) {
  check_k(rankings, k);
  // Validate up front: nothing below may throw inside the parallel region.
  for (const Ranking& r : rankings) {
    if (r.truth >= graph.size()) throw IndexError("true label out of range for graph");
    for (std::size_t i = 0; i < k; ++i)
      if (r.order[i] >= graph.size()) throw IndexError("predicted label out of range for graph");
  }

  const DistanceTable distances(graph);
  const std::size_t n = rankings.size();
  std::vector<PrecisionRecall> pr(n);
  std::vector<ExampleDistance> top1(n), topk(n);
  std::vector<SubsetDiameter> diam(n);

  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const Ranking& r = rankings[static_cast<std::size_t>(i)];
    pr[i] = one_hop_precision_recall(r, graph, k);
    top1[i] = example_distance(r, distances, 1);
    topk[i] = example_distance(r, distances, k);
    diam[i] = diameter_of_subset(distances, {r.order.data(), k});
  }

  MetricsReport report;
  report.examples = n;
  report.k = k;
  report.top1_accuracy = accuracy_at_k(rankings, 1);
  report.topk_accuracy = accuracy_at_k(rankings, k);
  double precision = 0.0, recall = 0.0;
  for (const auto& p : pr) {
    precision += p.precision;
    recall += p.recall;
  }
  if (n > 0) {
    report.precision_at_k = precision / static_cast<double>(n);
    report.recall_at_k = recall / static_cast<double>(n);
  }
  report.top1_distance = reduce_distances(top1);
  report.topk_distance = reduce_distances(topk);
  report.diameter = reduce_diameters(diam);
  return report;
}

std::vector<Ranking> filter_by_truth(std::span<const Ranking> rankings, std::span<const std::size_t> nodes) {
  std::vector<Ranking> out;
  for (const Ranking& r : rankings)
    if (std::find(nodes.begin(), nodes.end(), r.truth) != nodes.end()) out.push_back(r);
  return out;
}

std::string format_report_block(const MetricsReport& report) {
  const auto values = report_values(report);
  std::string out;
  for (std::size_t i = 0; i < kReportFields.size(); ++i) {
    out += kReportFields[i];
    out += '\t';
    out += values[i];
    out += '\n';
  }
  return out;
}

std::string format_report_record(const MetricsReport& report) {
  const auto values = report_values(report);
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += '\t';
    out += values[i];
  }
  return out;
}

std::string report_record_header() {
  std::string out;
  for (std::size_t i = 0; i < kReportFields.size(); ++i) {
    if (i) out += '\t';
    out += kReportFields[i];
  }
  return out;
}

}  // namespace labelgcn
