#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "labelgcn/label_graph.hpp"

namespace labelgcn {

/// Labels of one example ordered by descending score, plus the true label.
struct Ranking {
  std::vector<std::size_t> order;
  std::size_t truth = 0;
};

/// Descending-score order; equal scores keep ascending label index.
std::vector<std::size_t> rank_labels(std::span<const double> scores);

/// Fraction of examples whose truth is among the first k entries.
/// Throws ArgumentError if k is 0 or exceeds any ranking's length.
double accuracy_at_k(std::span<const Ranking> rankings, std::size_t k);

struct PrecisionRecall {
  double precision = 0.0;        // |T ∩ P| / k
  double recall = 0.0;           // |T ∩ P| / |T|
  std::size_t overlap = 0;       // |T ∩ P|
  std::size_t truth_set = 0;     // |T|, truth plus its one-hop neighbours
};

PrecisionRecall one_hop_precision_recall(const Ranking& ranking, const LabelGraph& graph, std::size_t k);

/// Mean hop count with the disconnected cases left out and counted.
struct MeanHops {
  std::optional<double> mean;  // absent when nothing was connected
  std::size_t excluded = 0;    // disconnected pairs (distance) or examples (diameter)
  std::size_t included = 0;    // examples contributing to the mean
};

/// Per example, the mean distance from each of the top-k predictions to the
/// truth over connected pairs; then the mean of those per-example means.
MeanHops mean_distance_at_k(std::span<const Ranking> rankings, const DistanceTable& distances, std::size_t k);
MeanHops mean_distance_at_k(std::span<const Ranking> rankings, const LabelGraph& graph, std::size_t k);

/// Mean full-graph diameter of each example's top-k set; examples whose
/// top-k set has no connected pair are excluded and counted.
MeanHops mean_prediction_diameter(std::span<const Ranking> rankings, const DistanceTable& distances, std::size_t k);
MeanHops mean_prediction_diameter(std::span<const Ranking> rankings, const LabelGraph& graph, std::size_t k);

struct MetricsReport {
  std::size_t examples = 0;
  std::size_t k = 10;
  double top1_accuracy = 0.0;
  double topk_accuracy = 0.0;
  double precision_at_k = 0.0;  // mean over examples
  double recall_at_k = 0.0;     // mean over examples
  MeanHops top1_distance;
  MeanHops topk_distance;
  MeanHops diameter;
};

/// Every metric at once; per-example work runs in parallel and is reduced
/// in example order, so the result does not depend on the thread count.
MetricsReport compute_metrics(std::span<const Ranking> rankings, const LabelGraph& graph, std::size_t k = 10);

/// Keeps examples whose truth is in `nodes` (e.g. graph.leaf_nodes()).
std::vector<Ranking> filter_by_truth(std::span<const Ranking> rankings, std::span<const std::size_t> nodes);

/// Field order of the single-line record.
inline constexpr std::array<std::string_view, 15> kReportFields = {
    "examples",        "k",
    "top1_accuracy",   "topk_accuracy",
    "precision_at_k",  "recall_at_k",
    "top1_distance",   "top1_distance_excluded_pairs",
    "topk_distance",   "topk_distance_excluded_pairs",
    "mean_diameter",   "diameter_excluded_examples",
    "top1_distance_examples", "topk_distance_examples",
    "diameter_examples",
};

/// `key<TAB>value` lines in kReportFields order.
std::string format_report_block(const MetricsReport& report);
/// The same values tab-separated on one line (no trailing newline).
std::string format_report_record(const MetricsReport& report);
std::string report_record_header();

}  // namespace labelgcn
