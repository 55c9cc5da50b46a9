#pragma once

// Slow, obviously-correct reference implementations used as test oracles,
// plus random instance generators shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "labelgcn/label_graph.hpp"
#include "labelgcn/matrix.hpp"
#include "labelgcn/metrics.hpp"
#include "labelgcn/rng.hpp"

namespace oracle {

using labelgcn::LabelGraph;
using labelgcn::Matrix;
using labelgcn::Ranking;
using labelgcn::Rng;

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = scale * rng.uniform(-1.0, 1.0);
  return m;
}

inline Matrix triple_loop_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

/// Erdős–Rényi graph with unit (or random positive) weights.
inline LabelGraph random_graph(std::size_t n, double p, Rng& rng, bool weighted = false) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < p) a(i, j) = a(j, i) = weighted ? rng.uniform(0.1, 2.0) : 1.0;
  return LabelGraph(a);
}

inline constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

/// All-pairs hop counts by Floyd–Warshall; kInf where disconnected.
inline std::vector<std::vector<std::size_t>> floyd_warshall(const LabelGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && g.adjacency()(i, j) > 0.0) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

inline std::optional<std::size_t> brute_diameter(const std::vector<std::vector<std::size_t>>& d,
                                                 const std::vector<std::size_t>& nodes) {
  std::optional<std::size_t> best;
  if (nodes.size() == 1) return 0;
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const std::size_t h = d[nodes[a]][nodes[b]];
      if (h < kInf && (!best || h > *best)) best = h;
    }
  return best;
}

/// Random permutation rankings whose truth is uniformly drawn.
inline std::vector<Ranking> random_rankings(std::size_t examples, std::size_t labels, Rng& rng) {
  std::vector<Ranking> out(examples);
  for (auto& r : out) {
    r.order.resize(labels);
    for (std::size_t i = 0; i < labels; ++i) r.order[i] = i;
    rng.shuffle(std::span<std::size_t>(r.order));
    r.truth = rng.index(labels);
  }
  return out;
}

/// Quadratic-time reference for the whole metrics report. Every value is
/// recomputed from Floyd–Warshall distances with naive set logic.
struct ReferenceMetrics {
  double top1 = 0, topk = 0, precision = 0, recall = 0;
  std::optional<double> top1_distance, topk_distance, diameter;
  std::size_t top1_excluded = 0, topk_excluded = 0, diameter_excluded = 0;
  std::vector<double> precision_each, recall_each;
  std::vector<std::size_t> overlap_each, truth_size_each;
};

inline ReferenceMetrics reference_metrics(const std::vector<Ranking>& rankings, const LabelGraph& g, std::size_t k) {
  const auto d = floyd_warshall(g);
  ReferenceMetrics m;
  double d1_sum = 0, dk_sum = 0, diam_sum = 0;
  std::size_t d1_n = 0, dk_n = 0, diam_n = 0;
  for (const auto& r : rankings) {
    if (r.order[0] == r.truth) m.top1 += 1;
    if (std::find(r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(k), r.truth) !=
        r.order.begin() + static_cast<std::ptrdiff_t>(k))
      m.topk += 1;

    std::set<std::size_t> truth_set{r.truth};
    for (std::size_t j = 0; j < g.size(); ++j)
      if (g.adjacency()(r.truth, j) > 0.0) truth_set.insert(j);
    std::size_t overlap = 0;
    for (std::size_t i = 0; i < k; ++i) overlap += truth_set.count(r.order[i]);
    m.overlap_each.push_back(overlap);
    m.truth_size_each.push_back(truth_set.size());
    m.precision_each.push_back(static_cast<double>(overlap) / static_cast<double>(k));
    m.recall_each.push_back(static_cast<double>(overlap) / static_cast<double>(truth_set.size()));
    m.precision += m.precision_each.back();
    m.recall += m.recall_each.back();

    auto mean_to_truth = [&](std::size_t count, std::size_t& excluded) -> std::optional<double> {
      double s = 0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t h = d[r.order[i]][r.truth];
        if (h >= kInf) {
          ++excluded;
        } else {
          s += static_cast<double>(h);
          ++n;
        }
      }
      if (n == 0) return std::nullopt;
      return s / static_cast<double>(n);
    };
    if (auto v = mean_to_truth(1, m.top1_excluded)) {
      d1_sum += *v;
      ++d1_n;
    }
    if (auto v = mean_to_truth(k, m.topk_excluded)) {
      dk_sum += *v;
      ++dk_n;
    }
    std::vector<std::size_t> top(r.order.begin(), r.order.begin() + static_cast<std::ptrdiff_t>(k));
    if (auto v = brute_diameter(d, top)) {
      diam_sum += static_cast<double>(*v);
      ++diam_n;
    } else {
      ++m.diameter_excluded;
    }
  }
  const double n = static_cast<double>(rankings.size());
  m.top1 /= n;
  m.topk /= n;
  m.precision /= n;
  m.recall /= n;
  if (d1_n) m.top1_distance = d1_sum / static_cast<double>(d1_n);
  if (dk_n) m.topk_distance = dk_sum / static_cast<double>(dk_n);
  if (diam_n) m.diameter = diam_sum / static_cast<double>(diam_n);
  return m;
}

/// Percentile by sorting and indexing with linear interpolation.
inline double sorted_percentile(std::vector<double> values, double pct) {
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace oracle
