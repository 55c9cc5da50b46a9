#include "labelgcn/label_graph.hpp"

#include <algorithm>
#include <cmath>

#include "labelgcn/error.hpp"
#include "labelgcn/kernels.hpp"

namespace labelgcn {

namespace {

void check_node(const LabelGraph& graph, std::size_t node) {
  if (node >= graph.size()) {
    throw IndexError("node " + std::to_string(node) + " out of range for graph of " + std::to_string(graph.size()) +
                     " labels");
  }
}

}  // namespace

LabelGraph::LabelGraph(Matrix adjacency, std::vector<std::string> names)
    : adjacency_(std::move(adjacency)), names_(std::move(names)) {
  const std::size_t n = adjacency_.rows();
  if (n == 0) throw InvariantError("label graph needs at least one node");
  if (adjacency_.cols() != n) throw InvariantError("adjacency must be square, got " + adjacency_.shape_string());
  if (!adjacency_.all_finite()) throw InvariantError("adjacency has non-finite entries");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) throw InvariantError("adjacency diagonal must be zero (node " + std::to_string(i) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency_(i, j) < 0.0) throw InvariantError("adjacency weights must be non-negative");
      if (adjacency_(i, j) != adjacency_(j, i)) {
        throw InvariantError("adjacency is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  if (names_.empty()) {
    for (std::size_t i = 0; i < n; ++i) names_.push_back(std::to_string(i));
  } else if (names_.size() != n) {
    throw InvariantError("label graph has " + std::to_string(n) + " nodes but " + std::to_string(names_.size()) +
                         " names");
  }
  neighbors_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (adjacency_(i, j) > 0.0) neighbors_[i].push_back(j);
}

LabelGraph LabelGraph::from_edges(std::size_t node_count, std::span<const Edge> edges, std::vector<std::string> names) {
  Matrix a(node_count, node_count);
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw IndexError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") out of range");
    }
    if (e.u == e.v) throw InvariantError("self-loop on node " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw InvariantError("edge weights must be positive and finite");
    const double w = std::max(a(e.u, e.v), e.weight);
    a(e.u, e.v) = w;
    a(e.v, e.u) = w;
  }
  return LabelGraph(std::move(a), std::move(names));
}

const std::string& LabelGraph::name(std::size_t node) const {
  check_node(*this, node);
  return names_[node];
}

std::optional<std::size_t> LabelGraph::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t LabelGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : neighbors_) twice += nb.size();
  return twice / 2;
}

std::vector<Edge> LabelGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j : neighbors_[i])
      if (i < j) out.push_back({i, j, adjacency_(i, j)});
  return out;
}

std::vector<std::size_t> LabelGraph::leaf_nodes() const {
  std::vector<std::size_t> leaves;
  for (std::size_t i = 0; i < size(); ++i)
    if (neighbors_[i].size() <= 1) leaves.push_back(i);
  return leaves;
}

std::string to_string(Normalization mode) {
  switch (mode) {
    case Normalization::kSymmetric: return "symmetric";
    case Normalization::kRowStochastic: return "row-stochastic";
    case Normalization::kIdentity: return "identity";
    case Normalization::kFullyConnected: return "fully-connected";
  }
  return "symmetric";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "symmetric") return Normalization::kSymmetric;
  if (text == "row-stochastic") return Normalization::kRowStochastic;
  if (text == "identity") return Normalization::kIdentity;
  if (text == "fully-connected") return Normalization::kFullyConnected;
  throw ArgumentError("unknown normalization '" + std::string(text) + "'");
}

NormalizedAdjacency normalize_adjacency(const LabelGraph& graph, Normalization mode) {
  const std::size_t n = graph.size();
  if (mode == Normalization::kIdentity) return {Matrix::identity(n), mode};

  Matrix tilde(n, n);
  if (mode == Normalization::kFullyConnected) {
    tilde = Matrix(n, n, 1.0);
  } else {
    if (!is_symmetric(graph.adjacency())) throw InvariantError("normalize_adjacency needs a symmetric adjacency");
    tilde = graph.adjacency() + Matrix::identity(n);
  }

  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) degree[i] += tilde(i, j);

  Matrix out(n, n);
  if (mode == Normalization::kRowStochastic) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = tilde(i, j) / degree[i];
  } else {
    std::vector<double> inv_sqrt(n);
    for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = inv_sqrt[i] * tilde(i, j) * inv_sqrt[j];
  }
  return {std::move(out), mode};
}

std::vector<std::size_t> one_hop_neighbors(const LabelGraph& graph, std::size_t node) {
  check_node(graph, node);
  return graph.neighbor_lists()[node];
}

std::optional<std::size_t> shortest_path_distance(const LabelGraph& graph, std::size_t u, std::size_t v) {
  check_node(graph, u);
  check_node(graph, v);
  std::vector<std::uint32_t> dist(graph.size());
  std::vector<std::size_t> queue;
  kernels::bfs_from(graph.neighbor_lists(), u, dist, queue);
  if (dist[v] == kernels::kUnreachable) return std::nullopt;
  return dist[v];
}

DistanceTable::DistanceTable(const LabelGraph& graph)
    : n_(graph.size()), hops_(kernels::all_pairs_bfs_parallel(graph.neighbor_lists())) {}

std::optional<std::size_t> DistanceTable::operator()(std::size_t u, std::size_t v) const {
  if (u >= n_ || v >= n_) throw IndexError("distance query out of range");
  const auto h = hops_[u * n_ + v];
  if (h == kernels::kUnreachable) return std::nullopt;
  return h;
}

SubsetDiameter diameter_of_subset(const DistanceTable& distances, std::span<const std::size_t> nodes) {
  if (nodes.empty()) throw ArgumentError("diameter of an empty node set");
  std::vector<std::size_t> unique(nodes.begin(), nodes.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  for (std::size_t u : unique)
    if (u >= distances.size()) throw IndexError("subset node " + std::to_string(u) + " out of range");

  SubsetDiameter out;
  if (unique.size() == 1) {
    out.diameter = 0;
    return out;
  }
  for (std::size_t a = 0; a < unique.size(); ++a) {
    for (std::size_t b = a + 1; b < unique.size(); ++b) {
      const auto d = distances(unique[a], unique[b]);
      if (!d) {
        ++out.unreachable_pairs;
      } else if (!out.diameter || *d > *out.diameter) {
        out.diameter = *d;
      }
    }
  }
  return out;
}

SubsetDiameter diameter_of_subset(const LabelGraph& graph, std::span<const std::size_t> nodes) {
  return diameter_of_subset(DistanceTable(graph), nodes);
}

double off_diagonal_percentile(const Matrix& similarity, double percentile) {
  if (!(percentile > 0.0 && percentile < 100.0)) throw ArgumentError("percentile must lie strictly between 0 and 100");
  const std::size_t n = similarity.rows();
  if (similarity.cols() != n || n < 2) throw ShapeError("percentile needs a square matrix with at least 2 rows");
  std::vector<double> values;
  values.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) values.push_back(similarity(i, j));
  std::sort(values.begin(), values.end());
  const double pos = percentile / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (values[lo] == values[hi]) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

LabelGraph threshold_similarity(const Matrix& similarity, double percentile, std::vector<std::string> names) {
  if (!is_symmetric(similarity)) throw InvariantError("similarity matrix is not symmetric");
  const std::size_t n = similarity.rows();
  if (n == 1) return LabelGraph(Matrix(1, 1), std::move(names));
  const double epsilon = off_diagonal_percentile(similarity, percentile);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && similarity(i, j) >= epsilon) a(i, j) = 1.0;
  return LabelGraph(std::move(a), std::move(names));
}

}  // namespace labelgcn
