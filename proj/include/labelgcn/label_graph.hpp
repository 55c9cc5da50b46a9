#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "labelgcn/matrix.hpp"

namespace labelgcn {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

/// Undirected label graph: symmetric L×L adjacency with zero diagonal.
/// Any positive entry counts as an edge for hop-count queries.
class LabelGraph {
 public:
  /// Validates symmetry, zero diagonal, L >= 1. Empty `names` yields "0".."L-1".
  explicit LabelGraph(Matrix adjacency, std::vector<std::string> names = {});
  /// Symmetrizes the edge list; a repeated pair keeps the larger weight.
  static LabelGraph from_edges(std::size_t node_count, std::span<const Edge> edges,
                               std::vector<std::string> names = {});

  std::size_t size() const { return adjacency_.rows(); }
  const Matrix& adjacency() const { return adjacency_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t node) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Sorted neighbor lists (positive-weight entries, excluding self).
  const std::vector<std::vector<std::size_t>>& neighbor_lists() const { return neighbors_; }
  std::size_t edge_count() const;
  std::vector<Edge> edges() const;
  /// Nodes of degree <= 1; the leaves of a symmetrized tree.
  std::vector<std::size_t> leaf_nodes() const;

 private:
  Matrix adjacency_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

enum class Normalization { kSymmetric, kRowStochastic, kIdentity, kFullyConnected };

std::string to_string(Normalization mode);
Normalization parse_normalization(std::string_view text);

struct NormalizedAdjacency {
  Matrix matrix;
  Normalization mode = Normalization::kSymmetric;
};

/// GCN propagation operator built from Ã = A + I and D̃ = diag(rowsum Ã):
/// symmetric D̃^-1/2 Ã D̃^-1/2, row-stochastic D̃^-1 Ã, identity I, or the
/// symmetric form of an all-ones off-diagonal A (fully connected).
NormalizedAdjacency normalize_adjacency(const LabelGraph& graph, Normalization mode);

std::vector<std::size_t> one_hop_neighbors(const LabelGraph& graph, std::size_t node);

std::optional<std::size_t> shortest_path_distance(const LabelGraph& graph, std::size_t u, std::size_t v);

/// Precomputed all-pairs hop counts for repeated metric queries.
class DistanceTable {
 public:
  explicit DistanceTable(const LabelGraph& graph);

  std::size_t size() const { return n_; }
  std::optional<std::size_t> operator()(std::size_t u, std::size_t v) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> hops_;
};

struct SubsetDiameter {
  std::optional<std::size_t> diameter;  // absent when no pair in the subset is connected
  std::size_t unreachable_pairs = 0;    // unordered pairs with no path
};

/// Largest full-graph hop distance between connected members of `nodes`.
/// Duplicate entries are ignored. Throws ArgumentError on an empty subset.
SubsetDiameter diameter_of_subset(const LabelGraph& graph, std::span<const std::size_t> nodes);
SubsetDiameter diameter_of_subset(const DistanceTable& distances, std::span<const std::size_t> nodes);

/// Linear-interpolated percentile (0 < pct < 100) of the off-diagonal
/// upper-triangle entries of a symmetric matrix.
double off_diagonal_percentile(const Matrix& similarity, double percentile);

/// Discrete graph with an edge wherever similarity >= the percentile threshold.
LabelGraph threshold_similarity(const Matrix& similarity, double percentile, std::vector<std::string> names = {});

}  // namespace labelgcn
