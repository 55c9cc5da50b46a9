#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "labelgcn/label_graph.hpp"

namespace labelgcn {

// Conditional Ising model over ±1 label variables:
//
//   p(y | z) ∝ exp( Σ_{(i,j)∈E} θ y_i y_j − Σ_i z_i y_i )
//
// A lower bias z_i favours y_i = +1. Only used as an exact oracle for the
// mean-field scores, so enumeration is capped at kMaxIsingLabels variables.

inline constexpr std::size_t kMaxIsingLabels = 16;

/// Unnormalized log-probability of `y`. Each undirected edge counts once.
/// Throws ArgumentError if any y_i is not ±1.
double ising_score(std::span<const int> y, std::span<const double> z, double theta, const LabelGraph& graph);

/// Exact p(y_i = +1 | z) for every i by enumerating all 2^L states.
std::vector<double> ising_marginals(std::span<const double> z, double theta, const LabelGraph& graph);

/// Ising biases equivalent to per-label log-odds scores: z_i = −F_i / 2, so
/// that exp(−z_i y_i) gives log p(+1)/p(−1) = F_i in the decoupled model.
std::vector<double> ising_bias_from_scores(std::span<const double> scores);

}  // namespace labelgcn
