#include "labelgcn/ising.hpp"

#include <algorithm>
#include <cmath>

#include "labelgcn/error.hpp"

namespace labelgcn {

double ising_score(std::span<const int> y, std::span<const double> z, double theta, const LabelGraph& graph) {
  const std::size_t n = graph.size();
  if (y.size() != n || z.size() != n) throw ShapeError("ising_score: y and z must have one entry per label");
  for (int v : y)
    if (v != 1 && v != -1) throw ArgumentError("ising_score: y entries must be +1 or -1");
  double pairwise = 0.0;
  for (const Edge& e : graph.edges()) pairwise += static_cast<double>(y[e.u] * y[e.v]);
  double unary = 0.0;
  for (std::size_t i = 0; i < n; ++i) unary += z[i] * static_cast<double>(y[i]);
  return theta * pairwise - unary;
}

std::vector<double> ising_marginals(std::span<const double> z, double theta, const LabelGraph& graph) {
  const std::size_t n = graph.size();
  if (z.size() != n) throw ShapeError("ising_marginals: z must have one entry per label");
  if (n > kMaxIsingLabels) throw ArgumentError("ising_marginals: exact enumeration limited to 16 labels");

  const std::size_t states = std::size_t{1} << n;
  std::vector<double> log_weight(states);
  std::vector<int> y(n);
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t i = 0; i < n; ++i) y[i] = (s >> i) & 1u ? 1 : -1;
    log_weight[s] = ising_score(y, z, theta, graph);
  }
  const double shift = *std::max_element(log_weight.begin(), log_weight.end());
  double total = 0.0;
  std::vector<double> positive(n, 0.0);
  for (std::size_t s = 0; s < states; ++s) {
    const double w = std::exp(log_weight[s] - shift);
    total += w;
    for (std::size_t i = 0; i < n; ++i)
      if ((s >> i) & 1u) positive[i] += w;
  }
  for (double& p : positive) p /= total;
  return positive;
}

std::vector<double> ising_bias_from_scores(std::span<const double> scores) {
  std::vector<double> z(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) z[i] = -0.5 * scores[i];
  return z;
}

}  // namespace labelgcn
