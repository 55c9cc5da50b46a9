#include "labelgcn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "labelgcn/error.hpp"

namespace labelgcn {

double log_sum_exp(std::span<const double> scores) {
  if (scores.empty()) throw ArgumentError("log_sum_exp of empty vector");
  const double shift = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - shift);
  return shift + std::log(sum);
}

std::vector<double> softmax(std::span<const double> scores) {
  const double lse = log_sum_exp(scores);
  std::vector<double> p(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) p[i] = std::exp(scores[i] - lse);
  return p;
}

NllResult softmax_nll(std::span<const double> scores, std::size_t target) {
  if (target >= scores.size()) {
    throw IndexError("softmax_nll target " + std::to_string(target) + " out of range for " +
                     std::to_string(scores.size()) + " scores");
  }
  NllResult out;
  out.loss = log_sum_exp(scores) - scores[target];
  out.grad = softmax(scores);
  out.grad[target] -= 1.0;
  return out;
}

}  // namespace labelgcn
