#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace labelgcn {

struct NllResult {
  double loss = 0.0;
  std::vector<double> grad;  // softmax(scores) - onehot(target)
};

/// Negative log-likelihood of `target` under softmax(scores), using a
/// max-shifted log-sum-exp. Throws IndexError for target >= scores.size().
NllResult softmax_nll(std::span<const double> scores, std::size_t target);

std::vector<double> softmax(std::span<const double> scores);
double log_sum_exp(std::span<const double> scores);

}  // namespace labelgcn
