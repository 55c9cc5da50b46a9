#pragma once

#include <cstdint>

#include "labelgcn/tape.hpp"

namespace labelgcn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam (Kingma & Ba). Holds one pair of moment tensors per
/// parameter, shaped like the ParameterSet it was built from.
class Adam {
 public:
  Adam(const ParameterSet& params, AdamOptions options = {});

  void step(ParameterSet& params, const Gradients& grads);

  double lr() const { return options_.lr; }
  void set_lr(double lr);
  std::uint64_t step_count() const { return step_; }
  const AdamOptions& options() const { return options_; }

 private:
  AdamOptions options_;
  std::vector<Matrix> first_;
  std::vector<Matrix> second_;
  std::uint64_t step_ = 0;
};

}  // namespace labelgcn
