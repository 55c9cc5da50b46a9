#include "labelgcn/adam.hpp"

#include <cmath>

#include "labelgcn/error.hpp"

namespace labelgcn {

Adam::Adam(const ParameterSet& params, AdamOptions options)
    : options_(options), first_(params.zeros_like()), second_(params.zeros_like()) {
  if (!(options_.lr > 0.0)) throw ArgumentError("Adam learning rate must be positive");
  if (!(options_.beta1 >= 0.0 && options_.beta1 < 1.0) || !(options_.beta2 >= 0.0 && options_.beta2 < 1.0)) {
    throw ArgumentError("Adam betas must lie in [0, 1)");
  }
}

void Adam::set_lr(double lr) {
  if (!(lr > 0.0)) throw ArgumentError("Adam learning rate must be positive");
  options_.lr = lr;
}

void Adam::step(ParameterSet& params, const Gradients& grads) {
  if (grads.size() != params.size() || params.size() != first_.size()) {
    throw ShapeError("Adam step: parameter/gradient count mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].same_shape(grads[i]) || !params[i].same_shape(first_[i])) {
      throw ShapeError("Adam step: shape mismatch for " + params.name(i) + " (" + params[i].shape_string() +
                       " vs gradient " + grads[i].shape_string() + ")");
    }
  }

  ++step_;
  const double t = static_cast<double>(step_);
  const double correction1 = 1.0 - std::pow(options_.beta1, t);
  const double correction2 = 1.0 - std::pow(options_.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i].data();
    auto g = grads[i].data();
    auto m = first_[i].data();
    auto v = second_[i].data();
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = options_.beta1 * m[j] + (1.0 - options_.beta1) * g[j];
      v[j] = options_.beta2 * v[j] + (1.0 - options_.beta2) * g[j] * g[j];
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      p[j] -= options_.lr * m_hat / (std::sqrt(v_hat) + options_.epsilon);
    }
  }
}

}  // namespace labelgcn
