#include "labelgcn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "labelgcn/error.hpp"

namespace labelgcn {

Gradients finite_diff_gradient(const LossFn& loss, ParameterSet params, double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("finite difference epsilon must be positive");
  auto checked = [&](const char* where) {
    const double v = loss(params);
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite loss during finite differences (") + where + ")");
    return v;
  };

  checked("base point");
  Gradients grads = params.zeros_like();
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto values = params[i].data();
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double original = values[j];
      values[j] = original + epsilon;
      const double up = checked("forward step");
      values[j] = original - epsilon;
      const double down = checked("backward step");
      values[j] = original;
      grads[i].data()[j] = (up - down) / (2.0 * epsilon);
    }
  }
  return grads;
}

double max_relative_error(const Gradients& a, const Gradients& b) {
  if (a.size() != b.size()) throw ShapeError("gradient lists differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].same_shape(b[i])) throw ShapeError("gradient shapes differ at tensor " + std::to_string(i));
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      const double ref = b[i].data()[j];
      worst = std::max(worst, std::abs(a[i].data()[j] - ref) / std::max(1.0, std::abs(ref)));
    }
  }
  return worst;
}

}  // namespace labelgcn
