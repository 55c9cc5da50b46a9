#pragma once

#include <functional>

#include "labelgcn/tape.hpp"

namespace labelgcn {

using LossFn = std::function<double(const ParameterSet&)>;

/// Central differences (f(p+e) - f(p-e)) / 2e for every scalar in `params`.
/// Throws NumericError if any evaluation is non-finite.
Gradients finite_diff_gradient(const LossFn& loss, ParameterSet params, double epsilon = 1e-5);

/// max over entries of |a - b| / max(1, |b|), with `b` the reference.
double max_relative_error(const Gradients& a, const Gradients& b);

}  // namespace labelgcn
