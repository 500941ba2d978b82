#pragma once

#include <cstddef>
#include <vector>

#include "mibci/net/model.hpp"

namespace mibci::net {

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::size_t worst_tensor = 0;  // index into Model::parameters()
    std::size_t worst_index = 0;
    std::size_t checked = 0;
};

/// Compares backpropagated gradients of the single-sample MSE loss with
/// central differences (L(w + eps) - L(w - eps)) / 2 eps for every
/// parameter. Relative error uses max(|analytic|, |numeric|, 1e-8) as the
/// denominator. Train mode uses the sample's own batch-norm statistics.
GradCheckResult grad_check(const Model& model, const Tensor& sample, const std::vector<double>& target,
                           double epsilon = 1e-4, Mode mode = Mode::Train);

/// Smallest distance of the forward pass from a non-differentiable point:
/// min |pre-activation| over ReLU inputs and min gap between the largest
/// and second-largest entry of every pooling window. Finite-difference
/// checks are only meaningful when this exceeds the perturbation's effect.
double kink_margin(const Model& model, const Tensor& sample, Mode mode = Mode::Train);

}  // namespace mibci::net
