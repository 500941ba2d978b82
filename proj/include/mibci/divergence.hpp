#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mibci {

/// Class separability tr(S^-1 B).
///   S = sum_k S_k, S_k the population (1/N_k) covariance of class k;
///   B = population (1/C) covariance of the class means about their mean.
/// When S is singular the trace is taken against S + ridge * I with
/// ridge = 1e-9 * tr(S) / d (1e-12 when tr(S) = 0); `ridge` is 0 otherwise.
struct DivergenceReport {
    Eigen::MatrixXd within;   // S
    Eigen::MatrixXd between;  // B
    double value = 0.0;
    double ridge = 0.0;
};

/// `labels[i]` is the class index of `features[i]`; indices need not be
/// contiguous. Requires >= 2 classes and equal feature lengths.
DivergenceReport divergence(const std::vector<std::vector<double>>& features, const std::vector<std::size_t>& labels);

}  // namespace mibci
