#pragma once

#include <vector>

namespace mibci::experiment {

struct TTestResult {
    double t = 0.0;
    double p_two_sided = 1.0;
    double p_one_sided = 0.5;   // tail in the direction of the observed mean difference
    double mean_difference = 0.0;
    std::size_t dof = 0;
    bool degenerate = false;    // differences have zero variance
};

/// Paired Student t-test on d = a - b with n - 1 degrees of freedom.
/// Zero-variance differences give t = +-inf (p = 0) for a nonzero mean and
/// t = 0 (p = 1) when every difference is zero.
TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mibci::experiment
