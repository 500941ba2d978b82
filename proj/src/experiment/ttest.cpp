#include "mibci/experiment/ttest.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "mibci/error.hpp"

namespace mibci::experiment {

TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ShapeError("paired t-test needs equal-length samples");
    if (a.size() < 2) throw InvalidArgument("paired t-test needs at least two pairs");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw InvalidArgument("paired t-test input is not finite");

    const double n = static_cast<double>(a.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
    mean /= n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / (n - 1.0));

    TTestResult r;
    r.mean_difference = mean;
    r.dof = a.size() - 1;
    if (sd == 0.0) {
        r.degenerate = true;
        if (mean == 0.0) {
            r.t = 0.0;
            r.p_two_sided = 1.0;
            r.p_one_sided = 0.5;
        } else {
            r.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
            r.p_two_sided = 0.0;
            r.p_one_sided = 0.0;
        }
        return r;
    }
    r.t = mean / (sd / std::sqrt(n));
    const boost::math::students_t dist(static_cast<double>(r.dof));
    r.p_one_sided = boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    r.p_two_sided = std::min(1.0, 2.0 * r.p_one_sided);
    return r;
}

}  // namespace mibci::experiment
