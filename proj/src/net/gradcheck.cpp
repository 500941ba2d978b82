#include "mibci/net/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mibci/error.hpp"
#include "mibci/net/train.hpp"

namespace mibci::net {

GradCheckResult grad_check(const Model& model, const Tensor& sample, const std::vector<double>& target,
                           double epsilon, Mode mode) {
    const std::vector<Tensor> batch{sample};
    const std::vector<std::vector<double>> targets{target};
    const auto analytic = loss_and_gradients(model, batch, targets, mode);

    // Work on an unrounded copy: perturbed weights must not snap to float32.
    Model probe = model;
    auto params = probe.parameters();
    auto loss_at = [&] { return mse_loss(forward_batch(probe, batch, mode), targets); };

    GradCheckResult r;
    for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t i = 0; i < params[p].size(); ++i) {
            const double saved = params[p][i];
            params[p][i] = saved + epsilon;
            const double up = loss_at();
            params[p][i] = saved - epsilon;
            const double down = loss_at();
            params[p][i] = saved;

            const double numeric = (up - down) / (2.0 * epsilon);
            const double a = analytic.grads[p][i];
            if (!std::isfinite(a) || !std::isfinite(numeric)) throw NumericError("non-finite gradient in check");
            const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
            ++r.checked;
            if (rel > r.max_relative_error) {
                r.max_relative_error = rel;
                r.worst_tensor = p;
                r.worst_index = i;
            }
        }
    }
    return r;
}

double kink_margin(const Model& model, const Tensor& sample, Mode mode) {
    ForwardCache cache;
    forward_batch(model, {sample}, mode, &cache);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t li = 0; li < model.layers().size(); ++li) {
        const auto& x = cache.layers[li].input.front();
        if (std::holds_alternative<ReluLayer>(model.layers()[li])) {
            for (double v : x.values) margin = std::min(margin, std::abs(v));
        } else if (const auto* p = std::get_if<PoolLayer>(&model.layers()[li])) {
            for (std::size_t c = 0; c < x.planes; ++c)
                for (std::size_t t = 0; t + p->width <= x.length; t += p->width) {
                    std::vector<double> w(x.plane(c).begin() + static_cast<std::ptrdiff_t>(t),
                                          x.plane(c).begin() + static_cast<std::ptrdiff_t>(t + p->width));
                    std::sort(w.begin(), w.end(), std::greater<>());
                    margin = std::min(margin, w[0] - w[1]);
                }
        }
    }
    return margin;
}

}  // namespace mibci::net
