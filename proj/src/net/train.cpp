#include "mibci/net/train.hpp"

#include <cmath>

#include "mibci/error.hpp"

namespace mibci::net {

std::string_view to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::SGD: return "sgd";
        case OptimizerKind::Momentum: return "momentum";
        case OptimizerKind::Adam: return "adam";
    }
    return "?";
}

OptimizerKind optimizer_from_string(std::string_view text) {
    if (text == "sgd") return OptimizerKind::SGD;
    if (text == "momentum" || text == "sgd+momentum") return OptimizerKind::Momentum;
    if (text == "adam") return OptimizerKind::Adam;
    throw InvalidArgument("unknown optimizer '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw InvalidArgument("learning rate must be >= 0");
    if (batch_size < 1) throw InvalidArgument("batch size must be at least 1");
    if (weight_decay < 0.0) throw InvalidArgument("weight decay must be nonnegative");
    if (!(train_accuracy_stop > 0.0 && train_accuracy_stop <= 1.0))
        throw InvalidArgument("training-accuracy stop must lie in (0, 1]");
}

Optimizer::Optimizer(const TrainConfig& config, const Model& model) : config_(config) {
    config_.validate();
    first_ = model.zero_gradients();
    if (config_.optimizer == OptimizerKind::Adam) second_ = model.zero_gradients();
}

void Optimizer::apply(Model& model, const Gradients& grads) {
    auto params = model.parameters();
    if (grads.size() != params.size()) throw ShapeError("gradient list does not match model parameters");
    ++steps_;
    const double lr = config_.learning_rate;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
    for (std::size_t p = 0; p < params.size(); ++p) {
        auto w = params[p];
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double g = grads[p][i] + config_.weight_decay * w[i];
            double delta = 0.0;
            switch (config_.optimizer) {
                case OptimizerKind::SGD:
                    delta = lr * g;
                    break;
                case OptimizerKind::Momentum:
                    first_[p][i] = config_.momentum * first_[p][i] + g;
                    delta = lr * first_[p][i];
                    break;
                case OptimizerKind::Adam: {
                    first_[p][i] = config_.beta1 * first_[p][i] + (1.0 - config_.beta1) * g;
                    second_[p][i] = config_.beta2 * second_[p][i] + (1.0 - config_.beta2) * g * g;
                    const double mhat = first_[p][i] / bc1;
                    const double vhat = second_[p][i] / bc2;
                    delta = lr * mhat / (std::sqrt(vhat) + config_.adam_eps);
                    break;
                }
            }
            w[i] = static_cast<double>(static_cast<float>(w[i] - delta));
        }
    }
}

LossAndGradients loss_and_gradients(const Model& model, const std::vector<Tensor>& batch,
                                    const std::vector<std::vector<double>>& targets, Mode mode) {
    ForwardCache cache;
    const auto outputs = forward_batch(model, batch, mode, &cache);
    std::vector<std::vector<double>> dout;
    LossAndGradients r;
    r.loss = mse_loss(outputs, targets, &dout);
    r.grads = backward(model, cache, dout);
    return r;
}

double train_step(Model& model, Optimizer& optimizer, const std::vector<Tensor>& batch,
                  const std::vector<std::vector<double>>& targets) {
    if (batch.empty()) throw InvalidArgument("training step on an empty batch");
    if (targets.size() != batch.size()) throw ShapeError("one target row is needed per sample");
    ForwardCache cache;
    const auto outputs = forward_batch(model, batch, Mode::Train, &cache);
    std::vector<std::vector<double>> dout;
    const double loss = mse_loss(outputs, targets, &dout);
    if (!std::isfinite(loss)) throw NumericError("training loss is not finite");
    const auto grads = backward(model, cache, dout);
    for (const auto& g : grads)
        for (double v : g)
            if (!std::isfinite(v)) throw NumericError("gradient is not finite");
    optimizer.apply(model, grads);
    update_running_stats(model, cache);
    return loss;
}

}  // namespace mibci::net
