#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "mibci/net/model.hpp"

namespace mibci::net {

enum class OptimizerKind { SGD, Momentum, Adam };

std::string_view to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(std::string_view text);

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 16;
    std::size_t max_epochs = 200;
    std::uint64_t seed = 0;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double momentum = 0.9;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    double weight_decay = 0.0;  // L2 coefficient added to every gradient
    // Early stopping (see experiment::train_with_early_stop).
    std::size_t patience = 20;
    double train_accuracy_stop = 0.90;

    void validate() const;
};

class Optimizer {
public:
    Optimizer(const TrainConfig& config, const Model& model);

    /// One update from gradients aligned with model.parameters(); parameters
    /// are rounded back to float32 afterwards.
    void apply(Model& model, const Gradients& grads);

    std::size_t steps() const noexcept { return steps_; }

private:
    TrainConfig config_;
    std::size_t steps_ = 0;
    Gradients first_;   // momentum / Adam first moment
    Gradients second_;  // Adam second moment
};

/// Forward (train mode), MSE against the Walsh targets, backward, one
/// optimizer update, running-statistics update. Returns the pre-update loss.
/// Throws NumericError on a non-finite loss.
double train_step(Model& model, Optimizer& optimizer, const std::vector<Tensor>& batch,
                  const std::vector<std::vector<double>>& targets);

/// Loss and analytic gradients without touching the model.
struct LossAndGradients {
    double loss = 0.0;
    Gradients grads;
};
LossAndGradients loss_and_gradients(const Model& model, const std::vector<Tensor>& batch,
                                    const std::vector<std::vector<double>>& targets, Mode mode = Mode::Train);

}  // namespace mibci::net
