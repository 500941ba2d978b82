#include "mibci/experiment/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mibci/error.hpp"
#include "mibci/random.hpp"
#include "mibci/walsh.hpp"

namespace mibci::experiment {

std::size_t ClassMap::index_of(const ClassLabel& label) const {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw InvalidArgument("label " + label.name() + " has no target in the class map");
    return static_cast<std::size_t>(it - classes.begin());
}

ClassMap make_class_map(std::vector<ClassLabel> classes, std::size_t walsh_rank) {
    ClassMap m;
    m.targets = class_targets(classes.size(), walsh_rank);
    m.classes = std::move(classes);
    return m;
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::MaxEpochs: return "max_epochs";
        case StopReason::TrainAccuracy: return "train_accuracy";
        case StopReason::Patience: return "patience";
    }
    return "?";
}

namespace {

constexpr std::size_t kScoreBatch = 64;

std::vector<net::Tensor> tensors_of(const EpochSet& set) {
    std::vector<net::Tensor> out;
    out.reserve(set.size());
    for (const auto& e : set) out.push_back(net::to_tensor(e));
    return out;
}

std::vector<std::size_t> class_indices(const EpochSet& set, const ClassMap& classes) {
    std::vector<std::size_t> idx;
    idx.reserve(set.size());
    for (const auto& e : set) idx.push_back(classes.index_of(e.label()));
    return idx;
}

// Infer-mode outputs in chunks to bound memory.
std::vector<std::vector<double>> infer_all(const net::Model& model, const std::vector<net::Tensor>& xs) {
    std::vector<std::vector<double>> out;
    out.reserve(xs.size());
    for (std::size_t b = 0; b < xs.size(); b += kScoreBatch) {
        const std::vector<net::Tensor> chunk(xs.begin() + static_cast<std::ptrdiff_t>(b),
                                             xs.begin() + static_cast<std::ptrdiff_t>(std::min(xs.size(), b + kScoreBatch)));
        for (auto& o : net::forward_batch(model, chunk, net::Mode::Infer)) out.push_back(std::move(o));
    }
    return out;
}

SetScore score_tensors(const net::Model& model, const std::vector<net::Tensor>& xs, const std::vector<std::size_t>& y,
                       const ClassMap& classes) {
    if (xs.empty()) return {};
    const auto outputs = infer_all(model, xs);
    std::size_t correct = 0;
    std::vector<std::vector<double>> targets;
    targets.reserve(y.size());
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (mdn_classify(outputs[i], classes.targets).index == y[i]) ++correct;
        targets.push_back(classes.targets[y[i]]);
    }
    return {static_cast<double>(correct) / static_cast<double>(xs.size()), net::mse_loss(outputs, targets)};
}

}  // namespace

SetScore score(const net::Model& model, const EpochSet& set, const ClassMap& classes) {
    return score_tensors(model, tensors_of(set), class_indices(set, classes), classes);
}

TrainOutcome train_with_early_stop(const net::ArchitectureSpec& spec, const EpochSet& fit, const EpochSet& val,
                                   const ClassMap& classes, const net::TrainConfig& config) {
    config.validate();
    if (fit.empty()) throw InvalidArgument("training set is empty");
    if (classes.targets.empty() || classes.targets.front().size() != spec.output_dim())
        throw ShapeError("class targets do not match the network output size");

    TrainOutcome out;
    out.model = net::build_from_spec(spec, config.seed);
    if (config.max_epochs == 0) return out;

    const auto fit_x = tensors_of(fit);
    const auto fit_y = class_indices(fit, classes);
    const auto val_x = tensors_of(val);
    const auto val_y = class_indices(val, classes);

    net::Model model = out.model;
    net::Optimizer optimizer(config, model);
    Rng shuffle_rng = make_rng(config.seed, "shuffle");
    std::vector<std::size_t> order(fit.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    out.stop_reason = StopReason::MaxEpochs;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        std::size_t n_steps = 0;
        for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
            const std::size_t end = std::min(order.size(), b + config.batch_size);
            std::vector<net::Tensor> batch;
            std::vector<std::vector<double>> targets;
            for (std::size_t i = b; i < end; ++i) {
                batch.push_back(fit_x[order[i]]);
                targets.push_back(classes.targets[fit_y[order[i]]]);
            }
            try {
                loss_sum += net::train_step(model, optimizer, batch, targets);
            } catch (const NumericError& ex) {
                throw NumericError("training diverged in epoch " + std::to_string(epoch) + ": " + ex.what());
            }
            ++n_steps;
        }

        const SetScore fit_score = score_tensors(model, fit_x, fit_y, classes);
        // Without a validation set the fit loss drives model selection.
        const SetScore val_score = val.empty() ? fit_score : score_tensors(model, val_x, val_y, classes);
        if (!std::isfinite(val_score.loss))
            throw NumericError("validation loss is not finite in epoch " + std::to_string(epoch));
        out.history.push_back({epoch, loss_sum / static_cast<double>(n_steps), fit_score.accuracy, val_score.loss});
        out.epochs_trained = epoch;

        if (val_score.loss < best_val) {
            best_val = val_score.loss;
            out.model = model;
            out.best_epoch = epoch;
            since_best = 0;
        } else {
            ++since_best;
        }

        if (fit_score.accuracy > config.train_accuracy_stop) {
            out.stop_reason = StopReason::TrainAccuracy;
            break;
        }
        if (since_best >= config.patience) {
            out.stop_reason = StopReason::Patience;
            break;
        }
    }
    return out;
}

ConfusionMatrix evaluate(const net::Model& model, const EpochSet& test, const ClassMap& classes) {
    if (test.empty()) throw InvalidArgument("evaluation set is empty");
    const auto y = class_indices(test, classes);
    const auto outputs = infer_all(model, tensors_of(test));
    ConfusionMatrix cm(classes.classes);
    for (std::size_t i = 0; i < outputs.size(); ++i) cm.add(y[i], mdn_classify(outputs[i], classes.targets).index);
    return cm;
}

RunReport make_report(const TrainOutcome& outcome, ConfusionMatrix confusion) {
    RunReport r;
    r.metrics = metrics(confusion);
    r.confusion = std::move(confusion);
    r.epochs_trained = outcome.epochs_trained;
    r.best_epoch = outcome.best_epoch;
    r.stop_reason = outcome.stop_reason;
    r.history = outcome.history;
    return r;
}

}  // namespace mibci::experiment
