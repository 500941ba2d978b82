#pragma once

#include <string>
#include <vector>

#include "mibci/epoch.hpp"
#include "mibci/experiment/metrics.hpp"
#include "mibci/net/model.hpp"
#include "mibci/net/train.hpp"

namespace mibci::experiment {

/// Class order and the fixed Walsh target of each class (class k -> row k+1).
struct ClassMap {
    std::vector<ClassLabel> classes;
    std::vector<std::vector<double>> targets;

    std::size_t index_of(const ClassLabel& label) const;  // throws if absent
};

ClassMap make_class_map(std::vector<ClassLabel> classes, std::size_t walsh_rank);

enum class StopReason { MaxEpochs, TrainAccuracy, Patience };
std::string to_string(StopReason r);

struct EpochLog {
    std::size_t epoch = 0;
    double train_loss = 0.0;       // mean step loss over the epoch
    double train_accuracy = 0.0;   // fraction, infer mode on the fit set
    double val_loss = 0.0;
};

struct RunReport {
    ConfusionMatrix confusion;
    Metrics metrics;
    std::size_t epochs_trained = 0;
    std::size_t best_epoch = 0;
    StopReason stop_reason = StopReason::MaxEpochs;
    std::vector<EpochLog> history;
};

struct TrainOutcome {
    net::Model model;  // snapshot with the lowest validation loss
    std::size_t epochs_trained = 0;
    std::size_t best_epoch = 0;
    StopReason stop_reason = StopReason::MaxEpochs;
    std::vector<EpochLog> history;
};

/// Trains from a fresh initialisation until the first of: fit-set accuracy
/// above config.train_accuracy_stop, `patience` epochs without a lower
/// validation loss, or max_epochs. Returns the best-validation snapshot.
/// A non-finite loss raises NumericError naming the epoch.
TrainOutcome train_with_early_stop(const net::ArchitectureSpec& spec, const EpochSet& fit, const EpochSet& val,
                                   const ClassMap& classes, const net::TrainConfig& config);

/// Infer-mode forward + minimum-distance classification of every epoch.
ConfusionMatrix evaluate(const net::Model& model, const EpochSet& test, const ClassMap& classes);

/// Fraction of correctly classified epochs and the mean MSE against targets.
struct SetScore {
    double accuracy = 0.0;
    double loss = 0.0;
};
SetScore score(const net::Model& model, const EpochSet& set, const ClassMap& classes);

/// Fills metrics and confusion into a report carrying the training summary.
RunReport make_report(const TrainOutcome& outcome, ConfusionMatrix confusion);

}  // namespace mibci::experiment
