#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mibci/butterworth.hpp"
#include "mibci/experiment/trainer.hpp"
#include "mibci/synthesis.hpp"
#include "mibci/walsh.hpp"

namespace mibci::experiment {

struct RunOptions {
    net::TrainConfig train;        // train.seed is replaced per run
    double test_fraction = 0.2;
    std::optional<BandSpec> band;  // filter every epoch before the split
    // Combined classes rebuilt each run from the split parts of their simple
    // classes (aligned pairing), train parts into train and test into test.
    // Artificial epochs already carrying one of these labels are discarded.
    std::vector<std::pair<ClassLabel, ClassLabel>> combine_pairs;
    // Training epochs per combined class drawn from the cross product of the
    // train parts; 0 keeps the aligned pairing.
    std::size_t combine_train_count = 0;
    // Segment-swap augmentation of every training class up to this many
    // epochs (validation data is held out first); 0 disables it.
    std::size_t augment_to = 0;
    std::size_t augment_segments = kDefaultSegments;
    std::size_t walsh_rank = kDefaultWalshRank;
};

/// One randomized split -> train -> evaluate cycle. All randomness is taken
/// from derive_seed(seed, <purpose>, run_index).
RunReport run_once(const net::ArchitectureSpec& spec, const EpochSet& data, const RunOptions& options,
                   std::uint64_t seed, std::size_t run_index = 0, net::Model* trained = nullptr);

struct Summary {
    double mean = 0.0;
    double std = 0.0;  // sample std, 0 for one run
    double min = 0.0;
    double max = 0.0;
};

Summary summarize(const std::vector<double>& values);

struct RepeatedStats {
    std::size_t n_runs = 0;
    std::vector<ClassLabel> classes;
    Summary accuracy;
    Summary kappa;
    std::vector<std::optional<Summary>> sensitivities;  // per class, over runs where defined
    std::vector<RunReport> runs;
};

/// Runs are sequential; each uses its own seeds so the aggregate is fixed by
/// the master seed. A failing run is rethrown with its index.
RepeatedStats run_repeated(const net::ArchitectureSpec& spec, const EpochSet& data, const RunOptions& options,
                           std::size_t n_runs, std::uint64_t seed);

struct OriginScore {
    ClassLabel origin;
    std::size_t total = 0;
    std::size_t predicted_target = 0;
};

struct OvaReport {
    RunReport report;
    std::map<ClassLabel, std::size_t> train_counts;  // by relabelled class
    std::map<ClassLabel, std::size_t> test_counts;
    std::vector<OriginScore> test_origins;           // per original class
};

struct OvaOptions {
    OvaPlan plan;  // target_class is set per campaign entry
    net::TrainConfig train;
    std::optional<BandSpec> band;
    std::size_t walsh_rank = kDefaultWalshRank;
};

std::map<ClassLabel, std::size_t> count_labels(const EpochSet& set);

/// One binary network per target class.
std::map<ClassLabel, OvaReport> ova_campaign(const net::ArchitectureSpec& spec,
                                             const std::map<ClassLabel, EpochSet>& real_sets,
                                             const std::map<ClassLabel, EpochSet>& combined_real,
                                             const std::vector<ClassLabel>& targets, const OvaOptions& options,
                                             std::uint64_t seed);

}  // namespace mibci::experiment
