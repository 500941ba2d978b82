#pragma once

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "mibci/epoch.hpp"
#include "mibci/random.hpp"

namespace mibci {

enum class CombineMode {
    Aligned,       // i-th epoch of A with i-th epoch of B
    CrossProduct,  // every (i, j) pair, row-major
};

/// Sample-wise superposition of two simple-imagery epochs:
/// out(k, n) = (a(k, n) + b(k, n)) / 2, labelled with the combined class
/// of both body parts and marked Artificial. No renormalisation is applied.
Epoch combine_epochs(const Epoch& a, const Epoch& b);

/// Combined class built from two single-class sets. Aligned pairs equal
/// indices and yields min(|A|, |B|) epochs; CrossProduct yields |A| x |B|
/// epochs in (i, j) row-major order.
EpochSet build_combined_class(const EpochSet& set_a, const EpochSet& set_b, CombineMode mode = CombineMode::Aligned);

/// `count` distinct (i, j) pairs drawn without replacement from the cross
/// product, emitted in row-major order. Throws when count > |A| x |B|.
EpochSet sample_combined(const EpochSet& set_a, const EpochSet& set_b, std::size_t count, Rng& rng);

inline constexpr std::size_t kDefaultSegments = 4;

/// Grows a single-class set to `target_count` epochs. The originals come
/// first, unchanged; each synthetic epoch is the concatenation of
/// `n_segments` time-aligned segments, each copied from a different
/// randomly chosen source epoch (the last segment absorbs any remainder).
EpochSet augment_segment_swap(const EpochSet& set, std::size_t n_segments, std::size_t target_count,
                              std::uint64_t seed);

struct BalanceToOthers {};
struct FixedCount {
    std::size_t n = 0;
};

struct OvaPlan {
    ClassLabel target_class;
    double real_split_fraction = 0.2;                       // test share of every real class
    std::vector<ClassLabel> artificial_classes;             // combined classes synthesised for training
    std::variant<BalanceToOthers, FixedCount> augmentation_target = BalanceToOthers{};
    std::size_t artificial_count = 0;                       // per non-target artificial class; 0: source class size
    std::size_t n_segments = kDefaultSegments;
};

/// Train/test sets relabelled to {target, O}; the *_origin vectors keep each
/// epoch's original class for per-class breakdowns.
struct OvaDataset {
    EpochSet train;
    EpochSet test;
    std::vector<ClassLabel> train_origin;
    std::vector<ClassLabel> test_origin;
};

/// One-versus-all dataset in the layout of the LH-O / BH-O tables:
///   - every real class in `real_sets` is split into train/test;
///   - artificial combined classes are drawn from the train parts only and
///     appear only in train;
///   - real combined epochs (`combined_real`) appear only in test;
///   - the target's training data is grown until it matches the total
///     "others" count (segment swap for real targets, more artificial pairs
///     for a combined target).
OvaDataset build_ova_dataset(const std::map<ClassLabel, EpochSet>& real_sets,
                             const std::map<ClassLabel, EpochSet>& combined_real, const OvaPlan& plan,
                             std::uint64_t seed);

}  // namespace mibci
