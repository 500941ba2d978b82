#pragma once

#include <cstdint>
#include <utility>

#include "mibci/epoch.hpp"

namespace mibci {

struct Partition {
    EpochSet first;   // train / fit
    EpochSet second;  // test / validation
};

/// Share of the training data held out for validation.
inline constexpr double kValidationFraction = 0.1;

/// round(fraction * count) with halves rounded up.
std::size_t round_half_up_count(double fraction, std::size_t count);

/// Stratified random partition. For every class, round(test_fraction * n)
/// epochs go to the test side. Both sides keep the original set order.
/// Throws InvalidArgument for fractions outside (0,1) or classes with < 2 epochs.
Partition split_random(const EpochSet& set, double test_fraction, std::uint64_t seed);

/// Stratified 10% hold-out of a training set for early stopping.
Partition validation_split(const EpochSet& train, std::uint64_t seed);

}  // namespace mibci
