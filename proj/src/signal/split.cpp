#include "mibci/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mibci/error.hpp"
#include "mibci/random.hpp"

namespace mibci {

std::size_t round_half_up_count(double fraction, std::size_t count) {
    // The epsilon absorbs representation error such as 0.1 * 25 = 2.4999...
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(count) + 0.5 + 1e-9));
}

namespace {

Partition stratified(const EpochSet& set, double fraction, Rng& rng) {
    std::vector<bool> held_out(set.size(), false);
    for (const auto& label : set.labels()) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < set.size(); ++i)
            if (set[i].label() == label) idx.push_back(i);
        std::shuffle(idx.begin(), idx.end(), rng);
        const std::size_t n_out = round_half_up_count(fraction, idx.size());
        for (std::size_t j = 0; j < n_out; ++j) held_out[idx[j]] = true;
    }
    Partition p;
    for (std::size_t i = 0; i < set.size(); ++i) (held_out[i] ? p.second : p.first).push_back(set[i]);
    return p;
}

}  // namespace

Partition split_random(const EpochSet& set, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw InvalidArgument("test fraction must lie strictly between 0 and 1");
    for (const auto& label : set.labels())
        if (set.count(label) < 2)
            throw InvalidArgument("class " + label.name() + " has fewer than 2 epochs; cannot split");
    if (set.empty()) throw InvalidArgument("cannot split an empty set");
    Rng rng(seed);
    return stratified(set, test_fraction, rng);
}

Partition validation_split(const EpochSet& train, std::uint64_t seed) {
    if (train.empty()) throw InvalidArgument("cannot carve a validation set from an empty training set");
    Rng rng(derive_seed(seed, "validation"));
    return stratified(train, kValidationFraction, rng);
}

}  // namespace mibci
