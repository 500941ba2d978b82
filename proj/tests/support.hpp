#pragma once

#include <random>
#include <string>
#include <vector>

#include "mibci/epoch.hpp"

namespace testsupport {

inline std::vector<std::string> channel_names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("ch" + std::to_string(i));
    return out;
}

// Random epoch with float-representable samples, so container round trips are exact.
inline mibci::Epoch random_epoch(const mibci::ClassLabel& label, std::size_t channels, std::size_t samples,
                                 std::mt19937_64& rng, double fs = 128.0) {
    std::normal_distribution<float> g(0.0f, 5.0f);
    mibci::SampleMatrix m(channels, samples);
    for (auto& v : m.values()) v = static_cast<double>(g(rng));
    return mibci::Epoch(m, fs, label, channel_names(channels));
}

inline mibci::EpochSet random_set(const std::vector<std::pair<mibci::ClassLabel, std::size_t>>& classes,
                                  std::size_t channels, std::size_t samples, std::uint64_t seed, double fs = 128.0) {
    std::mt19937_64 rng(seed);
    mibci::EpochSet set;
    for (const auto& [label, n] : classes)
        for (std::size_t i = 0; i < n; ++i) set.push_back(random_epoch(label, channels, samples, rng, fs));
    return set;
}

inline mibci::ClassLabel L(const char* text) { return mibci::ClassLabel::parse(text); }

}  // namespace testsupport
