#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mibci {

using Rng = std::mt19937_64;

/// Deterministic per-purpose seed derivation from one master seed.
/// derive_seed(master, "split", run) and derive_seed(master, "init", run)
/// give unrelated streams, so re-running one stage never shifts another.
std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t master, std::string_view purpose, std::uint64_t index = 0) {
    return Rng(derive_seed(master, purpose, index));
}

}  // namespace mibci
