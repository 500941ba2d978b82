#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace mibci {

/// +/-1 Hadamard matrix in natural (Sylvester) order.
struct WalshMatrix {
    std::size_t rank = 0;
    std::vector<int> entries;  // rank x rank, row-major

    int at(std::size_t r, std::size_t c) const { return entries[r * rank + c]; }
};

/// Binary projection of a Walsh matrix (+1 -> 1, -1 -> 0). Any two distinct
/// rows differ in exactly rank/2 positions.
struct TargetMatrix {
    std::size_t rank = 0;
    std::vector<std::uint8_t> bits;  // rank x rank, row-major

    std::span<const std::uint8_t> row(std::size_t r) const { return {bits.data() + r * rank, rank}; }
};

inline constexpr std::size_t kMaxWalshRank = 64;
inline constexpr std::size_t kDefaultWalshRank = 16;

/// H_1 = [1]; H_2m = [[H, H], [H, -H]]. Rank must be a power of two in [2, 64].
WalshMatrix walsh_matrix(std::size_t rank);
TargetMatrix binary_walsh(std::size_t rank);

/// Fixed class centres: class k (0-based) gets row k + 1 of binary_walsh(rank),
/// skipping the all-ones row. Requires n_classes <= rank - 1.
std::vector<std::vector<double>> class_targets(std::size_t n_classes, std::size_t rank = kDefaultWalshRank);

struct MdnResult {
    std::size_t index = 0;          // 0-based position in the target list
    std::vector<double> distances;  // squared Euclidean distance to every target
};

/// Minimum-distance classification: D_k = sum_j (o_j - H_kj)^2, argmin over
/// k with ties resolved to the lowest index.
MdnResult mdn_classify(std::span<const double> output, const std::vector<std::vector<double>>& targets);

/// Number of differing positions between two 0/1 vectors.
std::size_t hamming(std::span<const std::uint8_t> u, std::span<const std::uint8_t> v);
std::size_t hamming(std::span<const double> u, std::span<const double> v);

/// One row per line, entries separated by single spaces.
void write_target_matrix(const TargetMatrix& m, std::ostream& out);

}  // namespace mibci
