#include "mibci/walsh.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "mibci/error.hpp"

namespace mibci {

namespace {

void check_rank(std::size_t rank) {
    if (rank < 2 || rank > kMaxWalshRank || !std::has_single_bit(rank))
        throw InvalidArgument("Walsh rank must be a power of two in [2, 64], got " + std::to_string(rank));
}

}  // namespace

WalshMatrix walsh_matrix(std::size_t rank) {
    check_rank(rank);
    WalshMatrix h{1, {1}};
    while (h.rank < rank) {
        const std::size_t m = h.rank;
        WalshMatrix next{2 * m, std::vector<int>(4 * m * m)};
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) {
                const int v = h.at(r, c);
                next.entries[r * 2 * m + c] = v;
                next.entries[r * 2 * m + c + m] = v;
                next.entries[(r + m) * 2 * m + c] = v;
                next.entries[(r + m) * 2 * m + c + m] = -v;
            }
        h = std::move(next);
    }
    return h;
}

TargetMatrix binary_walsh(std::size_t rank) {
    const auto h = walsh_matrix(rank);
    TargetMatrix t{rank, std::vector<std::uint8_t>(rank * rank)};
    for (std::size_t i = 0; i < h.entries.size(); ++i) t.bits[i] = h.entries[i] > 0 ? 1 : 0;
    return t;
}

std::vector<std::vector<double>> class_targets(std::size_t n_classes, std::size_t rank) {
    const auto t = binary_walsh(rank);
    if (n_classes < 1) throw InvalidArgument("need at least one class");
    if (n_classes > rank - 1)
        throw InvalidArgument(std::to_string(n_classes) + " classes do not fit a rank-" + std::to_string(rank) +
                              " Walsh matrix");
    std::vector<std::vector<double>> targets;
    for (std::size_t k = 1; k <= n_classes; ++k) {
        const auto row = t.row(k);
        targets.emplace_back(row.begin(), row.end());
    }
    return targets;
}

MdnResult mdn_classify(std::span<const double> output, const std::vector<std::vector<double>>& targets) {
    if (targets.empty()) throw InvalidArgument("minimum-distance classification needs at least one target");
    MdnResult r;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (targets[k].size() != output.size())
            throw ShapeError("feature vector length " + std::to_string(output.size()) + " differs from target length " +
                             std::to_string(targets[k].size()));
        double d = 0.0;
        for (std::size_t j = 0; j < output.size(); ++j) {
            const double e = output[j] - targets[k][j];
            d += e * e;
        }
        r.distances.push_back(d);
        if (d < best) {
            best = d;
            r.index = k;
        }
    }
    return r;
}

std::size_t hamming(std::span<const std::uint8_t> u, std::span<const std::uint8_t> v) {
    if (u.size() != v.size()) throw ShapeError("hamming distance of vectors with different lengths");
    std::size_t d = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] > 1 || v[i] > 1) throw InvalidArgument("hamming distance expects 0/1 entries");
        d += u[i] != v[i];
    }
    return d;
}

std::size_t hamming(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw ShapeError("hamming distance of vectors with different lengths");
    std::size_t d = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if ((u[i] != 0.0 && u[i] != 1.0) || (v[i] != 0.0 && v[i] != 1.0))
            throw InvalidArgument("hamming distance expects 0/1 entries");
        d += u[i] != v[i];
    }
    return d;
}

void write_target_matrix(const TargetMatrix& m, std::ostream& out) {
    for (std::size_t r = 0; r < m.rank; ++r) {
        for (std::size_t c = 0; c < m.rank; ++c) out << (c ? " " : "") << static_cast<int>(m.bits[r * m.rank + c]);
        out << '\n';
    }
}

}  // namespace mibci
