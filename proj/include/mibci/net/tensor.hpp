#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mibci/epoch.hpp"

namespace mibci::net {

/// planes x length activation map, row-major by plane.
struct Tensor {
    std::size_t planes = 0;
    std::size_t length = 0;
    std::vector<double> values;

    Tensor() = default;
    Tensor(std::size_t p, std::size_t l, double fill = 0.0) : planes(p), length(l), values(p * l, fill) {}

    double& at(std::size_t p, std::size_t t) noexcept { return values[p * length + t]; }
    double at(std::size_t p, std::size_t t) const noexcept { return values[p * length + t]; }
    std::span<double> plane(std::size_t p) noexcept { return {values.data() + p * length, length}; }
    std::span<const double> plane(std::size_t p) const noexcept { return {values.data() + p * length, length}; }

    friend bool operator==(const Tensor&, const Tensor&) = default;
};

/// Channels become planes, samples become the length axis.
inline Tensor to_tensor(const Epoch& e) {
    Tensor t(e.n_channels(), e.n_samples());
    const auto v = e.data().values();
    t.values.assign(v.begin(), v.end());
    return t;
}

}  // namespace mibci::net
