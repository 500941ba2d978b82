#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mibci/net/model.hpp"

namespace mibci::net {

// Checkpoint layout: "MIFE", u32 header length, newline-terminated JSON
// header {version, spec, n_values}, then every parameter tensor followed by
// every running-statistics tensor as float32 LE, in declaration order.

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_model(const Model& model);
Model decode_model(std::span<const std::uint8_t> bytes);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);
/// As load_model, but throws ShapeError unless the stored spec equals `expected`.
Model load_model(const std::filesystem::path& path, const ArchitectureSpec& expected);

}  // namespace mibci::net
