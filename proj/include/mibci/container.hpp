#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mibci/epoch.hpp"

namespace mibci {

// Epoch container layout (little-endian throughout):
//
//   "MIEP"            4 bytes magic
//   header_len        u32, byte length of the JSON header including its '\n'
//   header            UTF-8 JSON object, newline-terminated:
//                       {version:1, fs_hz, n_channels, n_samples, n_epochs,
//                        channel_names[], labels[{kind, parts[], provenance}]}
//   payload           n_epochs x n_channels x n_samples float32, epoch-major,
//                     channel-major, sample-minor
//
// Samples are stored as float32; a set whose samples are float32-representable
// (anything generated or loaded by this library) round-trips bit-exactly.

inline constexpr std::uint32_t kContainerVersion = 1;

std::vector<std::uint8_t> encode_epochset(const EpochSet& set);
EpochSet decode_epochset(std::span<const std::uint8_t> bytes);

void save_epochset(const EpochSet& set, const std::filesystem::path& path);
EpochSet load_epochset(const std::filesystem::path& path);

/// Rounds every sample to the nearest float32 value.
SampleMatrix quantize_f32(const SampleMatrix& m);

// Shared little-endian helpers, also used by the model checkpoint format.
namespace bytes {
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_f32(std::vector<std::uint8_t>& out, float v);
std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset);
float get_f32(std::span<const std::uint8_t> in, std::size_t offset);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);
}  // namespace bytes

}  // namespace mibci
