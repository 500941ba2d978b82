#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mibci/cli/config.hpp"

namespace mibci::cli {

// Every command writes its files under the given paths and returns a JSON
// summary for stdout. Outputs carry no timestamps, so equal inputs and seed
// give identical bytes.

nlohmann::json cmd_gen(const PipelineConfig& config, const std::filesystem::path& output);

/// Appends combined classes for the listed pairs (every pair of the simple
/// classes present when empty) to the input set.
nlohmann::json cmd_combine(const std::filesystem::path& input, const std::filesystem::path& output,
                           std::vector<std::pair<ClassLabel, ClassLabel>> pairs, CombineMode mode);

/// Per class: band-pass, power, smoothing, grand average, normalisation.
/// Writes erders_<class>.csv and relative_power.json into out_dir.
nlohmann::json cmd_erders(const std::filesystem::path& input, const ErdersOptions& options,
                          const std::filesystem::path& out_dir);

/// Split, train, evaluate. Writes model.mife, report.json, confusion.csv.
nlohmann::json cmd_train(const PipelineConfig& config);

/// Writes ova.json and ova_<class>_confusion.csv.
nlohmann::json cmd_ova(const PipelineConfig& config);

/// Writes repeat.json.
nlohmann::json cmd_repeat(const PipelineConfig& config);

std::size_t cmd_params(const net::ArchitectureSpec& spec, bool include_bias);

/// Paired t-test of one numeric column from each CSV (header rows skipped).
nlohmann::json cmd_ttest(const std::filesystem::path& a, const std::filesystem::path& b, std::size_t column = 0);

std::vector<double> read_csv_column(const std::filesystem::path& path, std::size_t column);

}  // namespace mibci::cli
