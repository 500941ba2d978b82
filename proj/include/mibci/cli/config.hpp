#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mibci/butterworth.hpp"
#include "mibci/experiment/campaign.hpp"
#include "mibci/net/architecture.hpp"
#include "mibci/power.hpp"
#include "mibci/synthetic.hpp"

namespace mibci::cli {

struct ErdersOptions {
    BandSpec band = kMuBand;
    std::vector<std::string> channels;           // empty: every channel
    std::pair<double, double> interval{4.0, 6.0};  // relative-power averaging window, seconds
    double t_ref = kReferenceTimeS;
};

struct OvaConfig {
    std::vector<ClassLabel> targets;  // empty: every real and artificial class
    OvaPlan plan;
};

/// Everything a pipeline run needs. Relative paths are taken from the
/// working directory. The seed is mandatory.
struct PipelineConfig {
    std::optional<std::uint64_t> seed;
    std::filesystem::path input;
    std::filesystem::path combined_input;  // real combined-imagery epochs (OVA test only)
    std::filesystem::path out_dir = ".";
    std::optional<BandSpec> band = kPreprocessBand;
    nlohmann::json architecture;  // "reference", a file path or an inline spec
    net::TrainConfig train;
    experiment::RunOptions run;   // band and train are copied in at use
    std::size_t n_runs = 30;
    OvaConfig ova;
    MotorImageryPreset generate;
    ErdersOptions erders;

    std::uint64_t master_seed() const;  // throws when unset
    net::ArchitectureSpec architecture_spec() const;
    experiment::RunOptions run_options() const;
    /// Checks the seed, parameter ranges and that every referenced file exists.
    void validate(bool need_input, bool need_architecture) const;
};

BandSpec band_from_json(const nlohmann::json& j);
std::pair<ClassLabel, ClassLabel> parse_pair(const std::string& text);  // "LH-RH"
std::vector<std::pair<ClassLabel, ClassLabel>> all_pairs(const std::vector<ClassLabel>& simple);

PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);

/// Loads "reference" or a JSON file path.
net::ArchitectureSpec resolve_architecture(const nlohmann::json& ref);

}  // namespace mibci::cli
