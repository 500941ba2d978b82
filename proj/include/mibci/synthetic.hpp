#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mibci/epoch.hpp"

namespace mibci {

/// A rhythmic carrier on one channel whose amplitude drops by `depth`
/// (fraction in [0,1]) inside [onset_s, onset_s + duration_s).
struct ErdComponent {
    std::size_t channel = 0;
    double carrier_hz = 10.0;
    double depth = 0.0;
    double onset_s = 0.0;
    double duration_s = 0.0;
};

struct ClassRecipe {
    ClassLabel label;
    std::size_t n_epochs = 0;
    std::vector<ErdComponent> components;
};

struct SyntheticConfig {
    std::size_t n_channels = 0;
    std::size_t n_samples = 0;
    double fs = 0.0;
    std::vector<std::string> channel_names;  // empty: "ch0", "ch1", ...
    std::vector<ClassRecipe> classes;
    double carrier_amplitude = 10.0;  // microvolts
    double noise_amplitude = 2.0;     // microvolts, scales both noise terms
    double carrier_jitter_hz = 0.0;   // per-epoch uniform jitter of every carrier
    double carrier_bandwidth_hz = 0.0;  // 0: pure tone; > 0: random-walk phase (narrowband rhythm)
    std::uint64_t seed = 0;

    /// Throws InvalidArgument on any violated invariant.
    void validate() const;
};

/// Band-limited background noise plus class carriers with ERD windows.
/// Background: a few random-phase sinusoids in 1-40 Hz with 1/f amplitudes
/// plus white Gaussian noise. Carrier phase is random per epoch. Samples are
/// rounded to float32 so the output round-trips through the container
/// unchanged. Deterministic for a fixed seed.
EpochSet generate_synthetic(const SyntheticConfig& config);

struct MotorImageryPreset {
    std::size_t n_channels = 8;  // >= 4; channels past the first four carry noise only
    double fs = 128.0;
    double duration_s = 4.0;
    std::size_t epochs_per_class = 60;
    std::vector<ClassLabel> classes;  // default: LH, RH, F, T
    double depth = 0.8;
    double onset_s = 1.5;
    double erd_duration_s = 2.0;
    double carrier_amplitude = 10.0;
    double noise_amplitude = 2.0;
    double carrier_jitter_hz = 0.0;
    double carrier_bandwidth_hz = 0.0;
    std::uint64_t seed = 0;
};

/// Motor-cortex layout: C3 (right-hand ERD), C4 (left-hand ERD), Cz (feet),
/// Pz (tongue). Every motor channel carries a mu-band carrier in every class;
/// a class suppresses the carriers of its body parts' channels. Rest
/// suppresses nothing; multi-part labels suppress every listed channel.
SyntheticConfig motor_imagery_config(const MotorImageryPreset& preset);

/// Channel index the preset layout assigns to a body part.
std::size_t preset_channel(BodyPart part);

}  // namespace mibci
