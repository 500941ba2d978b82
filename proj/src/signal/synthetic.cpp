#include "mibci/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "mibci/container.hpp"
#include "mibci/error.hpp"
#include "mibci/random.hpp"

namespace mibci {

namespace {

constexpr int kNoiseTones = 6;
constexpr double kWhiteShare = 0.5;

std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("ch" + std::to_string(i));
    return names;
}

}  // namespace

void SyntheticConfig::validate() const {
    if (n_channels < 1 || n_samples < 1) throw InvalidArgument("synthetic config needs channels and samples");
    if (!(fs > 0.0)) throw InvalidArgument("synthetic config needs a positive sampling rate");
    if (!channel_names.empty() && channel_names.size() != n_channels)
        throw InvalidArgument("channel_names length disagrees with n_channels");
    if (classes.empty()) throw InvalidArgument("synthetic config has no classes");
    if (noise_amplitude < 0.0 || carrier_amplitude < 0.0 || carrier_jitter_hz < 0.0 || carrier_bandwidth_hz < 0.0)
        throw InvalidArgument("amplitudes, jitter and bandwidth must be nonnegative");
    const double length_s = static_cast<double>(n_samples) / fs;
    for (const auto& c : classes) {
        if (c.n_epochs == 0) throw InvalidArgument("class " + c.label.name() + " requests zero epochs");
        for (const auto& r : c.components) {
            if (r.channel >= n_channels) throw InvalidArgument("recipe channel index out of range");
            if (!(r.depth >= 0.0 && r.depth <= 1.0)) throw InvalidArgument("modulation depth must lie in [0,1]");
            if (r.onset_s < 0.0 || r.duration_s < 0.0 || r.onset_s + r.duration_s > length_s + 1e-12)
                throw InvalidArgument("ERD window exceeds the epoch length");
            if (!(r.carrier_hz > 0.0 && r.carrier_hz + carrier_jitter_hz < fs / 2.0))
                throw InvalidArgument("carrier frequency must lie in (0, fs/2)");
        }
    }
}

EpochSet generate_synthetic(const SyntheticConfig& config) {
    config.validate();
    const auto names = config.channel_names.empty() ? default_names(config.n_channels) : config.channel_names;
    const double two_pi = 2.0 * std::numbers::pi;
    const double f_max = std::min(40.0, config.fs / 2.0 * 0.95);

    EpochSet out;
    std::uint64_t epoch_index = 0;
    for (const auto& recipe : config.classes) {
        for (std::size_t e = 0; e < recipe.n_epochs; ++e, ++epoch_index) {
            Rng rng = make_rng(config.seed, "synthetic", epoch_index);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::normal_distribution<double> gauss(0.0, 1.0);
            SampleMatrix data(config.n_channels, config.n_samples);

            for (std::size_t k = 0; k < config.n_channels; ++k) {
                auto row = data.row(k);
                for (int tone = 0; tone < kNoiseTones; ++tone) {
                    const double f = 1.0 + (f_max - 1.0) * unit(rng);
                    const double amp = config.noise_amplitude / f;
                    const double phase = two_pi * unit(rng);
                    for (std::size_t n = 0; n < config.n_samples; ++n)
                        row[n] += amp * std::sin(two_pi * f * static_cast<double>(n) / config.fs + phase);
                }
                for (std::size_t n = 0; n < config.n_samples; ++n)
                    row[n] += kWhiteShare * config.noise_amplitude * gauss(rng);
            }

            for (const auto& c : recipe.components) {
                const double jitter = config.carrier_jitter_hz * (2.0 * unit(rng) - 1.0);
                const double f = c.carrier_hz + jitter;
                double phase = two_pi * unit(rng);
                // Phase diffusion gives a Lorentzian line of width carrier_bandwidth_hz.
                const double phase_step = std::sqrt(two_pi * config.carrier_bandwidth_hz / config.fs);
                auto row = data.row(c.channel);
                for (std::size_t n = 0; n < config.n_samples; ++n) {
                    const double t = static_cast<double>(n) / config.fs;
                    const bool in_window = t >= c.onset_s && t < c.onset_s + c.duration_s;
                    const double gain = in_window ? 1.0 - c.depth : 1.0;
                    row[n] += config.carrier_amplitude * gain * std::sin(two_pi * f * t + phase);
                    if (phase_step > 0.0) phase += phase_step * gauss(rng);
                }
            }

            out.push_back(Epoch(quantize_f32(data), config.fs, recipe.label, names, Provenance::Real));
        }
    }
    return out;
}

std::size_t preset_channel(BodyPart part) {
    switch (part) {
        case BodyPart::RH: return 0;  // C3, contralateral to the right hand
        case BodyPart::LH: return 1;  // C4
        case BodyPart::F: return 2;   // Cz
        case BodyPart::T: return 3;   // Pz
    }
    return 0;
}

SyntheticConfig motor_imagery_config(const MotorImageryPreset& p) {
    if (p.n_channels < 4) throw InvalidArgument("motor imagery preset needs at least 4 channels");
    static constexpr double kMuHz[4] = {10.0, 11.0, 9.5, 10.5};

    SyntheticConfig cfg;
    cfg.n_channels = p.n_channels;
    cfg.fs = p.fs;
    cfg.n_samples = static_cast<std::size_t>(std::llround(p.duration_s * p.fs));
    cfg.channel_names = {"C3", "C4", "Cz", "Pz"};
    for (std::size_t i = 4; i < p.n_channels; ++i) cfg.channel_names.push_back("X" + std::to_string(i));
    cfg.carrier_amplitude = p.carrier_amplitude;
    cfg.noise_amplitude = p.noise_amplitude;
    cfg.carrier_jitter_hz = p.carrier_jitter_hz;
    cfg.carrier_bandwidth_hz = p.carrier_bandwidth_hz;
    cfg.seed = p.seed;

    auto classes = p.classes;
    if (classes.empty())
        for (auto part : {BodyPart::LH, BodyPart::RH, BodyPart::F, BodyPart::T}) classes.push_back(ClassLabel::simple(part));

    for (const auto& label : classes) {
        ClassRecipe recipe{label, p.epochs_per_class, {}};
        for (std::size_t ch = 0; ch < 4; ++ch) {
            double depth = 0.0;
            for (auto part : label.parts())
                if (preset_channel(part) == ch) depth = p.depth;
            recipe.components.push_back({ch, kMuHz[ch], depth, p.onset_s, p.erd_duration_s});
        }
        cfg.classes.push_back(std::move(recipe));
    }
    return cfg;
}

}  // namespace mibci
