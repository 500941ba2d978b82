#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mibci/butterworth.hpp"
#include "mibci/epoch.hpp"

namespace mibci {

inline constexpr double kSmoothWindowS = 0.32;
inline constexpr double kSmoothStepS = 0.004;
inline constexpr double kReferenceTimeS = 2.5;

/// Smoothed power per channel over time. Step i is the mean of the window
/// starting at sample i * step_samples; its time stamp is the window centre.
struct PowerCurve {
    SampleMatrix values;  // n_channels x n_steps
    double step_s = 0.0;
    double t0 = 0.0;
    double fs_source = 0.0;
    std::size_t window_samples = 0;
    std::size_t step_samples = 0;
    std::vector<std::string> channel_names;

    std::size_t n_steps() const noexcept { return values.cols(); }
    double time_at(std::size_t step) const noexcept { return t0 + static_cast<double>(step) * step_s; }
    /// Step whose time stamp is closest to t (ties go to the earlier step).
    std::size_t nearest_step(double t) const;
};

/// Sample-wise square of every channel.
Epoch instantaneous_power(const Epoch& epoch);

/// Window = round(window_s * fs) samples, step = max(1, round(step_s * fs)).
/// Throws InvalidArgument when the window is shorter than a sample or longer
/// than the epoch.
PowerCurve smooth_power(const Epoch& power, double window_s = kSmoothWindowS, double step_s = kSmoothStepS);

/// Band-pass, square and smooth every trial, then average the curves across
/// trials (ascending trial order).
PowerCurve grand_average_power(const EpochSet& set, const BandSpec& band, double window_s = kSmoothWindowS,
                               double step_s = kSmoothStepS);

/// Divides every channel by its own value at the step nearest t_ref.
PowerCurve normalize_at_reference(const PowerCurve& curve, double t_ref = kReferenceTimeS);

struct RelativePowerTable {
    std::vector<std::string> channels;
    std::vector<ClassLabel> classes;
    std::vector<std::vector<double>> values;  // [channel][class]
};

/// Per class: grand average, normalise at t_ref, then average each requested
/// channel over the steps whose time lies in [t_begin, t_end].
RelativePowerTable relative_average_power(const EpochSet& set, const BandSpec& band,
                                          const std::vector<std::string>& channels,
                                          std::pair<double, double> interval, double t_ref = kReferenceTimeS);

/// `t_s,<channel names...>` header, then one row per step, 9 significant digits.
void write_power_curve_csv(const PowerCurve& curve, std::ostream& out);

}  // namespace mibci
