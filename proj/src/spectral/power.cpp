#include "mibci/power.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mibci/error.hpp"

namespace mibci {

std::size_t PowerCurve::nearest_step(double t) const {
    if (n_steps() == 0) throw InvalidArgument("power curve has no steps");
    const double pos = (t - t0) / step_s;
    if (pos <= 0.0) return 0;
    const auto i = static_cast<std::size_t>(std::floor(pos + 0.5 - 1e-9));
    return std::min(i, n_steps() - 1);
}

Epoch instantaneous_power(const Epoch& epoch) {
    SampleMatrix out = epoch.data();
    for (double& v : out.values()) v *= v;
    return epoch.with_data(std::move(out));
}

PowerCurve smooth_power(const Epoch& power, double window_s, double step_s) {
    const double fs = power.fs();
    const auto window = static_cast<std::size_t>(std::llround(window_s * fs));
    const auto step = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(step_s * fs)));
    if (window < 1) throw InvalidArgument("smoothing window is shorter than one sample");
    if (window > power.n_samples()) throw InvalidArgument("smoothing window is longer than the epoch");

    const std::size_t n_steps = (power.n_samples() - window) / step + 1;
    PowerCurve curve;
    curve.values = SampleMatrix(power.n_channels(), n_steps);
    curve.step_s = static_cast<double>(step) / fs;
    curve.t0 = static_cast<double>(window - 1) / (2.0 * fs);
    curve.fs_source = fs;
    curve.window_samples = window;
    curve.step_samples = step;
    curve.channel_names = power.channel_names();

    for (std::size_t k = 0; k < power.n_channels(); ++k) {
        const auto row = power.data().row(k);
        for (std::size_t i = 0; i < n_steps; ++i) {
            double sum = 0.0;
            for (std::size_t n = i * step; n < i * step + window; ++n) sum += row[n];
            curve.values(k, i) = sum / static_cast<double>(window);
        }
    }
    return curve;
}

PowerCurve grand_average_power(const EpochSet& set, const BandSpec& band, double window_s, double step_s) {
    if (set.empty()) throw InvalidArgument("grand average of an empty set");
    PowerCurve mean;
    for (std::size_t i = 0; i < set.size(); ++i) {
        auto curve = smooth_power(instantaneous_power(butterworth_bandpass(set[i], band)), window_s, step_s);
        if (i == 0) {
            mean = std::move(curve);
            continue;
        }
        auto dst = mean.values.values();
        const auto src = curve.values.values();
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
    for (double& v : mean.values.values()) v /= static_cast<double>(set.size());
    return mean;
}

PowerCurve normalize_at_reference(const PowerCurve& curve, double t_ref) {
    const double last = curve.time_at(curve.n_steps() - 1);
    const double slack = curve.step_s / 2.0;
    if (t_ref < curve.t0 - slack || t_ref > last + slack)
        throw InvalidArgument("reference time lies outside the curve's time span");
    const std::size_t ref = curve.nearest_step(t_ref);
    PowerCurve out = curve;
    for (std::size_t k = 0; k < out.values.rows(); ++k) {
        const double denom = curve.values(k, ref);
        if (denom == 0.0)
            throw NumericError("reference power is zero on channel " +
                               (k < curve.channel_names.size() ? curve.channel_names[k] : std::to_string(k)));
        for (double& v : out.values.row(k)) v /= denom;
    }
    return out;
}

RelativePowerTable relative_average_power(const EpochSet& set, const BandSpec& band,
                                          const std::vector<std::string>& channels,
                                          std::pair<double, double> interval, double t_ref) {
    if (set.empty()) throw InvalidArgument("relative power of an empty set");
    if (!(interval.first <= interval.second)) throw InvalidArgument("interval end precedes its start");
    std::vector<std::size_t> rows;
    for (const auto& name : channels) {
        const auto& names = set.channel_names();
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw InvalidArgument("unknown channel '" + name + "'");
        rows.push_back(static_cast<std::size_t>(it - names.begin()));
    }

    RelativePowerTable table;
    table.channels = channels;
    table.classes = set.labels();
    table.values.assign(channels.size(), std::vector<double>(table.classes.size(), 0.0));
    for (std::size_t c = 0; c < table.classes.size(); ++c) {
        const auto curve = normalize_at_reference(grand_average_power(set.of_class(table.classes[c]), band), t_ref);
        std::vector<std::size_t> steps;
        for (std::size_t i = 0; i < curve.n_steps(); ++i) {
            const double t = curve.time_at(i);
            if (t >= interval.first && t <= interval.second) steps.push_back(i);
        }
        if (steps.empty()) throw InvalidArgument("interval contains no curve steps");
        for (std::size_t r = 0; r < rows.size(); ++r) {
            double sum = 0.0;
            for (auto i : steps) sum += curve.values(rows[r], i);
            table.values[r][c] = sum / static_cast<double>(steps.size());
        }
    }
    return table;
}

void write_power_curve_csv(const PowerCurve& curve, std::ostream& out) {
    out << "t_s";
    for (const auto& name : curve.channel_names) out << ',' << name;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < curve.n_steps(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9g", curve.time_at(i));
        out << buf;
        for (std::size_t k = 0; k < curve.values.rows(); ++k) {
            std::snprintf(buf, sizeof buf, "%.9g", curve.values(k, i));
            out << ',' << buf;
        }
        out << '\n';
    }
}

}  // namespace mibci
