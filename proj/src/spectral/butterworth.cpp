#include "mibci/butterworth.hpp"

#include <cmath>
#include <numbers>

#include "mibci/error.hpp"

namespace mibci {

using cplx = std::complex<double>;

void BandSpec::validate(double fs) const {
    if (order < 1) throw InvalidArgument("filter order must be at least 1");
    if (!(lo_hz > 0.0 && lo_hz < hi_hz && hi_hz < fs / 2.0))
        throw InvalidArgument("band edges must satisfy 0 < lo < hi < fs/2");
}

ButterworthBandpass::ButterworthBandpass(const BandSpec& band, double fs) : band_(band), fs_(fs) {
    band.validate(fs);
    const double pi = std::numbers::pi;
    const double two_fs = 2.0 * fs;

    // Prewarped analog edges.
    const double w1 = two_fs * std::tan(pi * band.lo_hz / fs);
    const double w2 = two_fs * std::tan(pi * band.hi_hz / fs);
    const double bw = w2 - w1;
    const double w0_sq = w1 * w2;

    // Analog low-pass prototype poles on the unit circle's left half.
    const int n = band.order;
    std::vector<cplx> digital_poles;
    for (int m = -n + 1; m <= n - 1; m += 2) {
        const cplx p = -std::exp(cplx(0.0, pi * m / (2.0 * n)));
        // Low-pass to band-pass: each prototype pole splits into two.
        const cplx half = p * bw / 2.0;
        const cplx root = std::sqrt(half * half - w0_sq);
        for (const cplx s : {half + root, half - root}) digital_poles.push_back((two_fs + s) / (two_fs - s));
    }

    // Group conjugate pairs; leftover real poles are paired with each other.
    std::vector<std::pair<cplx, cplx>> pairs;
    std::vector<double> reals;
    constexpr double kRealTol = 1e-12;
    for (const cplx& p : digital_poles) {
        if (std::abs(p.imag()) <= kRealTol)
            reals.push_back(p.real());
        else if (p.imag() > 0.0)
            pairs.emplace_back(p, std::conj(p));
    }
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2) pairs.emplace_back(reals[i], reals[i + 1]);
    if (reals.size() % 2 != 0) throw NumericError("unpaired real pole in band-pass design");

    // Each section gets one zero at z = 1 and one at z = -1.
    for (const auto& [p, q] : pairs) {
        const cplx sum = p + q;
        const cplx prod = p * q;
        sections_.push_back({1.0, 0.0, -1.0, -sum.real(), prod.real()});
    }

    // Unit gain at the band-pass centre, the image of sqrt(w1 w2).
    const double f0 = fs / pi * std::atan(std::sqrt(w0_sq) / two_fs);
    const double g = 1.0 / std::abs(response(f0));
    sections_.front().b0 *= g;
    sections_.front().b1 *= g;
    sections_.front().b2 *= g;
}

std::complex<double> ButterworthBandpass::response(double f_hz) const {
    const cplx z1 = std::exp(cplx(0.0, -2.0 * std::numbers::pi * f_hz / fs_));
    const cplx z2 = z1 * z1;
    cplx h = 1.0;
    for (const auto& s : sections_) h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    return h;
}

std::vector<double> ButterworthBandpass::apply(std::span<const double> x) const {
    std::vector<double> y(x.begin(), x.end());
    for (const auto& s : sections_) {
        double d1 = 0.0, d2 = 0.0;
        for (double& v : y) {
            const double in = v;
            const double out = s.b0 * in + d1;
            d1 = s.b1 * in - s.a1 * out + d2;
            d2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
    return y;
}

Epoch butterworth_bandpass(const Epoch& epoch, const BandSpec& band) {
    const ButterworthBandpass filter(band, epoch.fs());
    SampleMatrix out(epoch.n_channels(), epoch.n_samples());
    for (std::size_t k = 0; k < epoch.n_channels(); ++k) {
        const auto y = filter.apply(epoch.data().row(k));
        std::copy(y.begin(), y.end(), out.row(k).begin());
    }
    return epoch.with_data(std::move(out));
}

EpochSet butterworth_bandpass(const EpochSet& set, const BandSpec& band) {
    EpochSet out;
    for (const auto& e : set) out.push_back(butterworth_bandpass(e, band));
    return out;
}

}  // namespace mibci
