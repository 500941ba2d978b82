#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mibci/epoch.hpp"

namespace mibci {

struct BandSpec {
    double lo_hz = 8.0;
    double hi_hz = 30.0;
    int order = 5;

    /// Throws InvalidArgument unless 0 < lo < hi < fs/2 and order >= 1.
    void validate(double fs) const;
};

/// Preprocessing band used throughout: fifth-order 8-30 Hz.
inline constexpr BandSpec kPreprocessBand{8.0, 30.0, 5};
/// Mu band used for ERD/ERS curves.
inline constexpr BandSpec kMuBand{8.0, 12.0, 5};

/// One biquad: (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
struct Biquad {
    double b0, b1, b2, a1, a2;
};

/// Digital Butterworth band-pass built from the analog prototype with
/// edge prewarping and the bilinear transform, held as cascaded biquads
/// (one per prototype pole, so `order` sections for a band-pass of order N).
class ButterworthBandpass {
public:
    ButterworthBandpass(const BandSpec& band, double fs);

    const std::vector<Biquad>& sections() const noexcept { return sections_; }
    const BandSpec& band() const noexcept { return band_; }
    double fs() const noexcept { return fs_; }

    /// Frequency response H(e^{j 2 pi f / fs}).
    std::complex<double> response(double f_hz) const;

    /// Causal filtering, zero initial state, transposed direct form II.
    std::vector<double> apply(std::span<const double> x) const;

private:
    BandSpec band_;
    double fs_;
    std::vector<Biquad> sections_;
};

/// Filters every channel of the epoch; shape, label and rate are unchanged.
Epoch butterworth_bandpass(const Epoch& epoch, const BandSpec& band);
EpochSet butterworth_bandpass(const EpochSet& set, const BandSpec& band);

}  // namespace mibci
