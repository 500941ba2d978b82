#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "../oracles.hpp"
#include "../support.hpp"
#include "mibci/butterworth.hpp"
#include "mibci/error.hpp"
#include "mibci/power.hpp"
#include "mibci/synthesis.hpp"
#include "mibci/synthetic.hpp"

using namespace mibci;
using testsupport::L;

namespace {

Epoch sine_epoch(double f, double fs, std::size_t n, double amp = 1.0) {
    SampleMatrix m(1, n);
    for (std::size_t i = 0; i < n; ++i) m(0, i) = amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / fs);
    return Epoch(m, fs, L("LH"), {"c"});
}

double tail_peak(const Epoch& e, std::size_t from) {
    double m = 0.0;
    for (std::size_t i = from; i < e.n_samples(); ++i) m = std::max(m, std::abs(e.data()(0, i)));
    return m;
}

}  // namespace

TEST_CASE("band-pass magnitude matches the analog oracle") {
    for (const auto& [band, fs] : {std::pair{kPreprocessBand, 256.0}, std::pair{kMuBand, 250.0}, std::pair{BandSpec{1, 40, 3}, 128.0}}) {
        const ButterworthBandpass filter(band, fs);
        CHECK(filter.sections().size() == static_cast<std::size_t>(band.order));
        for (double f = 0.5; f < fs / 2.0; f += 0.73)
            CHECK(std::abs(filter.response(f)) == doctest::Approx(oracle::butterworth_bandpass_gain(f, band.lo_hz, band.hi_hz, band.order, fs)).epsilon(1e-9));
    }
}

TEST_CASE("band-pass magnitude matches frozen reference values") {
    // Reference magnitudes of the same design evaluated with an independent DSP library.
    const ButterworthBandpass pre(kPreprocessBand, 256.0);
    const double f256[] = {2, 8, 10, 15, 30, 60};
    const double m256[] = {0.0002386080764392265, 0.7071067811865468, 0.9940158686892563,
                           0.9999999999995687, 0.7071067811865474, 0.0040518982415513735};
    for (int i = 0; i < 6; ++i) CHECK(std::abs(pre.response(f256[i])) == doctest::Approx(m256[i]).epsilon(1e-9));
    const ButterworthBandpass mu(kMuBand, 250.0);
    const double m250[] = {5.092786076332407e-06, 0.7071067811865458, 0.99999999995953,
                           0.02118564528259148, 5.9780260344021223e-05, 5.197704561193797e-07};
    for (int i = 0; i < 6; ++i) CHECK(std::abs(mu.response(f256[i])) == doctest::Approx(m250[i]).epsilon(1e-8));
}

TEST_CASE("band-pass time-domain behaviour") {
    const double fs = 256.0;
    const std::size_t n = 2048;
    CHECK(tail_peak(butterworth_bandpass(sine_epoch(15, fs, n), kPreprocessBand), 1024) >= 0.95);
    CHECK(tail_peak(butterworth_bandpass(sine_epoch(2, fs, n), kPreprocessBand), 1024) <= 0.05);
    CHECK(tail_peak(butterworth_bandpass(sine_epoch(60, fs, n), kPreprocessBand), 1024) <= 0.05);

    SampleMatrix dc(1, n, 3.0);
    const auto out = butterworth_bandpass(Epoch(dc, fs, L("LH"), {"c"}), kPreprocessBand);
    CHECK(tail_peak(out, 1024) < 1e-6);
}

TEST_CASE("band-pass is causal and linear") {
    const ButterworthBandpass filter(kPreprocessBand, 128.0);
    std::vector<double> impulse(64, 0.0), delayed(64, 0.0);
    impulse[0] = 1.0;
    delayed[10] = 1.0;
    const auto h = filter.apply(impulse);
    const auto hd = filter.apply(delayed);
    for (std::size_t i = 0; i < 10; ++i) CHECK(hd[i] == 0.0);
    for (std::size_t i = 10; i < 64; ++i) CHECK(hd[i] == doctest::Approx(h[i - 10]).epsilon(1e-12));
    std::vector<double> scaled(64, 0.0);
    scaled[0] = 2.5;
    const auto hs = filter.apply(scaled);
    for (std::size_t i = 0; i < 64; ++i) CHECK(hs[i] == doctest::Approx(2.5 * h[i]).epsilon(1e-12));
}

TEST_CASE("band edges are validated") {
    CHECK_THROWS_AS(ButterworthBandpass(BandSpec{8, 70, 5}, 128.0), InvalidArgument);
    CHECK_THROWS_AS(ButterworthBandpass(BandSpec{0, 30, 5}, 128.0), InvalidArgument);
    CHECK_THROWS_AS(ButterworthBandpass(BandSpec{30, 8, 5}, 128.0), InvalidArgument);
    CHECK_THROWS_AS(ButterworthBandpass(BandSpec{8, 30, 0}, 128.0), InvalidArgument);
}

TEST_CASE("instantaneous power") {
    const Epoch e(SampleMatrix::from_rows({{-2, 3}}), 100.0, L("LH"), {"c"});
    CHECK(instantaneous_power(e).data() == SampleMatrix::from_rows({{4, 9}}));
    const Epoch z(SampleMatrix(2, 5), 100.0, L("LH"), {"a", "b"});
    CHECK(instantaneous_power(z).data() == SampleMatrix(2, 5));

    const auto p = instantaneous_power(sine_epoch(4, 128, 128));  // four whole periods
    double mean = 0.0;
    for (double v : p.data().values()) mean += v;
    CHECK(mean / 128.0 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("smoothing window and step") {
    SUBCASE("250 Hz: 80-sample window, 1-sample step") {
        const Epoch p(SampleMatrix(1, 1000, 1.0), 250.0, L("LH"), {"c"});
        const auto c = smooth_power(p);
        CHECK(c.window_samples == 80);
        CHECK(c.step_samples == 1);
        CHECK(c.n_steps() == 921);
        CHECK(c.t0 == doctest::Approx(79.0 / 500.0));
    }
    SUBCASE("constant power stays constant") {
        const Epoch p(SampleMatrix(2, 300, 4.25), 128.0, L("LH"), {"a", "b"});
        const auto c = smooth_power(p);
        for (double v : c.values.values()) CHECK(v == doctest::Approx(4.25).epsilon(1e-14));
    }
    SUBCASE("rectangular pulse gives a trapezoid") {
        const std::size_t n = 400, start = 150, len = 100;
        SampleMatrix m(1, n);
        for (std::size_t i = start; i < start + len; ++i) m(0, i) = 1.0;
        const auto c = smooth_power(Epoch(m, 250.0, L("LH"), {"c"}));
        const double w = 80.0;
        for (std::size_t s = 0; s < c.n_steps(); ++s) {
            const double lo = std::max<double>(static_cast<double>(s), start);
            const double hi = std::min<double>(static_cast<double>(s) + w, static_cast<double>(start + len));
            CHECK(c.values(0, s) == doctest::Approx(std::max(0.0, hi - lo) / w).epsilon(1e-12));
        }
    }
    SUBCASE("window longer than the epoch") {
        const Epoch p(SampleMatrix(1, 20, 1.0), 250.0, L("LH"), {"c"});
        CHECK_THROWS_AS(smooth_power(p), InvalidArgument);
    }
    SUBCASE("scaling power scales the curve") {
        const auto set = testsupport::random_set({{L("LH"), 1}}, 2, 256, 3);
        const auto base = smooth_power(instantaneous_power(set[0]));
        SampleMatrix doubled = set[0].data();
        for (auto& v : doubled.values()) v *= 3.0;
        const auto tripled = smooth_power(instantaneous_power(set[0].with_data(doubled)));
        for (std::size_t i = 0; i < base.values.values().size(); ++i)
            CHECK(tripled.values.values()[i] == doctest::Approx(9.0 * base.values.values()[i]).epsilon(1e-12));
    }
}

TEST_CASE("grand average and normalisation") {
    const auto set = testsupport::random_set({{L("LH"), 3}}, 2, 512, 4);
    EpochSet one;
    one.push_back(set[0]);
    const auto single = grand_average_power(one, kMuBand);
    const auto own = smooth_power(instantaneous_power(butterworth_bandpass(set[0], kMuBand)));
    CHECK(single.values == own.values);

    EpochSet copies;
    for (int i = 0; i < 3; ++i) copies.push_back(set[0]);
    const auto avg = grand_average_power(copies, kMuBand);
    for (std::size_t i = 0; i < avg.values.values().size(); ++i)
        CHECK(avg.values.values()[i] == doctest::Approx(single.values.values()[i]).epsilon(1e-14));

    const auto norm = normalize_at_reference(avg, 2.5);
    const auto ref = norm.nearest_step(2.5);
    CHECK(norm.values(0, ref) == 1.0);
    CHECK(norm.values(1, ref) == 1.0);
    const auto again = normalize_at_reference(norm, 2.5);
    CHECK(again.values == norm.values);

    CHECK_THROWS_AS(grand_average_power(EpochSet{}, kMuBand), InvalidArgument);
    CHECK_THROWS_AS(normalize_at_reference(avg, 100.0), InvalidArgument);
    PowerCurve zero = avg;
    zero.values = SampleMatrix(2, avg.n_steps());
    CHECK_THROWS_AS(normalize_at_reference(zero, 2.5), NumericError);
}

TEST_CASE("ERD curves on synthetic data") {
    MotorImageryPreset p;
    p.seed = 21;
    p.epochs_per_class = 20;
    p.onset_s = 2.0;
    p.erd_duration_s = 1.5;
    p.duration_s = 5.0;
    const auto set = generate_synthetic(motor_imagery_config(p));
    const auto table = relative_average_power(set, kMuBand, {"C3", "C4", "Cz", "Pz"}, {2.4, 3.2}, 1.2);
    // Each simple class has its lowest relative power at its own channel.
    for (std::size_t k = 0; k < table.classes.size(); ++k) {
        const std::size_t own = preset_channel(table.classes[k].parts().front());
        for (std::size_t c = 0; c < 4; ++c)
            if (c != own) CHECK(table.values[own][k] < table.values[c][k]);
    }

    EpochSet twice = set.of_class(L("LH"));
    EpochSet dup;
    for (const auto& e : twice) dup.push_back(e.with_label(L("RH")));
    twice.append(dup);
    const auto same = relative_average_power(twice, kMuBand, {"C3", "C4"}, {2.4, 3.2}, 1.2);
    for (std::size_t c = 0; c < 2; ++c) CHECK(same.values[c][0] == same.values[c][1]);
}

TEST_CASE("power curve CSV") {
    const Epoch p(SampleMatrix(1, 100, 2.0), 250.0, L("LH"), {"C3"});
    std::ostringstream out;
    write_power_curve_csv(smooth_power(p), out);
    CHECK(out.str().rfind("t_s,C3\n", 0) == 0);
}
