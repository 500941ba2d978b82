// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "../oracles.hpp"
#include "mibci/butterworth.hpp"
#include "mibci/cli/commands.hpp"
#include "mibci/cli/config.hpp"
#include "mibci/container.hpp"
#include "mibci/divergence.hpp"
#include "mibci/experiment/metrics.hpp"
#include "mibci/experiment/ttest.hpp"
#include "mibci/net/gradcheck.hpp"
#include "mibci/power.hpp"
#include "mibci/synthesis.hpp"
#include "mibci/synthetic.hpp"
#include "mibci/walsh.hpp"

using namespace mibci;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

ClassLabel L(const char* s) { return ClassLabel::parse(s); }

// ---- AC1
Outcome ac1() {
    const auto n = cli::cmd_params(net::reference_architecture(), false);
    return {n == 3928470u, "params=" + std::to_string(n)};
}

// ---- AC2
const int kPrinted8[8][8] = {{1, 1, 1, 1, 1, 1, 1, 1}, {1, 0, 1, 0, 1, 0, 1, 0}, {1, 1, 0, 0, 1, 1, 0, 0},
                             {1, 0, 0, 1, 1, 0, 0, 1}, {1, 1, 1, 1, 0, 0, 0, 0}, {1, 0, 1, 0, 0, 1, 0, 1},
                             {1, 1, 0, 0, 0, 0, 1, 1}, {1, 0, 0, 1, 0, 1, 1, 0}};

Outcome ac2() {
    bool ok = true;
    for (std::size_t m : {2, 4, 8, 16, 32}) {
        const auto h = walsh_matrix(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                long dot = 0;
                for (std::size_t k = 0; k < m; ++k) dot += h.at(i, k) * h.at(j, k);
                ok = ok && dot == (i == j ? static_cast<long>(m) : 0L);
            }
    }
    const auto b8 = binary_walsh(8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) ok = ok && b8.row(i)[j] == kPrinted8[i][j];
    const auto b16 = binary_walsh(16);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = i + 1; j < 16; ++j) ok = ok && hamming(b16.row(i), b16.row(j)) == 8;
    return {ok, "orthogonality M=2..32, printed 8x8, hamming 8 at M=16"};
}

// ---- AC3
net::ArchitectureSpec gc_spec(bool pool, bool bn, bool deep) {
    net::ArchitectureSpec s;
    s.input_channels = 3;
    s.input_samples = 32;
    s.use_maxpool = pool;
    s.use_batchnorm = bn;
    s.layers = {net::LayerSpec::conv(3, 5, 4)};
    if (deep) s.layers.push_back(net::LayerSpec::conv(4, 3, 5));
    s.layers.push_back(net::LayerSpec::dense(deep ? 5 : 4, 0, 8));
    return s;
}

Outcome ac3() {
    const auto t0 = Clock::now();
    const auto targets = class_targets(3, 8);
    const std::vector<std::tuple<const char*, bool, bool, bool>> combos{
        {"conv", false, false, false}, {"conv+pool", true, false, false},
        {"conv+batchnorm", false, true, false}, {"full chain", true, true, true}};
    double worst = 0.0;
    std::string detail;
    for (const auto& [name, pool, bn, deep] : combos) {
        double combo_worst = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto model = net::build_from_spec(gc_spec(pool, bn, deep), seed);
            std::mt19937_64 rng(1000 + seed);
            std::normal_distribution<double> g(0.0, 1.0);
            net::Tensor x(3, 32);
            // Finite differences only mean something away from ReLU / max-pool kinks.
            for (int attempt = 0; attempt < 1000; ++attempt) {
                for (auto& v : x.values) v = g(rng);
                if (net::kink_margin(model, x) >= 1e-3) break;
            }
            const auto r = net::grad_check(model, x, targets[seed % 3]);
            combo_worst = std::max(combo_worst, r.max_relative_error);
        }
        worst = std::max(worst, combo_worst);
        detail += std::string(name) + "=" + fmt("%.2e", combo_worst) + " ";
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-4 && secs < 120.0, detail + fmt("(%.1fs)", secs)};
}

// ---- AC4
Outcome ac4() {
    const auto cm = experiment::ConfusionMatrix::from_counts({L("LH"), L("O")}, {{6, 2}, {20, 132}});
    const auto m = experiment::metrics(cm);
    const double k_oracle = static_cast<double>(oracle::kappa({{6, 2}, {20, 132}}));
    const bool ok = std::abs(m.accuracy - 86.25) <= 1e-12 && std::abs(*m.sensitivities[0] - 75.0) <= 1e-12 &&
                    std::abs(m.kappa - k_oracle) <= 1e-12;
    return {ok, "accuracy=" + fmt("%.4f", m.accuracy) + " LH sens=" + fmt("%.2f", *m.sensitivities[0]) +
                    " kappa=" + fmt("%.12f", m.kappa) + " oracle=" + fmt("%.12f", k_oracle)};
}

// ---- AC5
Outcome ac5() {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst_oracle = 0.0, worst_rot = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t classes = 2 + trial % 2, dims = 1 + trial % 4, per = 5 + trial % 6;
        std::vector<std::vector<double>> x;
        std::vector<std::size_t> y;
        for (std::size_t k = 0; k < classes; ++k) {
            std::vector<double> centre(dims);
            for (auto& c : centre) c = 2.0 * g(rng);
            for (std::size_t i = 0; i < per; ++i) {
                std::vector<double> p(dims);
                for (std::size_t a = 0; a < dims; ++a) p[a] = centre[a] + g(rng);
                x.push_back(p);
                y.push_back(k);
            }
        }
        const double value = divergence(x, y).value;
        const double expect = static_cast<double>(oracle::divergence(x, y));
        worst_oracle = std::max(worst_oracle, std::abs(value - expect) / std::max(1.0, std::abs(expect)));

        Eigen::MatrixXd a(static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(dims));
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
        auto rotated = x;
        for (auto& p : rotated) {
            const Eigen::VectorXd v = q * Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(dims));
            p.assign(v.data(), v.data() + dims);
        }
        worst_rot = std::max(worst_rot, std::abs(divergence(rotated, y).value - value) / std::max(1.0, value));
    }
    return {worst_oracle <= 1e-9 && worst_rot <= 1e-9,
            "oracle err=" + fmt("%.2e", worst_oracle) + " rotation err=" + fmt("%.2e", worst_rot)};
}

// ---- AC6
Outcome ac6() {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g(0.0, 10.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        SampleMatrix ma(3, 64), mb(3, 64);
        for (auto& v : ma.values()) v = g(rng);
        for (auto& v : mb.values()) v = g(rng);
        const Epoch a(ma, 128.0, L("LH"), {"a", "b", "c"}), b(mb, 128.0, L("RH"), {"a", "b", "c"});
        const auto c = combine_epochs(a, b);
        for (std::size_t i = 0; i < ma.values().size(); ++i)
            worst = std::max(worst, std::abs(c.data().values()[i] - (ma.values()[i] + mb.values()[i]) / 2.0));
    }

    MotorImageryPreset p;
    p.seed = 66;
    p.epochs_per_class = 40;
    p.classes = {L("LH"), L("RH"), L("R")};
    const auto set = generate_synthetic(motor_imagery_config(p));
    EpochSet all = set;
    all.append(build_combined_class(set.of_class(L("LH")), set.of_class(L("RH"))));
    const auto table = relative_average_power(all, kMuBand, {"C3", "C4"}, {1.7, 3.3}, 1.0);
    auto depression = [&](const ClassLabel& label, std::size_t ch) {
        for (std::size_t k = 0; k < table.classes.size(); ++k)
            if (table.classes[k] == label) return 1.0 - table.values[ch][k];
        return 0.0;
    };
    bool ok = worst <= 1e-15;
    std::string detail = "half-sum err=" + fmt("%.1e", worst);
    for (std::size_t ch = 0; ch < 2; ++ch) {
        const double bh = depression(L("BH"), ch), rest = std::abs(depression(L("R"), ch));
        ok = ok && bh >= 2.0 * rest;
        detail += " " + table.channels[ch] + ": BH " + fmt("%.3f", bh) + " vs rest " + fmt("%.3f", rest);
    }
    return {ok, detail};
}

// ---- AC7
Outcome ac7(const fs::path& source_dir) {
    const fs::path work = fs::temp_directory_path() / "mibci_acceptance_ac7";
    fs::remove_all(work);
    fs::create_directories(work);
    const fs::path configs = source_dir / "configs";

    auto load = [&](const char* name, const fs::path& out) {
        auto c = cli::load_config(configs / name);
        c.architecture = (configs / "desk_arch.json").string();
        c.out_dir = out;
        fs::create_directories(out);
        return c;
    };

    auto t0 = Clock::now();
    auto four = load("desk4.json", work / "desk4");
    four.input = work / "synthetic.miep";
    cli::cmd_gen(four, four.input);
    const auto r4 = cli::cmd_train(four);
    const double acc4 = r4.at("accuracy").get<double>();
    const double t4 = seconds_since(t0);

    t0 = Clock::now();
    const fs::path combined = work / "combined.miep";
    cli::cmd_combine(four.input, combined, {}, CombineMode::Aligned);
    const std::size_t n_classes = load_epochset(combined).labels().size();
    auto ten = load("desk10.json", work / "desk10");
    ten.input = combined;
    const auto r10 = cli::cmd_train(ten);
    const double acc10 = r10.at("accuracy").get<double>();
    const double t10 = seconds_since(t0);
    fs::remove_all(work);

    const bool ok = acc4 >= 95.0 && t4 <= 600.0 && n_classes == 10 && acc10 >= 80.0 && t10 <= 1800.0;
    return {ok, "4-class " + fmt("%.2f%%", acc4) + fmt(" in %.0fs", t4) + "; " + std::to_string(n_classes) +
                    "-class " + fmt("%.2f%%", acc10) + fmt(" in %.0fs", t10)};
}

// ---- AC8
std::map<ClassLabel, EpochSet> classes_of(const std::vector<const char*>& names, std::uint64_t seed) {
    std::map<ClassLabel, EpochSet> out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (const char* n : names)
        for (int i = 0; i < 40; ++i) {
            SampleMatrix m(2, 16);
            for (auto& v : m.values()) v = static_cast<double>(static_cast<float>(g(rng)));
            out[L(n)].push_back(Epoch(m, 128.0, L(n), {"a", "b"}));
        }
    return out;
}

Outcome ac8() {
    const auto real = classes_of({"LH", "RH", "F", "HsF", "R"}, 8);
    const auto combined = classes_of({"BH", "LHF", "RHF"}, 9);
    auto count = [](const EpochSet& s, const ClassLabel& l) { return s.count(l); };
    OvaPlan plan;
    plan.artificial_classes = {L("BH"), L("LHF"), L("RHF")};

    plan.target_class = L("LH");
    const auto lh = build_ova_dataset(real, combined, plan, 1);
    const auto o = ClassLabel::other();
    const std::size_t lt = count(lh.train, L("LH")), ot = count(lh.train, o);
    const std::size_t ls = count(lh.test, L("LH")), os = count(lh.test, o);

    plan.target_class = L("BH");
    const auto bh = build_ova_dataset(real, combined, plan, 2);
    std::size_t bh_artificial = 0;
    for (const auto& e : bh.train)
        if (e.label() == L("BH") && e.provenance() == Provenance::Artificial) ++bh_artificial;

    const bool ok = lt == 248 && ot == 248 && ls == 8 && os == 152 && bh_artificial == 240;
    return {ok, "LH train " + std::to_string(lt) + "/" + std::to_string(ot) + " test " + std::to_string(ls) + "/" +
                    std::to_string(os) + "; BH artificial train " + std::to_string(bh_artificial)};
}

// ---- AC9
Outcome ac9() {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = 0.0;
    bool antisymmetric = true;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(trial);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = 75.0 + 6.0 * g(rng);
            b[i] = a[i] + 0.3 + g(rng);
        }
        const auto r = experiment::paired_ttest(a, b);
        const auto o = oracle::paired_ttest(a, b);
        worst = std::max({worst, std::abs(r.t - static_cast<double>(o.t)) / std::max(1.0, std::abs(r.t)),
                          std::abs(r.p_two_sided - static_cast<double>(o.p_two)),
                          std::abs(r.p_one_sided - static_cast<double>(o.p_one))});
        const auto s = experiment::paired_ttest(b, a);
        antisymmetric = antisymmetric && s.t == -r.t && s.p_two_sided == r.p_two_sided;
    }
    return {worst <= 1e-9 && antisymmetric, "max err=" + fmt("%.2e", worst) +
                                                (antisymmetric ? " antisymmetric" : " NOT antisymmetric")};
}

// ---- AC10
Outcome ac10() {
    SyntheticConfig c;
    c.n_channels = 1;
    c.fs = 250.0;
    c.n_samples = 1500;
    c.noise_amplitude = 0.2;
    c.seed = 10;
    c.classes = {{L("RH"), 30, {{0, 10.0, 0.5, 2.0, 2.0}}}};
    const auto set = generate_synthetic(c);
    const auto curve = normalize_at_reference(grand_average_power(set, kMuBand), 1.0);
    // Plateau mean well inside the ERD window, clear of the smoothing ramps.
    double trough = 0.0;
    const std::size_t lo = curve.nearest_step(2.5), hi = curve.nearest_step(3.5);
    for (std::size_t s = lo; s <= hi; ++s) trough += curve.values(0, s);
    trough /= static_cast<double>(hi - lo + 1);

    const auto p250 = smooth_power(instantaneous_power(set[0]));
    const bool ok = std::abs(trough - 0.25) <= 0.05 && p250.window_samples == 80 && p250.step_samples == 1;
    return {ok, "trough=" + fmt("%.4f", trough) + " window=" + std::to_string(p250.window_samples) +
                    " step=" + std::to_string(p250.step_samples)};
}

// ---- AC11
Outcome ac11() {
    const ButterworthBandpass f(kPreprocessBand, 256.0);
    const double g15 = std::abs(f.response(15.0)), g2 = std::abs(f.response(2.0)), g60 = std::abs(f.response(60.0));
    double worst = 0.0;
    for (double hz : {2.0, 15.0, 60.0})
        worst = std::max(worst, std::abs(std::abs(f.response(hz)) - oracle::butterworth_bandpass_gain(hz, 8, 30, 5, 256)));
    const bool ok = g15 >= 0.95 && g2 <= 0.05 && g60 <= 0.05 && worst <= 1e-9;
    return {ok, "|H(15)|=" + fmt("%.6f", g15) + " |H(2)|=" + fmt("%.2e", g2) + " |H(60)|=" + fmt("%.2e", g60) +
                    " oracle err=" + fmt("%.1e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path source_dir = argc > 1 ? fs::path(argv[1]) : fs::path(MIBCI_SOURCE_DIR);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 parameter count", ac1},
        {"AC2 Walsh invariants", ac2},
        {"AC3 gradient check", ac3},
        {"AC4 confusion metrics", ac4},
        {"AC5 divergence oracle", ac5},
        {"AC6 superposition", ac6},
        {"AC7 desk-scale end to end", [&] { return ac7(source_dir); }},
        {"AC8 OVA dataset counts", ac8},
        {"AC9 t-test oracle", ac9},
        {"AC10 ERD/ERS pipeline", ac10},
        {"AC11 band-pass gains", ac11},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s  %s  %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
