#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "../support.hpp"
#include "mibci/error.hpp"
#include "mibci/net/checkpoint.hpp"
#include "mibci/net/gradcheck.hpp"
#include "mibci/net/model.hpp"
#include "mibci/net/train.hpp"
#include "mibci/parallel.hpp"
#include "mibci/walsh.hpp"

using namespace mibci;
using namespace mibci::net;

namespace {

Tensor random_tensor(std::size_t planes, std::size_t length, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Tensor t(planes, length);
    for (auto& v : t.values) v = g(rng);
    return t;
}

ArchitectureSpec small_spec(bool pool, bool bn, bool relu = true) {
    ArchitectureSpec s;
    s.input_channels = 3;
    s.input_samples = 24;
    s.use_maxpool = pool;
    s.use_batchnorm = bn;
    s.relu_after_conv = relu;
    s.layers = {LayerSpec::conv(3, 5, 4), LayerSpec::conv(4, 3, 4), LayerSpec::dense(4, 0, 8)};
    return s;
}

// Redraws the input until the pass is away from ReLU and max-pool kinks.
Tensor smooth_input(const Model& m, std::size_t planes, std::size_t length, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 500; ++attempt) {
        Tensor t = random_tensor(planes, length, rng);
        if (kink_margin(m, t) >= 1e-3) return t;
    }
    FAIL("no kink-free input found");
    return {};
}

}  // namespace

TEST_CASE("architecture presets follow the tables") {
    const auto s1 = seven_layer_22ch(70);
    const auto rows = s1.layers;
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == LayerSpec::conv(22, 15, 70));
    CHECK(rows[6] == LayerSpec::conv(70, 3, 70));
    const auto chain = s1.expanded();
    CHECK(chain.back() == LayerSpec::dense(70, 4, 16));

    const auto l1b = seven_layer_43ch(50);
    CHECK(l1b.layers[0] == LayerSpec::conv(43, 15, 50));
    CHECK(l1b.expanded().back() == LayerSpec::dense(50, 5, 16));
    CHECK(param_count(l1b, false) == 156250u);  // hand sum: 32250 + 120000 + 4000

    CHECK(param_count(reference_architecture(), false) == 3928470u);

    ArchitectureSpec one;
    one.input_channels = 1;
    one.input_samples = 1;
    one.layers = {LayerSpec::conv(1, 1, 1)};
    CHECK(param_count(one, false) == 1u);
    one.layers.push_back(LayerSpec::dense(1, 0, 2));
    const auto m = build_from_spec(one, 1);
    CHECK(std::get<ConvLayer>(m.layers()[0]).weights.size() == 1);
}

TEST_CASE("architecture errors and JSON round trip") {
    ArchitectureSpec bad = small_spec(false, false);
    bad.layers[1] = LayerSpec::conv(5, 3, 4);
    CHECK_THROWS_AS(bad.expanded(), ShapeError);
    bad = small_spec(false, false);
    bad.layers[0] = LayerSpec::conv(3, 30, 4);
    CHECK_THROWS_AS(bad.expanded(), ShapeError);

    for (const auto& s : {small_spec(true, true), reference_architecture(), seven_layer_43ch(70)})
        CHECK(architecture_from_json(to_json(s)) == s);
    CHECK_THROWS_AS(architecture_from_json(nlohmann::json::object()), FormatError);
}

TEST_CASE("forward pass properties") {
    std::mt19937_64 rng(3);
    SUBCASE("zero input gives the dense bias") {
        auto m = build_from_spec(small_spec(true, false), 5);
        auto& dense = std::get<DenseLayer>(m.layers().back());
        for (std::size_t i = 0; i < dense.bias.size(); ++i) dense.bias[i] = 0.25 * static_cast<double>(i);
        const auto out = forward(m, Tensor(3, 24), Mode::Infer);
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == dense.bias[i]);
    }
    SUBCASE("ReLU chain without bias is positively homogeneous") {
        const auto m = build_from_spec(small_spec(true, false), 6);
        const auto x = random_tensor(3, 24, rng);
        Tensor x2 = x;
        for (auto& v : x2.values) v *= 2.0;
        const auto a = forward(m, x, Mode::Infer);
        const auto b = forward(m, x2, Mode::Infer);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(2.0 * a[i]).epsilon(1e-12));
    }
    SUBCASE("deterministic") {
        const auto x = random_tensor(3, 24, rng);
        CHECK(forward(build_from_spec(small_spec(true, true), 9), x, Mode::Infer) ==
              forward(build_from_spec(small_spec(true, true), 9), x, Mode::Infer));
        CHECK(build_from_spec(small_spec(true, true), 9) != build_from_spec(small_spec(true, true), 10));
    }
    SUBCASE("shape mismatch") {
        const auto m = build_from_spec(small_spec(false, false), 1);
        CHECK_THROWS_AS(forward(m, Tensor(2, 24), Mode::Infer), ShapeError);
        CHECK_THROWS_AS(forward(m, Tensor(3, 23), Mode::Infer), ShapeError);
    }
    SUBCASE("same padding keeps the length") {
        ArchitectureSpec s = small_spec(false, false);
        s.padding = Padding::Same;
        s.layers.back() = LayerSpec::dense(4, 24, 8);
        CHECK_NOTHROW(forward(build_from_spec(s, 1), random_tensor(3, 24, rng), Mode::Infer));
    }
    SUBCASE("weights are Glorot bounded and float32") {
        const auto m = build_from_spec(small_spec(true, true), 2);
        const auto& conv = std::get<ConvLayer>(m.layers()[0]);
        const double bound = std::sqrt(6.0 / (3.0 * 5.0 + 4.0 * 5.0));
        for (double w : conv.weights) {
            CHECK(std::abs(w) <= bound);
            CHECK(static_cast<double>(static_cast<float>(w)) == w);
        }
        CHECK(conv.bias.empty());  // batch-norm follows
        const auto plain = build_from_spec(small_spec(true, false), 2);
        const auto& c2 = std::get<ConvLayer>(plain.layers()[0]);
        REQUIRE(c2.bias.size() == 4);
        for (double b : c2.bias) CHECK(b == 0.0);
    }
}

TEST_CASE("max-pool routes gradients to the argmax") {
    ArchitectureSpec s;
    s.input_channels = 1;
    s.input_samples = 8;
    s.use_maxpool = true;
    s.relu_after_conv = false;
    s.layers = {LayerSpec::conv(1, 1, 1), LayerSpec::dense(1, 0, 1)};
    auto m = build_from_spec(s, 1);
    std::get<ConvLayer>(m.layers()[0]).weights = {1.0};
    auto& dense = std::get<DenseLayer>(m.layers().back());
    dense.weights = {1.0, 2.0, 3.0, 4.0};

    Tensor x(1, 8);
    x.values = {1, 5, 7, 2, 3, 3, -1, -4};  // ties resolve to the first position
    ForwardCache cache;
    const auto out = forward_batch(m, {x}, Mode::Train, &cache);
    CHECK(out[0][0] == doctest::Approx(5 * 1 + 7 * 2 + 3 * 3 + -1 * 4));
    const auto& argmax = cache.layers[1].argmax[0];
    CHECK(argmax == std::vector<std::size_t>{1, 2, 4, 6});

    // d(out)/d(conv weight) = sum of routed inputs times downstream weights.
    const auto g = backward(m, cache, {{1.0}});
    CHECK(g[0][0] == doctest::Approx(5 * 1 + 7 * 2 + 3 * 3 + -1 * 4));
}

TEST_CASE("batch-norm normalises per plane in train mode") {
    ArchitectureSpec s;
    s.input_channels = 2;
    s.input_samples = 10;
    s.use_batchnorm = true;
    s.relu_after_conv = false;
    s.layers = {LayerSpec::conv(2, 3, 3), LayerSpec::dense(3, 0, 2)};
    const auto m = build_from_spec(s, 4);
    std::mt19937_64 rng(8);
    std::vector<Tensor> batch;
    for (int i = 0; i < 5; ++i) {
        auto t = random_tensor(2, 10, rng);
        for (auto& v : t.values) v = 3.0 * v + 7.0;
        batch.push_back(t);
    }
    ForwardCache cache;
    forward_batch(m, batch, Mode::Train, &cache);
    const auto& xhat = cache.layers[1].xhat;
    for (std::size_t p = 0; p < 3; ++p) {
        double sum = 0.0, sq = 0.0, n = 0.0;
        for (const auto& t : xhat)
            for (double v : t.plane(p)) {
                sum += v;
                sq += v * v;
                n += 1.0;
            }
        const double mean = sum / n;
        CHECK(std::abs(mean) <= 1e-6);
        // Unit variance up to the epsilon inside the square root.
        CHECK(std::abs(sq / n - mean * mean - 1.0) <= 1e-5 * 10.0);
    }

    Model trained = m;
    update_running_stats(trained, cache);
    const auto& bn = std::get<BatchNormLayer>(trained.layers()[1]);
    const auto& fresh = std::get<BatchNormLayer>(m.layers()[1]);
    for (std::size_t p = 0; p < 3; ++p) {
        const double bm = cache.layers[1].batch_mean[p];
        CHECK(bn.running_mean[p] == doctest::Approx(0.9 * fresh.running_mean[p] + 0.1 * bm).epsilon(1e-6));
    }
}

TEST_CASE("gradient check on small models") {
    std::mt19937_64 rng(11);
    const auto targets = class_targets(2, 8);

    SUBCASE("linear dense-only model") {
        ArchitectureSpec s;
        s.input_channels = 2;
        s.input_samples = 5;
        s.layers = {LayerSpec::dense(2, 5, 8)};
        const auto m = build_from_spec(s, 3);
        const auto r = grad_check(m, random_tensor(2, 5, rng), targets[0]);
        CHECK(r.max_relative_error <= 1e-7);
        CHECK(r.checked == 2 * 5 * 8 + 8);
    }
    for (bool pool : {false, true})
        for (bool bn : {false, true}) {
            CAPTURE(pool);
            CAPTURE(bn);
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                const auto m = build_from_spec(small_spec(pool, bn), seed);
                const auto x = smooth_input(m, 3, 24, rng);
                CHECK(grad_check(m, x, targets[seed % 2]).max_relative_error <= 1e-4);
            }
        }
}

TEST_CASE("training steps") {
    std::mt19937_64 rng(12);
    const auto targets = class_targets(2, 8);
    std::vector<Tensor> batch{random_tensor(3, 24, rng), random_tensor(3, 24, rng)};
    const std::vector<std::vector<double>> t{targets[0], targets[1]};

    SUBCASE("zero learning rate leaves the weights") {
        TrainConfig c;
        c.learning_rate = 0.0;
        c.optimizer = OptimizerKind::SGD;
        auto m = build_from_spec(small_spec(true, false), 1);
        const auto before = m;
        Optimizer opt(c, m);
        const double loss = train_step(m, opt, batch, t);
        CHECK(loss > 0.0);
        CHECK(m.parameters().size() == before.parameters().size());
        for (std::size_t i = 0; i < m.parameters().size(); ++i)
            for (std::size_t j = 0; j < m.parameters()[i].size(); ++j) CHECK(m.parameters()[i][j] == before.parameters()[i][j]);
    }
    SUBCASE("output equal to the target gives zero loss and gradient") {
        ArchitectureSpec s;
        s.input_channels = 1;
        s.input_samples = 4;
        s.layers = {LayerSpec::dense(1, 4, 8)};
        auto m = build_from_spec(s, 1);
        auto& d = std::get<DenseLayer>(m.layers()[0]);
        std::fill(d.weights.begin(), d.weights.end(), 0.0);
        d.bias = targets[0];
        const auto lg = loss_and_gradients(m, {Tensor(1, 4, 1.0)}, {targets[0]});
        CHECK(lg.loss == 0.0);
        for (const auto& g : lg.grads)
            for (double v : g) CHECK(v == 0.0);
    }
    SUBCASE("small SGD steps do not increase the loss") {
        for (auto kind : {OptimizerKind::SGD, OptimizerKind::Momentum, OptimizerKind::Adam}) {
            TrainConfig c;
            c.optimizer = kind;
            c.learning_rate = kind == OptimizerKind::Adam ? 1e-4 : 1e-3;
            auto m = build_from_spec(small_spec(true, false), 2);
            Optimizer opt(c, m);
            const double l0 = train_step(m, opt, batch, t);
            const double l1 = train_step(m, opt, batch, t);
            const double l2 = train_step(m, opt, batch, t);
            CHECK(l1 <= l0);
            CHECK(l2 <= l1);
        }
    }
    SUBCASE("divergence is reported") {
        TrainConfig c;
        c.optimizer = OptimizerKind::SGD;
        c.learning_rate = 1e30;
        auto m = build_from_spec(small_spec(false, false), 2);
        Optimizer opt(c, m);
        CHECK_THROWS_AS(
            {
                for (int i = 0; i < 10; ++i) train_step(m, opt, batch, t);
            },
            NumericError);
    }
    SUBCASE("config validation") {
        TrainConfig c;
        c.batch_size = 0;
        CHECK_THROWS_AS(c.validate(), InvalidArgument);
        c = TrainConfig{};
        c.learning_rate = -1.0;
        CHECK_THROWS_AS(c.validate(), InvalidArgument);
    }
}

TEST_CASE("thread count does not change results") {
    std::mt19937_64 rng(13);
    const auto targets = class_targets(2, 8);
    std::vector<Tensor> batch;
    for (int i = 0; i < 6; ++i) batch.push_back(random_tensor(3, 24, rng));
    std::vector<std::vector<double>> t(6, targets[0]);
    const auto m = build_from_spec(small_spec(true, true), 4);
    set_num_threads(1);
    const auto one = loss_and_gradients(m, batch, t);
    set_num_threads(3);
    const auto three = loss_and_gradients(m, batch, t);
    set_num_threads(1);
    CHECK(one.loss == three.loss);
    CHECK(one.grads == three.grads);
}

TEST_CASE("checkpoint round trip") {
    std::mt19937_64 rng(14);
    auto m = build_from_spec(small_spec(true, true), 7);
    // Move the running statistics away from their initial values.
    ForwardCache cache;
    forward_batch(m, {random_tensor(3, 24, rng), random_tensor(3, 24, rng)}, Mode::Train, &cache);
    update_running_stats(m, cache);

    const auto bytes = encode_model(m);
    const auto back = decode_model(bytes);
    CHECK(back == m);
    const auto x = random_tensor(3, 24, rng);
    CHECK(forward(back, x, Mode::Infer) == forward(m, x, Mode::Infer));

    const auto path = std::filesystem::temp_directory_path() / "mibci_model.mife";
    save_model(m, path);
    CHECK(load_model(path) == m);
    CHECK_THROWS_AS(load_model(path, small_spec(false, true)), ShapeError);
    std::filesystem::remove(path);

    auto cut = bytes;
    cut.resize(cut.size() - 3);
    CHECK_THROWS_AS(decode_model(cut), FormatError);
    auto bad = bytes;
    bad[0] = 'Z';
    CHECK_THROWS_AS(decode_model(bad), FormatError);
}
