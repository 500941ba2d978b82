#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "mibci/epoch.hpp"
#include "mibci/net/architecture.hpp"
#include "mibci/net/tensor.hpp"

namespace mibci::net {

enum class Mode { Train, Infer };

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.1;

struct ConvLayer {
    std::size_t in_planes = 0, kernel = 0, out_planes = 0;
    std::size_t pad_left = 0;       // 0 for valid padding
    bool same = false;
    std::vector<double> weights;    // [out][in][kernel]
    std::vector<double> bias;       // [out]; empty when batch-norm follows

    std::size_t output_length(std::size_t in_length) const { return same ? in_length : in_length - kernel + 1; }

    friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

struct PoolLayer {
    std::size_t width = 2;

    friend bool operator==(const PoolLayer&, const PoolLayer&) = default;
};

struct BatchNormLayer {
    std::size_t planes = 0;
    std::vector<double> gain, shift;              // trainable
    std::vector<double> running_mean, running_var;  // tracked in train mode, used in infer mode

    friend bool operator==(const BatchNormLayer&, const BatchNormLayer&) = default;
};

struct ReluLayer {
    friend bool operator==(const ReluLayer&, const ReluLayer&) = default;
};

struct DenseLayer {
    std::size_t in_total = 0, out_dim = 0;
    std::vector<double> weights;  // [out][in_total]
    std::vector<double> bias;     // [out]

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

using Layer = std::variant<ConvLayer, PoolLayer, BatchNormLayer, ReluLayer, DenseLayer>;

/// Gradient buffers aligned one-to-one with Model::parameters().
using Gradients = std::vector<std::vector<double>>;

/// Feature extractor: the expanded layer chain of an ArchitectureSpec plus
/// its weights. Parameters and running statistics are kept at float32
/// precision (arithmetic is double) so checkpoints round-trip exactly.
class Model {
public:
    Model() = default;

    const ArchitectureSpec& spec() const noexcept { return spec_; }
    const std::vector<Layer>& layers() const noexcept { return layers_; }
    std::vector<Layer>& layers() noexcept { return layers_; }

    /// Trainable tensors in declaration order: per layer, weights then bias
    /// (conv, dense) or gain then shift (batch-norm).
    std::vector<std::span<double>> parameters();
    std::vector<std::span<const double>> parameters() const;
    /// Batch-norm running mean and variance, in layer order.
    std::vector<std::span<double>> buffers();
    std::vector<std::span<const double>> buffers() const;

    std::size_t parameter_count() const;
    std::size_t output_dim() const;
    Gradients zero_gradients() const;

    void round_to_f32();

    friend Model build_from_spec(const ArchitectureSpec& spec, std::uint64_t seed);

    friend bool operator==(const Model&, const Model&) = default;

private:
    ArchitectureSpec spec_;
    std::vector<Layer> layers_;
};

/// Glorot-uniform weights (+/- sqrt(6 / (fan_in + fan_out))), zero biases,
/// unit batch-norm gain; deterministic per seed.
Model build_from_spec(const ArchitectureSpec& spec, std::uint64_t seed);

/// Per-layer state recorded by a forward pass for backpropagation.
struct LayerCache {
    std::vector<Tensor> input;
    std::vector<Tensor> xhat;                       // batch-norm
    std::vector<double> batch_mean, batch_var, inv_std;  // batch-norm, per plane
    std::vector<std::vector<std::size_t>> argmax;   // max-pool, per sample
};

struct ForwardCache {
    Mode mode = Mode::Infer;
    std::vector<LayerCache> layers;
};

/// Runs the chain on a batch. In train mode batch-norm normalises with the
/// batch statistics (over samples and positions); in infer mode with the
/// running statistics. The model is not modified.
std::vector<std::vector<double>> forward_batch(const Model& model, const std::vector<Tensor>& batch, Mode mode,
                                               ForwardCache* cache = nullptr);

std::vector<double> forward(const Model& model, const Tensor& input, Mode mode);
std::vector<double> forward(const Model& model, const Epoch& epoch, Mode mode);

/// Backpropagates d(loss)/d(output) through a cached forward pass.
Gradients backward(const Model& model, const ForwardCache& cache, const std::vector<std::vector<double>>& grad_output);

/// Folds the batch statistics of a train-mode pass into the running ones.
void update_running_stats(Model& model, const ForwardCache& cache);

/// Mean over the batch of sum_j (o_j - h_j)^2 / M. When `grad` is given it
/// receives d(loss)/d(o).
double mse_loss(const std::vector<std::vector<double>>& outputs, const std::vector<std::vector<double>>& targets,
                std::vector<std::vector<double>>* grad = nullptr);

}  // namespace mibci::net
