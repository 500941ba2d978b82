#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mibci::net {

enum class LayerKind { Conv1D, MaxPool, BatchNorm, ReLU, FlattenDense };

std::string_view to_string(LayerKind kind);
LayerKind layer_kind_from_string(std::string_view text);

/// One row of an architecture table. The (in_planes, kernel, out_planes)
/// triple reads as in the FE tables:
///   Conv1D        input planes, filter length, feature planes
///   FlattenDense  input planes, flattened length, output size (Walsh rank);
///                 a length of 0 means "whatever the chain produces"
///   MaxPool       kernel = pool width
///   BatchNorm     in_planes = planes (0: inferred)
struct LayerSpec {
    LayerKind kind = LayerKind::Conv1D;
    std::size_t in_planes = 0;
    std::size_t kernel = 0;
    std::size_t out_planes = 0;
    std::size_t stride = 1;

    static LayerSpec conv(std::size_t in, std::size_t kernel, std::size_t out) {
        return {LayerKind::Conv1D, in, kernel, out, 1};
    }
    static LayerSpec dense(std::size_t in, std::size_t length, std::size_t out) {
        return {LayerKind::FlattenDense, in, length, out, 1};
    }
    static LayerSpec maxpool(std::size_t width) { return {LayerKind::MaxPool, 0, width, 0, width}; }
    static LayerSpec batchnorm(std::size_t planes = 0) { return {LayerKind::BatchNorm, planes, 0, planes, 1}; }
    static LayerSpec relu() { return {LayerKind::ReLU, 0, 0, 0, 1}; }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

enum class Padding { Valid, Same };

/// Declarative feature-extractor description. `layers` holds the table rows;
/// the flags insert max-pool, batch-norm and ReLU (in that order) after
/// every convolution when the chain is expanded.
struct ArchitectureSpec {
    std::size_t input_channels = 0;
    std::size_t input_samples = 0;
    std::vector<LayerSpec> layers;
    bool use_maxpool = false;
    bool use_batchnorm = false;
    bool relu_after_conv = true;
    std::size_t pool_width = 2;
    Padding padding = Padding::Valid;

    /// Full layer chain with the flag-implied layers inserted and every
    /// inferred size (batch-norm planes, dense length) filled in.
    /// Throws ShapeError when consecutive layers are incompatible.
    std::vector<LayerSpec> expanded() const;

    /// Output size of the final FlattenDense row.
    std::size_t output_dim() const;

    friend bool operator==(const ArchitectureSpec&, const ArchitectureSpec&) = default;
};

nlohmann::json to_json(const ArchitectureSpec& spec);
ArchitectureSpec architecture_from_json(const nlohmann::json& j);
ArchitectureSpec load_architecture(const std::string& path);

/// Weight count: conv in*kernel*out (+out with biases), dense
/// in*length*out (+out), batch-norm gain and shift per plane (biases only).
/// Works on the table rows alone, so specs whose rows do not chain under
/// the configured padding (such as the 1x1536 reference design) still count.
std::size_t param_count(const ArchitectureSpec& spec, bool include_bias);

/// The single-channel 1536-sample design: eleven 45-tap, 70-plane
/// convolutions, no pooling, dense 70*1536 -> 16. Same padding keeps the
/// length at 1536 so the chain is also buildable.
ArchitectureSpec reference_architecture();

/// Seven-convolution designs for 22-channel, 250 Hz recordings; `planes` is
/// 70, 50 or 40 depending on the subject. Input length 1125 samples brings
/// the map to length 4 before the dense layer.
ArchitectureSpec seven_layer_22ch(std::size_t planes);

/// Same ladder for 43-channel input with 1250 samples (length 5 before dense).
ArchitectureSpec seven_layer_43ch(std::size_t planes);

}  // namespace mibci::net
