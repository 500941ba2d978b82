#include "mibci/net/architecture.hpp"

#include <fstream>

#include "mibci/error.hpp"

namespace mibci::net {

using nlohmann::json;

std::string_view to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv1D: return "conv";
        case LayerKind::MaxPool: return "maxpool";
        case LayerKind::BatchNorm: return "batchnorm";
        case LayerKind::ReLU: return "relu";
        case LayerKind::FlattenDense: return "dense";
    }
    return "?";
}

LayerKind layer_kind_from_string(std::string_view text) {
    if (text == "conv") return LayerKind::Conv1D;
    if (text == "maxpool") return LayerKind::MaxPool;
    if (text == "batchnorm") return LayerKind::BatchNorm;
    if (text == "relu") return LayerKind::ReLU;
    if (text == "dense" || text == "flatten") return LayerKind::FlattenDense;
    throw InvalidArgument("unknown layer kind '" + std::string(text) + "'");
}

std::vector<LayerSpec> ArchitectureSpec::expanded() const {
    if (input_channels < 1 || input_samples < 1) throw ShapeError("architecture input must be at least 1x1");
    if (layers.empty() || layers.back().kind != LayerKind::FlattenDense)
        throw ShapeError("architecture must end with a flatten-dense layer");

    std::vector<LayerSpec> out;
    std::size_t planes = input_channels;
    std::size_t length = input_samples;
    auto where = [&](std::size_t i) { return " (row " + std::to_string(i + 1) + ")"; };

    for (std::size_t i = 0; i < layers.size(); ++i) {
        LayerSpec l = layers[i];
        switch (l.kind) {
            case LayerKind::Conv1D: {
                if (l.in_planes != planes)
                    throw ShapeError("convolution expects " + std::to_string(l.in_planes) + " input planes, chain has " +
                                     std::to_string(planes) + where(i));
                if (l.kernel < 1 || l.out_planes < 1) throw ShapeError("convolution needs kernel and planes" + where(i));
                if (padding == Padding::Valid) {
                    if (l.kernel > length)
                        throw ShapeError("kernel " + std::to_string(l.kernel) + " longer than map length " +
                                         std::to_string(length) + where(i));
                    length = length - l.kernel + 1;
                }
                l.stride = 1;
                planes = l.out_planes;
                out.push_back(l);
                if (use_maxpool) {
                    if (length / pool_width < 1) throw ShapeError("map too short to pool" + where(i));
                    out.push_back(LayerSpec::maxpool(pool_width));
                    length /= pool_width;
                }
                if (use_batchnorm) out.push_back(LayerSpec::batchnorm(planes));
                if (relu_after_conv) out.push_back(LayerSpec::relu());
                break;
            }
            case LayerKind::MaxPool: {
                if (l.kernel < 1 || length / l.kernel < 1) throw ShapeError("invalid pool width" + where(i));
                l.stride = l.kernel;
                length /= l.kernel;
                out.push_back(l);
                break;
            }
            case LayerKind::BatchNorm:
                if (l.in_planes != 0 && l.in_planes != planes) throw ShapeError("batch-norm plane mismatch" + where(i));
                out.push_back(LayerSpec::batchnorm(planes));
                break;
            case LayerKind::ReLU:
                out.push_back(LayerSpec::relu());
                break;
            case LayerKind::FlattenDense:
                if (i + 1 != layers.size()) throw ShapeError("flatten-dense must be the last layer" + where(i));
                if (l.in_planes != planes)
                    throw ShapeError("dense expects " + std::to_string(l.in_planes) + " planes, chain has " +
                                     std::to_string(planes) + where(i));
                if (l.kernel != 0 && l.kernel != length)
                    throw ShapeError("dense expects length " + std::to_string(l.kernel) + ", chain has " +
                                     std::to_string(length) + where(i));
                if (l.out_planes < 1) throw ShapeError("dense needs an output size" + where(i));
                l.kernel = length;
                out.push_back(l);
                break;
        }
    }
    return out;
}

std::size_t ArchitectureSpec::output_dim() const {
    if (layers.empty() || layers.back().kind != LayerKind::FlattenDense)
        throw ShapeError("architecture must end with a flatten-dense layer");
    return layers.back().out_planes;
}

json to_json(const ArchitectureSpec& spec) {
    json rows = json::array();
    for (const auto& l : spec.layers) {
        json row = {{"kind", std::string(to_string(l.kind))}};
        switch (l.kind) {
            case LayerKind::Conv1D:
            case LayerKind::FlattenDense:
                row["in_planes"] = l.in_planes;
                row["kernel"] = l.kernel;
                row["out_planes"] = l.out_planes;
                break;
            case LayerKind::MaxPool: row["kernel"] = l.kernel; break;
            case LayerKind::BatchNorm: row["in_planes"] = l.in_planes; break;
            case LayerKind::ReLU: break;
        }
        rows.push_back(row);
    }
    return {{"input", {{"channels", spec.input_channels}, {"samples", spec.input_samples}}},
            {"layers", rows},
            {"use_maxpool", spec.use_maxpool},
            {"use_batchnorm", spec.use_batchnorm},
            {"relu_after_conv", spec.relu_after_conv},
            {"pool_width", spec.pool_width},
            {"padding", spec.padding == Padding::Same ? "same" : "valid"}};
}

ArchitectureSpec architecture_from_json(const json& j) {
    try {
        ArchitectureSpec s;
        s.input_channels = j.at("input").at("channels").get<std::size_t>();
        s.input_samples = j.at("input").at("samples").get<std::size_t>();
        s.use_maxpool = j.value("use_maxpool", false);
        s.use_batchnorm = j.value("use_batchnorm", false);
        s.relu_after_conv = j.value("relu_after_conv", true);
        s.pool_width = j.value("pool_width", std::size_t{2});
        const auto padding = j.value("padding", std::string("valid"));
        if (padding == "same")
            s.padding = Padding::Same;
        else if (padding == "valid")
            s.padding = Padding::Valid;
        else
            throw InvalidArgument("padding must be 'valid' or 'same'");
        for (const auto& row : j.at("layers")) {
            LayerSpec l;
            l.kind = layer_kind_from_string(row.at("kind").get<std::string>());
            l.in_planes = row.value("in_planes", std::size_t{0});
            l.kernel = row.value("kernel", std::size_t{0});
            l.out_planes = row.value("out_planes", std::size_t{0});
            if (l.kind == LayerKind::MaxPool) l.stride = l.kernel;
            if (l.kind == LayerKind::BatchNorm) l.out_planes = l.in_planes;
            s.layers.push_back(l);
        }
        return s;
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed architecture spec: ") + ex.what());
    }
}

ArchitectureSpec load_architecture(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open architecture spec '" + path + "'");
    try {
        return architecture_from_json(json::parse(f));
    } catch (const json::parse_error& ex) {
        throw FormatError(std::string("architecture spec is not valid JSON: ") + ex.what());
    }
}

std::size_t param_count(const ArchitectureSpec& spec, bool include_bias) {
    std::size_t total = 0;
    std::size_t planes = spec.input_channels;
    for (const auto& l : spec.layers) {
        switch (l.kind) {
            case LayerKind::Conv1D:
                total += l.in_planes * l.kernel * l.out_planes;
                if (include_bias) {
                    total += l.out_planes;
                    if (spec.use_batchnorm) total += 2 * l.out_planes;
                }
                planes = l.out_planes;
                break;
            case LayerKind::BatchNorm:
                if (include_bias) total += 2 * (l.in_planes ? l.in_planes : planes);
                break;
            case LayerKind::FlattenDense: {
                std::size_t length = l.kernel;
                if (length == 0) {
                    const auto chain = spec.expanded();
                    length = chain.back().kernel;
                }
                total += l.in_planes * length * l.out_planes;
                if (include_bias) total += l.out_planes;
                break;
            }
            case LayerKind::MaxPool:
            case LayerKind::ReLU:
                break;
        }
    }
    return total;
}

ArchitectureSpec reference_architecture() {
    ArchitectureSpec s;
    s.input_channels = 1;
    s.input_samples = 1536;
    s.padding = Padding::Same;
    s.layers.push_back(LayerSpec::conv(1, 45, 70));
    for (int i = 0; i < 10; ++i) s.layers.push_back(LayerSpec::conv(70, 45, 70));
    s.layers.push_back(LayerSpec::dense(70, 1536, 16));
    return s;
}

namespace {

ArchitectureSpec seven_layer(std::size_t channels, std::size_t samples, std::size_t planes, std::size_t fl_length) {
    ArchitectureSpec s;
    s.input_channels = channels;
    s.input_samples = samples;
    s.use_maxpool = true;
    s.use_batchnorm = true;
    std::size_t in = channels;
    for (std::size_t kernel : {15, 13, 11, 9, 7, 5, 3}) {
        s.layers.push_back(LayerSpec::conv(in, kernel, planes));
        in = planes;
    }
    s.layers.push_back(LayerSpec::dense(planes, fl_length, 16));
    return s;
}

}  // namespace

ArchitectureSpec seven_layer_22ch(std::size_t planes) { return seven_layer(22, 1125, planes, 4); }
ArchitectureSpec seven_layer_43ch(std::size_t planes) { return seven_layer(43, 1250, planes, 5); }

}  // namespace mibci::net
