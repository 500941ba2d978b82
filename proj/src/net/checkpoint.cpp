#include "mibci/net/checkpoint.hpp"

#include <cmath>
#include <cstring>

#include <json.hpp>

#include "mibci/container.hpp"
#include "mibci/error.hpp"

namespace mibci::net {

using nlohmann::json;

namespace {
constexpr char kMagic[4] = {'M', 'I', 'F', 'E'};

std::size_t value_count(const Model& m) {
    std::size_t n = 0;
    for (const auto& p : m.parameters()) n += p.size();
    for (const auto& b : m.buffers()) n += b.size();
    return n;
}
}  // namespace

std::vector<std::uint8_t> encode_model(const Model& model) {
    const json header = {{"version", kCheckpointVersion}, {"spec", to_json(model.spec())}, {"n_values", value_count(model)}};
    const std::string text = header.dump() + "\n";
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    bytes::put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.insert(out.end(), text.begin(), text.end());
    auto put = [&](std::span<const double> values) {
        for (double v : values) bytes::put_f32(out, static_cast<float>(v));
    };
    for (const auto& p : model.parameters()) put(p);
    for (const auto& b : model.buffers()) put(b);
    return out;
}

Model decode_model(std::span<const std::uint8_t> in) {
    if (in.size() < 8 || std::memcmp(in.data(), kMagic, 4) != 0) throw FormatError("missing MIFE magic");
    const std::uint32_t header_len = bytes::get_u32(in, 4);
    if (header_len == 0 || 8 + static_cast<std::size_t>(header_len) > in.size())
        throw FormatError("checkpoint header length exceeds file size");
    json header;
    try {
        header = json::parse(in.begin() + 8, in.begin() + 8 + header_len);
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed checkpoint header: ") + ex.what());
    }
    if (header.value("version", 0u) != kCheckpointVersion) throw FormatError("unsupported checkpoint version");
    if (!header.contains("spec")) throw FormatError("checkpoint header has no spec");

    Model model = build_from_spec(architecture_from_json(header["spec"]), 0);
    const std::size_t expected = value_count(model);
    if (header.value("n_values", std::size_t{0}) != expected)
        throw ShapeError("checkpoint declares a different number of weights than its spec implies");
    if (in.size() - 8 - header_len != 4 * expected)
        throw FormatError("checkpoint payload is truncated or has trailing bytes");

    std::size_t offset = 8 + header_len;
    auto take = [&](std::span<double> dst) {
        for (double& v : dst) {
            const float f = bytes::get_f32(in, offset);
            offset += 4;
            if (!std::isfinite(f)) throw FormatError("non-finite weight in checkpoint");
            v = f;
        }
    };
    for (auto p : model.parameters()) take(p);
    for (auto b : model.buffers()) take(b);
    return model;
}

void save_model(const Model& model, const std::filesystem::path& path) { bytes::write_file(path, encode_model(model)); }

Model load_model(const std::filesystem::path& path) { return decode_model(bytes::read_file(path)); }

Model load_model(const std::filesystem::path& path, const ArchitectureSpec& expected) {
    Model m = load_model(path);
    if (!(m.spec() == expected)) throw ShapeError("checkpoint was saved from a different architecture");
    return m;
}

}  // namespace mibci::net
