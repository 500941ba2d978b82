#include "mibci/container.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "mibci/error.hpp"

namespace mibci {

using nlohmann::json;

namespace bytes {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
    if (offset + 4 > in.size()) throw FormatError("unexpected end of data at byte " + std::to_string(offset));
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
    return v;
}

float get_f32(std::span<const std::uint8_t> in, std::size_t offset) {
    return std::bit_cast<float>(get_u32(in, offset));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!f) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace bytes

SampleMatrix quantize_f32(const SampleMatrix& m) {
    SampleMatrix q = m;
    for (double& v : q.values()) v = static_cast<double>(static_cast<float>(v));
    return q;
}

namespace {

constexpr char kMagic[4] = {'M', 'I', 'E', 'P'};

json label_to_json(const Epoch& e) {
    json parts = json::array();
    for (auto p : e.label().parts()) parts.push_back(std::string(to_string(p)));
    return {{"kind", std::string(to_string(e.label().kind()))},
            {"parts", parts},
            {"provenance", std::string(to_string(e.provenance()))}};
}

}  // namespace

std::vector<std::uint8_t> encode_epochset(const EpochSet& set) {
    if (set.empty()) throw InvalidArgument("cannot encode an empty epoch set");

    json labels = json::array();
    for (const auto& e : set) labels.push_back(label_to_json(e));
    const json header = {{"version", kContainerVersion},
                         {"fs_hz", set.fs()},
                         {"n_channels", set.n_channels()},
                         {"n_samples", set.n_samples()},
                         {"n_epochs", set.size()},
                         {"channel_names", set.channel_names()},
                         {"labels", labels}};
    const std::string text = header.dump() + "\n";

    std::vector<std::uint8_t> out;
    out.reserve(8 + text.size() + 4 * set.size() * set.n_channels() * set.n_samples());
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    bytes::put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.insert(out.end(), text.begin(), text.end());
    for (const auto& e : set)
        for (double v : e.data().values()) {
            const float f = static_cast<float>(v);
            if (!std::isfinite(f)) throw FormatError("sample overflows float32");
            bytes::put_f32(out, f);
        }
    return out;
}

EpochSet decode_epochset(std::span<const std::uint8_t> in) {
    if (in.size() < 8 || std::memcmp(in.data(), kMagic, 4) != 0) throw FormatError("missing MIEP magic");
    const std::uint32_t header_len = bytes::get_u32(in, 4);
    if (header_len == 0 || 8 + static_cast<std::size_t>(header_len) > in.size())
        throw FormatError("header length exceeds file size");
    if (in[8 + header_len - 1] != '\n') throw FormatError("header is not newline-terminated");

    json header;
    try {
        header = json::parse(in.begin() + 8, in.begin() + 8 + header_len);
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed container header: ") + ex.what());
    }

    try {
        if (header.at("version").get<std::uint32_t>() != kContainerVersion)
            throw FormatError("unsupported container version");
        const double fs = header.at("fs_hz").get<double>();
        const auto n_channels = header.at("n_channels").get<std::size_t>();
        const auto n_samples = header.at("n_samples").get<std::size_t>();
        const auto n_epochs = header.at("n_epochs").get<std::size_t>();
        const auto names = header.at("channel_names").get<std::vector<std::string>>();
        const auto& labels = header.at("labels");
        if (names.size() != n_channels) throw FormatError("channel_names length disagrees with n_channels");
        if (labels.size() != n_epochs) throw FormatError("labels length disagrees with n_epochs");

        const std::size_t per_epoch = n_channels * n_samples;
        const std::size_t payload = in.size() - 8 - header_len;
        if (payload != 4 * per_epoch * n_epochs)
            throw FormatError("payload holds " + std::to_string(payload) + " bytes, header declares " +
                              std::to_string(4 * per_epoch * n_epochs));

        std::vector<Epoch> epochs;
        epochs.reserve(n_epochs);
        std::size_t offset = 8 + header_len;
        for (std::size_t i = 0; i < n_epochs; ++i) {
            const auto& lj = labels[i];
            std::vector<BodyPart> parts;
            for (const auto& p : lj.at("parts")) parts.push_back(body_part_from_string(p.get<std::string>()));
            auto label = ClassLabel::make(label_kind_from_string(lj.at("kind").get<std::string>()), std::move(parts));
            auto provenance = provenance_from_string(lj.at("provenance").get<std::string>());

            std::vector<double> values(per_epoch);
            for (auto& v : values) {
                const float f = bytes::get_f32(in, offset);
                offset += 4;
                if (!std::isfinite(f)) throw FormatError("non-finite sample in epoch " + std::to_string(i));
                v = f;
            }
            epochs.emplace_back(SampleMatrix(n_channels, n_samples, std::move(values)), fs, std::move(label), names,
                                provenance);
        }
        return EpochSet(std::move(epochs));
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed container header: ") + ex.what());
    } catch (const FormatError&) {
        throw;
    } catch (const Error& ex) {
        throw FormatError(ex.what());
    }
}

void save_epochset(const EpochSet& set, const std::filesystem::path& path) {
    bytes::write_file(path, encode_epochset(set));
}

EpochSet load_epochset(const std::filesystem::path& path) { return decode_epochset(bytes::read_file(path)); }

}  // namespace mibci
