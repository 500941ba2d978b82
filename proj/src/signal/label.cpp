#include "mibci/label.hpp"

#include <algorithm>

#include "mibci/error.hpp"

namespace mibci {

std::string_view to_string(BodyPart part) {
    switch (part) {
        case BodyPart::LH: return "LH";
        case BodyPart::RH: return "RH";
        case BodyPart::F: return "F";
        case BodyPart::T: return "T";
    }
    return "?";
}

std::string_view to_string(LabelKind kind) {
    switch (kind) {
        case LabelKind::Simple: return "simple";
        case LabelKind::Combined: return "combined";
        case LabelKind::Other: return "other";
        case LabelKind::Rest: return "rest";
    }
    return "?";
}

BodyPart body_part_from_string(std::string_view text) {
    if (text == "LH") return BodyPart::LH;
    if (text == "RH") return BodyPart::RH;
    if (text == "F") return BodyPart::F;
    if (text == "T") return BodyPart::T;
    throw InvalidArgument("unknown body part '" + std::string(text) + "'");
}

LabelKind label_kind_from_string(std::string_view text) {
    if (text == "simple") return LabelKind::Simple;
    if (text == "combined") return LabelKind::Combined;
    if (text == "other") return LabelKind::Other;
    if (text == "rest") return LabelKind::Rest;
    throw InvalidArgument("unknown label kind '" + std::string(text) + "'");
}

ClassLabel ClassLabel::make(LabelKind kind, std::vector<BodyPart> parts) {
    std::sort(parts.begin(), parts.end());
    if (std::adjacent_find(parts.begin(), parts.end()) != parts.end())
        throw InvalidArgument("class label has repeated body parts");
    switch (kind) {
        case LabelKind::Simple:
            if (parts.size() != 1) throw InvalidArgument("simple label needs exactly one body part");
            break;
        case LabelKind::Combined:
            if (parts.size() != 2) throw InvalidArgument("combined label needs exactly two distinct body parts");
            break;
        case LabelKind::Rest:
            if (!parts.empty()) throw InvalidArgument("rest label carries no body parts");
            break;
        case LabelKind::Other:
            break;
    }
    return ClassLabel(kind, std::move(parts));
}

ClassLabel ClassLabel::simple(BodyPart part) { return make(LabelKind::Simple, {part}); }
ClassLabel ClassLabel::combined(BodyPart a, BodyPart b) { return make(LabelKind::Combined, {a, b}); }
ClassLabel ClassLabel::rest() { return make(LabelKind::Rest, {}); }
ClassLabel ClassLabel::other(std::vector<BodyPart> parts) { return make(LabelKind::Other, std::move(parts)); }

ClassLabel ClassLabel::parse(std::string_view text) {
    if (text == "R" || text == "rest") return rest();
    if (text == "O" || text == "other") return other();
    if (text == "BH") return combined(BodyPart::LH, BodyPart::RH);
    if (text == "LHF") return combined(BodyPart::LH, BodyPart::F);
    if (text == "RHF") return combined(BodyPart::RH, BodyPart::F);
    if (text == "HsF") return other({BodyPart::LH, BodyPart::RH, BodyPart::F});

    auto split = [](std::string_view s, char sep) {
        std::vector<BodyPart> parts;
        std::size_t start = 0;
        while (start <= s.size()) {
            auto end = s.find(sep, start);
            if (end == std::string_view::npos) end = s.size();
            parts.push_back(body_part_from_string(s.substr(start, end - start)));
            start = end + 1;
        }
        return parts;
    };
    if (text.find('+') != std::string_view::npos) return other(split(text, '+'));
    if (text.find('-') != std::string_view::npos) {
        auto parts = split(text, '-');
        if (parts.size() != 2) throw InvalidArgument("combined label '" + std::string(text) + "' needs two parts");
        return make(LabelKind::Combined, std::move(parts));
    }
    return simple(body_part_from_string(text));
}

std::string ClassLabel::name() const {
    auto join = [this](char sep) {
        std::string out;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) out += sep;
            out += to_string(parts_[i]);
        }
        return out;
    };
    switch (kind_) {
        case LabelKind::Simple: return join('-');
        case LabelKind::Combined: return join('-');
        case LabelKind::Rest: return "R";
        case LabelKind::Other: return parts_.empty() ? "O" : join('+');
    }
    return "?";
}

std::strong_ordering operator<=>(const ClassLabel& a, const ClassLabel& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.parts_ <=> b.parts_;
}

}  // namespace mibci
