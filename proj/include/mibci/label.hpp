#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mibci {

// Canonical body-part order: LH < RH < F < T.
enum class BodyPart : std::uint8_t { LH = 0, RH = 1, F = 2, T = 3 };

enum class LabelKind : std::uint8_t { Simple = 0, Combined = 1, Other = 2, Rest = 3 };

std::string_view to_string(BodyPart part);
std::string_view to_string(LabelKind kind);
BodyPart body_part_from_string(std::string_view text);
LabelKind label_kind_from_string(std::string_view text);

/// Class label of an epoch. Parts are kept sorted and unique, so equality is
/// insensitive to the order in which parts were given (LH-RH == RH-LH).
///
///   Simple   exactly one part          "LH"
///   Combined exactly two parts         "LH-RH"
///   Rest     no parts                  "R"
///   Other    any parts, e.g. the OVA   "O", or multi-part "LH+RH+F" (HsF)
///            "others" class
class ClassLabel {
public:
    ClassLabel() = default;

    static ClassLabel simple(BodyPart part);
    static ClassLabel combined(BodyPart a, BodyPart b);
    static ClassLabel rest();
    static ClassLabel other(std::vector<BodyPart> parts = {});
    static ClassLabel make(LabelKind kind, std::vector<BodyPart> parts);

    /// Parses the textual form produced by name(); also accepts "HsF" and "BH".
    static ClassLabel parse(std::string_view text);

    LabelKind kind() const noexcept { return kind_; }
    const std::vector<BodyPart>& parts() const noexcept { return parts_; }
    std::string name() const;

    friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
    friend std::strong_ordering operator<=>(const ClassLabel& a, const ClassLabel& b);

private:
    ClassLabel(LabelKind kind, std::vector<BodyPart> parts) : kind_(kind), parts_(std::move(parts)) {}

    LabelKind kind_ = LabelKind::Rest;
    std::vector<BodyPart> parts_;
};

}  // namespace mibci
