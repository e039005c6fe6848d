#pragma once

#include <optional>
#include <string_view>

namespace dfb {

/// Number of style-transfer inputs behind an image: one pass (source + target)
/// or two passes (source + two targets).
enum class Label { Deepfake2 = 0, Deepfake3 = 1 };

inline constexpr std::string_view to_string(Label label) noexcept {
    return label == Label::Deepfake2 ? "Deepfake-2" : "Deepfake-3";
}

inline std::optional<Label> parse_label(std::string_view text) noexcept {
    if (text == "Deepfake-2") return Label::Deepfake2;
    if (text == "Deepfake-3") return Label::Deepfake3;
    return std::nullopt;
}

} // namespace dfb
