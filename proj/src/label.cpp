#include "loe/label.hpp"

#include <cctype>

#include "loe/error.hpp"

namespace loe {
namespace {

constexpr std::array<std::string_view, kNumBands> kNames = {"1a", "1b", "2a", "2b", "3a", "3b", "4"};

}  // namespace

LoELabel LoELabel::from_ordinal(int ordinal) {
    if (ordinal < 0 || ordinal >= static_cast<int>(kNumBands)) {
        throw InvalidArgument("LoE ordinal out of range: " + std::to_string(ordinal));
    }
    return LoELabel(static_cast<Band>(ordinal));
}

std::string_view LoELabel::name() const { return kNames[index()]; }

std::string_view band_name(Band band) { return kNames[static_cast<std::size_t>(band)]; }

std::optional<LoELabel> try_parse_label(std::string_view text) {
    std::string lowered;
    lowered.reserve(text.size());
    for (char c : text) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (std::size_t i = 0; i < kNumBands; ++i) {
        if (lowered == kNames[i]) return LoELabel(static_cast<Band>(i));
    }
    return std::nullopt;
}

LoELabel parse_label(std::string_view text) {
    if (auto label = try_parse_label(text)) return *label;
    throw DataError("invalid level-of-evidence label '" + std::string(text) + "'");
}

LoELabel argmax_label(const BandArray& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kNumBands; ++i) {
        if (values[i] > values[best]) best = i;
    }
    return LoELabel(static_cast<Band>(best));
}

}  // namespace loe
