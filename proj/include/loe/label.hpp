#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace loe {

/// One of the seven evidence bands, 1a (strongest) through 4 (weakest).
/// The enumerator value is the ordinal used by the regression adapter and
/// by RMSE.
enum class Band : int { L1a = 0, L1b = 1, L2a = 2, L2b = 3, L3a = 4, L3b = 5, L4 = 6 };

inline constexpr std::size_t kNumBands = 7;

inline constexpr std::array<Band, kNumBands> kAllBands = {
    Band::L1a, Band::L1b, Band::L2a, Band::L2b, Band::L3a, Band::L3b, Band::L4};

/// Level-of-evidence label: a band plus its integer ordinal in [0, 6].
class LoELabel {
public:
    constexpr LoELabel() = default;
    constexpr explicit LoELabel(Band band) : band_(band) {}

    /// Throws InvalidArgument when the ordinal is outside [0, 6].
    static LoELabel from_ordinal(int ordinal);

    constexpr Band band() const { return band_; }
    constexpr int ordinal() const { return static_cast<int>(band_); }
    constexpr std::size_t index() const { return static_cast<std::size_t>(band_); }

    std::string_view name() const;

    friend constexpr bool operator==(LoELabel, LoELabel) = default;
    friend constexpr auto operator<=>(LoELabel a, LoELabel b) { return a.ordinal() <=> b.ordinal(); }

private:
    Band band_ = Band::L1a;
};

std::string_view band_name(Band band);

/// Case-insensitive parse of "1a", "1b", "2a", "2b", "3a", "3b", "4".
/// Throws DataError naming the offending text on anything else.
LoELabel parse_label(std::string_view text);

/// Non-throwing variant of parse_label.
std::optional<LoELabel> try_parse_label(std::string_view text);

/// Per-band values indexed by ordinal.
using BandArray = std::array<double, kNumBands>;

/// argmax over a per-band array; ties resolve toward the lower ordinal.
LoELabel argmax_label(const BandArray& values);

}  // namespace loe
