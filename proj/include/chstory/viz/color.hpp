#pragma once

#include "chstory/calendar.hpp"
#include "chstory/store/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chstory::viz {

/// Normalized position of `t` inside `window` for a temporal color ramp.
///
/// Every date is anchored on its first contained day, so a year-precise
/// window 1471..1528 runs from 1471-01-01 to 1528-01-01. The result is
/// clamped to [0, 1]; a zero-length window (or one without an end) maps
/// everything to 0.5. Throws Error{InvalidArgument} if the window is reversed.
double temporal_color_position(const CalendarDate& t, const TimeSpan& window);

enum class ColorMode { entity_identity, event_kind, temporal };

std::string_view to_string(ColorMode m) noexcept;
std::optional<ColorMode> parse_color_mode(std::string_view s) noexcept;

struct ColorItem {
    std::string id;
    EntityId entity;
    TermId kind;
    std::optional<CalendarDate> date;
};

struct ColorToken {
    enum class Type { categorical, scalar, undated };
    Type type = Type::categorical;
    std::uint32_t index = 0; // categorical
    double position = 0;     // scalar, in [0, 1]
    bool operator==(const ColorToken&) const = default;
};

struct ColorAssignment {
    ColorMode mode = ColorMode::entity_identity;
    std::map<std::string, ColorToken> mapping;
    /// Items without a date in temporal mode; they carry the undated sentinel.
    std::vector<std::string> undated;
};

/// Categorical modes number categories by first appearance in id order,
/// modulo `palette_size`. Temporal mode places each dated item on the
/// window spanned by the earliest and latest item dates.
ColorAssignment assign_colors(const std::vector<ColorItem>& items, ColorMode mode, std::uint32_t palette_size);

} // namespace chstory::viz
