#include "chstory/viz/color.hpp"

#include <algorithm>
#include <numeric>

namespace chstory::viz {

double temporal_color_position(const CalendarDate& t, const TimeSpan& window) {
    const DayNumber start = window.start.earliest_day();
    const DayNumber end = window.end ? window.end->earliest_day() : start;
    if (end < start) throw Error(ErrorCode::InvalidArgument, "temporal window ends before it starts");
    if (end == start) return 0.5;
    const double pos = static_cast<double>(t.earliest_day() - start) / static_cast<double>(end - start);
    return std::clamp(pos, 0.0, 1.0);
}

std::string_view to_string(ColorMode m) noexcept {
    switch (m) {
    case ColorMode::entity_identity: return "entity_identity";
    case ColorMode::event_kind: return "event_kind";
    case ColorMode::temporal: return "temporal";
    }
    return "entity_identity";
}

std::optional<ColorMode> parse_color_mode(std::string_view s) noexcept {
    for (ColorMode m : {ColorMode::entity_identity, ColorMode::event_kind, ColorMode::temporal})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

ColorAssignment assign_colors(const std::vector<ColorItem>& items, ColorMode mode, std::uint32_t palette_size) {
    std::vector<const ColorItem*> sorted;
    for (const auto& it : items) sorted.push_back(&it);
    std::sort(sorted.begin(), sorted.end(), [](const ColorItem* a, const ColorItem* b) { return a->id < b->id; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i]->id == sorted[i - 1]->id)
            throw Error(ErrorCode::InvalidArgument, "duplicate item id '" + sorted[i]->id + "'");

    ColorAssignment out;
    out.mode = mode;

    if (mode == ColorMode::temporal) {
        std::optional<CalendarDate> lo, hi;
        for (const ColorItem* it : sorted) {
            if (!it->date) continue;
            if (!lo || it->date->earliest_day() < lo->earliest_day()) lo = it->date;
            if (!hi || it->date->earliest_day() > hi->earliest_day()) hi = it->date;
        }
        for (const ColorItem* it : sorted) {
            ColorToken tok;
            if (!it->date) {
                tok.type = ColorToken::Type::undated;
                out.undated.push_back(it->id);
            } else {
                tok.type = ColorToken::Type::scalar;
                tok.position = temporal_color_position(*it->date, TimeSpan{*lo, *hi});
            }
            out.mapping.emplace(it->id, tok);
        }
        return out;
    }

    if (palette_size < 1) throw Error(ErrorCode::InvalidArgument, "palette size must be at least 1");
    std::map<std::string, std::uint32_t> ordinal;
    for (const ColorItem* it : sorted) {
        const std::string& category = mode == ColorMode::entity_identity ? it->entity : it->kind;
        auto [pos, _] = ordinal.emplace(category, static_cast<std::uint32_t>(ordinal.size()));
        ColorToken tok;
        tok.type = ColorToken::Type::categorical;
        tok.index = pos->second % palette_size;
        out.mapping.emplace(it->id, tok);
    }
    return out;
}

} // namespace chstory::viz
