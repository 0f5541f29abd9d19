#include "chstory/story/model.hpp"

#include <array>

namespace chstory::story {

namespace {

const std::array<LayoutTemplate, 6>& registry() {
    static const std::array<LayoutTemplate, 6> layouts = {{
        {LayoutId::VIZ_ONLY, 1, 0, {{"viz", 0, 0, 12, 12}}},
        {LayoutId::CONTENT_ONLY, 0, 1, {{"pane0", 0, 0, 12, 12}}},
        {LayoutId::SPLIT_VIZ_LEFT, 1, 1, {{"viz", 0, 0, 8, 12}, {"pane0", 8, 0, 4, 12}}},
        {LayoutId::SPLIT_VIZ_RIGHT, 1, 1, {{"pane0", 0, 0, 4, 12}, {"viz", 4, 0, 8, 12}}},
        {LayoutId::VIZ_TOP_CONTENT_BOTTOM, 1, 1, {{"viz", 0, 0, 12, 8}, {"pane0", 0, 8, 12, 4}}},
        {LayoutId::VIZ_CENTER_TWO_PANES, 1, 2, {{"pane0", 0, 0, 3, 12}, {"viz", 3, 0, 6, 12}, {"pane1", 9, 0, 3, 12}}},
    }};
    return layouts;
}

const std::set<std::string, std::less<>> kMapOnly = {"basemap", "max_zoom"};
const std::set<std::string, std::less<>> kTimelineOnly = {"margin_px", "lane_height_px"};

std::size_t count(const std::vector<Slide>& slides) {
    std::size_t n = slides.size();
    for (const auto& s : slides) n += count(s.children);
    return n;
}

} // namespace

std::span<const LayoutTemplate> layout_registry() { return registry(); }

const LayoutTemplate& layout_template(LayoutId id) {
    for (const auto& t : registry())
        if (t.id == id) return t;
    throw Error(ErrorCode::UnknownLayout, "unregistered layout");
}

std::string_view to_string(LayoutId id) noexcept {
    switch (id) {
    case LayoutId::VIZ_ONLY: return "VIZ_ONLY";
    case LayoutId::CONTENT_ONLY: return "CONTENT_ONLY";
    case LayoutId::SPLIT_VIZ_LEFT: return "SPLIT_VIZ_LEFT";
    case LayoutId::SPLIT_VIZ_RIGHT: return "SPLIT_VIZ_RIGHT";
    case LayoutId::VIZ_TOP_CONTENT_BOTTOM: return "VIZ_TOP_CONTENT_BOTTOM";
    case LayoutId::VIZ_CENTER_TWO_PANES: return "VIZ_CENTER_TWO_PANES";
    }
    return "VIZ_ONLY";
}

std::optional<LayoutId> parse_layout(std::string_view text) noexcept {
    for (const auto& t : registry())
        if (to_string(t.id) == text) return t.id;
    return std::nullopt;
}

LayoutId layout_from_string(std::string_view text) {
    auto id = parse_layout(text);
    if (!id) throw Error(ErrorCode::UnknownLayout, "unknown layout '" + std::string(text) + "'");
    return *id;
}

std::string_view to_string(VizKind k) noexcept { return k == VizKind::map ? "map" : "timeline"; }
std::string_view to_string(Glyph g) noexcept { return g == Glyph::donut ? "donut" : "dot"; }

std::vector<std::string> foreign_settings(const VisualizationPanel& panel) {
    const auto& foreign = panel.kind == VizKind::map ? kTimelineOnly : kMapOnly;
    std::vector<std::string> out;
    for (const auto& [key, _] : panel.settings)
        if (foreign.contains(key)) out.push_back(key);
    return out;
}

std::string_view chunk_kind(const ContentChunk& c) noexcept {
    static constexpr std::string_view names[] = {"text", "image", "video", "quiz", "html_container"};
    return names[c.body.index()];
}

std::optional<std::string> chunk_shape_problem(const ContentChunk& c) {
    auto media_problem = [](const MediaResource& m, MediaKind expected) -> std::optional<std::string> {
        if (m.media_kind != expected)
            return "media kind '" + std::string(to_string(m.media_kind)) + "' does not match the chunk";
        if (!is_absolute_uri(m.url)) return "media url is not an absolute URI: '" + m.url + "'";
        return std::nullopt;
    };
    if (const auto* img = std::get_if<ImageChunk>(&c.body)) return media_problem(img->media, MediaKind::image);
    if (const auto* vid = std::get_if<VideoChunk>(&c.body)) return media_problem(vid->media, MediaKind::video);
    if (const auto* quiz = std::get_if<QuizChunk>(&c.body)) {
        if (quiz->options.size() < 2) return "a quiz needs at least two options";
        for (std::size_t idx : quiz->correct)
            if (idx >= quiz->options.size()) return "correct answer index " + std::to_string(idx) + " out of range";
    }
    return std::nullopt;
}

std::size_t count_slides(const StoryDocument& doc) { return count(doc.slides); }
std::size_t count_slides(const std::vector<Slide>& slides) { return count(slides); }

} // namespace chstory::story
