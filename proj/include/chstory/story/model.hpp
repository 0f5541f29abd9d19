#pragma once

#include "chstory/store/types.hpp"
#include "chstory/viz/color.hpp"
#include "chstory/viz/mercator.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chstory::story {

inline constexpr std::string_view kSchemaVersion = "intavia-story/1";
inline constexpr std::size_t kMaxPanes = 2;
inline constexpr std::size_t kMaxNestingDepth = 2; // top level + one child level

enum class LayoutId {
    VIZ_ONLY,
    CONTENT_ONLY,
    SPLIT_VIZ_LEFT,
    SPLIT_VIZ_RIGHT,
    VIZ_TOP_CONTENT_BOTTOM,
    VIZ_CENTER_TWO_PANES,
};

/// One named area on a 12 x 12 slide grid ("viz", "pane0", "pane1").
struct GridArea {
    std::string slot;
    int column = 0;
    int row = 0;
    int column_span = 12;
    int row_span = 12;
};

struct LayoutTemplate {
    LayoutId id;
    std::size_t viz_slots;
    std::size_t pane_slots;
    std::vector<GridArea> areas;
};

std::span<const LayoutTemplate> layout_registry();
const LayoutTemplate& layout_template(LayoutId id);
std::string_view to_string(LayoutId id) noexcept;
std::optional<LayoutId> parse_layout(std::string_view text) noexcept;
/// Throws Error{UnknownLayout}.
LayoutId layout_from_string(std::string_view text);

/// Free-form setting value. Integers and reals stay distinct so that
/// re-exporting never changes a number's rendering.
using Scalar = std::variant<bool, std::int64_t, double, std::string>;
using Settings = std::map<std::string, Scalar>;

enum class VizKind { map, timeline };
enum class Glyph { donut, dot };

std::string_view to_string(VizKind k) noexcept;
std::string_view to_string(Glyph g) noexcept;

struct VisualizationPanel {
    VizKind kind = VizKind::map;
    std::set<EntityId> entity_ids;
    std::set<EventId> event_ids;
    viz::ColorMode coloring = viz::ColorMode::entity_identity;
    bool clustered = false;
    Glyph glyph = Glyph::donut;
    /// Known keys: "cluster_radius_px" (both kinds), "basemap" and "max_zoom"
    /// (maps only), "margin_px" and "lane_height_px" (timelines only).
    Settings settings;
    bool operator==(const VisualizationPanel&) const = default;
};

/// Keys that belong to the other visualization kind. Empty means valid.
std::vector<std::string> foreign_settings(const VisualizationPanel& panel);

struct TextChunk {
    std::string text;
    bool operator==(const TextChunk&) const = default;
};
struct ImageChunk {
    MediaResource media;
    bool operator==(const ImageChunk&) const = default;
};
struct VideoChunk {
    MediaResource media;
    bool operator==(const VideoChunk&) const = default;
};
struct QuizChunk {
    std::string question;
    std::vector<std::string> options;
    std::set<std::size_t> correct; // option indices
    bool operator==(const QuizChunk&) const = default;
};
/// Raw markup, stored verbatim. Always rendered sandboxed.
struct HtmlChunk {
    std::string html;
    bool operator==(const HtmlChunk&) const = default;
};

struct ContentChunk {
    std::variant<TextChunk, ImageChunk, VideoChunk, QuizChunk, HtmlChunk> body;
    Settings settings; // e.g. "title", "alignment"
    bool operator==(const ContentChunk&) const = default;
};

std::string_view chunk_kind(const ContentChunk& c) noexcept;

/// Shape problems that make a chunk unrepresentable (as opposed to story
/// violations): quiz with fewer than two options or out-of-range answers,
/// media of the wrong kind or with a relative URL.
std::optional<std::string> chunk_shape_problem(const ContentChunk& c);

struct ContentPane {
    std::vector<ContentChunk> chunks;
    bool operator==(const ContentPane&) const = default;
};

/// A slide as stored. The containers are deliberately wider than the rules
/// (several visualizations, any number of panes, any depth) so that invalid
/// documents can be represented and reported by validate_story.
struct Slide {
    std::string id;
    LayoutId layout = LayoutId::VIZ_ONLY;
    std::vector<VisualizationPanel> visualizations;
    std::vector<ContentPane> panes;
    std::vector<Slide> children;
    std::set<EventId> focus_event_ids;
    std::optional<viz::CameraState> camera;
    bool operator==(const Slide&) const = default;

    const VisualizationPanel* viz() const { return visualizations.empty() ? nullptr : &visualizations.front(); }
};

struct StoryDocument {
    std::string id;
    std::string title;
    std::string schema_version{kSchemaVersion};
    std::optional<CollectionId> collection_ref;
    std::vector<Slide> slides;
    std::int64_t version = 1;
    bool operator==(const StoryDocument&) const = default;
};

/// Number of slides in the tree, children included.
std::size_t count_slides(const StoryDocument& doc);
std::size_t count_slides(const std::vector<Slide>& slides);

} // namespace chstory::story
