#include "chstory/story/validate.hpp"

#include "chstory/text.hpp"

#include <cmath>
#include <unordered_set>

namespace chstory::story {

namespace {

class Validator {
public:
    Validator(const CollectionScope* scope, std::vector<Issue>& out) : scope_(scope), out_(out) {}

    void slides(const std::vector<Slide>& list, const std::string& base, std::size_t depth) {
        for (std::size_t i = 0; i < list.size(); ++i)
            slide(list[i], base + "/" + std::to_string(i), depth);
    }

private:
    void emit(std::string path, ErrorCode code, std::string message) {
        out_.push_back({std::move(path), code, std::move(message)});
    }

    void slide(const Slide& s, const std::string& path, std::size_t depth) {
        const auto& slots = layout_template(s.layout);
        std::string layout(to_string(s.layout));
        if (s.visualizations.size() > 1)
            emit(path, ErrorCode::VizCount,
                 "slide has " + std::to_string(s.visualizations.size()) + " visualizations; at most 1 allowed");
        if (s.panes.size() > kMaxPanes)
            emit(path, ErrorCode::PaneCount,
                 "slide has " + std::to_string(s.panes.size()) + " content panes; at most 2 allowed");
        if (s.visualizations.size() <= 1 && s.panes.size() <= kMaxPanes) {
            if (s.visualizations.size() > slots.viz_slots)
                emit(path, ErrorCode::LayoutSlot, "layout " + layout + " has no visualization slot");
            else if (s.panes.size() > slots.pane_slots)
                emit(path, ErrorCode::LayoutSlot,
                     "layout " + layout + " has " + std::to_string(slots.pane_slots) + " pane slot(s) but the slide uses " +
                         std::to_string(s.panes.size()));
        }
        if (depth >= kMaxNestingDepth)
            emit(path, ErrorCode::NestDepth, "slide is nested " + std::to_string(depth) + " levels deep");
        if (!seen_.insert(s.id).second)
            emit(path + "/id", ErrorCode::DupSlideId, "slide id '" + s.id + "' is already used");

        for (std::size_t v = 0; v < s.visualizations.size(); ++v) references(s.visualizations[v], path + "/visualizations/" + std::to_string(v));

        const VisualizationPanel* panel = s.viz();
        std::size_t k = 0;
        for (const auto& id : s.focus_event_ids) {
            if (!panel || !panel->event_ids.contains(id))
                emit(path + "/focus_event_ids/" + std::to_string(k), ErrorCode::DanglingEvent,
                     "focused event '" + id + "' is not shown by the slide's visualization");
            ++k;
        }

        for (std::size_t p = 0; p < s.panes.size(); ++p) {
            const auto& chunks = s.panes[p].chunks;
            for (std::size_t c = 0; c < chunks.size(); ++c) {
                const auto* quiz = std::get_if<QuizChunk>(&chunks[c].body);
                if (quiz && quiz->correct.empty())
                    emit(path + "/panes/" + std::to_string(p) + "/chunks/" + std::to_string(c), ErrorCode::QuizNoCorrect,
                         "quiz has no correct answer");
            }
        }

        slides(s.children, path + "/children", depth + 1);
    }

    void references(const VisualizationPanel& panel, const std::string& path) {
        if (!scope_) return;
        std::size_t k = 0;
        for (const auto& id : panel.entity_ids) {
            if (!scope_->entity_ids.contains(id))
                emit(path + "/entity_ids/" + std::to_string(k), ErrorCode::DanglingEvent,
                     "entity '" + id + "' is not part of the story's collection");
            ++k;
        }
        k = 0;
        for (const auto& id : panel.event_ids) {
            if (!scope_->event_ids.contains(id))
                emit(path + "/event_ids/" + std::to_string(k), ErrorCode::DanglingEvent,
                     "event '" + id + "' is not part of the story's collection");
            ++k;
        }
    }

    const CollectionScope* scope_;
    std::vector<Issue>& out_;
    std::unordered_set<std::string> seen_;
};

void finite_settings(const Settings& settings, const std::string& path, std::vector<Issue>& out) {
    for (const auto& [key, value] : settings)
        if (const auto* d = std::get_if<double>(&value); d && !std::isfinite(*d))
            out.push_back({path + "/" + key, ErrorCode::InvariantViolation, "setting '" + key + "' is not a finite number"});
}

void shapes(const std::vector<Slide>& list, const std::string& base, std::vector<Issue>& out) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        const Slide& s = list[i];
        std::string path = base + "/" + std::to_string(i);
        if (s.id.empty()) out.push_back({path + "/id", ErrorCode::InvariantViolation, "slide id is empty"});
        for (std::size_t v = 0; v < s.visualizations.size(); ++v) {
            finite_settings(s.visualizations[v].settings, path + "/visualizations/" + std::to_string(v) + "/settings", out);
            for (const auto& key : foreign_settings(s.visualizations[v]))
                out.push_back({path + "/visualizations/" + std::to_string(v) + "/settings/" + key,
                               ErrorCode::InvariantViolation,
                               "setting '" + key + "' does not apply to a " + std::string(to_string(s.visualizations[v].kind))});
        }
        for (std::size_t p = 0; p < s.panes.size(); ++p)
            for (std::size_t c = 0; c < s.panes[p].chunks.size(); ++c) {
                std::string chunk_path = path + "/panes/" + std::to_string(p) + "/chunks/" + std::to_string(c);
                if (auto problem = chunk_shape_problem(s.panes[p].chunks[c]))
                    out.push_back({chunk_path, ErrorCode::InvariantViolation, *problem});
                finite_settings(s.panes[p].chunks[c].settings, chunk_path + "/settings", out);
            }
        if (s.camera && !(std::isfinite(s.camera->center.lon) && std::isfinite(s.camera->center.lat)))
            out.push_back({path + "/camera/center", ErrorCode::InvariantViolation, "camera center is not finite"});
        if (s.camera && !(s.camera->zoom >= 0 && s.camera->zoom <= viz::kMaxZoom))
            out.push_back({path + "/camera/zoom", ErrorCode::InvariantViolation, "camera zoom outside [0, 16]"});
        shapes(s.children, path + "/children", out);
    }
}

} // namespace

std::vector<Issue> validate_story(const StoryDocument& doc, const CollectionScope* scope) {
    std::vector<Issue> out;
    if (doc.schema_version != kSchemaVersion)
        out.push_back({"/schema_version", ErrorCode::SchemaVersion,
                       "unsupported schema version '" + doc.schema_version + "'; expected '" + std::string(kSchemaVersion) + "'"});
    Validator(scope, out).slides(doc.slides, "/slides", 0);
    return out;
}

std::vector<Warning> story_warnings(const StoryDocument& doc) {
    std::vector<Warning> out;
    if (text::is_blank(doc.title)) out.push_back({"/title", "W_EMPTY_TITLE", "story has no title"});
    return out;
}

std::vector<Issue> shape_issues(const StoryDocument& doc) {
    std::vector<Issue> out;
    if (doc.id.empty()) out.push_back({"/id", ErrorCode::InvariantViolation, "story id is empty"});
    shapes(doc.slides, "/slides", out);
    return out;
}

} // namespace chstory::story
