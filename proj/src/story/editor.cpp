#include "chstory/story/editor.hpp"

#include "chstory/story/codec.hpp"
#include "chstory/viz/codec.hpp"

#include <algorithm>
#include <cstdio>

namespace chstory::story {

namespace {

struct SlideRef {
    std::vector<Slide>* siblings;
    std::size_t index;
    std::size_t depth;
    Slide& slide() const { return (*siblings)[index]; }
};

std::optional<SlideRef> locate(std::vector<Slide>& list, const std::string& id, std::size_t depth = 0) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].id == id) return SlideRef{&list, i, depth};
        if (auto found = locate(list[i].children, id, depth + 1)) return found;
    }
    return std::nullopt;
}

SlideRef require(StoryDocument& doc, const std::string& id) {
    auto ref = locate(doc.slides, id);
    if (!ref) throw Error(ErrorCode::NotFound, "no slide '" + id + "' in story '" + doc.id + "'");
    return *ref;
}

void collect_ids(const std::vector<Slide>& list, std::set<std::string>& out) {
    for (const auto& s : list) {
        out.insert(s.id);
        collect_ids(s.children, out);
    }
}

std::set<std::string> slide_ids(const StoryDocument& doc) {
    std::set<std::string> out;
    collect_ids(doc.slides, out);
    return out;
}

Slide empty_slide(std::string id, LayoutId layout) {
    Slide s;
    s.id = std::move(id);
    s.layout = layout;
    return s;
}

void commit(StoryDocument& doc, StoryDocument&& work) {
    ++work.version;
    doc = std::move(work);
}

} // namespace

bool StoreDataSource::has_collection(const CollectionId& id) const {
    return store_.read([&](const StoreState& s) { return s.find_collection(id) != nullptr; });
}

CollectionScope StoreDataSource::scope(const CollectionId& id) const {
    return store_.read([&](const StoreState& s) {
        const Collection* c = s.find_collection(id);
        if (!c) throw Error(ErrorCode::NotFound, "no collection '" + id + "'");
        CollectionScope scope;
        std::set<EventId> events(c->event_ids.begin(), c->event_ids.end());
        for (const auto& member : c->entity_ids) {
            if (!s.find_entity(member)) continue;
            scope.entity_ids.insert(member);
            for (const auto& [ev_id, ev] : s.events_of(member)) events.insert(ev_id);
        }
        for (const auto& ev_id : events) {
            const Event* ev = s.find_event(ev_id);
            if (!ev) continue;
            scope.event_ids.insert(ev_id);
            for (const auto& ref : ev->referenced_entities()) scope.entity_ids.insert(ref);
            std::optional<GeoPoint> where;
            if (ev->place)
                if (const Entity* place = s.find_entity(*ev->place)) where = place->coordinates;
            scope.event_coordinates[ev_id] = where;
        }
        return scope;
    });
}

std::string IdGenerator::next(std::string_view prefix, const std::set<std::string>& taken) {
    for (;;) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%012llx", static_cast<unsigned long long>(rng_() & 0xffffffffffffULL));
        std::string id = std::string(prefix) + buf;
        if (!taken.contains(id)) return id;
    }
}

std::optional<IdPolicy> parse_id_policy(std::string_view text) noexcept {
    if (text == "keep") return IdPolicy::keep;
    if (text == "remap") return IdPolicy::remap;
    return std::nullopt;
}

StoryEditor::StoryEditor(const StoryDataSource* data, std::uint64_t seed) : data_(data), ids_(seed) {}

std::string StoryEditor::new_story_id() { return ids_.next("story-"); }

CollectionScope StoryEditor::scope_for(const StoryDocument& doc) const {
    if (!doc.collection_ref || !data_->has_collection(*doc.collection_ref)) return {};
    return data_->scope(*doc.collection_ref);
}

std::vector<Issue> StoryEditor::validate(const StoryDocument& doc) const {
    if (data_ && doc.collection_ref && data_->has_collection(*doc.collection_ref)) {
        CollectionScope scope = data_->scope(*doc.collection_ref);
        return validate_story(doc, &scope);
    }
    return validate_story(doc);
}

StoryDocument StoryEditor::create_story(std::string title, std::optional<CollectionId> collection_ref) {
    if (collection_ref && data_ && !data_->has_collection(*collection_ref))
        throw Error(ErrorCode::NotFound, "no collection '" + *collection_ref + "'", "/collection_ref");
    StoryDocument doc;
    doc.id = new_story_id();
    doc.title = std::move(title);
    doc.collection_ref = std::move(collection_ref);
    doc.version = 1;
    return doc;
}

Slide StoryEditor::add_slide(StoryDocument& doc, LayoutId layout, std::size_t index) {
    if (index > doc.slides.size())
        throw Error(ErrorCode::BadIndex,
                    "slide index " + std::to_string(index) + " outside [0, " + std::to_string(doc.slides.size()) + "]");
    StoryDocument work = doc;
    Slide s = empty_slide(ids_.next("slide-", slide_ids(work)), layout);
    work.slides.insert(work.slides.begin() + static_cast<std::ptrdiff_t>(index), s);
    commit(doc, std::move(work));
    return s;
}

Slide StoryEditor::add_slide(StoryDocument& doc, std::string_view layout, std::size_t index) {
    return add_slide(doc, layout_from_string(layout), index);
}

Slide StoryEditor::fresh_copy(const Slide& s, std::set<std::string>& taken) {
    Slide copy = s;
    copy.id = ids_.next("slide-", taken);
    taken.insert(copy.id);
    for (auto& child : copy.children) child = fresh_copy(child, taken);
    return copy;
}

Slide StoryEditor::duplicate_slide(StoryDocument& doc, const std::string& slide_id) {
    StoryDocument work = doc;
    SlideRef ref = require(work, slide_id);
    std::set<std::string> taken = slide_ids(work);
    Slide copy = fresh_copy(ref.slide(), taken);
    ref.siblings->insert(ref.siblings->begin() + static_cast<std::ptrdiff_t>(ref.index + 1), copy);
    commit(doc, std::move(work));
    return copy;
}

void StoryEditor::delete_slide(StoryDocument& doc, const std::string& slide_id) {
    StoryDocument work = doc;
    SlideRef ref = require(work, slide_id);
    ref.siblings->erase(ref.siblings->begin() + static_cast<std::ptrdiff_t>(ref.index));
    commit(doc, std::move(work));
}

void StoryEditor::move_slide(StoryDocument& doc, const std::string& slide_id, std::size_t new_index) {
    StoryDocument work = doc;
    SlideRef ref = require(work, slide_id);
    auto& list = *ref.siblings;
    if (new_index >= list.size())
        throw Error(ErrorCode::BadIndex, "new index " + std::to_string(new_index) + " outside [0, " +
                                             std::to_string(list.size() - 1) + "]");
    Slide moving = std::move(list[ref.index]);
    list.erase(list.begin() + static_cast<std::ptrdiff_t>(ref.index));
    list.insert(list.begin() + static_cast<std::ptrdiff_t>(new_index), std::move(moving));
    commit(doc, std::move(work));
}

Slide StoryEditor::add_nested_slide(StoryDocument& doc, const std::string& parent_id, LayoutId layout) {
    StoryDocument work = doc;
    SlideRef ref = require(work, parent_id);
    if (ref.depth + 1 >= kMaxNestingDepth)
        throw Error(ErrorCode::NestDepth, "slide '" + parent_id + "' is already nested and cannot have children");
    Slide child = empty_slide(ids_.next("slide-", slide_ids(work)), layout);
    ref.slide().children.push_back(child);
    commit(doc, std::move(work));
    return child;
}

void StoryEditor::set_layout(StoryDocument& doc, const std::string& slide_id, LayoutId layout) {
    StoryDocument work = doc;
    Slide& s = require(work, slide_id).slide();
    const auto& slots = layout_template(layout);
    std::vector<std::string> overflow;
    if (s.visualizations.size() > slots.viz_slots) overflow.push_back("visualization");
    for (std::size_t p = slots.pane_slots; p < s.panes.size(); ++p)
        if (!s.panes[p].chunks.empty()) overflow.push_back("pane " + std::to_string(p));
    if (!overflow.empty()) {
        std::string list;
        for (const auto& o : overflow) list += (list.empty() ? "" : ", ") + o;
        throw Error(ErrorCode::LayoutSlot,
                    "layout " + std::string(to_string(layout)) + " has no room for: " + list);
    }
    if (s.panes.size() > slots.pane_slots) s.panes.resize(slots.pane_slots);
    s.layout = layout;
    commit(doc, std::move(work));
}

void StoryEditor::add_content_chunk(StoryDocument& doc, const std::string& slide_id, std::size_t pane_index,
                                    ContentChunk chunk) {
    StoryDocument work = doc;
    Slide& s = require(work, slide_id).slide();
    const auto& slots = layout_template(s.layout);
    if (pane_index >= slots.pane_slots)
        throw Error(ErrorCode::BadIndex, "layout " + std::string(to_string(s.layout)) + " has " +
                                             std::to_string(slots.pane_slots) + " pane slot(s); index " +
                                             std::to_string(pane_index) + " requested");
    if (const auto* quiz = std::get_if<QuizChunk>(&chunk.body); quiz && quiz->correct.empty())
        throw Error(ErrorCode::QuizNoCorrect, "quiz has no correct answer");
    if (auto problem = chunk_shape_problem(chunk)) throw Error(ErrorCode::InvariantViolation, *problem);
    if (s.panes.size() <= pane_index) s.panes.resize(pane_index + 1);
    s.panes[pane_index].chunks.push_back(std::move(chunk));
    commit(doc, std::move(work));
}

void StoryEditor::attach_visualization(StoryDocument& doc, const std::string& slide_id, VisualizationPanel panel) {
    StoryDocument work = doc;
    Slide& s = require(work, slide_id).slide();
    if (layout_template(s.layout).viz_slots == 0)
        throw Error(ErrorCode::LayoutSlot, "layout " + std::string(to_string(s.layout)) + " has no visualization slot");
    if (auto foreign = foreign_settings(panel); !foreign.empty())
        throw Error(ErrorCode::InvariantViolation, "setting '" + foreign.front() + "' does not apply to a " +
                                                       std::string(to_string(panel.kind)),
                    "/settings/" + foreign.front());
    if (data_) {
        CollectionScope scope = scope_for(work);
        std::size_t k = 0;
        for (const auto& id : panel.event_ids) {
            if (!scope.event_ids.contains(id))
                throw Error(ErrorCode::DanglingEvent, "event '" + id + "' is not part of the story's collection",
                            "/event_ids/" + std::to_string(k));
            ++k;
        }
        k = 0;
        for (const auto& id : panel.entity_ids) {
            if (!scope.entity_ids.contains(id))
                throw Error(ErrorCode::DanglingEvent, "entity '" + id + "' is not part of the story's collection",
                            "/entity_ids/" + std::to_string(k));
            ++k;
        }
    }
    bool keep_focus = panel.kind == VizKind::map &&
                      std::includes(panel.event_ids.begin(), panel.event_ids.end(), s.focus_event_ids.begin(),
                                    s.focus_event_ids.end());
    if (!keep_focus) {
        s.focus_event_ids.clear();
        s.camera.reset();
    }
    s.visualizations.assign(1, std::move(panel));
    commit(doc, std::move(work));
}

std::optional<viz::CameraState> StoryEditor::set_focus_events(StoryDocument& doc, const std::string& slide_id,
                                                              const std::set<EventId>& event_ids) {
    StoryDocument work = doc;
    Slide& s = require(work, slide_id).slide();
    const VisualizationPanel* panel = s.viz();
    if (!panel || panel->kind != VizKind::map)
        throw Error(ErrorCode::NoVisualization, "slide '" + slide_id + "' has no map visualization");
    std::size_t k = 0;
    for (const auto& id : event_ids) {
        if (!panel->event_ids.contains(id))
            throw Error(ErrorCode::DanglingEvent, "event '" + id + "' is not shown by the slide's map",
                        "/event_ids/" + std::to_string(k));
        ++k;
    }
    std::optional<viz::CameraState> camera;
    if (!event_ids.empty()) {
        if (!data_) throw Error(ErrorCode::NoCoordinates, "no data source to locate focused events");
        CollectionScope scope = scope_for(work);
        std::vector<GeoPoint> points;
        for (const auto& id : event_ids) {
            auto it = scope.event_coordinates.find(id);
            if (it == scope.event_coordinates.end() || !it->second)
                throw Error(ErrorCode::NoCoordinates, "event '" + id + "' has no place with coordinates");
            points.push_back(*it->second);
        }
        camera = viz::fit_camera(points, viz::kDefaultViewport);
    }
    s.focus_event_ids = event_ids;
    s.camera = camera;
    commit(doc, std::move(work));
    return camera;
}

void StoryEditor::remap_ids(StoryDocument& doc) {
    doc.id = new_story_id();
    std::set<std::string> taken;
    for (auto& s : doc.slides) s = fresh_copy(s, taken);
}

StoryDocument StoryEditor::import_story(std::string_view bytes, IdPolicy policy) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("story is not valid JSON: ") + e.what(), "/");
    }
    if (j.is_object()) {
        auto it = j.find("schema_version");
        if (it != j.end() && it->is_string() && it->get<std::string>() != kSchemaVersion)
            throw Error(ErrorCode::SchemaVersion,
                        "unsupported schema version '" + it->get<std::string>() + "'; expected '" +
                            std::string(kSchemaVersion) + "'",
                        "/schema_version");
    }
    StoryDocument doc = story_from_json(j);
    auto violations = validate(doc);
    if (!violations.empty()) {
        Issue first = violations.front();
        throw Error(first.code, first.message, first.path, std::move(violations));
    }
    if (policy == IdPolicy::remap) remap_ids(doc);
    return doc;
}

namespace {

std::set<std::string> string_set(const json& arr, const std::string& path) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string())
            throw Error(ErrorCode::MalformedDocument, "expected a string id", child_path(path, i));
        out.insert(arr[i].get<std::string>());
    }
    return out;
}

std::size_t index_arg(ObjectReader& r, const char* key) {
    std::int64_t v = r.integer(key);
    if (v < 0) throw Error(ErrorCode::BadIndex, std::string(key) + " must not be negative", r.path_of(key));
    return static_cast<std::size_t>(v);
}

} // namespace

json apply_operation(StoryEditor& editor, StoryDocument& doc, const json& op) {
    ObjectReader r(op, "");
    std::string name = r.string("op");
    json result = json::object();
    if (name == "add_slide") {
        std::string layout = r.string("layout");
        std::size_t index = r.find("index") ? index_arg(r, "index") : doc.slides.size();
        r.finish();
        result["slide"] = to_json(editor.add_slide(doc, std::string_view(layout), index));
    } else if (name == "duplicate_slide") {
        std::string id = r.string("slide_id");
        r.finish();
        result["slide"] = to_json(editor.duplicate_slide(doc, id));
    } else if (name == "delete_slide") {
        std::string id = r.string("slide_id");
        r.finish();
        editor.delete_slide(doc, id);
    } else if (name == "move_slide") {
        std::string id = r.string("slide_id");
        std::size_t index = index_arg(r, "new_index");
        r.finish();
        editor.move_slide(doc, id, index);
    } else if (name == "add_nested_slide") {
        std::string parent = r.string("parent_id");
        LayoutId layout = layout_from_string(r.string("layout"));
        r.finish();
        result["slide"] = to_json(editor.add_nested_slide(doc, parent, layout));
    } else if (name == "set_layout") {
        std::string id = r.string("slide_id");
        LayoutId layout = layout_from_string(r.string("layout"));
        r.finish();
        editor.set_layout(doc, id, layout);
    } else if (name == "add_content_chunk") {
        std::string id = r.string("slide_id");
        std::size_t pane = index_arg(r, "pane_index");
        ContentChunk chunk = chunk_from_json(r.object("chunk"), "/chunk");
        r.finish();
        editor.add_content_chunk(doc, id, pane, std::move(chunk));
    } else if (name == "attach_visualization") {
        std::string id = r.string("slide_id");
        VisualizationPanel panel = panel_from_json(r.object("panel"), "/panel");
        r.finish();
        editor.attach_visualization(doc, id, std::move(panel));
    } else if (name == "set_focus_events") {
        std::string id = r.string("slide_id");
        auto ids = string_set(r.array("event_ids"), "/event_ids");
        r.finish();
        auto camera = editor.set_focus_events(doc, id, ids);
        result["camera"] = camera ? viz::to_json(*camera) : json(nullptr);
    } else {
        throw Error(ErrorCode::MalformedDocument, "unknown operation '" + name + "'", "/op");
    }
    return result;
}

} // namespace chstory::story
