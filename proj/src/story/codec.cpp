#include "chstory/story/codec.hpp"

#include "chstory/story/validate.hpp"
#include "chstory/store/codec.hpp"
#include "chstory/viz/codec.hpp"

namespace chstory::story {

namespace {

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::MalformedDocument, what, path);
}

json id_array(const std::set<std::string>& ids) {
    json arr = json::array();
    for (const auto& id : ids) arr.push_back(id);
    return arr;
}

std::set<std::string> id_set(const json& arr, const std::string& path) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) malformed(child_path(path, i), "expected a string id");
        out.insert(arr[i].get<std::string>());
    }
    return out;
}

} // namespace

json to_json(const Scalar& s) {
    return std::visit([](const auto& v) { return json(v); }, s);
}

json to_json(const Settings& s) {
    json j = json::object();
    for (const auto& [k, v] : s) j[k] = to_json(v);
    return j;
}

json to_json(const VisualizationPanel& p) {
    return {{"kind", std::string(to_string(p.kind))},
            {"entity_ids", id_array(p.entity_ids)},
            {"event_ids", id_array(p.event_ids)},
            {"coloring", std::string(viz::to_string(p.coloring))},
            {"clustered", p.clustered},
            {"glyph", std::string(to_string(p.glyph))},
            {"settings", to_json(p.settings)}};
}

json to_json(const ContentChunk& c) {
    json j = {{"kind", std::string(chunk_kind(c))}, {"settings", to_json(c.settings)}};
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, TextChunk>) {
                j["text"] = body.text;
            } else if constexpr (std::is_same_v<T, ImageChunk> || std::is_same_v<T, VideoChunk>) {
                j["media"] = chstory::to_json(body.media);
            } else if constexpr (std::is_same_v<T, QuizChunk>) {
                j["question"] = body.question;
                j["options"] = body.options;
                j["correct"] = json::array();
                for (std::size_t idx : body.correct) j["correct"].push_back(idx);
            } else {
                j["html"] = body.html;
                j["sandbox"] = true;
            }
        },
        c.body);
    return j;
}

json to_json(const Slide& s) {
    json vizzes = json::array();
    for (const auto& v : s.visualizations) vizzes.push_back(to_json(v));
    json panes = json::array();
    for (const auto& p : s.panes) {
        json chunks = json::array();
        for (const auto& c : p.chunks) chunks.push_back(to_json(c));
        panes.push_back({{"chunks", chunks}});
    }
    json children = json::array();
    for (const auto& c : s.children) children.push_back(to_json(c));
    json j = {{"id", s.id},
              {"layout", std::string(to_string(s.layout))},
              {"visualizations", vizzes},
              {"panes", panes},
              {"children", children},
              {"focus_event_ids", id_array(s.focus_event_ids)}};
    if (s.camera) j["camera"] = viz::to_json(*s.camera);
    return j;
}

json to_json(const StoryDocument& d) {
    json slides = json::array();
    for (const auto& s : d.slides) slides.push_back(to_json(s));
    json j = {{"schema_version", d.schema_version},
              {"id", d.id},
              {"title", d.title},
              {"slides", slides},
              {"version", d.version}};
    if (d.collection_ref) j["collection_ref"] = *d.collection_ref;
    return j;
}

Settings settings_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) malformed(path, "settings must be an object");
    Settings out;
    for (const auto& [key, v] : j.items()) {
        std::string p = child_path(path, key);
        if (v.is_boolean()) out[key] = v.get<bool>();
        else if (v.is_number_unsigned()) {
            if (v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) malformed(p, "integer too large");
            out[key] = static_cast<std::int64_t>(v.get<std::uint64_t>());
        } else if (v.is_number_integer()) out[key] = v.get<std::int64_t>();
        else if (v.is_number_float()) out[key] = v.get<double>();
        else if (v.is_string()) out[key] = v.get<std::string>();
        else malformed(p, "setting values must be scalars");
    }
    return out;
}

VisualizationPanel panel_from_json(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    VisualizationPanel p;
    std::string kind = r.string("kind");
    if (kind == "map") p.kind = VizKind::map;
    else if (kind == "timeline") p.kind = VizKind::timeline;
    else malformed(r.path_of("kind"), "unknown visualization kind '" + kind + "'");
    p.entity_ids = id_set(r.array("entity_ids"), r.path_of("entity_ids"));
    p.event_ids = id_set(r.array("event_ids"), r.path_of("event_ids"));
    std::string coloring = r.string("coloring");
    auto mode = viz::parse_color_mode(coloring);
    if (!mode) malformed(r.path_of("coloring"), "unknown coloring mode '" + coloring + "'");
    p.coloring = *mode;
    p.clustered = r.boolean("clustered");
    std::string glyph = r.string("glyph");
    if (glyph == "donut") p.glyph = Glyph::donut;
    else if (glyph == "dot") p.glyph = Glyph::dot;
    else malformed(r.path_of("glyph"), "unknown glyph '" + glyph + "'");
    if (const json* s = r.find("settings")) p.settings = settings_from_json(*s, r.path_of("settings"));
    r.finish();
    if (auto foreign = foreign_settings(p); !foreign.empty())
        malformed(r.path_of("settings"), "setting '" + foreign.front() + "' does not apply to a " + kind);
    return p;
}

ContentChunk chunk_from_json(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    ContentChunk c;
    std::string kind = r.string("kind");
    if (kind == "text") {
        c.body = TextChunk{r.string("text")};
    } else if (kind == "image") {
        c.body = ImageChunk{media_from_json(r.object("media"), r.path_of("media"))};
    } else if (kind == "video") {
        c.body = VideoChunk{media_from_json(r.object("media"), r.path_of("media"))};
    } else if (kind == "quiz") {
        QuizChunk q;
        q.question = r.string("question");
        const json& opts = r.array("options");
        for (std::size_t i = 0; i < opts.size(); ++i) {
            if (!opts[i].is_string()) malformed(child_path(r.path_of("options"), i), "expected a string");
            q.options.push_back(opts[i].get<std::string>());
        }
        const json& correct = r.array("correct");
        for (std::size_t i = 0; i < correct.size(); ++i) {
            if (!correct[i].is_number_integer() || correct[i].get<std::int64_t>() < 0)
                malformed(child_path(r.path_of("correct"), i), "expected an option index");
            q.correct.insert(correct[i].get<std::size_t>());
        }
        c.body = std::move(q);
    } else if (kind == "html_container") {
        c.body = HtmlChunk{r.string("html")};
        if (!r.boolean("sandbox")) malformed(r.path_of("sandbox"), "html containers are always sandboxed");
    } else {
        malformed(r.path_of("kind"), "unknown chunk kind '" + kind + "'");
    }
    if (const json* s = r.find("settings")) c.settings = settings_from_json(*s, r.path_of("settings"));
    r.finish();
    if (auto problem = chunk_shape_problem(c)) malformed(path, *problem);
    return c;
}

Slide slide_from_json(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    Slide s;
    s.id = r.string("id");
    std::string layout = r.string("layout");
    auto id = parse_layout(layout);
    if (!id) malformed(r.path_of("layout"), "unknown layout '" + layout + "'");
    s.layout = *id;
    if (const json* vizzes = r.optional_array("visualizations"))
        for (std::size_t i = 0; i < vizzes->size(); ++i)
            s.visualizations.push_back(panel_from_json((*vizzes)[i], child_path(r.path_of("visualizations"), i)));
    if (const json* panes = r.optional_array("panes")) {
        for (std::size_t i = 0; i < panes->size(); ++i) {
            std::string pane_path = child_path(r.path_of("panes"), i);
            ObjectReader pr((*panes)[i], pane_path);
            ContentPane pane;
            const json& chunks = pr.array("chunks");
            for (std::size_t k = 0; k < chunks.size(); ++k)
                pane.chunks.push_back(chunk_from_json(chunks[k], child_path(pane_path + "/chunks", k)));
            pr.finish();
            s.panes.push_back(std::move(pane));
        }
    }
    if (const json* children = r.optional_array("children"))
        for (std::size_t i = 0; i < children->size(); ++i)
            s.children.push_back(slide_from_json((*children)[i], child_path(r.path_of("children"), i)));
    if (const json* focus = r.optional_array("focus_event_ids"))
        s.focus_event_ids = id_set(*focus, r.path_of("focus_event_ids"));
    if (const json* cam = r.optional_object("camera")) s.camera = viz::camera_from_json(*cam, r.path_of("camera"));
    r.finish();
    return s;
}

StoryDocument story_from_json(const json& j) {
    ObjectReader r(j, "");
    StoryDocument d;
    d.schema_version = r.string("schema_version");
    d.id = r.string("id");
    d.title = r.optional_string("title").value_or("");
    d.collection_ref = r.optional_string("collection_ref");
    const json& slides = r.array("slides");
    for (std::size_t i = 0; i < slides.size(); ++i) d.slides.push_back(slide_from_json(slides[i], child_path("/slides", i)));
    d.version = r.integer("version");
    r.finish();
    return d;
}

StoryDocument parse_story(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("story is not valid JSON: ") + e.what(), "/");
    }
    return story_from_json(j);
}

std::string canonical_dump(const json& j) {
    try {
        return j.dump();
    } catch (const json::type_error& e) {
        throw Error(ErrorCode::InvalidStory, std::string("document text is not valid UTF-8: ") + e.what());
    }
}

std::string export_story(const StoryDocument& doc) {
    auto violations = validate_story(doc);
    auto shapes = shape_issues(doc);
    violations.insert(violations.end(), shapes.begin(), shapes.end());
    if (!violations.empty()) {
        Issue first = violations.front();
        throw Error(ErrorCode::InvalidStory,
                    "story has " + std::to_string(violations.size()) + " violation(s); first: " + first.message,
                    first.path, std::move(violations));
    }
    return canonical_dump(to_json(doc));
}

} // namespace chstory::story
