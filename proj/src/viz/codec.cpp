#include "chstory/viz/codec.hpp"

#include "chstory/store/codec.hpp"

namespace chstory::viz {

json to_json(const CameraState& c) {
    return {{"center", chstory::to_json(c.center)}, {"zoom", c.zoom}};
}

CameraState camera_from_json(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    ObjectReader center(r.object("center"), r.path_of("center"));
    CameraState c;
    c.center = {center.number("lon"), center.number("lat")};
    center.finish();
    c.zoom = r.number("zoom");
    r.finish();
    if (c.zoom < 0 || c.zoom > kMaxZoom)
        throw Error(ErrorCode::MalformedDocument, "camera zoom outside [0, 16]", r.path_of("zoom"));
    return c;
}

json to_json(const Cluster& c) {
    return {{"seed", c.seed},
            {"members", c.members},
            {"center", chstory::to_json(c.center)},
            {"counts_by_category", c.counts_by_category}};
}

json to_json(const DonutSegment& s) {
    return {{"category", s.category},
            {"start_angle", s.start_angle},
            {"end_angle", s.end_angle},
            {"fraction", s.fraction}};
}

json to_json(const TimelineLayout& t) {
    json placements = json::array();
    for (const auto& p : t.placements) placements.push_back({{"id", p.id}, {"x", p.x}, {"lane", p.lane}});
    json clusters = json::array();
    for (const auto& c : t.clusters)
        clusters.push_back({{"lane", c.lane}, {"seed", c.seed}, {"members", c.members}, {"x", c.x}});
    return {{"lanes", t.lanes}, {"placements", placements}, {"clusters", clusters}, {"undated", t.undated}};
}

json to_json(const ColorAssignment& a) {
    json mapping = json::object();
    for (const auto& [id, tok] : a.mapping) {
        switch (tok.type) {
        case ColorToken::Type::categorical: mapping[id] = tok.index; break;
        case ColorToken::Type::scalar: mapping[id] = tok.position; break;
        case ColorToken::Type::undated: mapping[id] = "undated"; break;
        }
    }
    return {{"mode", std::string(to_string(a.mode))}, {"mapping", mapping}, {"undated", a.undated}};
}

json handle_cluster_request(const json& body) {
    ObjectReader r(body, "");
    const json& pts = r.array("points");
    std::vector<ClusterPoint> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        ObjectReader p(pts[i], child_path("/points", i));
        ClusterPoint cp;
        cp.id = p.string("id");
        cp.lon = p.number("lon");
        cp.lat = p.number("lat");
        cp.category = p.optional_string("category").value_or("");
        p.finish();
        points.push_back(std::move(cp));
    }
    double zoom = r.number("zoom");
    double radius = r.number("radius_px");
    r.finish();
    json clusters = json::array();
    for (const auto& c : cluster_points(points, zoom, radius)) clusters.push_back(to_json(c));
    return {{"clusters", clusters}};
}

json handle_donut_request(const json& body) {
    ObjectReader r(body, "");
    const json& counts_json = r.object("counts_by_category");
    r.finish();
    std::map<std::string, std::size_t> counts;
    for (const auto& [k, v] : counts_json.items()) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            throw Error(ErrorCode::MalformedDocument, "counts must be non-negative integers",
                        child_path("/counts_by_category", k));
        counts[k] = v.get<std::size_t>();
    }
    json segments = json::array();
    for (const auto& s : donut_segments(counts)) segments.push_back(to_json(s));
    return {{"segments", segments}};
}

json handle_fit_camera_request(const json& body) {
    ObjectReader r(body, "");
    const json& pts = r.array("points");
    std::vector<GeoPoint> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        ObjectReader p(pts[i], child_path("/points", i));
        points.push_back({p.number("lon"), p.number("lat")});
        p.finish();
    }
    ObjectReader vp(r.object("viewport"), "/viewport");
    Viewport viewport{vp.number("width"), vp.number("height"), 0};
    vp.finish();
    viewport.padding = r.optional_number("padding_px").value_or(0);
    r.finish();
    return to_json(fit_camera(points, viewport));
}

json handle_timeline_request(const json& body) {
    ObjectReader r(body, "");
    const json& evs = r.array("events");
    std::vector<TimelineEvent> events;
    for (std::size_t i = 0; i < evs.size(); ++i) {
        std::string path = child_path("/events", i);
        ObjectReader e(evs[i], path);
        TimelineEvent te;
        te.id = e.string("id");
        te.entity = e.string("entity");
        if (const json* span = e.optional_object("span")) te.span = span_from_json(*span, path + "/span");
        e.finish();
        events.push_back(std::move(te));
    }
    double width = r.number("width_px");
    double margin = r.number("margin_px");
    double radius = r.number("cluster_radius_px");
    r.finish();
    return to_json(timeline_layout(events, width, margin, radius));
}

json handle_colors_request(const json& body) {
    ObjectReader r(body, "");
    const json& its = r.array("items");
    std::vector<ColorItem> items;
    for (std::size_t i = 0; i < its.size(); ++i) {
        std::string path = child_path("/items", i);
        ObjectReader it(its[i], path);
        ColorItem ci;
        ci.id = it.string("id");
        ci.entity = it.optional_string("entity").value_or("");
        ci.kind = it.optional_string("kind").value_or("");
        if (const json* date = it.optional_object("date")) ci.date = date_from_json(*date, path + "/date");
        it.finish();
        items.push_back(std::move(ci));
    }
    std::string mode_text = r.string("mode");
    auto mode = parse_color_mode(mode_text);
    if (!mode) throw Error(ErrorCode::MalformedDocument, "unknown color mode '" + mode_text + "'", "/mode");
    std::int64_t palette = r.find("palette_size") ? r.integer("palette_size") : 8;
    r.finish();
    if (palette < 0 || palette > 1'000'000)
        throw Error(ErrorCode::InvalidArgument, "palette size out of range", "/palette_size");
    return to_json(assign_colors(items, *mode, static_cast<std::uint32_t>(palette)));
}

} // namespace chstory::viz
