#include "chstory/store/codec.hpp"

namespace chstory {

namespace {

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::MalformedDocument, what, path);
}

std::vector<std::string> string_list(const json& arr, const std::string& path) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) malformed(child_path(path, i), "expected a string");
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

void put_optional(json& j, const char* key, const std::optional<std::string>& v) {
    if (v) j[key] = *v;
}

} // namespace

json to_json(const CalendarDate& d) {
    return {{"value", d.value()}, {"precision", std::string(to_string(d.precision()))}};
}

json to_json(const TimeSpan& s) {
    json j = {{"start", to_json(s.start)}};
    if (s.end) j["end"] = to_json(*s.end);
    return j;
}

json to_json(const GeoPoint& p) {
    return {{"lon", p.lon}, {"lat", p.lat}};
}

json to_json(const MediaResource& m) {
    json j = {{"url", m.url}, {"media_kind", std::string(to_string(m.media_kind))}};
    put_optional(j, "caption", m.caption);
    put_optional(j, "alt_text", m.alt_text);
    return j;
}

json to_json(const Entity& e) {
    json j = {{"id", e.id},
              {"kind", std::string(to_string(e.kind))},
              {"label", e.label},
              {"attributes", json::object()},
              {"media", json::array()},
              {"provenance", std::string(to_string(e.provenance))}};
    put_optional(j, "description", e.description);
    for (const auto& [term, values] : e.attributes) j["attributes"][term] = values;
    if (e.coordinates) j["coordinates"] = to_json(*e.coordinates);
    for (const auto& m : e.media) j["media"].push_back(to_json(m));
    return j;
}

json to_json(const Event& e) {
    json j = {{"id", e.id},
              {"label", e.label},
              {"kind", e.kind},
              {"participants", json::array()},
              {"provenance", std::string(to_string(e.provenance))}};
    if (e.span) j["span"] = to_json(*e.span);
    if (e.place) j["place"] = *e.place;
    for (const auto& p : e.participants) j["participants"].push_back({{"entity", p.entity}, {"role", p.role}});
    return j;
}

json to_json(const Term& t) {
    return {{"id", t.id}, {"label", t.label}};
}

json to_json(const Collection& c) {
    json j = {{"id", c.id},
              {"label", c.label},
              {"entity_ids", c.entity_ids},
              {"event_ids", c.event_ids},
              {"created_at", format_timestamp(c.created_at)}};
    put_optional(j, "provenance_note", c.provenance_note);
    return j;
}

json to_json(const Issue& i) {
    return {{"path", i.path}, {"code", std::string(to_string(i.code))}, {"message", i.message}};
}

json to_json(const IngestReport& r) {
    json errors = json::array();
    for (const auto& e : r.errors) errors.push_back(to_json(e));
    return {{"entities_added", r.entities_added},
            {"events_added", r.events_added},
            {"terms_added", r.terms_added},
            {"errors", errors}};
}

CalendarDate date_from_json(const json& j, const std::string& path, bool strict) {
    ObjectReader r(j, path, strict);
    std::string value = r.string("value");
    std::string precision_text = r.string("precision");
    r.finish();
    auto precision = parse_precision(precision_text);
    if (!precision) malformed(r.path_of("precision"), "unknown precision '" + precision_text + "'");
    try {
        return CalendarDate::parse(value, *precision);
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedDocument, e.what(), r.path_of("value"));
    }
}

TimeSpan span_from_json(const json& j, const std::string& path, bool strict) {
    ObjectReader r(j, path, strict);
    TimeSpan s;
    s.start = date_from_json(r.object("start"), r.path_of("start"), strict);
    if (const json* end = r.optional_object("end")) s.end = date_from_json(*end, r.path_of("end"), strict);
    r.finish();
    return s;
}

MediaResource media_from_json(const json& j, const std::string& path, bool strict) {
    ObjectReader r(j, path, strict);
    MediaResource m;
    m.url = r.string("url");
    std::string kind = r.string("media_kind");
    auto parsed = parse_media_kind(kind);
    if (!parsed) malformed(r.path_of("media_kind"), "unknown media kind '" + kind + "'");
    m.media_kind = *parsed;
    m.caption = r.optional_string("caption");
    m.alt_text = r.optional_string("alt_text");
    r.finish();
    return m;
}

Entity entity_from_json(const json& j, const std::string& path, bool strict) {
    ObjectReader r(j, path, strict);
    Entity e;
    e.id = r.string("id");
    std::string kind = r.string("kind");
    auto parsed = parse_entity_kind(kind);
    if (!parsed) malformed(r.path_of("kind"), "unknown entity kind '" + kind + "'");
    e.kind = *parsed;
    e.label = r.string("label");
    e.description = r.optional_string("description");
    if (const json* attrs = r.optional_object("attributes")) {
        for (const auto& [term, values] : attrs->items()) {
            std::string p = child_path(r.path_of("attributes"), term);
            if (!values.is_array()) malformed(p, "expected an array of strings");
            e.attributes[term] = string_list(values, p);
        }
    }
    if (const json* coords = r.optional_object("coordinates")) {
        ObjectReader c(*coords, r.path_of("coordinates"), strict);
        e.coordinates = GeoPoint{c.number("lon"), c.number("lat")};
        c.finish();
    }
    if (const json* media = r.optional_array("media"))
        for (std::size_t i = 0; i < media->size(); ++i)
            e.media.push_back(media_from_json((*media)[i], child_path(r.path_of("media"), i), strict));
    if (auto prov = r.optional_string("provenance")) {
        auto p = parse_provenance(*prov);
        if (!p) malformed(r.path_of("provenance"), "unknown provenance '" + *prov + "'");
        e.provenance = *p;
    }
    r.finish();
    return e;
}

Event event_from_json(const json& j, const std::string& path, bool strict) {
    ObjectReader r(j, path, strict);
    Event e;
    e.id = r.string("id");
    e.label = r.optional_string("label").value_or("");
    e.kind = r.string("kind");
    if (const json* span = r.optional_object("span")) e.span = span_from_json(*span, r.path_of("span"), strict);
    e.place = r.optional_string("place");
    const json& parts = r.array("participants");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        ObjectReader p(parts[i], child_path(r.path_of("participants"), i), strict);
        Participant part;
        part.entity = p.string("entity");
        part.role = p.string("role");
        p.finish();
        e.participants.push_back(std::move(part));
    }
    if (auto prov = r.optional_string("provenance")) {
        auto p = parse_provenance(*prov);
        if (!p) malformed(r.path_of("provenance"), "unknown provenance '" + *prov + "'");
        e.provenance = *p;
    }
    r.finish();
    return e;
}

Term term_from_json(const json& j, const std::string& path, bool strict) {
    ObjectReader r(j, path, strict);
    Term t{r.string("id"), r.string("label")};
    r.finish();
    return t;
}

Collection collection_from_json(const json& j, const std::string& path, bool strict) {
    ObjectReader r(j, path, strict);
    Collection c;
    c.id = r.string("id");
    c.label = r.string("label");
    c.entity_ids = string_list(r.array("entity_ids"), r.path_of("entity_ids"));
    c.event_ids = string_list(r.array("event_ids"), r.path_of("event_ids"));
    try {
        c.created_at = parse_timestamp(r.string("created_at"));
    } catch (const Error& e) {
        throw Error(ErrorCode::MalformedDocument, e.what(), r.path_of("created_at"));
    }
    c.provenance_note = r.optional_string("provenance_note");
    r.finish();
    return c;
}

} // namespace chstory
