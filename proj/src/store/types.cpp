#include "chstory/store/types.hpp"

#include "chstory/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ctime>

namespace chstory {

std::string_view to_string(EntityKind k) noexcept {
    switch (k) {
    case EntityKind::person: return "person";
    case EntityKind::cultural_object: return "cultural_object";
    case EntityKind::place: return "place";
    case EntityKind::group: return "group";
    case EntityKind::historical_event: return "historical_event";
    }
    return "person";
}

std::string_view to_string(MediaKind k) noexcept {
    switch (k) {
    case MediaKind::image: return "image";
    case MediaKind::video: return "video";
    case MediaKind::audio: return "audio";
    case MediaKind::document: return "document";
    }
    return "image";
}

std::string_view to_string(Provenance p) noexcept {
    return p == Provenance::local ? "local" : "imported";
}

std::optional<EntityKind> parse_entity_kind(std::string_view s) noexcept {
    for (EntityKind k : kAllEntityKinds)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::optional<MediaKind> parse_media_kind(std::string_view s) noexcept {
    for (MediaKind k : {MediaKind::image, MediaKind::video, MediaKind::audio, MediaKind::document})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::optional<Provenance> parse_provenance(std::string_view s) noexcept {
    if (s == "imported") return Provenance::imported;
    if (s == "local") return Provenance::local;
    return std::nullopt;
}

std::vector<EntityId> Event::referenced_entities() const {
    std::vector<EntityId> out;
    for (const auto& p : participants)
        if (std::find(out.begin(), out.end(), p.entity) == out.end()) out.push_back(p.entity);
    if (place && std::find(out.begin(), out.end(), *place) == out.end()) out.push_back(*place);
    return out;
}

std::string format_timestamp(Timestamp t) {
    std::time_t tt = t.time_since_epoch().count();
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Timestamp parse_timestamp(std::string_view s) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    char z = 0;
    std::string str(s);
    if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &se, &z) != 7 || z != 'Z' ||
        str.size() != 20)
        throw Error(ErrorCode::MalformedDocument, "invalid timestamp '" + str + "'");
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || se > 60)
        throw Error(ErrorCode::MalformedDocument, "invalid timestamp '" + str + "'");
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
}

bool is_valid_id(std::string_view id) noexcept {
    return !text::is_blank(id);
}

bool is_absolute_uri(std::string_view url) noexcept {
    auto colon = url.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 >= url.size()) return false;
    if (!std::isalpha(static_cast<unsigned char>(url[0]))) return false;
    for (std::size_t i = 1; i < colon; ++i) {
        unsigned char c = static_cast<unsigned char>(url[i]);
        if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
    }
    for (unsigned char c : url)
        if (std::isspace(c) || c < 0x20) return false;
    return true;
}

std::vector<Issue> check_entity(const Entity& e, const std::string& path) {
    std::vector<Issue> out;
    if (!is_valid_id(e.id)) out.push_back({path + "/id", ErrorCode::InvariantViolation, "entity id must be non-blank"});
    if (text::is_blank(e.label))
        out.push_back({path + "/label", ErrorCode::InvariantViolation, "entity label must be non-empty"});
    if (e.coordinates) {
        if (e.kind != EntityKind::place)
            out.push_back({path + "/coordinates", ErrorCode::InvariantViolation,
                           "coordinates are only allowed on places, not on a " + std::string(to_string(e.kind))});
        else if (e.coordinates->lon < -180 || e.coordinates->lon > 180 || e.coordinates->lat < -90 ||
                 e.coordinates->lat > 90)
            out.push_back({path + "/coordinates", ErrorCode::InvariantViolation, "coordinates out of range"});
    }
    for (std::size_t i = 0; i < e.media.size(); ++i)
        if (!is_absolute_uri(e.media[i].url))
            out.push_back({path + "/media/" + std::to_string(i) + "/url", ErrorCode::InvariantViolation,
                           "media url is not an absolute URI: '" + e.media[i].url + "'"});
    return out;
}

std::vector<Issue> check_event_shape(const Event& e, const std::string& path) {
    std::vector<Issue> out;
    if (!is_valid_id(e.id)) out.push_back({path + "/id", ErrorCode::InvariantViolation, "event id must be non-blank"});
    if (!is_valid_id(e.kind))
        out.push_back({path + "/kind", ErrorCode::InvariantViolation, "event kind must be non-blank"});
    if (e.participants.empty())
        out.push_back({path + "/participants", ErrorCode::InvariantViolation, "event needs at least one participant"});
    if (e.span && !e.span->well_ordered())
        out.push_back({path + "/span", ErrorCode::InvariantViolation, "span end precedes span start"});
    if (e.place && !is_valid_id(*e.place))
        out.push_back({path + "/place", ErrorCode::InvariantViolation, "place id must be non-blank"});
    for (std::size_t i = 0; i < e.participants.size(); ++i)
        if (!is_valid_id(e.participants[i].entity))
            out.push_back({path + "/participants/" + std::to_string(i), ErrorCode::InvariantViolation,
                           "participant entity id must be non-blank"});
    return out;
}

} // namespace chstory
