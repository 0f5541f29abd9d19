#pragma once

#include "chstory/calendar.hpp"
#include "chstory/error.hpp"

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chstory {

using EntityId = std::string;
using EventId = std::string;
using CollectionId = std::string;
using TermId = std::string;

enum class EntityKind { person, cultural_object, place, group, historical_event };
enum class MediaKind { image, video, audio, document };
enum class Provenance { imported, local };

std::string_view to_string(EntityKind k) noexcept;
std::string_view to_string(MediaKind k) noexcept;
std::string_view to_string(Provenance p) noexcept;
std::optional<EntityKind> parse_entity_kind(std::string_view s) noexcept;
std::optional<MediaKind> parse_media_kind(std::string_view s) noexcept;
std::optional<Provenance> parse_provenance(std::string_view s) noexcept;

inline constexpr EntityKind kAllEntityKinds[] = {EntityKind::person, EntityKind::cultural_object,
                                                 EntityKind::place, EntityKind::group,
                                                 EntityKind::historical_event};

struct GeoPoint {
    double lon = 0;
    double lat = 0;
    bool operator==(const GeoPoint&) const = default;
};

struct MediaResource {
    std::string url;
    MediaKind media_kind = MediaKind::image;
    std::optional<std::string> caption;
    std::optional<std::string> alt_text;
    bool operator==(const MediaResource&) const = default;
};

struct Entity {
    EntityId id;
    EntityKind kind = EntityKind::person;
    std::string label;
    std::optional<std::string> description;
    std::map<TermId, std::vector<std::string>> attributes;
    std::optional<GeoPoint> coordinates; // places only
    std::vector<MediaResource> media;
    Provenance provenance = Provenance::imported;
    bool operator==(const Entity&) const = default;
};

struct Participant {
    EntityId entity;
    TermId role;
    bool operator==(const Participant&) const = default;
};

struct Event {
    EventId id;
    std::string label;
    TermId kind;
    std::optional<TimeSpan> span;
    std::optional<EntityId> place;
    std::vector<Participant> participants;
    Provenance provenance = Provenance::imported;
    bool operator==(const Event&) const = default;

    /// Participant entities followed by the place, without duplicates.
    std::vector<EntityId> referenced_entities() const;
};

struct Term {
    TermId id;
    std::string label;
    bool operator==(const Term&) const = default;
};

using Timestamp = std::chrono::sys_seconds;

std::string format_timestamp(Timestamp t);
/// Parses "YYYY-MM-DDTHH:MM:SSZ"; throws Error{MalformedDocument}.
Timestamp parse_timestamp(std::string_view s);

struct Collection {
    CollectionId id;
    std::string label;
    std::vector<EntityId> entity_ids;
    std::vector<EventId> event_ids;
    Timestamp created_at{};
    std::optional<std::string> provenance_note;
    bool operator==(const Collection&) const = default;
};

struct IngestReport {
    std::size_t entities_added = 0;
    std::size_t events_added = 0;
    std::size_t terms_added = 0;
    std::vector<Issue> errors;
    bool operator==(const IngestReport&) const = default;
};

enum class IngestMode { strict, lenient };

/// Non-empty and not whitespace-only.
bool is_valid_id(std::string_view id) noexcept;
/// RFC 3986 scheme followed by ':' and a non-empty, whitespace-free remainder.
bool is_absolute_uri(std::string_view url) noexcept;

/// Record-local invariants (no store lookups). Empty result means valid.
std::vector<Issue> check_entity(const Entity& e, const std::string& path);
std::vector<Issue> check_event_shape(const Event& e, const std::string& path);

} // namespace chstory
