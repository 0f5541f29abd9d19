#pragma once

#include "chstory/json_reader.hpp"
#include "chstory/store/store.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace chstory::query {

/// Conjunctive entity filter. A default-constructed value matches everything.
struct QueryConstraints {
    /// Case-insensitive substring of the label (simple Unicode case folding).
    std::optional<std::string> name_contains;
    std::optional<std::set<EntityKind>> kinds;
    /// Each (term, value) pair must appear among the entity's attribute values.
    std::vector<std::pair<TermId, std::string>> attribute_equals;
    /// The entity has at least one event, as participant or place, whose span
    /// overlaps this window.
    std::optional<TimeSpan> active_between;
    /// The entity participates in at least one event located at this place.
    std::optional<EntityId> related_place;
};

inline constexpr std::size_t kMaxPageSize = 500;

struct ResultItem {
    EntityId id;
    std::string label;
    EntityKind kind;
    bool operator==(const ResultItem&) const = default;
};

struct ResultPage {
    std::vector<ResultItem> items;
    std::size_t total = 0;
    std::size_t offset = 0;
    std::size_t limit = 0;
    bool operator==(const ResultPage&) const = default;
};

struct Facet {
    enum class Kind { entity_kind, event_kind, attribute, decade_of_activity };
    Kind kind = Kind::entity_kind;
    TermId term; // attribute facets only

    /// "entity_kind", "event_kind", "decade_of_activity" or "attribute:<term>".
    static Facet parse(std::string_view key);
    std::string key() const;
};

struct HistogramBin {
    std::string label;
    std::size_t count = 0;
    bool operator==(const HistogramBin&) const = default;
};

/// Bin counts are numbers of matched entities: an entity is counted once in
/// every bin it touches. Decade bins run contiguously (zero-filled) from the
/// earliest to the latest decade; categorical bins hold non-zero counts only,
/// ordered by descending count, then label.
struct Histogram {
    std::string facet;
    std::vector<HistogramBin> bins;
    std::size_t total_matched = 0;
    bool operator==(const Histogram&) const = default;
};

struct RelatedEntity {
    EntityId id;
    EventId via;
    bool operator==(const RelatedEntity&) const = default;
};

ResultPage search_entities(const StoreState& state, const QueryConstraints& c, std::size_t offset,
                           std::size_t limit);
Histogram facet_histogram(const StoreState& state, const QueryConstraints& c, const Facet& facet);
/// Entities sharing at least one event with `id`, sorted by (folded label, id).
/// Each result cites its lowest-id witnessing event.
std::vector<RelatedEntity> related_entities(const StoreState& state, const EntityId& id, int max_hops = 1);

ResultPage search_entities(const Store& store, const QueryConstraints& c, std::size_t offset, std::size_t limit);
Histogram facet_histogram(const Store& store, const QueryConstraints& c, const Facet& facet);
std::vector<RelatedEntity> related_entities(const Store& store, const EntityId& id, int max_hops = 1);

/// Throws Error{InvalidConstraint} for anything malformed.
QueryConstraints constraints_from_json(const json& j);
json to_json(const QueryConstraints& c);
json to_json(const ResultPage& page);
json to_json(const Histogram& h);
json to_json(const std::vector<RelatedEntity>& related);

} // namespace chstory::query
