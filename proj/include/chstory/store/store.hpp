#pragma once

#include "chstory/json_reader.hpp"
#include "chstory/store/types.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace chstory {

/// Total order used by every event listing: spanned events by first contained
/// day, then id; spanless events after all spanned ones, by id.
bool event_precedes(const Event& a, const Event& b);

/// The committed contents of a store. Reads go through the effective view:
/// a local overlay record shadows the imported record with the same id.
class StoreState {
public:
    /// Effective events of one entity, ordered by id.
    using EventIndex = std::map<EventId, const Event*>;

    StoreState() = default;
    StoreState(const StoreState&) = delete;
    StoreState& operator=(const StoreState&) = delete;

    const Entity* find_entity(const EntityId& id) const;
    const Event* find_event(const EventId& id) const;
    const Term* find_term(const TermId& id) const;
    const Collection* find_collection(const CollectionId& id) const;

    const Entity* find_base_entity(const EntityId& id) const;
    const Event* find_base_event(const EventId& id) const;

    template <class F>
    void for_each_entity(F&& fn) const {
        for (const auto& [id, e] : base_entities_)
            if (!local_entities_.contains(id)) fn(e);
        for (const auto& [id, e] : local_entities_) fn(e);
    }

    template <class F>
    void for_each_event(F&& fn) const {
        for (const auto& [id, e] : base_events_)
            if (!local_events_.contains(id)) fn(e);
        for (const auto& [id, e] : local_events_) fn(e);
    }

    std::size_t entity_count() const;
    std::size_t event_count() const;

    /// Ids of effective events naming the entity as participant or place.
    const EventIndex& events_of(const EntityId& id) const;
    /// Case-folded label of an effective entity.
    const std::string& folded_label(const EntityId& id) const;

    const std::map<TermId, Term>& terms() const noexcept { return terms_; }
    const std::map<CollectionId, Collection>& collections() const noexcept { return collections_; }
    const std::unordered_map<EntityId, Entity>& local_entities() const noexcept { return local_entities_; }
    const std::unordered_map<EventId, Event>& local_events() const noexcept { return local_events_; }

private:
    friend class Store;

    void put_base_entity(Entity e);
    void put_local_entity(Entity e);
    void erase_local_entity(const EntityId& id);
    void put_base_event(Event e);
    void put_local_event(Event e);
    void erase_local_event(const EventId& id);
    void refresh_label(const EntityId& id);
    void unindex(const EventId& id, const std::vector<EntityId>& refs);
    void index(const Event* e);

    std::unordered_map<EntityId, Entity> base_entities_;
    std::unordered_map<EntityId, Entity> local_entities_;
    std::unordered_map<EventId, Event> base_events_;
    std::unordered_map<EventId, Event> local_events_;
    std::map<TermId, Term> terms_;
    std::map<CollectionId, Collection> collections_;
    std::uint64_t next_collection_ = 1;

    std::unordered_map<EntityId, EventIndex> events_by_entity_;
    std::unordered_map<EntityId, std::string> folded_labels_;
};

struct ResolvedCollection {
    std::vector<Entity> entities;
    std::vector<Event> events;
};

/// Entity/event store with imported base data and local curation overlays.
///
/// Any number of concurrent readers; writers are serialized and every
/// operation commits atomically.
class Store {
public:
    using Clock = std::function<Timestamp()>;

    Store();

    IngestReport ingest_dataset(std::string_view document, IngestMode mode);

    Entity get_entity(const EntityId& id) const;
    Event get_event(const EventId& id) const;
    std::vector<Event> list_events(const EntityId& entity, const std::optional<TermId>& kind_filter = {},
                                   const std::optional<TimeSpan>& time_filter = {}) const;

    Entity upsert_local_entity(Entity draft);
    Event upsert_local_event(Event draft);
    /// Only local records can be deleted; removing an overlay reveals the
    /// imported record underneath.
    void delete_local_entity(const EntityId& id);
    void delete_local_event(const EventId& id);

    Collection create_collection(std::string label, const std::vector<EntityId>& entity_ids,
                                 const std::vector<EventId>& event_ids,
                                 std::optional<std::string> provenance_note = {});
    Collection get_collection(const CollectionId& id) const;
    std::vector<Collection> list_collections() const;
    ResolvedCollection resolve_collection(const CollectionId& id) const;

    std::vector<Term> terms() const;

    /// Runs `fn` against the committed state under a shared lock.
    template <class F>
    decltype(auto) read(F&& fn) const {
        std::shared_lock lock(mutex_);
        return std::forward<F>(fn)(state_);
    }

    /// Local overlays and collections, for persistence across restarts.
    json export_local_state() const;
    /// Re-applies a previously exported local state. Records that no longer
    /// satisfy integrity against the loaded datasets are skipped and reported.
    std::vector<Issue> restore_local_state(const json& state);

    void set_clock(Clock clock) { clock_ = std::move(clock); }

private:
    void check_local_event(const Event& e) const;

    mutable std::shared_mutex mutex_;
    StoreState state_;
    Clock clock_;
};

} // namespace chstory
