#include "chstory/store/store.hpp"

#include "chstory/store/codec.hpp"
#include "chstory/text.hpp"

#include <algorithm>

namespace chstory {

namespace {

const StoreState::EventIndex kNoEvents;
const std::string kNoLabel;

template <class Map>
auto lookup(const Map& m, const std::string& key) -> const typename Map::mapped_type* {
    auto it = m.find(key);
    return it == m.end() ? nullptr : &it->second;
}

[[noreturn]] void throw_first(std::vector<Issue> issues) {
    Issue first = issues.front();
    throw Error(first.code, first.message, first.path, std::move(issues));
}

template <class T>
struct Parsed {
    std::optional<T> value;
    std::string path;
};

} // namespace

bool event_precedes(const Event& a, const Event& b) {
    if (a.span.has_value() != b.span.has_value()) return a.span.has_value();
    if (a.span) {
        auto da = a.span->first_day(), db = b.span->first_day();
        if (da != db) return da < db;
    }
    return a.id < b.id;
}

// ---------------------------------------------------------------------------
// StoreState

const Entity* StoreState::find_entity(const EntityId& id) const {
    if (local_entities_.empty()) return lookup(base_entities_, id);
    if (auto* e = lookup(local_entities_, id)) return e;
    return lookup(base_entities_, id);
}

const Event* StoreState::find_event(const EventId& id) const {
    if (local_events_.empty()) return lookup(base_events_, id);
    if (auto* e = lookup(local_events_, id)) return e;
    return lookup(base_events_, id);
}

const Term* StoreState::find_term(const TermId& id) const { return lookup(terms_, id); }
const Collection* StoreState::find_collection(const CollectionId& id) const { return lookup(collections_, id); }
const Entity* StoreState::find_base_entity(const EntityId& id) const { return lookup(base_entities_, id); }
const Event* StoreState::find_base_event(const EventId& id) const { return lookup(base_events_, id); }

std::size_t StoreState::entity_count() const {
    std::size_t n = local_entities_.size();
    for (const auto& [id, _] : base_entities_)
        if (!local_entities_.contains(id)) ++n;
    return n;
}

std::size_t StoreState::event_count() const {
    std::size_t n = local_events_.size();
    for (const auto& [id, _] : base_events_)
        if (!local_events_.contains(id)) ++n;
    return n;
}

const StoreState::EventIndex& StoreState::events_of(const EntityId& id) const {
    auto it = events_by_entity_.find(id);
    return it == events_by_entity_.end() ? kNoEvents : it->second;
}

const std::string& StoreState::folded_label(const EntityId& id) const {
    auto it = folded_labels_.find(id);
    return it == folded_labels_.end() ? kNoLabel : it->second;
}

void StoreState::refresh_label(const EntityId& id) {
    if (const Entity* e = find_entity(id)) folded_labels_[id] = text::fold_case(e->label);
    else folded_labels_.erase(id);
}

void StoreState::unindex(const EventId& id, const std::vector<EntityId>& refs) {
    for (const auto& ref : refs) {
        auto it = events_by_entity_.find(ref);
        if (it == events_by_entity_.end()) continue;
        it->second.erase(id);
        if (it->second.empty()) events_by_entity_.erase(it);
    }
}

void StoreState::index(const Event* e) {
    for (const auto& ref : e->referenced_entities()) events_by_entity_[ref][e->id] = e;
}

void StoreState::put_base_entity(Entity e) {
    e.provenance = Provenance::imported;
    EntityId id = e.id;
    base_entities_.insert_or_assign(id, std::move(e));
    refresh_label(id);
}

void StoreState::put_local_entity(Entity e) {
    e.provenance = Provenance::local;
    EntityId id = e.id;
    local_entities_.insert_or_assign(id, std::move(e));
    refresh_label(id);
}

void StoreState::erase_local_entity(const EntityId& id) {
    local_entities_.erase(id);
    refresh_label(id);
}

void StoreState::put_base_event(Event e) {
    e.provenance = Provenance::imported;
    bool shadowed = local_events_.contains(e.id);
    if (!shadowed)
        if (const Event* old = find_event(e.id)) unindex(old->id, old->referenced_entities());
    EventId id = e.id;
    auto it = base_events_.insert_or_assign(id, std::move(e)).first;
    if (!shadowed) index(&it->second);
}

void StoreState::put_local_event(Event e) {
    e.provenance = Provenance::local;
    if (const Event* old = find_event(e.id)) unindex(old->id, old->referenced_entities());
    EventId id = e.id;
    auto it = local_events_.insert_or_assign(id, std::move(e)).first;
    index(&it->second);
}

void StoreState::erase_local_event(const EventId& id) {
    auto it = local_events_.find(id);
    if (it == local_events_.end()) return;
    unindex(id, it->second.referenced_entities());
    local_events_.erase(it);
    if (const Event* base = lookup(base_events_, id)) index(base);
}

// ---------------------------------------------------------------------------
// Store

Store::Store() : clock_([] { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }) {}

IngestReport Store::ingest_dataset(std::string_view document, IngestMode mode) {
    const bool strict = mode == IngestMode::strict;
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("dataset is not valid JSON: ") + e.what(), "/");
    }
    if (!root.is_object()) throw Error(ErrorCode::MalformedDocument, "dataset must be a JSON object", "/");

    ObjectReader top(root, "", strict);
    const json* vocab_json = top.optional_array("vocabularies");
    const json* entities_json = top.optional_array("entities");
    const json* events_json = top.optional_array("events");
    top.finish();

    std::vector<Issue> issues;

    // Decode and check record-local invariants without holding the lock.
    auto decode = [&](const json* arr, const char* section, auto from_json, auto check) {
        using T = decltype(from_json(json{}, std::string{}, true));
        std::vector<Parsed<T>> out;
        if (!arr) return out;
        out.reserve(arr->size());
        for (std::size_t i = 0; i < arr->size(); ++i) {
            Parsed<T> p;
            p.path = child_path(std::string("/") + section, i);
            try {
                T value = from_json((*arr)[i], p.path, strict);
                auto problems = check(value, p.path);
                if (problems.empty()) p.value = std::move(value);
                else issues.insert(issues.end(), problems.begin(), problems.end());
            } catch (const Error& e) {
                issues.push_back({e.path(), e.code(), e.what()});
            }
            out.push_back(std::move(p));
        }
        return out;
    };

    auto terms = decode(vocab_json, "vocabularies", term_from_json, [](const Term& t, const std::string& path) {
        std::vector<Issue> out;
        if (!is_valid_id(t.id)) out.push_back({path + "/id", ErrorCode::InvariantViolation, "term id must be non-blank"});
        return out;
    });
    auto entities = decode(entities_json, "entities", entity_from_json, check_entity);
    auto events = decode(events_json, "events", event_from_json, check_event_shape);

    std::unique_lock lock(mutex_);

    std::map<TermId, Term> staged_terms;
    std::unordered_map<EntityId, Entity> staged_entities;
    std::vector<EntityId> entity_order;
    std::unordered_map<EventId, Event> staged_events;
    std::vector<EventId> event_order;

    for (auto& p : terms) {
        if (!p.value) continue;
        const Term& t = *p.value;
        const Term* existing = state_.find_term(t.id);
        if (!existing) existing = lookup(staged_terms, t.id);
        if (existing) {
            if (!(*existing == t))
                issues.push_back({p.path, ErrorCode::DuplicateId, "term '" + t.id + "' already exists with different content"});
            continue;
        }
        staged_terms.emplace(t.id, t);
    }

    for (auto& p : entities) {
        if (!p.value) continue;
        Entity e = std::move(*p.value);
        e.provenance = Provenance::imported;
        const Entity* existing = state_.find_base_entity(e.id);
        if (!existing) existing = lookup(staged_entities, e.id);
        if (existing) {
            if (!(*existing == e))
                issues.push_back({p.path, ErrorCode::DuplicateId, "entity '" + e.id + "' already exists with different content"});
            continue;
        }
        entity_order.push_back(e.id);
        staged_entities.emplace(e.id, std::move(e));
    }

    // Effective entity after this ingest: local overlay, then base, then staged.
    auto resolve = [&](const EntityId& id) -> const Entity* {
        if (const Entity* e = state_.find_entity(id)) return e;
        return lookup(staged_entities, id);
    };

    for (auto& p : events) {
        if (!p.value) continue;
        Event e = std::move(*p.value);
        e.provenance = Provenance::imported;
        const Event* existing = state_.find_base_event(e.id);
        if (!existing) existing = lookup(staged_events, e.id);
        if (existing) {
            if (!(*existing == e))
                issues.push_back({p.path, ErrorCode::DuplicateId, "event '" + e.id + "' already exists with different content"});
            continue;
        }
        bool ok = true;
        for (std::size_t i = 0; i < e.participants.size(); ++i) {
            if (!resolve(e.participants[i].entity)) {
                issues.push_back({p.path + "/participants/" + std::to_string(i), ErrorCode::IntegrityError,
                                  "unknown participant entity '" + e.participants[i].entity + "'"});
                ok = false;
            }
        }
        if (e.place) {
            const Entity* place = resolve(*e.place);
            if (!place) {
                issues.push_back({p.path + "/place", ErrorCode::IntegrityError, "unknown place '" + *e.place + "'"});
                ok = false;
            } else if (place->kind != EntityKind::place) {
                issues.push_back({p.path + "/place", ErrorCode::InvariantViolation,
                                  "place '" + *e.place + "' is a " + std::string(to_string(place->kind))});
                ok = false;
            }
        }
        if (!ok) continue;
        event_order.push_back(e.id);
        staged_events.emplace(e.id, std::move(e));
    }

    if (strict && !issues.empty()) throw_first(std::move(issues));

    IngestReport report;
    report.terms_added = staged_terms.size();
    report.entities_added = entity_order.size();
    report.events_added = event_order.size();
    report.errors = std::move(issues);

    for (auto& [id, t] : staged_terms) state_.terms_.emplace(id, std::move(t));
    for (const auto& id : entity_order) state_.put_base_entity(std::move(staged_entities.at(id)));
    for (const auto& id : event_order) state_.put_base_event(std::move(staged_events.at(id)));
    return report;
}

Entity Store::get_entity(const EntityId& id) const {
    std::shared_lock lock(mutex_);
    const Entity* e = state_.find_entity(id);
    if (!e) throw Error(ErrorCode::NotFound, "no entity '" + id + "'");
    return *e;
}

Event Store::get_event(const EventId& id) const {
    std::shared_lock lock(mutex_);
    const Event* e = state_.find_event(id);
    if (!e) throw Error(ErrorCode::NotFound, "no event '" + id + "'");
    return *e;
}

std::vector<Event> Store::list_events(const EntityId& entity, const std::optional<TermId>& kind_filter,
                                      const std::optional<TimeSpan>& time_filter) const {
    std::shared_lock lock(mutex_);
    if (!state_.find_entity(entity)) throw Error(ErrorCode::NotFound, "no entity '" + entity + "'");
    std::vector<Event> out;
    for (const auto& [id, e] : state_.events_of(entity)) {
        if (kind_filter && e->kind != *kind_filter) continue;
        if (time_filter && (!e->span || !e->span->overlaps(*time_filter))) continue;
        out.push_back(*e);
    }
    std::sort(out.begin(), out.end(), event_precedes);
    return out;
}

Entity Store::upsert_local_entity(Entity draft) {
    auto problems = check_entity(draft, "");
    if (!problems.empty()) throw_first(std::move(problems));
    draft.provenance = Provenance::local;

    std::unique_lock lock(mutex_);
    if (draft.kind != EntityKind::place) {
        for (const auto& [ev_id, ev] : state_.events_of(draft.id)) {
            if (ev->place == draft.id)
                throw Error(ErrorCode::InvariantViolation,
                            "entity '" + draft.id + "' is the place of event '" + ev_id + "' and must stay a place",
                            "/kind");
        }
    }
    state_.put_local_entity(draft);
    return draft;
}

void Store::check_local_event(const Event& e) const {
    for (std::size_t i = 0; i < e.participants.size(); ++i)
        if (!state_.find_entity(e.participants[i].entity))
            throw Error(ErrorCode::IntegrityError, "unknown participant entity '" + e.participants[i].entity + "'",
                        "/participants/" + std::to_string(i));
    if (e.place) {
        const Entity* place = state_.find_entity(*e.place);
        if (!place) throw Error(ErrorCode::IntegrityError, "unknown place '" + *e.place + "'", "/place");
        if (place->kind != EntityKind::place)
            throw Error(ErrorCode::InvariantViolation,
                        "place '" + *e.place + "' is a " + std::string(to_string(place->kind)), "/place");
    }
}

Event Store::upsert_local_event(Event draft) {
    auto problems = check_event_shape(draft, "");
    if (!problems.empty()) throw_first(std::move(problems));
    draft.provenance = Provenance::local;

    std::unique_lock lock(mutex_);
    check_local_event(draft);
    state_.put_local_event(draft);
    return draft;
}

void Store::delete_local_entity(const EntityId& id) {
    std::unique_lock lock(mutex_);
    if (!state_.local_entities_.contains(id)) {
        if (state_.find_base_entity(id))
            throw Error(ErrorCode::InvariantViolation, "imported entity '" + id + "' cannot be deleted");
        throw Error(ErrorCode::NotFound, "no local entity '" + id + "'");
    }
    const Entity* base = state_.find_base_entity(id);
    for (const auto& [ev_id, ev] : state_.events_of(id)) {
        if (!base)
            throw Error(ErrorCode::IntegrityError, "entity '" + id + "' is still referenced by event '" + ev_id + "'");
        if (ev->place == id && base->kind != EntityKind::place)
            throw Error(ErrorCode::IntegrityError,
                        "reverting '" + id + "' would leave event '" + ev_id + "' with a non-place place");
    }
    state_.erase_local_entity(id);
}

void Store::delete_local_event(const EventId& id) {
    std::unique_lock lock(mutex_);
    if (!state_.local_events_.contains(id)) {
        if (state_.find_base_event(id))
            throw Error(ErrorCode::InvariantViolation, "imported event '" + id + "' cannot be deleted");
        throw Error(ErrorCode::NotFound, "no local event '" + id + "'");
    }
    if (const Event* base = state_.find_base_event(id)) check_local_event(*base);
    state_.erase_local_event(id);
}

Collection Store::create_collection(std::string label, const std::vector<EntityId>& entity_ids,
                                    const std::vector<EventId>& event_ids, std::optional<std::string> provenance_note) {
    auto dedup = [](const std::vector<std::string>& ids) {
        std::vector<std::string> out;
        std::set<std::string> seen;
        for (const auto& id : ids)
            if (seen.insert(id).second) out.push_back(id);
        return out;
    };

    std::unique_lock lock(mutex_);
    for (std::size_t i = 0; i < entity_ids.size(); ++i)
        if (!state_.find_entity(entity_ids[i]))
            throw Error(ErrorCode::IntegrityError, "unknown entity '" + entity_ids[i] + "'",
                        "/entity_ids/" + std::to_string(i));
    for (std::size_t i = 0; i < event_ids.size(); ++i)
        if (!state_.find_event(event_ids[i]))
            throw Error(ErrorCode::IntegrityError, "unknown event '" + event_ids[i] + "'",
                        "/event_ids/" + std::to_string(i));

    Collection c;
    do {
        c.id = "col-" + std::to_string(state_.next_collection_++);
    } while (state_.collections_.contains(c.id));
    c.label = std::move(label);
    c.entity_ids = dedup(entity_ids);
    c.event_ids = dedup(event_ids);
    c.created_at = clock_();
    c.provenance_note = std::move(provenance_note);
    state_.collections_.emplace(c.id, c);
    return c;
}

Collection Store::get_collection(const CollectionId& id) const {
    std::shared_lock lock(mutex_);
    const Collection* c = state_.find_collection(id);
    if (!c) throw Error(ErrorCode::NotFound, "no collection '" + id + "'");
    return *c;
}

std::vector<Collection> Store::list_collections() const {
    std::shared_lock lock(mutex_);
    std::vector<Collection> out;
    for (const auto& [_, c] : state_.collections_) out.push_back(c);
    return out;
}

ResolvedCollection Store::resolve_collection(const CollectionId& id) const {
    std::shared_lock lock(mutex_);
    const Collection* c = state_.find_collection(id);
    if (!c) throw Error(ErrorCode::NotFound, "no collection '" + id + "'");
    ResolvedCollection out;
    for (std::size_t i = 0; i < c->entity_ids.size(); ++i) {
        const Entity* e = state_.find_entity(c->entity_ids[i]);
        if (!e)
            throw Error(ErrorCode::IntegrityError,
                        "collection '" + id + "' references deleted entity '" + c->entity_ids[i] + "'",
                        "/entity_ids/" + std::to_string(i));
        out.entities.push_back(*e);
    }
    for (std::size_t i = 0; i < c->event_ids.size(); ++i) {
        const Event* e = state_.find_event(c->event_ids[i]);
        if (!e)
            throw Error(ErrorCode::IntegrityError,
                        "collection '" + id + "' references deleted event '" + c->event_ids[i] + "'",
                        "/event_ids/" + std::to_string(i));
        out.events.push_back(*e);
    }
    return out;
}

std::vector<Term> Store::terms() const {
    std::shared_lock lock(mutex_);
    std::vector<Term> out;
    for (const auto& [_, t] : state_.terms_) out.push_back(t);
    return out;
}

json Store::export_local_state() const {
    std::shared_lock lock(mutex_);
    auto sorted_values = [](const auto& map) {
        std::vector<std::string> ids;
        for (const auto& [id, _] : map) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        json arr = json::array();
        for (const auto& id : ids) arr.push_back(to_json(map.at(id)));
        return arr;
    };
    json collections = json::array();
    for (const auto& [_, c] : state_.collections_) collections.push_back(to_json(c));
    return {{"entities", sorted_values(state_.local_entities_)},
            {"events", sorted_values(state_.local_events_)},
            {"collections", collections},
            {"next_collection", state_.next_collection_}};
}

std::vector<Issue> Store::restore_local_state(const json& state) {
    std::vector<Issue> skipped;
    ObjectReader r(state, "", false);
    auto each = [&](const char* key, auto apply) {
        const json* arr = r.optional_array(key);
        if (!arr) return;
        for (std::size_t i = 0; i < arr->size(); ++i) {
            std::string path = child_path(std::string("/") + key, i);
            try {
                apply((*arr)[i], path);
            } catch (const Error& e) {
                std::string where = e.path().rfind(path, 0) == 0 ? e.path() : path + e.path();
                skipped.push_back({where, e.code(), e.what()});
            }
        }
    };
    each("entities", [&](const json& j, const std::string& path) { upsert_local_entity(entity_from_json(j, path)); });
    each("events", [&](const json& j, const std::string& path) { upsert_local_event(event_from_json(j, path)); });
    each("collections", [&](const json& j, const std::string& path) {
        Collection c = collection_from_json(j, path);
        std::unique_lock lock(mutex_);
        state_.collections_.insert_or_assign(c.id, std::move(c));
    });
    if (const json* next = r.find("next_collection"); next && next->is_number_integer() && next->get<std::int64_t>() >= 0) {
        std::unique_lock lock(mutex_);
        state_.next_collection_ = std::max(state_.next_collection_, next->get<std::uint64_t>());
    }
    return skipped;
}

} // namespace chstory
