#include "chstory/query/query.hpp"

#include "chstory/store/codec.hpp"
#include "chstory/text.hpp"

#include <algorithm>
#include <map>

namespace chstory::query {

namespace {

void validate(const QueryConstraints& c) {
    if (c.active_between && !c.active_between->well_ordered())
        throw Error(ErrorCode::InvalidConstraint, "active_between ends before it starts", "/active_between");
}

bool has_attribute(const Entity& e, const TermId& term, const std::string& value) {
    auto it = e.attributes.find(term);
    return it != e.attributes.end() && std::find(it->second.begin(), it->second.end(), value) != it->second.end();
}

/// Participants of events located at `place`.
std::set<EntityId> visitors_of(const StoreState& state, const EntityId& place) {
    std::set<EntityId> out;
    for (const auto& [ev_id, ev] : state.events_of(place)) {
        if (ev->place != place) continue;
        for (const auto& p : ev->participants) out.insert(p.entity);
    }
    return out;
}

std::vector<const Entity*> matching(const StoreState& state, const QueryConstraints& c) {
    validate(c);
    std::optional<std::string> needle;
    if (c.name_contains) needle = text::fold_case(*c.name_contains);
    std::optional<std::set<EntityId>> visitors;
    if (c.related_place) visitors = visitors_of(state, *c.related_place);

    std::vector<std::pair<const std::string*, const Entity*>> keyed;
    state.for_each_entity([&](const Entity& e) {
        if (c.kinds && !c.kinds->contains(e.kind)) return;
        const std::string& folded = state.folded_label(e.id);
        if (needle && folded.find(*needle) == std::string::npos) return;
        for (const auto& [term, value] : c.attribute_equals)
            if (!has_attribute(e, term, value)) return;
        if (visitors && !visitors->contains(e.id)) return;
        if (c.active_between) {
            bool active = false;
            for (const auto& [ev_id, ev] : state.events_of(e.id)) {
                if (ev->span && ev->span->overlaps(*c.active_between)) {
                    active = true;
                    break;
                }
            }
            if (!active) return;
        }
        keyed.emplace_back(&folded, &e);
    });
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        if (int cmp = a.first->compare(*b.first); cmp != 0) return cmp < 0;
        return a.second->id < b.second->id;
    });
    std::vector<const Entity*> out;
    out.reserve(keyed.size());
    for (const auto& [label, e] : keyed) out.push_back(e);
    return out;
}

int decade_of(int year) {
    int d = year / 10;
    if (year % 10 != 0 && year < 0) --d;
    return d * 10;
}

} // namespace

Facet Facet::parse(std::string_view key) {
    if (key == "entity_kind") return {Kind::entity_kind, {}};
    if (key == "event_kind") return {Kind::event_kind, {}};
    if (key == "decade_of_activity") return {Kind::decade_of_activity, {}};
    constexpr std::string_view prefix = "attribute:";
    if (key.substr(0, prefix.size()) == prefix && key.size() > prefix.size())
        return {Kind::attribute, std::string(key.substr(prefix.size()))};
    throw Error(ErrorCode::InvalidConstraint, "unknown facet '" + std::string(key) + "'");
}

std::string Facet::key() const {
    switch (kind) {
    case Kind::entity_kind: return "entity_kind";
    case Kind::event_kind: return "event_kind";
    case Kind::decade_of_activity: return "decade_of_activity";
    case Kind::attribute: return "attribute:" + term;
    }
    return "entity_kind";
}

ResultPage search_entities(const StoreState& state, const QueryConstraints& c, std::size_t offset,
                           std::size_t limit) {
    if (limit < 1 || limit > kMaxPageSize)
        throw Error(ErrorCode::InvalidConstraint, "limit must be within [1, 500]", "/limit");
    auto matches = matching(state, c);
    ResultPage page;
    page.total = matches.size();
    page.offset = offset;
    page.limit = limit;
    for (std::size_t i = offset; i < matches.size() && page.items.size() < limit; ++i)
        page.items.push_back({matches[i]->id, matches[i]->label, matches[i]->kind});
    return page;
}

Histogram facet_histogram(const StoreState& state, const QueryConstraints& c, const Facet& facet) {
    auto matches = matching(state, c);
    Histogram h;
    h.facet = facet.key();
    h.total_matched = matches.size();

    if (facet.kind == Facet::Kind::decade_of_activity) {
        std::map<int, std::size_t> counts;
        std::vector<int> decades;
        for (const Entity* e : matches) {
            decades.clear();
            for (const auto& [ev_id, ev] : state.events_of(e->id))
                if (ev->span) decades.push_back(decade_of(ev->span->start.year()));
            std::sort(decades.begin(), decades.end());
            decades.erase(std::unique(decades.begin(), decades.end()), decades.end());
            for (int d : decades) ++counts[d];
        }
        if (!counts.empty())
            for (int d = counts.begin()->first; d <= counts.rbegin()->first; d += 10) {
                auto it = counts.find(d);
                h.bins.push_back({std::to_string(d), it == counts.end() ? 0 : it->second});
            }
        return h;
    }

    std::map<std::string, std::size_t, std::less<>> counts;
    std::vector<std::string_view> kinds;
    for (const Entity* e : matches) {
        switch (facet.kind) {
        case Facet::Kind::entity_kind: ++counts[std::string(to_string(e->kind))]; break;
        case Facet::Kind::event_kind: {
            kinds.clear();
            for (const auto& [ev_id, ev] : state.events_of(e->id)) kinds.push_back(ev->kind);
            std::sort(kinds.begin(), kinds.end());
            kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
            for (auto k : kinds) {
                auto it = counts.find(k);
                if (it == counts.end()) counts.emplace(std::string(k), 1);
                else ++it->second;
            }
            break;
        }
        case Facet::Kind::attribute: {
            auto it = e->attributes.find(facet.term);
            if (it == e->attributes.end()) break;
            std::set<std::string> values(it->second.begin(), it->second.end());
            for (const auto& v : values) ++counts[v];
            break;
        }
        case Facet::Kind::decade_of_activity: break;
        }
    }
    for (const auto& [label, count] : counts) h.bins.push_back({label, count});
    std::stable_sort(h.bins.begin(), h.bins.end(),
                     [](const HistogramBin& a, const HistogramBin& b) { return a.count > b.count; });
    return h;
}

std::vector<RelatedEntity> related_entities(const StoreState& state, const EntityId& id, int max_hops) {
    if (max_hops != 1) throw Error(ErrorCode::InvalidConstraint, "only max_hops = 1 is supported", "/max_hops");
    if (!state.find_entity(id)) throw Error(ErrorCode::NotFound, "no entity '" + id + "'");
    std::map<EntityId, EventId> witness;
    // events_of is ordered by id, so the first witness seen is the lowest.
    for (const auto& [ev_id, ev] : state.events_of(id)) {
        for (const auto& other : ev->referenced_entities())
            if (other != id) witness.emplace(other, ev_id);
    }
    std::vector<RelatedEntity> out;
    for (auto& [other, via] : witness) out.push_back({other, via});
    std::sort(out.begin(), out.end(), [&](const RelatedEntity& a, const RelatedEntity& b) {
        const auto& la = state.folded_label(a.id);
        const auto& lb = state.folded_label(b.id);
        if (la != lb) return la < lb;
        return a.id < b.id;
    });
    return out;
}

ResultPage search_entities(const Store& store, const QueryConstraints& c, std::size_t offset, std::size_t limit) {
    return store.read([&](const StoreState& s) { return search_entities(s, c, offset, limit); });
}

Histogram facet_histogram(const Store& store, const QueryConstraints& c, const Facet& facet) {
    return store.read([&](const StoreState& s) { return facet_histogram(s, c, facet); });
}

std::vector<RelatedEntity> related_entities(const Store& store, const EntityId& id, int max_hops) {
    return store.read([&](const StoreState& s) { return related_entities(s, id, max_hops); });
}

QueryConstraints constraints_from_json(const json& j) {
    try {
        QueryConstraints c;
        ObjectReader r(j, "", true);
        c.name_contains = r.optional_string("name_contains");
        if (const json* kinds = r.optional_array("kinds")) {
            c.kinds.emplace();
            for (std::size_t i = 0; i < kinds->size(); ++i) {
                const json& k = (*kinds)[i];
                auto parsed = k.is_string() ? parse_entity_kind(k.get<std::string>()) : std::nullopt;
                if (!parsed)
                    throw Error(ErrorCode::InvalidConstraint, "unknown entity kind", child_path("/kinds", i));
                c.kinds->insert(*parsed);
            }
        }
        if (const json* attrs = r.optional_array("attribute_equals")) {
            for (std::size_t i = 0; i < attrs->size(); ++i) {
                ObjectReader a((*attrs)[i], child_path("/attribute_equals", i), true);
                c.attribute_equals.emplace_back(a.string("term"), a.string("value"));
                a.finish();
            }
        }
        if (const json* span = r.optional_object("active_between"))
            c.active_between = span_from_json(*span, "/active_between");
        c.related_place = r.optional_string("related_place");
        r.finish();
        validate(c);
        return c;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConstraint) throw;
        throw Error(ErrorCode::InvalidConstraint, e.what(), e.path());
    }
}

json to_json(const QueryConstraints& c) {
    json j = json::object();
    if (c.name_contains) j["name_contains"] = *c.name_contains;
    if (c.kinds) {
        j["kinds"] = json::array();
        for (EntityKind k : *c.kinds) j["kinds"].push_back(std::string(to_string(k)));
    }
    if (!c.attribute_equals.empty()) {
        j["attribute_equals"] = json::array();
        for (const auto& [term, value] : c.attribute_equals)
            j["attribute_equals"].push_back({{"term", term}, {"value", value}});
    }
    if (c.active_between) j["active_between"] = chstory::to_json(*c.active_between);
    if (c.related_place) j["related_place"] = *c.related_place;
    return j;
}

json to_json(const ResultPage& page) {
    json items = json::array();
    for (const auto& it : page.items)
        items.push_back({{"id", it.id}, {"label", it.label}, {"kind", std::string(to_string(it.kind))}});
    return {{"items", items}, {"total", page.total}, {"offset", page.offset}, {"limit", page.limit}};
}

json to_json(const Histogram& h) {
    json bins = json::array();
    for (const auto& b : h.bins) bins.push_back({{"label", b.label}, {"count", b.count}});
    return {{"facet", h.facet}, {"bins", bins}, {"total_matched", h.total_matched}};
}

json to_json(const std::vector<RelatedEntity>& related) {
    json arr = json::array();
    for (const auto& r : related) arr.push_back({{"id", r.id}, {"via", r.via}});
    return arr;
}

} // namespace chstory::query
