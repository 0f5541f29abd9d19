#include "support.hpp"

#include "chstory/store/codec.hpp"
#include "chstory/store/store.hpp"

#include "../oracles/generators.hpp"
#include "../oracles/oracles.hpp"

#include <atomic>
#include <thread>

using namespace chstory;
using testing_support::fixture_text;
using testing_support::load_fixture;

namespace {

json fixture_json() { return json::parse(fixture_text()); }

Entity place(std::string id, double lon, double lat) {
    Entity e;
    e.id = std::move(id);
    e.kind = EntityKind::place;
    e.label = e.id;
    e.coordinates = GeoPoint{lon, lat};
    return e;
}

Event event(std::string id, std::vector<EntityId> who, std::optional<EntityId> where = {}) {
    Event e;
    e.id = std::move(id);
    e.kind = "travel";
    for (auto& w : who) e.participants.push_back({std::move(w), "traveller"});
    e.place = std::move(where);
    return e;
}

void check_integrity(const Store& store) {
    store.read([](const StoreState& s) {
        s.for_each_event([&](const Event& ev) {
            for (const auto& p : ev.participants) REQUIRE(s.find_entity(p.entity) != nullptr);
            if (ev.place) {
                const Entity* pl = s.find_entity(*ev.place);
                REQUIRE(pl != nullptr);
                REQUIRE(pl->kind == EntityKind::place);
            }
        });
    });
}

} // namespace

TEST_CASE("fixture ingests in strict mode with counts matching the file") {
    json doc = fixture_json();
    std::size_t persons = 0, places = 0;
    for (const auto& e : doc["entities"]) {
        if (e["kind"] == "person") ++persons;
        if (e["kind"] == "place") {
            ++places;
            CHECK(e.contains("coordinates"));
        }
    }
    CHECK(persons == 1);
    CHECK(places >= 9);
    Store store;
    IngestReport r = store.ingest_dataset(fixture_text(), IngestMode::strict);
    CHECK(r.errors.empty());
    CHECK(r.entities_added == doc["entities"].size());
    CHECK(r.events_added == doc["events"].size());
    CHECK(r.terms_added == doc["vocabularies"].size());
    CHECK(r == IngestReport{10, 14, 5, {}});

    SUBCASE("re-ingest is a no-op") {
        IngestReport again = store.ingest_dataset(fixture_text(), IngestMode::strict);
        CHECK(again == IngestReport{0, 0, 0, {}});
    }
}

TEST_CASE("empty and malformed documents") {
    Store store;
    CHECK(store.ingest_dataset(R"({"entities":[],"events":[],"vocabularies":[]})", IngestMode::strict) ==
          IngestReport{});
    CHECK_THROWS_CODE(store.ingest_dataset("{\"entities\": [", IngestMode::strict), ErrorCode::MalformedDocument);
    CHECK_THROWS_CODE(store.ingest_dataset("[]", IngestMode::strict), ErrorCode::MalformedDocument);
    CHECK_THROWS_CODE(store.ingest_dataset(R"({"entities":[],"events":[],"vocabularies":[],"x":1})", IngestMode::strict),
                      ErrorCode::MalformedDocument);
    CHECK_NOTHROW(store.ingest_dataset(R"({"entities":[],"events":[],"vocabularies":[],"x":1})", IngestMode::lenient));
}

TEST_CASE("dangling references: strict rejects everything, lenient quarantines") {
    json doc = fixture_json();
    doc["events"].push_back({{"id", "EV99"}, {"kind", "travel"}, {"place", "P_missing"},
                             {"participants", {{{"entity", "E_durer"}, {"role", "traveller"}}}}});
    {
        Store store;
        try {
            store.ingest_dataset(doc.dump(), IngestMode::strict);
            FAIL("strict ingest accepted a dangling place");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::IntegrityError);
            CHECK(e.path() == "/events/14/place");
            CHECK(e.details().size() == 1);
        }
        CHECK(store.read([](const StoreState& s) { return s.entity_count() + s.event_count(); }) == 0);
    }
    {
        Store store;
        IngestReport r = store.ingest_dataset(doc.dump(), IngestMode::lenient);
        CHECK(r.entities_added == 10);
        CHECK(r.events_added == 14);
        REQUIRE(r.errors.size() == 1);
        CHECK(r.errors[0].code == ErrorCode::IntegrityError);
        CHECK_THROWS_CODE(store.get_event("EV99"), ErrorCode::NotFound);
        check_integrity(store);
    }
}

TEST_CASE("duplicate ids with different content are rejected") {
    Store store;
    load_fixture(store);
    json doc = fixture_json();
    doc["entities"][0]["label"] = "Someone else";
    CHECK_THROWS_CODE(store.ingest_dataset(doc.dump(), IngestMode::strict), ErrorCode::DuplicateId);
    CHECK(store.get_entity("E_durer").label == "Albrecht Dürer");
    json twice = json::parse(R"({"entities":[{"id":"a","kind":"group","label":"A"},{"id":"a","kind":"group","label":"B"}],"events":[],"vocabularies":[]})");
    Store other;
    CHECK_THROWS_CODE(other.ingest_dataset(twice.dump(), IngestMode::strict), ErrorCode::DuplicateId);
}

TEST_CASE("record invariants are enforced on ingest") {
    Store store;
    auto bad = [&](const char* doc) {
        CHECK_THROWS_CODE(store.ingest_dataset(doc, IngestMode::strict), ErrorCode::InvariantViolation);
    };
    bad(R"({"entities":[{"id":"p","kind":"person","label":"P","coordinates":{"lon":1,"lat":2}}],"events":[],"vocabularies":[]})");
    bad(R"({"entities":[{"id":"p","kind":"place","label":"P","coordinates":{"lon":181,"lat":2}}],"events":[],"vocabularies":[]})");
    bad(R"({"entities":[{"id":"p","kind":"place","label":" "}],"events":[],"vocabularies":[]})");
    bad(R"({"entities":[{"id":"p","kind":"place","label":"P","media":[{"url":"img/x.png","media_kind":"image"}]}],"events":[],"vocabularies":[]})");
    bad(R"({"entities":[{"id":"p","kind":"group","label":"P"}],"events":[{"id":"e","kind":"travel","participants":[]}],"vocabularies":[]})");
    bad(R"({"entities":[{"id":"p","kind":"group","label":"P"}],"events":[{"id":"e","kind":"travel","place":"p","participants":[{"entity":"p","role":"r"}]}],"vocabularies":[]})");
    bad(R"({"entities":[{"id":"p","kind":"group","label":"P"}],"events":[{"id":"e","kind":"travel","span":{"start":{"value":"1521","precision":"year"},"end":{"value":"1520","precision":"year"}},"participants":[{"entity":"p","role":"r"}]}],"vocabularies":[]})");
    CHECK(store.read([](const StoreState& s) { return s.entity_count(); }) == 0);
}

TEST_CASE("get_entity and list_events on the fixture") {
    Store store;
    load_fixture(store);
    Entity durer = store.get_entity("E_durer");
    CHECK(durer.kind == EntityKind::person);
    CHECK(durer.label == "Albrecht Dürer");
    CHECK_THROWS_CODE(store.get_entity("X"), ErrorCode::NotFound);
    CHECK_THROWS_CODE(store.list_events("X"), ErrorCode::NotFound);

    auto all = store.list_events("E_durer");
    json doc = fixture_json();
    std::size_t expected = 0;
    for (const auto& ev : doc["events"])
        for (const auto& p : ev["participants"])
            if (p["entity"] == "E_durer") ++expected;
    CHECK(all.size() == expected);
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(event_precedes(all[i - 1], all[i]));

    TimeSpan journey{CalendarDate::parse("1520"), CalendarDate::parse("1521")};
    auto travel = store.list_events("E_durer", TermId("travel"), journey);
    std::vector<std::string> got;
    for (const auto& e : travel) got.push_back(e.id);
    std::vector<std::string> brute;
    for (const auto& ev : doc["events"]) {
        if (ev["kind"] != "travel") continue;
        Event parsed = event_from_json(ev, "");
        if (parsed.span && oracle::overlaps(*parsed.span, journey)) brute.push_back(parsed.id);
    }
    CHECK(got == brute);
    CHECK(got == std::vector<std::string>{"EV09_antwerp", "EV10_brussels", "EV11_aachen", "EV13_return"});

    CHECK(store.list_events("E_durer", {}, TimeSpan{CalendarDate::parse("1600"), {}}).empty());
    auto venice = store.list_events("P_venice");
    CHECK(venice.size() == 3);
}

TEST_CASE("list_events ordering puts spanless events last") {
    Store store;
    store.ingest_dataset(R"({"vocabularies":[],"entities":[{"id":"g","kind":"group","label":"G"}],"events":[
        {"id":"c","kind":"k","participants":[{"entity":"g","role":"r"}]},
        {"id":"a","kind":"k","participants":[{"entity":"g","role":"r"}]},
        {"id":"b","kind":"k","span":{"start":{"value":"1500","precision":"year"}},"participants":[{"entity":"g","role":"r"}]},
        {"id":"d","kind":"k","span":{"start":{"value":"1500-01-01","precision":"day"}},"participants":[{"entity":"g","role":"r"}]},
        {"id":"e","kind":"k","span":{"start":{"value":"1499-12","precision":"month"}},"participants":[{"entity":"g","role":"r"}]}]})",
                         IngestMode::strict);
    std::vector<std::string> ids;
    for (const auto& e : store.list_events("g")) ids.push_back(e.id);
    CHECK(ids == std::vector<std::string>{"e", "b", "d", "a", "c"});
}

TEST_CASE("local overlays win and survive re-ingest") {
    Store store;
    load_fixture(store);
    Entity edited = store.get_entity("E_durer");
    edited.label = "A. Dürer";
    Entity stored = store.upsert_local_entity(edited);
    CHECK(stored.provenance == Provenance::local);
    CHECK(store.get_entity("E_durer").label == "A. Dürer");
    store.ingest_dataset(fixture_text(), IngestMode::strict);
    CHECK(store.get_entity("E_durer").label == "A. Dürer");
    CHECK(store.read([](const StoreState& s) { return s.find_base_entity("E_durer")->label; }) == "Albrecht Dürer");

    store.upsert_local_entity(place("P_new", 4.40, 51.22));
    CHECK(store.get_entity("P_new").coordinates == GeoPoint{4.40, 51.22});

    Entity person = store.get_entity("E_durer");
    person.coordinates = GeoPoint{1, 1};
    CHECK_THROWS_CODE(store.upsert_local_entity(person), ErrorCode::InvariantViolation);

    Entity demote = store.get_entity("P_venice");
    demote.kind = EntityKind::group;
    demote.coordinates.reset();
    CHECK_THROWS_CODE(store.upsert_local_entity(demote), ErrorCode::InvariantViolation);
    check_integrity(store);

    store.delete_local_entity("E_durer");
    CHECK(store.get_entity("E_durer").label == "Albrecht Dürer");
    CHECK_THROWS_CODE(store.delete_local_entity("E_durer"), ErrorCode::InvariantViolation);
    CHECK_THROWS_CODE(store.delete_local_entity("nope"), ErrorCode::NotFound);
}

TEST_CASE("local events are checked for integrity") {
    Store store;
    load_fixture(store);
    Event ok = event("L1", {"E_durer"}, "P_antwerp");
    CHECK(store.upsert_local_event(ok).provenance == Provenance::local);
    CHECK(store.get_event("L1").place == EntityId("P_antwerp"));
    CHECK_THROWS_CODE(store.upsert_local_event(event("L2", {})), ErrorCode::InvariantViolation);
    CHECK_THROWS_CODE(store.upsert_local_event(event("L3", {"E_durer"}, "E_durer")), ErrorCode::InvariantViolation);
    CHECK_THROWS_CODE(store.upsert_local_event(event("L4", {"ghost"})), ErrorCode::IntegrityError);
    CHECK_THROWS_CODE(store.get_event("L2"), ErrorCode::NotFound);

    store.upsert_local_entity(place("P_tmp", 1, 1));
    store.upsert_local_event(event("L5", {"E_durer"}, "P_tmp"));
    CHECK_THROWS_CODE(store.delete_local_entity("P_tmp"), ErrorCode::IntegrityError);
    store.delete_local_event("L5");
    CHECK_NOTHROW(store.delete_local_entity("P_tmp"));
    check_integrity(store);
}

TEST_CASE("collections preserve order, drop duplicates and report deleted members") {
    Store store;
    load_fixture(store);
    std::vector<EventId> all_events;
    const json fixture = fixture_json();
    for (const auto& ev : fixture["events"]) all_events.push_back(ev["id"]);
    Collection c = store.create_collection("Dürer journeys", {"E_durer"}, all_events);
    CHECK(c.entity_ids.size() == 1);
    CHECK(c.event_ids == all_events);
    auto resolved = store.resolve_collection(c.id);
    CHECK(resolved.entities.size() == 1);
    CHECK(resolved.events.size() == 14);

    Collection dup = store.create_collection("dup", {"P_venice", "E_durer", "P_venice"}, {"EV02_innsbruck", "EV02_innsbruck"});
    CHECK(dup.entity_ids == std::vector<EntityId>{"P_venice", "E_durer"});
    CHECK(dup.event_ids.size() == 1);
    CHECK(dup.id != c.id);

    Collection empty = store.create_collection("empty", {}, {});
    auto none = store.resolve_collection(empty.id);
    CHECK(none.entities.empty());
    CHECK(none.events.empty());

    try {
        store.create_collection("bad", {"E_durer"}, {"EV01_birth", "nope"});
        FAIL("unknown id accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IntegrityError);
        CHECK(e.path() == "/event_ids/1");
    }

    store.upsert_local_event(event("L1", {"E_durer"}));
    Collection with_local = store.create_collection("local", {}, {"L1"});
    store.delete_local_event("L1");
    try {
        store.resolve_collection(with_local.id);
        FAIL("deleted member silently dropped");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IntegrityError);
        CHECK(std::string(e.what()).find("L1") != std::string::npos);
    }
    CHECK_THROWS_CODE(store.resolve_collection("col-999"), ErrorCode::NotFound);
}

TEST_CASE("local state export and restore") {
    Store a;
    load_fixture(a);
    a.set_clock([] { return parse_timestamp("2024-05-01T10:00:00Z"); });
    Entity e = a.get_entity("E_durer");
    e.label = "Edited";
    a.upsert_local_entity(e);
    a.upsert_local_entity(place("P_new", 3, 4));
    a.upsert_local_event(event("L1", {"E_durer"}, "P_new"));
    a.upsert_local_event(event("L2", {"E_durer"}, "P_venice"));
    Collection c = a.create_collection("c", {"E_durer"}, {"L1"});
    json state = a.export_local_state();

    Store b;
    load_fixture(b);
    CHECK(b.restore_local_state(state).empty());
    CHECK(b.get_entity("E_durer").label == "Edited");
    CHECK(b.get_event("L1").place == EntityId("P_new"));
    CHECK(b.get_collection(c.id) == c);
    CHECK(b.export_local_state() == state);
    Collection next = b.create_collection("next", {}, {});
    CHECK(next.id != c.id);

    Store bare;
    auto issues = bare.restore_local_state(state);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == ErrorCode::IntegrityError);
    CHECK(issues[0].path.rfind("/events/", 0) == 0);
    CHECK(bare.get_event("L1").place == EntityId("P_new"));
    CHECK_THROWS_CODE(bare.get_event("L2"), ErrorCode::NotFound);
    check_integrity(bare);
}

TEST_CASE("random datasets keep referential integrity under lenient ingest") {
    gen::Rng rng(11);
    for (int round = 0; round < 20; ++round) {
        json doc = gen::random_dataset(rng, 30, 60);
        // break some references
        for (auto& ev : doc["events"])
            if (gen::coin(rng, 0.1)) ev["participants"][0]["entity"] = "missing";
        Store store;
        IngestReport r = store.ingest_dataset(doc.dump(), IngestMode::lenient);
        CHECK(r.entities_added == 30);
        CHECK(r.events_added + r.errors.size() == 60);
        check_integrity(store);
        if (!r.errors.empty()) CHECK_THROWS_CODE(Store().ingest_dataset(doc.dump(), IngestMode::strict), ErrorCode::IntegrityError);
    }
}

TEST_CASE("readers never observe a partial ingest") {
    gen::Rng rng(5);
    json doc = gen::random_dataset(rng, 400, 4000);
    std::string text = doc.dump();
    Store store;
    std::atomic<bool> done{false};
    std::atomic<int> bad{0};
    std::thread reader([&] {
        while (!done) {
            auto [n, m] = store.read([](const StoreState& s) { return std::pair(s.entity_count(), s.event_count()); });
            if (!((n == 0 && m == 0) || (n == 400 && m == 4000))) ++bad;
        }
    });
    store.ingest_dataset(text, IngestMode::strict);
    done = true;
    reader.join();
    CHECK(bad == 0);
}
