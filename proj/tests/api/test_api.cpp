#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "../unit/support.hpp"

#include "chstory/api/errors.hpp"
#include "chstory/api/files.hpp"
#include "chstory/api/http.hpp"
#include "chstory/api/repository.hpp"
#include "chstory/api/service.hpp"
#include "chstory/story/codec.hpp"
#include "chstory/story/editor.hpp"

#include <httplib.h>

#include <chrono>
#include <memory>
#include <thread>

using namespace chstory;
using namespace chstory::api;
using testing_support::fixture_path;
using testing_support::TempDir;

namespace fs = std::filesystem;

namespace {

/// Service plus an HTTP server on an ephemeral loopback port.
class Running {
public:
    explicit Running(const fs::path& persist, HttpOptions options = {})
        : service_(ServiceConfig{{fixture_path()}, persist, IngestMode::strict, 42}) {
        install_routes(server_, service_, options);
        port_ = server_.bind_to_any_port("127.0.0.1");
        REQUIRE(port_ > 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    }
    ~Running() {
        server_.stop();
        thread_.join();
    }
    httplib::Client& http() { return *client_; }
    Service& service() { return service_; }

private:
    Service service_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::unique_ptr<httplib::Client> client_;
};

json body_of(const httplib::Result& r) {
    REQUIRE(r);
    return json::parse(r->body);
}

story::StoryDocument small_story(const std::string& id, std::size_t slides) {
    story::StoryDocument d;
    d.id = id;
    d.title = "Story " + id;
    for (std::size_t i = 0; i < slides; ++i) {
        story::Slide s;
        s.id = id + "-s" + std::to_string(i);
        s.layout = story::LayoutId::CONTENT_ONLY;
        d.slides.push_back(s);
    }
    return d;
}

} // namespace

TEST_CASE("error mapping is total and unique") {
    std::set<std::string> seen;
    for (ErrorCode c : kAllErrorCodes) {
        ApiError e = api_error_for(c);
        CHECK(seen.insert(e.code).second);
        CHECK(e.code == to_string(c));
        CHECK(e.status >= 400);
        CHECK(e.status < 600);
    }
    CHECK(api_error_for(ErrorCode::NotFound).status == 404);
    CHECK(api_error_for(ErrorCode::VersionConflict).status == 409);
    CHECK(api_error_for(ErrorCode::InvalidStory).status == 422);
    CHECK(api_error_for(ErrorCode::StorageCorrupt).status == 500);
    CHECK(api_error_for(ErrorCode::MalformedDocument).status == 400);
    CHECK(api_error_for(ErrorCode::PaneCount).code == "E_PANE_COUNT");

    Error e(ErrorCode::InvalidStory, "bad", "/slides/0", {{"/slides/0", ErrorCode::PaneCount, "three panes"}});
    json b = error_body(e);
    CHECK(b["status"] == 422);
    CHECK(b["code"] == "InvalidStory");
    CHECK(b["path"] == "/slides/0");
    CHECK(b["details"][0]["code"] == "E_PANE_COUNT");
}

TEST_CASE("atomic file writes") {
    TempDir dir;
    fs::path p = dir.path() / "a.json";
    write_file_atomically(p, "one");
    write_file_atomically(p, "two");
    CHECK(read_file(p) == "two");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++entries;
    CHECK(entries == 1);
    CHECK_THROWS_CODE(read_file(dir.path() / "missing"), ErrorCode::StorageCorrupt);
}

TEST_CASE("interrupted writes are cleaned up when a repository opens") {
    TempDir dir;
    write_file_atomically(dir.path() / "kept.json", "{}");
    write_file_atomically(dir.path() / "kept.json.tmp-99-0", "{\"half");
    write_file_atomically(dir.path() / "other.json.tmp-99-1", "");
    StoryRepository repo(dir.path());
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir.path())) names.push_back(e.path().filename().string());
    CHECK(names == std::vector<std::string>{"kept.json"});
    CHECK(remove_stale_temporaries(dir.path()) == 0);
    CHECK(remove_stale_temporaries(dir.path() / "absent") == 0);
}

TEST_CASE("repository compare-and-set and listing") {
    TempDir dir;
    StoryRepository repo(dir.path());
    CHECK(repo.list().empty());
    CHECK(is_valid_story_id("story-abc_1"));
    CHECK_FALSE(is_valid_story_id("../etc"));
    CHECK_FALSE(is_valid_story_id(""));
    CHECK_FALSE(is_valid_story_id(std::string(129, 'a')));

    auto created = repo.create(small_story("b", 2));
    CHECK(created.document.version == 1);
    CHECK(created.bytes == story::export_story(created.document));
    CHECK_THROWS_CODE(repo.create(small_story("b", 0)), ErrorCode::AlreadyExists);
    CHECK_THROWS_CODE(repo.create(small_story("../x", 0)), ErrorCode::MalformedDocument);

    auto saved = repo.save(small_story("b", 3), 1);
    CHECK(saved.document.version == 2);
    CHECK(repo.load("b").document == saved.document);
    CHECK_THROWS_CODE(repo.save(small_story("b", 1), 1), ErrorCode::VersionConflict);
    CHECK(repo.load("b").document.slides.size() == 3);
    CHECK_THROWS_CODE(repo.save(small_story("nope", 1), 1), ErrorCode::NotFound);
    auto invalid = small_story("b", 1);
    invalid.slides[0].panes.resize(3);
    CHECK_THROWS_CODE(repo.save(invalid, 2), ErrorCode::InvalidStory);
    CHECK(repo.load("b").document.version == 2);

    repo.create(small_story("a", 1));
    repo.create(small_story("c", 0));
    auto t0 = fs::file_time_type::clock::now();
    fs::last_write_time(dir.path() / "a.json", t0 - std::chrono::hours(2));
    fs::last_write_time(dir.path() / "b.json", t0 - std::chrono::hours(1));
    fs::last_write_time(dir.path() / "c.json", t0 - std::chrono::hours(1));
    auto listed = repo.list();
    REQUIRE(listed.size() == 3);
    CHECK(listed[0].story_id == "b");
    CHECK(listed[1].story_id == "c");
    CHECK(listed[2].story_id == "a");
    CHECK(listed[0].slide_count == 3);
    CHECK(listed[0].updated_at == listed[1].updated_at);

    write_file_atomically(dir.path() / "c.json", "{\"schema_version\":");
    CHECK_THROWS_CODE(repo.load("c"), ErrorCode::StorageCorrupt);
    CHECK(repo.list().size() == 2);
    repo.remove("a");
    CHECK_THROWS_CODE(repo.load("a"), ErrorCode::NotFound);
    CHECK_THROWS_CODE(repo.remove("a"), ErrorCode::NotFound);
}

TEST_CASE("service persists local records and stories across restarts") {
    TempDir dir;
    std::string story_id, collection_id;
    {
        Service svc(ServiceConfig{{fixture_path()}, dir.path(), IngestMode::strict, 1});
        REQUIRE(svc.ingest_reports().size() == 1);
        CHECK(svc.ingest_reports()[0].entities_added == 10);
        svc.upsert_entity({{"id", "P_new"}, {"kind", "place"}, {"label", "New"}, {"coordinates", {{"lon", 1}, {"lat", 2}}}});
        json c = svc.create_collection({{"label", "D"}, {"entity_ids", {"E_durer"}}});
        collection_id = c["id"];
        auto created = svc.create_story({{"title", "Dürer"}, {"collection_ref", collection_id}});
        story_id = created.body["id"];
        auto r = svc.apply_story_operation(story_id, {{"op", "add_slide"}, {"layout", "VIZ_ONLY"}}, 1);
        CHECK(r.version == 2);
        CHECK_THROWS_CODE(svc.apply_story_operation(story_id, {{"op", "add_slide"}, {"layout", "VIZ_ONLY"}}, 1),
                          ErrorCode::VersionConflict);
        CHECK_THROWS_CODE(svc.create_story({{"collection_ref", "col-404"}}), ErrorCode::NotFound);
    }
    Service again(ServiceConfig{{fixture_path()}, dir.path(), IngestMode::strict, 2});
    CHECK(again.restore_issues().empty());
    CHECK(again.store().get_entity("P_new").label == "New");
    CHECK(again.store().get_collection(collection_id).entity_ids == std::vector<EntityId>{"E_durer"});
    auto loaded = again.get_story(story_id);
    CHECK(loaded.version == 2);
    CHECK(loaded.body["slides"].size() == 1);
    CHECK(again.list_stories().size() == 1);

    CHECK_THROWS_CODE(Service(ServiceConfig{{dir.path() / "missing.json"}, dir.path(), IngestMode::strict, 3}),
                      ErrorCode::NotFound);
}

TEST_CASE("http: data endpoints") {
    TempDir dir;
    Running run(dir.path());
    auto& cli = run.http();

    CHECK(body_of(cli.Get("/api/health"))["status"] == "ok");
    json page = body_of(cli.Get("/api/entities"));
    CHECK(page["total"] == 10);
    CHECK(page["limit"] == 50);
    CHECK(body_of(cli.Get("/api/entities?offset=8&limit=5"))["items"].size() == 2);
    auto bad_limit = cli.Get("/api/entities?limit=0");
    CHECK(bad_limit->status == 400);
    CHECK(body_of(bad_limit)["code"] == "InvalidConstraint");

    auto search = cli.Post("/api/entities/search", R"({"name_contains":"dür"})", "application/json");
    CHECK(body_of(search)["items"][0]["id"] == "E_durer");
    auto bad_search = cli.Post("/api/entities/search", R"({"colour":"red"})", "application/json");
    CHECK(bad_search->status == 400);
    CHECK(body_of(bad_search)["code"] == "InvalidConstraint");

    CHECK(body_of(cli.Get("/api/entities/E_durer"))["label"] == "Albrecht Dürer");
    auto missing = cli.Get("/api/entities/nobody");
    CHECK(missing->status == 404);
    CHECK(body_of(missing)["code"] == "NotFound");

    json events = body_of(cli.Get("/api/entities/E_durer/events?kind=travel&from=1520&to=1521"));
    std::vector<std::string> ids;
    for (const auto& e : events) ids.push_back(e["id"]);
    CHECK(ids == std::vector<std::string>{"EV09_antwerp", "EV10_brussels", "EV11_aachen", "EV13_return"});
    CHECK(body_of(cli.Get("/api/entities/E_durer/events")).size() == 14);
    CHECK(cli.Get("/api/entities/E_durer/events?from=1521&to=1520")->status == 400);
    CHECK(body_of(cli.Get("/api/entities/E_durer/related")).size() == 9);

    json hist = body_of(cli.Get("/api/facets/entity_kind"));
    CHECK(hist["bins"][0] == json({{"label", "place"}, {"count", 9}}));
    std::string c = httplib::detail::encode_query_param(R"({"kinds":["person"]})");
    CHECK(body_of(cli.Get(("/api/facets/event_kind?constraints=" + c).c_str()))["total_matched"] == 1);
    CHECK(cli.Get("/api/facets/colour")->status == 400);
    CHECK(body_of(cli.Get("/api/events/EV01_birth"))["kind"] == "birth");
    CHECK(body_of(cli.Get("/api/terms")).size() >= 5);
    CHECK(body_of(cli.Get("/api/layouts")).size() == 6);

    auto up = cli.Post("/api/events",
                       R"({"id":"L1","kind":"travel","participants":[{"entity":"E_durer","role":"traveller"}],"place":"P_venice"})",
                       "application/json");
    CHECK(up->status == 200);
    CHECK(body_of(up)["provenance"] == "local");
    auto dangling = cli.Post("/api/events", R"({"id":"L2","kind":"travel","participants":[{"entity":"ghost","role":"x"}]})",
                             "application/json");
    CHECK(dangling->status == 422);
    CHECK(body_of(dangling)["code"] == "IntegrityError");
    auto malformed = cli.Post("/api/entities", "{not json", "application/json");
    CHECK(malformed->status == 400);
    CHECK(body_of(malformed)["code"] == "MalformedDocument");

    auto col = cli.Post("/api/collections", R"({"label":"Trip","entity_ids":["E_durer"],"event_ids":["L1"]})",
                        "application/json");
    CHECK(col->status == 201);
    std::string col_id = body_of(col)["id"];
    json resolved = body_of(cli.Get(("/api/collections/" + col_id + "/resolve").c_str()));
    CHECK(resolved["entities"].size() == 1);
    CHECK(resolved["events"].size() == 1);
    CHECK(body_of(cli.Get("/api/collections")).size() == 1);
    CHECK(cli.Delete("/api/events/L1")->status == 204);
    auto broken = cli.Get(("/api/collections/" + col_id + "/resolve").c_str());
    CHECK(broken->status == 422);
    CHECK(cli.Delete("/api/events/EV01_birth")->status == 422);
    CHECK(cli.Delete("/api/events/never")->status == 404);

    auto unknown = cli.Get("/api/nothing/here");
    CHECK(unknown->status == 404);
    CHECK(body_of(unknown)["code"] == "NotFound");
}

TEST_CASE("http: story lifecycle") {
    TempDir dir;
    Running run(dir.path());
    auto& cli = run.http();

    CHECK(body_of(cli.Get("/api/stories")).empty());
    auto created = cli.Post("/api/stories", R"({"title":"Dürer"})", "application/json");
    REQUIRE(created->status == 201);
    CHECK(created->get_header_value("ETag") == "\"1\"");
    json doc = body_of(created);
    std::string id = doc["id"];
    std::string path = "/api/stories/" + id;

    auto op = cli.Post((path + "/ops").c_str(), httplib::Headers{{"If-Match", "\"1\""}},
                       R"({"op":"add_slide","layout":"SPLIT_VIZ_LEFT"})", "application/json");
    REQUIRE(op->status == 200);
    CHECK(op->get_header_value("ETag") == "\"2\"");
    json op_body = body_of(op);
    std::string slide = op_body["result"]["slide"]["id"];
    CHECK(op_body["story"]["version"] == 2);

    auto stale_op = cli.Post((path + "/ops").c_str(), httplib::Headers{{"If-Match", "\"1\""}},
                             R"({"op":"delete_slide","slide_id":")" + slide + "\"}", "application/json");
    CHECK(stale_op->status == 409);
    CHECK(body_of(stale_op)["code"] == "VersionConflict");
    auto bad_op = cli.Post((path + "/ops").c_str(), R"({"op":"set_layout","slide_id":"nope","layout":"VIZ_ONLY"})",
                           "application/json");
    CHECK(bad_op->status == 404);

    auto got = cli.Get(path.c_str());
    CHECK(got->get_header_value("ETag") == "\"2\"");
    json current = body_of(got);
    current["title"] = "Dürer, revised";
    auto put = cli.Put(path.c_str(), httplib::Headers{{"If-Match", "W/\"2\""}}, current.dump(), "application/json");
    REQUIRE(put->status == 200);
    CHECK(body_of(put)["version"] == 3);
    auto stale = cli.Put(path.c_str(), httplib::Headers{{"If-Match", "\"2\""}}, current.dump(), "application/json");
    CHECK(stale->status == 409);
    auto by_query = cli.Put((path + "?expected_version=3").c_str(), current.dump(), "application/json");
    CHECK(by_query->status == 200);
    CHECK(body_of(by_query)["version"] == 4);

    json invalid = body_of(cli.Get(path.c_str()));
    invalid["slides"][0]["panes"] = json::array({{{"chunks", json::array()}}, {{"chunks", json::array()}}, {{"chunks", json::array()}}});
    auto rejected = cli.Put(path.c_str(), invalid.dump(), "application/json");
    CHECK(rejected->status == 422);
    json err = body_of(rejected);
    CHECK(err["code"] == "InvalidStory");
    CHECK(err["details"][0]["code"] == "E_PANE_COUNT");
    json other = body_of(cli.Get(path.c_str()));
    other["id"] = "someone-else";
    CHECK(cli.Put(path.c_str(), other.dump(), "application/json")->status == 400);

    auto exported = cli.Get((path + "/export").c_str());
    REQUIRE(exported->status == 200);
    CHECK(exported->get_header_value("Content-Type") == "application/json");
    CHECK(exported->body == run.service().export_story(id));
    CHECK(cli.Get(("/api/view/" + id).c_str())->body == exported->body);

    json validation = body_of(cli.Get((path + "/validate").c_str()));
    CHECK(validation["violations"].empty());
    CHECK(validation["warnings"].empty());

    auto dup = cli.Post("/api/stories/import", exported->body, "application/json");
    CHECK(dup->status == 409);
    CHECK(body_of(dup)["code"] == "AlreadyExists");
    auto remapped = cli.Post("/api/stories/import?id_policy=remap", exported->body, "application/json");
    REQUIRE(remapped->status == 201);
    CHECK(body_of(remapped)["id"] != id);
    CHECK(cli.Post("/api/stories/import?id_policy=bogus", exported->body, "application/json")->status == 400);
    json v9 = json::parse(exported->body);
    v9["schema_version"] = "intavia-story/9";
    v9["id"] = "v9";
    auto schema = cli.Post("/api/stories/import", v9.dump(), "application/json");
    CHECK(schema->status == 422);
    CHECK(body_of(schema)["code"] == "E_SCHEMA_VERSION");
    auto truncated = cli.Post("/api/stories/import", exported->body.substr(0, 20), "application/json");
    CHECK(truncated->status == 400);

    json listed = body_of(cli.Get("/api/stories"));
    REQUIRE(listed.size() == 2);
    for (const auto& s : listed) CHECK(s["slide_count"] == 1);

    CHECK(cli.Delete(path.c_str())->status == 204);
    CHECK(cli.Get(path.c_str())->status == 404);
    CHECK(cli.Get((path + "/export").c_str())->status == 404);
}

TEST_CASE("http: corrupt story file yields 500 and the service stays up") {
    TempDir dir;
    Running run(dir.path());
    auto& cli = run.http();
    auto created = cli.Post("/api/stories", R"({"title":"x"})", "application/json");
    std::string id = body_of(created)["id"];
    write_file_atomically(dir.path() / "stories" / (id + ".json"), "{\"truncated\":");
    auto broken = cli.Get(("/api/stories/" + id).c_str());
    CHECK(broken->status == 500);
    CHECK(body_of(broken)["code"] == "StorageCorrupt");
    CHECK(body_of(cli.Get("/api/stories")).empty());
    CHECK(cli.Get("/api/health")->status == 200);
}

TEST_CASE("http: compute endpoints and CORS") {
    TempDir dir;
    Running run(dir.path(), HttpOptions{"http://localhost:5173"});
    auto& cli = run.http();
    auto cam = cli.Post("/api/viz/fit-camera",
                        R"({"points":[{"lon":0,"lat":0},{"lon":90,"lat":0}],"viewport":{"width":512,"height":512}})",
                        "application/json");
    REQUIRE(cam->status == 200);
    CHECK(body_of(cam)["zoom"].get<double>() == doctest::Approx(3));
    CHECK(cam->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");
    CHECK(cam->get_header_value("Access-Control-Expose-Headers") == "ETag");

    auto clusters = cli.Post("/api/viz/cluster",
                             R"({"points":[{"id":"a","lon":4.4,"lat":51.2},{"id":"b","lon":4.4,"lat":51.2}],"zoom":3,"radius_px":40})",
                             "application/json");
    CHECK(body_of(clusters)["clusters"].size() == 1);
    auto empty = cli.Post("/api/viz/fit-camera", R"({"points":[],"viewport":{"width":512,"height":512}})", "application/json");
    CHECK(empty->status == 400);
    CHECK(body_of(empty)["code"] == "EmptySelection");
    auto range = cli.Post("/api/viz/cluster", R"({"points":[{"id":"a","lon":200,"lat":0}],"zoom":3,"radius_px":40})",
                          "application/json");
    CHECK(range->status == 400);
    CHECK(body_of(range)["code"] == "OutOfRange");
    auto tl = cli.Post("/api/viz/timeline-layout",
                       R"({"events":[{"id":"x","entity":"A"}],"width_px":800,"margin_px":40,"cluster_radius_px":10})",
                       "application/json");
    CHECK(tl->status == 422);
    CHECK(body_of(tl)["code"] == "NoDatedEvents");
    CHECK(body_of(cli.Post("/api/viz/donut", R"({"counts_by_category":{"a":1,"b":3}})", "application/json"))["segments"].size() == 2);
    CHECK(body_of(cli.Post("/api/viz/colors", R"({"items":[{"id":"a","kind":"k"}],"mode":"event_kind"})", "application/json"))["mapping"]["a"] == 0);

    auto pre = cli.Options("/api/stories");
    CHECK(pre->status == 204);
    CHECK(pre->get_header_value("Access-Control-Allow-Headers") == "Content-Type, If-Match");
}
