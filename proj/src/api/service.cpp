#include "chstory/api/service.hpp"

#include "chstory/api/files.hpp"
#include "chstory/story/codec.hpp"
#include "chstory/store/codec.hpp"

#include <random>

namespace chstory::api {

namespace fs = std::filesystem;

namespace {

fs::path local_state_path(const ServiceConfig& c) { return c.persist_dir / "local.json"; }

std::uint64_t seed_of(const ServiceConfig& c) {
    if (c.id_seed) return *c.id_seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

json summary_json(const StorySummary& s) {
    return {{"story_id", s.story_id},
            {"title", s.title},
            {"updated_at", format_timestamp(s.updated_at)},
            {"slide_count", s.slide_count}};
}

StoryReply reply(const StoredStory& s) { return {story::to_json(s.document), s.document.version}; }

} // namespace

Service::Service(ServiceConfig config)
    : config_(std::move(config)),
      stories_((fs::create_directories(config_.persist_dir), config_.persist_dir / "stories")),
      data_(store_),
      editor_(&data_, seed_of(config_)) {
    for (const auto& path : config_.datasets) {
        if (!fs::is_regular_file(path))
            throw Error(ErrorCode::NotFound, "dataset '" + path.string() + "' does not exist");
        std::string bytes;
        try {
            bytes = read_file(path);
        } catch (const Error&) {
            throw Error(ErrorCode::NotFound, "dataset '" + path.string() + "' cannot be read");
        }
        ingest_reports_.push_back(store_.ingest_dataset(bytes, config_.ingest_mode));
    }
    remove_stale_temporaries(config_.persist_dir);
    fs::path local = local_state_path(config_);
    if (fs::exists(local)) {
        json state;
        try {
            state = json::parse(read_file(local));
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::StorageCorrupt, "'" + local.string() + "' is not valid JSON: " + e.what());
        }
        restore_issues_ = store_.restore_local_state(state);
    }
}

void Service::persist_local_state() {
    write_file_atomically(local_state_path(config_), store_.export_local_state().dump());
}

json Service::upsert_entity(const json& body) {
    Entity draft = entity_from_json(body, "");
    std::lock_guard lock(local_mutex_);
    Entity stored = store_.upsert_local_entity(std::move(draft));
    persist_local_state();
    return to_json(stored);
}

json Service::upsert_event(const json& body) {
    Event draft = event_from_json(body, "");
    std::lock_guard lock(local_mutex_);
    Event stored = store_.upsert_local_event(std::move(draft));
    persist_local_state();
    return to_json(stored);
}

void Service::delete_entity(const std::string& id) {
    std::lock_guard lock(local_mutex_);
    store_.delete_local_entity(id);
    persist_local_state();
}

void Service::delete_event(const std::string& id) {
    std::lock_guard lock(local_mutex_);
    store_.delete_local_event(id);
    persist_local_state();
}

json Service::create_collection(const json& body) {
    ObjectReader r(body, "");
    std::string label = r.optional_string("label").value_or("");
    auto ids = [&](const char* key) {
        std::vector<std::string> out;
        if (const json* arr = r.optional_array(key)) {
            for (std::size_t i = 0; i < arr->size(); ++i) {
                if (!(*arr)[i].is_string())
                    throw Error(ErrorCode::MalformedDocument, "expected a string id", child_path(r.path_of(key), i));
                out.push_back((*arr)[i].get<std::string>());
            }
        }
        return out;
    };
    auto entity_ids = ids("entity_ids");
    auto event_ids = ids("event_ids");
    auto note = r.optional_string("provenance_note");
    r.finish();
    std::lock_guard lock(local_mutex_);
    Collection c = store_.create_collection(std::move(label), entity_ids, event_ids, std::move(note));
    persist_local_state();
    return to_json(c);
}

json Service::list_stories() {
    json out = json::array();
    for (const auto& s : stories_.list()) out.push_back(summary_json(s));
    return out;
}

StoryReply Service::create_story(const json& body) {
    ObjectReader r(body, "");
    std::string title = r.optional_string("title").value_or("");
    auto collection = r.optional_string("collection_ref");
    r.finish();
    story::StoryDocument doc;
    {
        std::lock_guard lock(editor_mutex_);
        doc = editor_.create_story(std::move(title), std::move(collection));
    }
    return reply(stories_.create(doc));
}

StoryReply Service::get_story(const std::string& id) { return reply(stories_.load(id)); }

std::string Service::export_story(const std::string& id) { return stories_.load(id).bytes; }

StoryReply Service::put_story(const std::string& id, const json& body, std::optional<std::int64_t> expected_version) {
    story::StoryDocument doc = story::story_from_json(body);
    if (doc.id != id)
        throw Error(ErrorCode::MalformedDocument, "document id '" + doc.id + "' does not match '" + id + "'", "/id");
    std::vector<Issue> violations = editor_.validate(doc);
    if (!violations.empty()) {
        Issue first = violations.front();
        throw Error(ErrorCode::InvalidStory, "story has " + std::to_string(violations.size()) + " violation(s)",
                    first.path, std::move(violations));
    }
    std::int64_t expected = expected_version.value_or(doc.version);
    return reply(stories_.save(std::move(doc), expected));
}

void Service::delete_story(const std::string& id) { stories_.remove(id); }

StoryReply Service::import_story(std::string_view bytes, story::IdPolicy policy) {
    story::StoryDocument doc;
    {
        std::lock_guard lock(editor_mutex_);
        doc = editor_.import_story(bytes, policy);
    }
    return reply(stories_.create(doc));
}

StoryReply Service::apply_story_operation(const std::string& id, const json& op,
                                          std::optional<std::int64_t> expected_version) {
    auto write_lock = stories_.lock_writes();
    StoredStory current = stories_.load(id);
    std::int64_t base = current.document.version;
    if (expected_version && *expected_version != base)
        throw Error(ErrorCode::VersionConflict, "story '" + id + "' is at version " + std::to_string(base) + ", not " +
                                                    std::to_string(*expected_version));
    story::StoryDocument doc = current.document;
    json result;
    {
        std::lock_guard lock(editor_mutex_);
        result = story::apply_operation(editor_, doc, op);
    }
    StoredStory saved = stories_.save(std::move(doc), base);
    return {{{"result", result}, {"story", story::to_json(saved.document)}}, saved.document.version};
}

json Service::validate_story(const std::string& id) {
    StoredStory s = stories_.load(id);
    json violations = json::array();
    for (const auto& v : editor_.validate(s.document)) violations.push_back(to_json(v));
    json warnings = json::array();
    for (const auto& w : story::story_warnings(s.document))
        warnings.push_back({{"path", w.path}, {"code", w.code}, {"message", w.message}});
    return {{"violations", violations}, {"warnings", warnings}};
}

} // namespace chstory::api
