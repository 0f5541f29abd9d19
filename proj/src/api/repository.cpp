#include "chstory/api/repository.hpp"

#include "chstory/api/files.hpp"
#include "chstory/story/codec.hpp"
#include "chstory/story/validate.hpp"

#include <algorithm>

namespace chstory::api {

namespace fs = std::filesystem;

namespace {

Timestamp mtime_of(const fs::path& p) {
    auto t = std::chrono::file_clock::to_sys(fs::last_write_time(p));
    return std::chrono::floor<std::chrono::seconds>(t);
}

story::StoryDocument decode_stored(const std::string& id, const std::string& bytes) {
    story::StoryDocument doc;
    try {
        doc = story::parse_story(bytes);
    } catch (const Error& e) {
        throw Error(ErrorCode::StorageCorrupt, "stored story '" + id + "' does not import: " + e.what(), e.path());
    }
    auto problems = story::validate_story(doc);
    if (!problems.empty() || doc.id != id)
        throw Error(ErrorCode::StorageCorrupt, "stored story '" + id + "' is not a valid story", {}, problems);
    return doc;
}

} // namespace

bool is_valid_story_id(std::string_view id) noexcept {
    if (id.empty() || id.size() > 128) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

StoryRepository::StoryRepository(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    remove_stale_temporaries(dir_);
}

fs::path StoryRepository::path_of(const std::string& id) const { return dir_ / (id + ".json"); }

bool StoryRepository::exists(const std::string& id) const {
    return is_valid_story_id(id) && fs::exists(path_of(id));
}

StoredStory StoryRepository::load(const std::string& id) const {
    if (!exists(id)) throw Error(ErrorCode::NotFound, "no story '" + id + "'");
    fs::path p = path_of(id);
    StoredStory out;
    out.bytes = read_file(p);
    out.document = decode_stored(id, out.bytes);
    std::error_code ec;
    auto t = fs::last_write_time(p, ec);
    if (!ec) out.updated_at = std::chrono::floor<std::chrono::seconds>(std::chrono::file_clock::to_sys(t));
    return out;
}

std::vector<StorySummary> StoryRepository::list() const {
    std::vector<StorySummary> out;
    for (const auto& entry : fs::directory_iterator(dir_)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        std::string id = entry.path().stem().string();
        if (!is_valid_story_id(id)) continue;
        try {
            StoredStory s = load(id);
            out.push_back({id, s.document.title, s.updated_at, s.document.slides.size()});
        } catch (const Error&) {
            // corrupt or concurrently removed
        }
    }
    std::sort(out.begin(), out.end(), [](const StorySummary& a, const StorySummary& b) {
        if (a.updated_at != b.updated_at) return a.updated_at > b.updated_at;
        return a.story_id < b.story_id;
    });
    return out;
}

StoredStory StoryRepository::write(const story::StoryDocument& doc) {
    if (!is_valid_story_id(doc.id))
        throw Error(ErrorCode::MalformedDocument, "story id '" + doc.id + "' must be 1-128 characters of [A-Za-z0-9_-]",
                    "/id");
    StoredStory out;
    out.bytes = story::export_story(doc);
    out.document = doc;
    write_file_atomically(path_of(doc.id), out.bytes);
    out.updated_at = mtime_of(path_of(doc.id));
    return out;
}

StoredStory StoryRepository::create(const story::StoryDocument& doc) {
    auto lock = lock_writes();
    if (exists(doc.id)) throw Error(ErrorCode::AlreadyExists, "story '" + doc.id + "' already exists", "/id");
    return write(doc);
}

StoredStory StoryRepository::save(story::StoryDocument doc, std::int64_t expected_version) {
    auto lock = lock_writes();
    StoredStory current = load(doc.id);
    if (current.document.version != expected_version)
        throw Error(ErrorCode::VersionConflict, "story '" + doc.id + "' is at version " +
                                                    std::to_string(current.document.version) + ", not " +
                                                    std::to_string(expected_version));
    doc.version = expected_version + 1;
    return write(doc);
}

void StoryRepository::remove(const std::string& id) {
    auto lock = lock_writes();
    if (!exists(id)) throw Error(ErrorCode::NotFound, "no story '" + id + "'");
    fs::remove(path_of(id));
}

} // namespace chstory::api
