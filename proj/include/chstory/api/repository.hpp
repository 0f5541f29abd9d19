#pragma once

#include "chstory/story/model.hpp"
#include "chstory/store/types.hpp"

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace chstory::api {

struct StorySummary {
    std::string story_id;
    std::string title;
    Timestamp updated_at{};
    std::size_t slide_count = 0; // top-level slides
};

struct StoredStory {
    story::StoryDocument document;
    std::string bytes; // canonical export, exactly as on disk
    Timestamp updated_at{};
};

/// Story ids double as file names: 1-128 characters of [A-Za-z0-9_-].
bool is_valid_story_id(std::string_view id) noexcept;

/// One canonical export per story under `<dir>/<id>.json`.
///
/// Writes are serialized and replace files atomically; reads need no lock
/// because a file is always a complete committed version.
class StoryRepository {
public:
    explicit StoryRepository(std::filesystem::path dir);

    bool exists(const std::string& id) const;
    /// Throws NotFound, or StorageCorrupt when the file fails import.
    StoredStory load(const std::string& id) const;
    /// Newest first, ties by id. Unreadable files are skipped.
    std::vector<StorySummary> list() const;

    /// Writes a new story as given. Throws AlreadyExists, InvalidStory.
    StoredStory create(const story::StoryDocument& doc);
    /// Compare-and-set: the stored version must equal `expected_version`.
    /// The document is stored with version expected_version + 1.
    /// Throws NotFound, VersionConflict, InvalidStory.
    StoredStory save(story::StoryDocument doc, std::int64_t expected_version);
    void remove(const std::string& id);

    /// Serializes a read-modify-write cycle against other writers.
    std::unique_lock<std::recursive_mutex> lock_writes() const { return std::unique_lock(write_mutex_); }

private:
    std::filesystem::path path_of(const std::string& id) const;
    StoredStory write(const story::StoryDocument& doc);

    std::filesystem::path dir_;
    mutable std::recursive_mutex write_mutex_;
};

} // namespace chstory::api
