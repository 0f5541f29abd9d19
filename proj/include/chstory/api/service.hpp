#pragma once

#include "chstory/api/repository.hpp"
#include "chstory/json_reader.hpp"
#include "chstory/story/editor.hpp"
#include "chstory/store/store.hpp"

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace chstory::api {

struct ServiceConfig {
    std::vector<std::filesystem::path> datasets;
    std::filesystem::path persist_dir;
    IngestMode ingest_mode = IngestMode::strict;
    /// Seed for generated story and slide ids; random when absent.
    std::optional<std::uint64_t> id_seed;
};

struct StoryReply {
    json body;
    std::int64_t version = 0;
};

/// The store, the story repository and the editor behind one facade.
///
/// Persisted state lives under persist_dir: `stories/<id>.json` per story
/// and `local.json` for curated entities, events and collections. Datasets
/// are read-only inputs loaded at construction.
class Service {
public:
    /// Throws Error when a dataset is missing or (in strict mode) invalid.
    explicit Service(ServiceConfig config);

    const ServiceConfig& config() const noexcept { return config_; }
    const std::vector<IngestReport>& ingest_reports() const noexcept { return ingest_reports_; }
    /// Persisted local records that no longer fit the loaded datasets.
    const std::vector<Issue>& restore_issues() const noexcept { return restore_issues_; }

    const Store& store() const noexcept { return store_; }
    StoryRepository& stories() noexcept { return stories_; }

    // Store writes; each one is persisted before it returns.
    json upsert_entity(const json& body);
    json upsert_event(const json& body);
    void delete_entity(const std::string& id);
    void delete_event(const std::string& id);
    json create_collection(const json& body);

    // Stories.
    json list_stories();
    StoryReply create_story(const json& body);
    StoryReply get_story(const std::string& id);
    std::string export_story(const std::string& id);
    /// `expected_version` absent means "the version carried by the document".
    StoryReply put_story(const std::string& id, const json& body, std::optional<std::int64_t> expected_version);
    void delete_story(const std::string& id);
    StoryReply import_story(std::string_view bytes, story::IdPolicy policy);
    /// Applies one editor operation and saves the result with compare-and-set.
    StoryReply apply_story_operation(const std::string& id, const json& op, std::optional<std::int64_t> expected_version);
    json validate_story(const std::string& id);

private:
    void persist_local_state();

    ServiceConfig config_;
    Store store_;
    StoryRepository stories_;
    story::StoreDataSource data_;
    story::StoryEditor editor_;
    std::mutex editor_mutex_;
    std::mutex local_mutex_;
    std::vector<IngestReport> ingest_reports_;
    std::vector<Issue> restore_issues_;
};

} // namespace chstory::api
