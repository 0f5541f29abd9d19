#pragma once

#include "chstory/json_reader.hpp"
#include "chstory/story/model.hpp"
#include "chstory/story/validate.hpp"
#include "chstory/store/store.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>

namespace chstory::story {

/// Where a story's collection comes from. Editing without a data source
/// skips every collection check (and cannot compute focus cameras).
class StoryDataSource {
public:
    virtual ~StoryDataSource() = default;
    virtual bool has_collection(const CollectionId& id) const = 0;
    /// Throws Error{NotFound} for an unknown collection.
    virtual CollectionScope scope(const CollectionId& id) const = 0;
};

/// Collection scope read from a store: the members, every event that names
/// a member (plus the collection's explicit events), and the entities those
/// events reference.
class StoreDataSource final : public StoryDataSource {
public:
    explicit StoreDataSource(const Store& store) : store_(store) {}
    bool has_collection(const CollectionId& id) const override;
    CollectionScope scope(const CollectionId& id) const override;

private:
    const Store& store_;
};

class IdGenerator {
public:
    explicit IdGenerator(std::uint64_t seed) : rng_(seed) {}
    /// prefix + 12 hex digits, never one of `taken`.
    std::string next(std::string_view prefix, const std::set<std::string>& taken = {});

private:
    std::mt19937_64 rng_;
};

enum class IdPolicy { keep, remap };
std::optional<IdPolicy> parse_id_policy(std::string_view text) noexcept;

/// Story editing operations. Each operation works on a copy and commits it
/// only on success, so a failed call never changes the document; every
/// successful call increments the version, no-op moves included.
class StoryEditor {
public:
    explicit StoryEditor(const StoryDataSource* data = nullptr, std::uint64_t seed = std::random_device{}());

    StoryDocument create_story(std::string title, std::optional<CollectionId> collection_ref = {});

    Slide add_slide(StoryDocument& doc, LayoutId layout, std::size_t index);
    Slide add_slide(StoryDocument& doc, std::string_view layout, std::size_t index);
    Slide duplicate_slide(StoryDocument& doc, const std::string& slide_id);
    void delete_slide(StoryDocument& doc, const std::string& slide_id);
    /// Reorders within the slide's own sibling list (top level or its parent's children).
    void move_slide(StoryDocument& doc, const std::string& slide_id, std::size_t new_index);
    Slide add_nested_slide(StoryDocument& doc, const std::string& parent_id, LayoutId layout);
    void set_layout(StoryDocument& doc, const std::string& slide_id, LayoutId layout);
    void add_content_chunk(StoryDocument& doc, const std::string& slide_id, std::size_t pane_index, ContentChunk chunk);
    void attach_visualization(StoryDocument& doc, const std::string& slide_id, VisualizationPanel panel);
    /// Stores the focus set and the camera fitted to the focused events'
    /// places under the default viewport. An empty set clears both.
    std::optional<viz::CameraState> set_focus_events(StoryDocument& doc, const std::string& slide_id,
                                                     const std::set<EventId>& event_ids);

    /// Violations of `doc`, including collection references when a data
    /// source is configured and the story names a collection it knows.
    std::vector<Issue> validate(const StoryDocument& doc) const;

    StoryDocument import_story(std::string_view bytes, IdPolicy policy);

    /// Fresh ids for the story and every slide; structure unchanged.
    void remap_ids(StoryDocument& doc);

    std::string new_story_id();

private:
    CollectionScope scope_for(const StoryDocument& doc) const;
    Slide fresh_copy(const Slide& s, std::set<std::string>& taken);

    const StoryDataSource* data_;
    IdGenerator ids_;
};

/// Applies one operation given as JSON, e.g.
/// {"op":"move_slide","slide_id":"slide-1","new_index":0}. Returns the
/// operation's result ({} when it has none).
json apply_operation(StoryEditor& editor, StoryDocument& doc, const json& op);

} // namespace chstory::story
