#pragma once

#include "chstory/error.hpp"
#include "chstory/story/model.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chstory::story {

/// What a story's collection makes available to its visualizations.
struct CollectionScope {
    std::set<EntityId> entity_ids;
    std::set<EventId> event_ids;
    /// Place coordinates per event; nullopt when the event has no located place.
    std::map<EventId, std::optional<GeoPoint>> event_coordinates;
};

/// Every rule violation in document order; within one node, by code.
/// Reference checks against a collection run only when `scope` is given.
std::vector<Issue> validate_story(const StoryDocument& doc, const CollectionScope* scope = nullptr);

struct Warning {
    std::string path;
    std::string code; // "W_EMPTY_TITLE"
    std::string message;
    bool operator==(const Warning&) const = default;
};

/// Findings that do not block saving or export.
std::vector<Warning> story_warnings(const StoryDocument& doc);

/// Representation problems a hand-built document can carry but the
/// interchange format cannot: malformed quizzes, mismatched media, settings
/// of the other visualization kind. Reported as InvariantViolation.
std::vector<Issue> shape_issues(const StoryDocument& doc);

} // namespace chstory::story
