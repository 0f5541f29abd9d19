#pragma once

#include "chstory/json_reader.hpp"
#include "chstory/story/model.hpp"

#include <string>
#include <string_view>

namespace chstory::story {

json to_json(const Scalar& s);
json to_json(const Settings& s);
json to_json(const VisualizationPanel& p);
json to_json(const ContentChunk& c);
json to_json(const Slide& s);
json to_json(const StoryDocument& d);

// Decoders reject unknown fields and unrepresentable shapes with
// Error{MalformedDocument}; rule violations (too many panes, nesting, ...)
// are kept so validate_story can report them.
Settings settings_from_json(const json& j, const std::string& path);
VisualizationPanel panel_from_json(const json& j, const std::string& path);
ContentChunk chunk_from_json(const json& j, const std::string& path);
Slide slide_from_json(const json& j, const std::string& path);
StoryDocument story_from_json(const json& j);

/// Parses exported bytes without validating story rules.
StoryDocument parse_story(std::string_view bytes);

/// Canonical rendering: keys sorted at every level, no whitespace, numbers
/// in shortest round-trip form, UTF-8.
std::string canonical_dump(const json& j);

/// Canonical "intavia-story/1" bytes. Throws Error{InvalidStory} carrying
/// the violations when the document does not validate.
std::string export_story(const StoryDocument& doc);

} // namespace chstory::story
