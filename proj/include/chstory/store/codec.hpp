#pragma once

#include "chstory/json_reader.hpp"
#include "chstory/store/types.hpp"

namespace chstory {

// Dataset document encoding of store records. Decoders throw
// Error{MalformedDocument} located at the offending field; `strict` rejects
// unknown fields.

json to_json(const CalendarDate& d);
json to_json(const TimeSpan& s);
json to_json(const GeoPoint& p);
json to_json(const MediaResource& m);
json to_json(const Entity& e);
json to_json(const Event& e);
json to_json(const Term& t);
json to_json(const Collection& c);
json to_json(const Issue& i);
json to_json(const IngestReport& r);

CalendarDate date_from_json(const json& j, const std::string& path, bool strict = true);
TimeSpan span_from_json(const json& j, const std::string& path, bool strict = true);
MediaResource media_from_json(const json& j, const std::string& path, bool strict = true);
Entity entity_from_json(const json& j, const std::string& path, bool strict = true);
Event event_from_json(const json& j, const std::string& path, bool strict = true);
Term term_from_json(const json& j, const std::string& path, bool strict = true);
Collection collection_from_json(const json& j, const std::string& path, bool strict = true);

} // namespace chstory
