#pragma once

#include "chstory/json_reader.hpp"
#include "chstory/viz/cluster.hpp"
#include "chstory/viz/color.hpp"
#include "chstory/viz/mercator.hpp"
#include "chstory/viz/timeline.hpp"

namespace chstory::viz {

json to_json(const CameraState& c);
CameraState camera_from_json(const json& j, const std::string& path);

json to_json(const Cluster& c);
json to_json(const DonutSegment& s);
json to_json(const TimelineLayout& t);
json to_json(const ColorAssignment& a);

// Request bodies of the pure-compute endpoints. Each returns the response
// body; malformed input raises Error{MalformedDocument}.
json handle_cluster_request(const json& body);
json handle_donut_request(const json& body);
json handle_fit_camera_request(const json& body);
json handle_timeline_request(const json& body);
json handle_colors_request(const json& body);

} // namespace chstory::viz
