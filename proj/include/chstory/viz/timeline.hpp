#pragma once

#include "chstory/calendar.hpp"
#include "chstory/store/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chstory::viz {

struct TimelineEvent {
    std::string id;
    EntityId entity;
    std::optional<TimeSpan> span;
};

struct TimelinePlacement {
    std::string id;
    double x = 0;
    std::size_t lane = 0;
    bool operator==(const TimelinePlacement&) const = default;
};

struct TimelineCluster {
    std::size_t lane = 0;
    std::string seed;
    std::vector<std::string> members; // seed first, then ascending id
    double x = 0;                     // mean member position
    bool operator==(const TimelineCluster&) const = default;
};

struct TimelineLayout {
    std::vector<EntityId> lanes;               // lane index -> entity
    std::vector<TimelinePlacement> placements; // by lane, then x, then id
    std::vector<TimelineCluster> clusters;     // by lane, then seed order
    std::vector<std::string> undated;          // omitted from the layout
};

/// Horizontal timeline with one lane per entity.
///
/// Events sit at margin + t·(width - 2·margin), where t is the temporal
/// position of the span start inside the window of all dated starts. Lanes
/// are ordered by each entity's earliest event. Within a lane, events are
/// grouped with the same greedy seed rule as map clustering, on x only.
/// Throws Error{NoDatedEvents} when nothing can be placed.
TimelineLayout timeline_layout(const std::vector<TimelineEvent>& events, double width_px, double margin_px,
                               double cluster_radius_px);

} // namespace chstory::viz
