#pragma once

#include "chstory/store/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace chstory::viz {

struct ClusterPoint {
    std::string id;
    double lon = 0;
    double lat = 0;
    std::string category;
};

struct Cluster {
    std::string seed;
    std::vector<std::string> members; // seed first, then ascending id
    GeoPoint center;                  // inverse-projected mean of member pixel positions
    std::map<std::string, std::size_t> counts_by_category;
    bool operator==(const Cluster&) const = default;
};

/// Greedy seed-scan clustering in world pixels at `zoom`.
///
/// Points are visited in ascending id order. Each point not yet assigned
/// becomes a seed and absorbs every unassigned point within `radius_px`
/// (inclusive) of it. Clusters come back in seed order, so the result does
/// not depend on input order.
std::vector<Cluster> cluster_points(const std::vector<ClusterPoint>& points, double zoom, double radius_px);

struct DonutSegment {
    std::string category;
    double start_angle = 0; // degrees, clockwise from 12 o'clock (-90)
    double end_angle = 0;
    double fraction = 0;
    bool operator==(const DonutSegment&) const = default;
};

/// Ring segments for a cluster glyph, categories ascending, starting at -90°.
/// Zero-count categories get no segment. Throws Error{EmptyCluster} when the
/// total is zero.
std::vector<DonutSegment> donut_segments(const std::map<std::string, std::size_t>& counts_by_category);

} // namespace chstory::viz
