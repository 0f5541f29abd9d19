#include "chstory/viz/cluster.hpp"

#include "chstory/viz/mercator.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace chstory::viz {

std::vector<Cluster> cluster_points(const std::vector<ClusterPoint>& points, double zoom, double radius_px) {
    if (!(radius_px > 0)) throw Error(ErrorCode::InvalidArgument, "cluster radius must be positive");

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a].id < points[b].id; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (points[order[i]].id == points[order[i - 1]].id)
            throw Error(ErrorCode::InvalidArgument, "duplicate point id '" + points[order[i]].id + "'");

    std::vector<WorldPoint> world;
    world.reserve(order.size());
    for (std::size_t idx : order) world.push_back(project_mercator(points[idx].lon, points[idx].lat, zoom));

    const double r2 = radius_px * radius_px;
    std::vector<bool> assigned(order.size(), false);
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (assigned[i]) continue;
        assigned[i] = true;
        std::vector<std::size_t> members{i};
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (assigned[j]) continue;
            double dx = world[j].x - world[i].x;
            double dy = world[j].y - world[i].y;
            if (dx * dx + dy * dy <= r2) {
                assigned[j] = true;
                members.push_back(j);
            }
        }

        Cluster c;
        c.seed = points[order[i]].id;
        double sx = 0, sy = 0;
        for (std::size_t m : members) {
            const ClusterPoint& p = points[order[m]];
            c.members.push_back(p.id);
            ++c.counts_by_category[p.category];
            sx += world[m].x;
            sy += world[m].y;
        }
        if (members.size() == 1) {
            c.center = world[i].source;
        } else {
            double n = static_cast<double>(members.size());
            c.center = unproject_mercator(sx / n, sy / n, zoom);
        }
        clusters.push_back(std::move(c));
    }
    return clusters;
}

std::vector<DonutSegment> donut_segments(const std::map<std::string, std::size_t>& counts_by_category) {
    std::size_t total = 0;
    for (const auto& [_, n] : counts_by_category) total += n;
    if (total == 0) throw Error(ErrorCode::EmptyCluster, "donut needs at least one counted member");

    const double t = static_cast<double>(total);
    std::vector<DonutSegment> out;
    std::size_t cumulative = 0;
    for (const auto& [category, n] : counts_by_category) {
        if (n == 0) continue;
        DonutSegment s;
        s.category = category;
        s.start_angle = -90.0 + 360.0 * static_cast<double>(cumulative) / t;
        cumulative += n;
        s.end_angle = -90.0 + 360.0 * static_cast<double>(cumulative) / t;
        s.fraction = static_cast<double>(n) / t;
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace chstory::viz
