#include "chstory/viz/timeline.hpp"

#include "chstory/viz/color.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace chstory::viz {

TimelineLayout timeline_layout(const std::vector<TimelineEvent>& events, double width_px, double margin_px,
                               double cluster_radius_px) {
    const double inner = width_px - 2 * margin_px;
    if (!(inner > 0)) throw Error(ErrorCode::InvalidArgument, "margins leave no room on the timeline");
    if (!(cluster_radius_px > 0)) throw Error(ErrorCode::InvalidArgument, "cluster radius must be positive");

    std::set<std::string> ids;
    for (const auto& e : events)
        if (!ids.insert(e.id).second) throw Error(ErrorCode::InvalidArgument, "duplicate event id '" + e.id + "'");

    TimelineLayout out;
    std::vector<const TimelineEvent*> dated;
    for (const auto& e : events) {
        if (e.span) dated.push_back(&e);
        else out.undated.push_back(e.id);
    }
    std::sort(out.undated.begin(), out.undated.end());
    if (dated.empty()) throw Error(ErrorCode::NoDatedEvents, "no dated events to lay out");

    const CalendarDate* lo = &dated.front()->span->start;
    const CalendarDate* hi = lo;
    std::map<EntityId, DayNumber> earliest;
    for (const TimelineEvent* e : dated) {
        const CalendarDate& s = e->span->start;
        if (s.earliest_day() < lo->earliest_day()) lo = &s;
        if (s.earliest_day() > hi->earliest_day()) hi = &s;
        auto [it, inserted] = earliest.emplace(e->entity, s.earliest_day());
        if (!inserted) it->second = std::min(it->second, s.earliest_day());
    }
    const TimeSpan window{*lo, *hi};

    std::vector<std::pair<DayNumber, EntityId>> lane_order;
    for (const auto& [entity, day] : earliest) lane_order.emplace_back(day, entity);
    std::sort(lane_order.begin(), lane_order.end());
    std::map<EntityId, std::size_t> lane_of;
    for (const auto& [_, entity] : lane_order) {
        lane_of.emplace(entity, out.lanes.size());
        out.lanes.push_back(entity);
    }

    std::vector<std::vector<TimelinePlacement>> by_lane(out.lanes.size());
    for (const TimelineEvent* e : dated) {
        double t = temporal_color_position(e->span->start, window);
        std::size_t lane = lane_of.at(e->entity);
        by_lane[lane].push_back({e->id, margin_px + t * inner, lane});
    }

    for (auto& lane : by_lane) {
        std::sort(lane.begin(), lane.end(),
                  [](const TimelinePlacement& a, const TimelinePlacement& b) { return a.id < b.id; });
        std::vector<bool> assigned(lane.size(), false);
        for (std::size_t i = 0; i < lane.size(); ++i) {
            if (assigned[i]) continue;
            assigned[i] = true;
            TimelineCluster c;
            c.lane = lane[i].lane;
            c.seed = lane[i].id;
            c.members.push_back(lane[i].id);
            double sum = lane[i].x;
            for (std::size_t j = i + 1; j < lane.size(); ++j) {
                if (assigned[j] || std::abs(lane[j].x - lane[i].x) > cluster_radius_px) continue;
                assigned[j] = true;
                c.members.push_back(lane[j].id);
                sum += lane[j].x;
            }
            c.x = sum / static_cast<double>(c.members.size());
            out.clusters.push_back(std::move(c));
        }
        std::sort(lane.begin(), lane.end(), [](const TimelinePlacement& a, const TimelinePlacement& b) {
            if (a.x != b.x) return a.x < b.x;
            return a.id < b.id;
        });
        out.placements.insert(out.placements.end(), lane.begin(), lane.end());
    }
    return out;
}

} // namespace chstory::viz
