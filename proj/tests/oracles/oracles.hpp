#pragma once

// Brute-force reference implementations. They follow the written contracts
// directly (full scans, textbook formulas, explicit day counting) and share
// no code paths with the library beyond record types and case folding.

#include "chstory/query/query.hpp"
#include "chstory/store/store.hpp"
#include "chstory/text.hpp"
#include "chstory/viz/cluster.hpp"
#include "chstory/viz/mercator.hpp"
#include "chstory/viz/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using namespace chstory;

// ---------------------------------------------------------------- calendar

/// Days since 1970-01-01 of a proleptic Gregorian date, by counting whole
/// years and months.
inline long long day_count(int y, int m, int d) {
    auto leap = [](int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; };
    static const int month_days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    long long days = 0;
    if (y >= 1970)
        for (int yy = 1970; yy < y; ++yy) days += leap(yy) ? 366 : 365;
    else
        for (int yy = y; yy < 1970; ++yy) days -= leap(yy) ? 366 : 365;
    for (int mm = 1; mm < m; ++mm) days += month_days[mm - 1] + (mm == 2 && leap(y) ? 1 : 0);
    return days + (d - 1);
}

inline int days_in_month(int y, int m) {
    return static_cast<int>(m == 12 ? day_count(y + 1, 1, 1) - day_count(y, 12, 1) : day_count(y, m + 1, 1) - day_count(y, m, 1));
}

/// First day covered by a date string "YYYY", "YYYY-MM" or "YYYY-MM-DD".
inline long long first_day(const std::string& value) {
    int y = std::stoi(value.substr(0, 4));
    int m = value.size() >= 7 ? std::stoi(value.substr(5, 2)) : 1;
    int d = value.size() >= 10 ? std::stoi(value.substr(8, 2)) : 1;
    return day_count(y, m, d);
}

/// Last day covered by a date string.
inline long long last_day(const std::string& value) {
    int y = std::stoi(value.substr(0, 4));
    if (value.size() == 4) return day_count(y, 12, 31);
    int m = std::stoi(value.substr(5, 2));
    if (value.size() == 7) return day_count(y, m, days_in_month(y, m));
    return day_count(y, m, std::stoi(value.substr(8, 2)));
}

/// Day-resolution temporal position with first-day anchors.
inline double temporal_position(const std::string& t, const std::string& start, const std::string& end) {
    long long a = first_day(start), b = first_day(end), x = first_day(t);
    if (a == b) return 0.5;
    double v = static_cast<double>(x - a) / static_cast<double>(b - a);
    return std::clamp(v, 0.0, 1.0);
}

inline bool overlaps(const TimeSpan& a, const TimeSpan& b) {
    long long a0 = first_day(a.start.value()), a1 = last_day((a.end ? *a.end : a.start).value());
    long long b0 = first_day(b.start.value()), b1 = last_day((b.end ? *b.end : b.start).value());
    return a0 <= b1 && b0 <= a1;
}

// ------------------------------------------------------------------- query

struct Snapshot {
    std::vector<Entity> entities;
    std::vector<Event> events;
};

inline Snapshot snapshot(const Store& store) {
    Snapshot s;
    store.read([&](const StoreState& st) {
        st.for_each_entity([&](const Entity& e) { s.entities.push_back(e); });
        st.for_each_event([&](const Event& e) { s.events.push_back(e); });
    });
    return s;
}

inline bool mentions(const Event& ev, const EntityId& id) {
    if (ev.place && *ev.place == id) return true;
    for (const auto& p : ev.participants)
        if (p.entity == id) return true;
    return false;
}

inline std::vector<Entity> matches(const Snapshot& s, const query::QueryConstraints& c) {
    std::vector<Entity> out;
    for (const auto& e : s.entities) {
        if (c.kinds && !c.kinds->contains(e.kind)) continue;
        if (c.name_contains && text::fold_case(e.label).find(text::fold_case(*c.name_contains)) == std::string::npos)
            continue;
        bool ok = true;
        for (const auto& [term, value] : c.attribute_equals) {
            auto it = e.attributes.find(term);
            if (it == e.attributes.end() || std::count(it->second.begin(), it->second.end(), value) == 0) ok = false;
        }
        if (!ok) continue;
        if (c.related_place) {
            bool visited = false;
            for (const auto& ev : s.events) {
                if (!ev.place || *ev.place != *c.related_place) continue;
                for (const auto& p : ev.participants)
                    if (p.entity == e.id) visited = true;
            }
            if (!visited) continue;
        }
        if (c.active_between) {
            bool active = false;
            for (const auto& ev : s.events)
                if (mentions(ev, e.id) && ev.span && overlaps(*ev.span, *c.active_between)) active = true;
            if (!active) continue;
        }
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const Entity& a, const Entity& b) {
        auto la = text::fold_case(a.label), lb = text::fold_case(b.label);
        return la != lb ? la < lb : a.id < b.id;
    });
    return out;
}

inline query::ResultPage search(const Snapshot& s, const query::QueryConstraints& c, std::size_t offset,
                                std::size_t limit) {
    auto all = matches(s, c);
    query::ResultPage page;
    page.total = all.size();
    page.offset = offset;
    page.limit = limit;
    for (std::size_t i = offset; i < all.size() && i < offset + limit; ++i)
        page.items.push_back({all[i].id, all[i].label, all[i].kind});
    return page;
}

inline int floor_decade(int year) { return static_cast<int>(std::floor(year / 10.0)) * 10; }

inline query::Histogram histogram(const Snapshot& s, const query::QueryConstraints& c, const query::Facet& f) {
    auto all = matches(s, c);
    query::Histogram h;
    h.facet = f.key();
    h.total_matched = all.size();
    std::map<std::string, std::size_t> counts;
    std::map<int, std::size_t> decades;
    for (const auto& e : all) {
        std::set<std::string> bins;
        std::set<int> ds;
        switch (f.kind) {
        case query::Facet::Kind::entity_kind: bins.insert(std::string(to_string(e.kind))); break;
        case query::Facet::Kind::event_kind:
            for (const auto& ev : s.events)
                if (mentions(ev, e.id)) bins.insert(ev.kind);
            break;
        case query::Facet::Kind::attribute:
            if (auto it = e.attributes.find(f.term); it != e.attributes.end()) bins.insert(it->second.begin(), it->second.end());
            break;
        case query::Facet::Kind::decade_of_activity:
            for (const auto& ev : s.events)
                if (mentions(ev, e.id) && ev.span) ds.insert(floor_decade(std::stoi(ev.span->start.value().substr(0, 4))));
            break;
        }
        for (const auto& b : bins) ++counts[b];
        for (int d : ds) ++decades[d];
    }
    if (f.kind == query::Facet::Kind::decade_of_activity) {
        if (!decades.empty())
            for (int d = decades.begin()->first; d <= decades.rbegin()->first; d += 10)
                h.bins.push_back({std::to_string(d), decades.count(d) ? decades[d] : 0});
        return h;
    }
    for (const auto& [label, n] : counts) h.bins.push_back({label, n});
    std::sort(h.bins.begin(), h.bins.end(), [](const query::HistogramBin& a, const query::HistogramBin& b) {
        return a.count != b.count ? a.count > b.count : a.label < b.label;
    });
    return h;
}

inline std::vector<query::RelatedEntity> related(const Snapshot& s, const EntityId& id) {
    std::map<EntityId, EventId> witness;
    for (const auto& ev : s.events) {
        if (!mentions(ev, id)) continue;
        std::vector<EntityId> others;
        for (const auto& p : ev.participants) others.push_back(p.entity);
        if (ev.place) others.push_back(*ev.place);
        for (const auto& o : others) {
            if (o == id) continue;
            auto it = witness.find(o);
            if (it == witness.end() || ev.id < it->second) witness[o] = ev.id;
        }
    }
    std::map<EntityId, std::string> labels;
    for (const auto& e : s.entities) labels[e.id] = text::fold_case(e.label);
    std::vector<query::RelatedEntity> out;
    for (const auto& [o, via] : witness) out.push_back({o, via});
    std::sort(out.begin(), out.end(), [&](const query::RelatedEntity& a, const query::RelatedEntity& b) {
        return labels[a.id] != labels[b.id] ? labels[a.id] < labels[b.id] : a.id < b.id;
    });
    return out;
}

// ---------------------------------------------------------------- geometry

struct Pixel {
    long double x, y;
};

inline Pixel project(long double lon, long double lat, double zoom) {
    const long double pi = std::numbers::pi_v<long double>;
    long double size = 256.0L * std::pow(2.0L, static_cast<long double>(zoom));
    long double phi = lat * pi / 180.0L;
    return {(lon + 180.0L) / 360.0L * size,
            (1.0L - std::log(std::tan(phi) + 1.0L / std::cos(phi)) / pi) / 2.0L * size};
}

inline GeoPoint unproject(long double x, long double y, double zoom) {
    const long double pi = std::numbers::pi_v<long double>;
    long double size = 256.0L * std::pow(2.0L, static_cast<long double>(zoom));
    long double lon = x / size * 360.0L - 180.0L;
    long double lat = std::atan(std::sinh(pi * (1.0L - 2.0L * y / size))) * 180.0L / pi;
    return {static_cast<double>(lon), static_cast<double>(lat)};
}

/// Greedy seed scan exactly as specified: sort by id, each unassigned point
/// seeds a cluster and takes every unassigned point within the radius.
inline std::vector<viz::Cluster> greedy_clusters(std::vector<viz::ClusterPoint> pts, double zoom, double radius) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::vector<Pixel> px;
    for (const auto& p : pts) px.push_back(project(p.lon, p.lat, zoom));
    std::vector<bool> taken(pts.size(), false);
    std::vector<viz::Cluster> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (taken[i]) continue;
        viz::Cluster c;
        c.seed = pts[i].id;
        std::vector<std::size_t> members;
        for (std::size_t j = i; j < pts.size(); ++j) {
            if (taken[j]) continue;
            long double dx = px[j].x - px[i].x, dy = px[j].y - px[i].y;
            if (std::sqrt(dx * dx + dy * dy) <= radius) {
                taken[j] = true;
                members.push_back(j);
            }
        }
        long double mx = 0, my = 0;
        for (std::size_t j : members) {
            c.members.push_back(pts[j].id);
            ++c.counts_by_category[pts[j].category];
            mx += px[j].x;
            my += px[j].y;
        }
        c.center = members.size() == 1 ? GeoPoint{pts[i].lon, pts[i].lat}
                                       : unproject(mx / members.size(), my / members.size(), zoom);
        out.push_back(std::move(c));
    }
    return out;
}

/// Every point inside the padded viewport centered on the camera.
inline bool camera_contains(const viz::CameraState& cam, const std::vector<GeoPoint>& pts, const viz::Viewport& vp,
                            long double tolerance_px = 1e-6L) {
    Pixel c = project(cam.center.lon, cam.center.lat, cam.zoom);
    long double half_w = vp.width / 2.0L - vp.padding, half_h = vp.height / 2.0L - vp.padding;
    for (const auto& p : pts) {
        Pixel q = project(p.lon, p.lat, cam.zoom);
        if (std::fabs(q.x - c.x) > half_w + tolerance_px) return false;
        if (std::fabs(q.y - c.y) > half_h + tolerance_px) return false;
    }
    return true;
}

/// One lane per entity ordered by earliest start day (ties by entity id);
/// x from first-day positions in the window of all dated starts; greedy
/// 1-D seed clustering per lane in id order.
inline viz::TimelineLayout timeline(const std::vector<viz::TimelineEvent>& events, double width, double margin,
                                    double radius) {
    viz::TimelineLayout out;
    std::vector<const viz::TimelineEvent*> dated;
    for (const auto& e : events) {
        if (e.span) dated.push_back(&e);
        else out.undated.push_back(e.id);
    }
    std::sort(out.undated.begin(), out.undated.end());
    long long lo = 0, hi = 0;
    bool first = true;
    std::map<EntityId, long long> earliest;
    for (const auto* e : dated) {
        long long d = first_day(e->span->start.value());
        if (first || d < lo) lo = d;
        if (first || d > hi) hi = d;
        first = false;
        auto it = earliest.find(e->entity);
        if (it == earliest.end() || d < it->second) earliest[e->entity] = d;
    }
    std::vector<std::pair<long long, EntityId>> lane_keys;
    for (const auto& [ent, d] : earliest) lane_keys.push_back({d, ent});
    std::sort(lane_keys.begin(), lane_keys.end());
    std::map<EntityId, std::size_t> lane_of;
    for (const auto& [d, ent] : lane_keys) {
        lane_of[ent] = out.lanes.size();
        out.lanes.push_back(ent);
    }
    std::map<std::string, double> x_of;
    for (const auto* e : dated) {
        long long d = first_day(e->span->start.value());
        double t = lo == hi ? 0.5 : static_cast<double>(d - lo) / static_cast<double>(hi - lo);
        double x = margin + t * (width - 2 * margin);
        x_of[e->id] = x;
        out.placements.push_back({e->id, x, lane_of[e->entity]});
    }
    std::sort(out.placements.begin(), out.placements.end(), [](const auto& a, const auto& b) {
        if (a.lane != b.lane) return a.lane < b.lane;
        if (a.x != b.x) return a.x < b.x;
        return a.id < b.id;
    });
    for (std::size_t lane = 0; lane < out.lanes.size(); ++lane) {
        std::vector<std::string> ids;
        for (const auto& p : out.placements)
            if (p.lane == lane) ids.push_back(p.id);
        std::sort(ids.begin(), ids.end());
        std::set<std::string> taken;
        for (const auto& seed : ids) {
            if (taken.count(seed)) continue;
            viz::TimelineCluster c;
            c.lane = lane;
            c.seed = seed;
            double sum = 0;
            for (const auto& other : ids) {
                if (taken.count(other) || std::fabs(x_of[other] - x_of[seed]) > radius) continue;
                taken.insert(other);
                c.members.push_back(other);
                sum += x_of[other];
            }
            c.x = sum / c.members.size();
            out.clusters.push_back(std::move(c));
        }
    }
    return out;
}

} // namespace oracle
