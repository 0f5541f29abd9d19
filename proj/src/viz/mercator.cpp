#include "chstory/viz/mercator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace chstory::viz {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

} // namespace

double world_size(double zoom) { return kTileSize * std::exp2(zoom); }

WorldPoint project_mercator(double lon, double lat, double zoom) {
    if (!(lon >= -180.0 && lon <= 180.0))
        throw Error(ErrorCode::OutOfRange, "longitude " + std::to_string(lon) + " outside [-180, 180]");
    if (!(lat >= -kMaxLatitude && lat <= kMaxLatitude))
        throw Error(ErrorCode::OutOfRange, "latitude " + std::to_string(lat) + " outside the web-mercator range");
    if (!(zoom >= 0.0 && zoom <= kMaxZoom))
        throw Error(ErrorCode::OutOfRange, "zoom " + std::to_string(zoom) + " outside [0, 16]");
    const double size = world_size(zoom);
    const double phi = lat * kDegToRad;
    WorldPoint p;
    p.x = (lon + 180.0) / 360.0 * size;
    p.y = (1.0 - std::log(std::tan(phi) + 1.0 / std::cos(phi)) / std::numbers::pi) / 2.0 * size;
    p.source = {lon, lat};
    p.zoom = zoom;
    return p;
}

GeoPoint unproject_mercator(double x, double y, double zoom) {
    const double size = world_size(zoom);
    GeoPoint g;
    g.lon = x / size * 360.0 - 180.0;
    g.lat = std::atan(std::sinh(std::numbers::pi * (1.0 - 2.0 * y / size))) / kDegToRad;
    return g;
}

CameraState fit_camera(std::span<const GeoPoint> points, const Viewport& viewport) {
    if (points.empty()) throw Error(ErrorCode::EmptySelection, "cannot fit a camera to zero points");
    const double avail_w = viewport.width - 2 * viewport.padding;
    const double avail_h = viewport.height - 2 * viewport.padding;
    if (!(avail_w > 0) || !(avail_h > 0))
        throw Error(ErrorCode::InvalidArgument, "padding leaves no room inside the viewport");

    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (const auto& p : points) {
        WorldPoint w = project_mercator(p, 0);
        min_x = std::min(min_x, w.x);
        max_x = std::max(max_x, w.x);
        min_y = std::min(min_y, w.y);
        max_y = std::max(max_y, w.y);
    }
    const double extent_x = max_x - min_x;
    const double extent_y = max_y - min_y;
    if (extent_x == 0 && extent_y == 0) return {points.front(), kMaxZoom};

    const double inf = std::numeric_limits<double>::infinity();
    const double zoom_x = extent_x > 0 ? std::log2(avail_w / extent_x) : inf;
    const double zoom_y = extent_y > 0 ? std::log2(avail_h / extent_y) : inf;
    const double zoom = std::clamp(std::min(zoom_x, zoom_y), 0.0, kMaxZoom);
    return {unproject_mercator((min_x + max_x) / 2, (min_y + max_y) / 2, 0), zoom};
}

} // namespace chstory::viz
