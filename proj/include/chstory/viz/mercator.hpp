#pragma once

#include "chstory/store/types.hpp"

#include <span>

namespace chstory::viz {

inline constexpr double kTileSize = 256.0;
inline constexpr double kMaxZoom = 16.0;
inline constexpr double kMaxLatitude = 85.0511;

/// Width (and height) of the world in pixels at `zoom`.
double world_size(double zoom);

/// Web-mercator pixel position of a geographic point.
struct WorldPoint {
    double x = 0;
    double y = 0;
    GeoPoint source;
    double zoom = 0;
};

/// Throws Error{OutOfRange} outside lon ∈ [-180, 180], lat ∈ [-85.0511,
/// 85.0511] or zoom ∈ [0, 16].
WorldPoint project_mercator(double lon, double lat, double zoom);
inline WorldPoint project_mercator(const GeoPoint& p, double zoom) { return project_mercator(p.lon, p.lat, zoom); }

/// Inverse projection; no range checks.
GeoPoint unproject_mercator(double x, double y, double zoom);

struct Viewport {
    double width = 800;
    double height = 600;
    double padding = 40;
};

inline constexpr Viewport kDefaultViewport{800, 600, 40};

struct CameraState {
    GeoPoint center;
    double zoom = 0;
    bool operator==(const CameraState&) const = default;
};

/// Camera that frames every point inside the padded viewport.
///
/// A single point (or a zero-extent box) yields that point at the maximum
/// zoom. Otherwise the zoom is the largest one at which the bounding box fits
/// both padded axes, clamped to [0, 16], centered on the box midpoint in
/// world pixels. Bounding boxes do not wrap the antimeridian.
CameraState fit_camera(std::span<const GeoPoint> points, const Viewport& viewport);

} // namespace chstory::viz
