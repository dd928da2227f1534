#pragma once

#include <cmath>

namespace jacktrack {

inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
// Meters per degree of latitude on the spherical model.
inline constexpr double kMetersPerDegLat = kEarthRadiusM * kDegToRad;

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

// Great-circle distance on a sphere of radius kEarthRadiusM.
inline double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = a.lat * kDegToRad;
    const double lat2 = b.lat * kDegToRad;
    const double dlat = (b.lat - a.lat) * kDegToRad;
    const double dlon = (b.lon - a.lon) * kDegToRad;
    const double sl = std::sin(dlat / 2.0);
    const double so = std::sin(dlon / 2.0);
    double h = sl * sl + std::cos(lat1) * std::cos(lat2) * so * so;
    if (h > 1.0) h = 1.0;
    if (h < 0.0) h = 0.0;
    return 2.0 * kEarthRadiusM * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

struct BoundingBox {
    double min_lat = -90.0;
    double max_lat = 90.0;
    double min_lon = -180.0;
    double max_lon = 180.0;

    bool contains(const GeoPoint& p) const {
        return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
    }
};

}  // namespace jacktrack
