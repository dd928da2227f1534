#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jacktrack/geo.hpp"
#include "jacktrack/time.hpp"

namespace jacktrack {

// One timestamped GPS fix. Coordinates are validated at construction
// boundaries (parsers reject out-of-range and sentinel values).
struct PositionRecord {
    Timestamp ts{};
    std::uint32_t mmsi = 0;
    double lat = 0.0;
    double lon = 0.0;
    std::optional<double> sog_kn;
    std::optional<double> cog_deg;
    std::optional<int> nav_status;  // 0..15 when present; carried, never used for segmentation

    GeoPoint point() const { return GeoPoint{lat, lon}; }
};

inline bool coords_valid(double lat, double lon) {
    return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

// Time-sorted, deduplicated record sequence for one vessel.
// Invariants: timestamps strictly increasing, all records share `mmsi`.
struct Trajectory {
    std::uint32_t mmsi = 0;
    std::vector<PositionRecord> records;
    std::string source;

    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }
};

}  // namespace jacktrack
