#pragma once

#include <cstdint>
#include <vector>

#include "jacktrack/geo.hpp"
#include "jacktrack/records.hpp"
#include "jacktrack/segmentation.hpp"
#include "jacktrack/time.hpp"

namespace jacktrack {

// Ground-truth campaign generator: repeated harbor -> sites -> harbor
// voyages with scripted dwell times, straight transit legs snapped to the
// sampling grid, per-sample GPS jitter at dwells, and injected receiver
// outages.
struct CampaignScript {
    int n_sites = 50;
    int grid_cols = 10;
    double site_spacing_m = 600.0;   // must exceed 2 * radius_m
    double layout_jitter_m = 0.0;    // per-site offset from the regular grid
    GeoPoint farm_origin{55.60, 7.70};
    GeoPoint harbor{55.47, 8.30};
    int n_berths = 1;                // port calls alternate across berths
    double berth_spacing_m = 600.0;

    double gps_jitter_m = 10.0;      // uniform in a disc, dwells only
    double speed_mps = 12.0;
    int batch_size = 4;              // turbines per voyage
    Millis sample_interval{10'000};

    Millis dwell_min{std::chrono::hours(2)};
    Millis dwell_max{std::chrono::hours(4)};
    Millis harbor_dwell_min{std::chrono::hours(2)};
    Millis harbor_dwell_max{std::chrono::hours(5)};

    double gap_start_probability = 0.0;  // per emitted sample
    Millis gap_min{10'000};
    Millis gap_max{20'000};

    double radius_m = 100.0;             // labeling + feasibility checks
    double min_segment_duration_h = 1.0; // scripted dwells must exceed this

    std::uint64_t seed = 1;
    std::uint32_t mmsi = 219000111;
    // Campaign start, also the sample grid origin. 2018-07-01T00:00:00Z.
    Timestamp start{Millis{std::int64_t{17713} * 86'400'000}};
};

struct GroundTruthSite {
    GeoPoint center{};          // true site location (pre-jitter)
    Timestamp arrive{};
    Timestamp depart{};
    Millis scripted_dwell{};    // depart - arrive, stationary time
};

struct GroundTruthPortCall {
    int berth = 0;
    Timestamp arrive{};
    Timestamp depart{};
    Millis duration{};
};

struct GroundTruth {
    std::vector<GroundTruthSite> sites;
    std::vector<GeoPoint> berths;
    std::vector<GroundTruthPortCall> port_calls;
    // Per surviving sample, the geometric label: within radius_m of a true
    // site -> installation, of a true berth -> harbor, else transit.
    std::vector<PointLabel> labels;
    AnalysisWindow window{};
};

struct Campaign {
    Trajectory trajectory;
    GroundTruth truth;
};

// Same seed, same campaign, bit for bit. Throws ConfigError on an
// infeasible script (site spacing vs radius, dwells vs the duration
// filter, non-positive speed or interval).
Campaign generate_campaign(const CampaignScript& script);

}  // namespace jacktrack
