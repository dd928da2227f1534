#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jacktrack/geo.hpp"
#include "jacktrack/ingest.hpp"
#include "jacktrack/segmentation.hpp"
#include "jacktrack/synth.hpp"
#include "jacktrack/time.hpp"

namespace jacktrack {

// Per-farm configuration. Precedence: CLI flags > config file > defaults.
struct FarmConfig {
    std::string farm_name;
    std::uint32_t mmsi = 0;
    AnalysisWindow window{};
    int n_turbines = 0;
    int extra_clusters = 5;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8};
    double radius_m = 100.0;
    double min_segment_duration_h = 1.0;
    // Cluster discard threshold: explicit count, or a fraction of the
    // clustered points when only the fraction is given.
    std::optional<std::size_t> min_cluster_points;
    double min_cluster_points_frac = 0.01;

    HarborHint harbor_hint;
    int k_harbor = 4;
    // Restricts clustering input to the farm area; without it, records in
    // the harbor hint region are excluded from clustering instead.
    std::optional<BoundingBox> farm_bbox;

    std::vector<std::string> ais_csv_paths;
    std::vector<std::string> aivdm_paths;
    std::optional<std::string> wind_csv_path;
    ColumnMap column_map;  // applies to ais_csv_paths

    std::string out_dir = ".";
    int kmeans_max_iter = 300;
    double kmeans_tol_deg = 0.0;
    bool strict = false;
    bool teleport_filter = false;
    double teleport_max_kn = 50.0;
};

// Throws ConfigError on unreadable files, malformed JSON, or invalid
// field values (n_turbines < 1, backwards window, ...).
FarmConfig load_farm_config(const std::string& path);

// Deterministic serialization used for the provenance config hash.
std::string config_canonical_json(const FarmConfig& config);

CampaignScript load_campaign_script(const std::string& path);

}  // namespace jacktrack
