#include "jacktrack/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "jacktrack/errors.hpp"

namespace jacktrack {

using json = nlohmann::ordered_json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
}

Timestamp parse_ts_or_throw(const std::string& s, const std::string& what) {
    if (auto t = parse_iso8601(s)) return *t;
    throw ConfigError("unparseable " + what + " timestamp: \"" + s + "\"");
}

BoundingBox bbox_from_json(const json& j) {
    BoundingBox b;
    b.min_lat = j.at("min_lat").get<double>();
    b.max_lat = j.at("max_lat").get<double>();
    b.min_lon = j.at("min_lon").get<double>();
    b.max_lon = j.at("max_lon").get<double>();
    if (b.min_lat > b.max_lat || b.min_lon > b.max_lon)
        throw ConfigError("bounding box has inverted extents");
    return b;
}

json bbox_to_json(const BoundingBox& b) {
    return json{{"min_lat", b.min_lat},
                {"max_lat", b.max_lat},
                {"min_lon", b.min_lon},
                {"max_lon", b.max_lon}};
}

Millis millis_field(const json& j, const char* key, Millis fallback) {
    if (!j.contains(key)) return fallback;
    return Millis{j.at(key).get<std::int64_t>()};
}

}  // namespace

FarmConfig load_farm_config(const std::string& path) {
    const json j = load_json_file(path);
    FarmConfig c;
    try {
        c.farm_name = j.value("farm_name", std::string{});
        c.mmsi = j.at("mmsi").get<std::uint32_t>();
        c.window = make_window(parse_ts_or_throw(j.at("window").at("start"), "window start"),
                               parse_ts_or_throw(j.at("window").at("end"), "window end"));
        c.n_turbines = j.at("n_turbines").get<int>();
        if (c.n_turbines < 1) throw ConfigError("n_turbines must be at least 1");
        c.extra_clusters = j.value("extra_clusters", c.extra_clusters);
        if (c.extra_clusters < 0) throw ConfigError("extra_clusters must be non-negative");
        if (j.contains("seeds")) {
            c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
            if (c.seeds.empty()) throw ConfigError("seeds list is empty");
        } else if (j.contains("seed")) {
            c.seeds = {j.at("seed").get<std::uint64_t>()};
        }
        c.radius_m = j.value("radius_m", c.radius_m);
        if (c.radius_m <= 0.0) throw ConfigError("radius_m must be positive");
        c.min_segment_duration_h = j.value("min_segment_duration_h", c.min_segment_duration_h);
        if (c.min_segment_duration_h < 0.0)
            throw ConfigError("min_segment_duration_h must be non-negative");
        if (j.contains("min_cluster_points"))
            c.min_cluster_points = j.at("min_cluster_points").get<std::size_t>();
        c.min_cluster_points_frac = j.value("min_cluster_points_frac", c.min_cluster_points_frac);

        if (j.contains("harbor")) {
            const auto& h = j.at("harbor");
            if (h.contains("bbox")) c.harbor_hint.bbox = bbox_from_json(h.at("bbox"));
            if (h.contains("center")) {
                c.harbor_hint.seed =
                    GeoPoint{h.at("center").at("lat").get<double>(),
                             h.at("center").at("lon").get<double>()};
                c.harbor_hint.seed_radius_m = h.value("radius_m", c.harbor_hint.seed_radius_m);
            }
            c.k_harbor = h.value("k", c.k_harbor);
            if (c.k_harbor < 1) throw ConfigError("harbor k must be at least 1");
        }
        if (j.contains("farm_bbox")) c.farm_bbox = bbox_from_json(j.at("farm_bbox"));

        if (j.contains("inputs")) {
            const auto& in = j.at("inputs");
            if (in.contains("ais_csv"))
                c.ais_csv_paths = in.at("ais_csv").get<std::vector<std::string>>();
            if (in.contains("aivdm"))
                c.aivdm_paths = in.at("aivdm").get<std::vector<std::string>>();
            if (in.contains("wind_csv"))
                c.wind_csv_path = in.at("wind_csv").get<std::string>();
            if (in.contains("column_map")) {
                const auto& m = in.at("column_map");
                if (m.is_string()) {
                    const auto preset = m.get<std::string>();
                    if (preset == "danish") c.column_map = ColumnMap::danish();
                    else if (preset == "interchange") c.column_map = ColumnMap::interchange();
                    else throw ConfigError("unknown column_map preset \"" + preset + "\"");
                } else {
                    ColumnMap cm = ColumnMap::interchange();
                    cm.timestamp = m.value("timestamp", cm.timestamp);
                    cm.mmsi = m.value("mmsi", cm.mmsi);
                    cm.lat = m.value("lat", cm.lat);
                    cm.lon = m.value("lon", cm.lon);
                    cm.sog = m.value("sog", cm.sog);
                    cm.cog = m.value("cog", cm.cog);
                    cm.nav_status = m.value("nav_status", cm.nav_status);
                    cm.timestamp_format = m.value("timestamp_format", cm.timestamp_format);
                    c.column_map = cm;
                }
            } else {
                c.column_map = ColumnMap::interchange();
            }
        }
        c.out_dir = j.value("out_dir", c.out_dir);
        c.kmeans_max_iter = j.value("kmeans_max_iter", c.kmeans_max_iter);
        c.kmeans_tol_deg = j.value("kmeans_tol_deg", c.kmeans_tol_deg);
        c.strict = j.value("strict", c.strict);
        c.teleport_filter = j.value("teleport_filter", c.teleport_filter);
        c.teleport_max_kn = j.value("teleport_max_kn", c.teleport_max_kn);
    } catch (const json::exception& e) {
        throw ConfigError("bad farm config " + path + ": " + e.what());
    }
    return c;
}

std::string config_canonical_json(const FarmConfig& c) {
    json j;
    j["farm_name"] = c.farm_name;
    j["mmsi"] = c.mmsi;
    j["window"] = {{"start", format_iso8601(c.window.start)},
                   {"end", format_iso8601(c.window.end)}};
    j["n_turbines"] = c.n_turbines;
    j["extra_clusters"] = c.extra_clusters;
    j["seeds"] = c.seeds;
    j["radius_m"] = c.radius_m;
    j["min_segment_duration_h"] = c.min_segment_duration_h;
    if (c.min_cluster_points) j["min_cluster_points"] = *c.min_cluster_points;
    j["min_cluster_points_frac"] = c.min_cluster_points_frac;
    if (c.harbor_hint.bbox) j["harbor_bbox"] = bbox_to_json(*c.harbor_hint.bbox);
    if (c.harbor_hint.seed)
        j["harbor_center"] = {{"lat", c.harbor_hint.seed->lat},
                              {"lon", c.harbor_hint.seed->lon},
                              {"radius_m", c.harbor_hint.seed_radius_m}};
    j["k_harbor"] = c.k_harbor;
    if (c.farm_bbox) j["farm_bbox"] = bbox_to_json(*c.farm_bbox);
    j["ais_csv"] = c.ais_csv_paths;
    j["aivdm"] = c.aivdm_paths;
    if (c.wind_csv_path) j["wind_csv"] = *c.wind_csv_path;
    j["column_map"] = {{"timestamp", c.column_map.timestamp},
                       {"mmsi", c.column_map.mmsi},
                       {"lat", c.column_map.lat},
                       {"lon", c.column_map.lon},
                       {"sog", c.column_map.sog},
                       {"cog", c.column_map.cog},
                       {"nav_status", c.column_map.nav_status},
                       {"timestamp_format", c.column_map.timestamp_format}};
    j["kmeans_max_iter"] = c.kmeans_max_iter;
    j["kmeans_tol_deg"] = c.kmeans_tol_deg;
    j["strict"] = c.strict;
    j["teleport_filter"] = c.teleport_filter;
    j["teleport_max_kn"] = c.teleport_max_kn;
    return j.dump();
}

CampaignScript load_campaign_script(const std::string& path) {
    const json j = load_json_file(path);
    CampaignScript s;
    try {
        s.n_sites = j.value("n_sites", s.n_sites);
        s.grid_cols = j.value("grid_cols", s.grid_cols);
        s.site_spacing_m = j.value("site_spacing_m", s.site_spacing_m);
        s.layout_jitter_m = j.value("layout_jitter_m", s.layout_jitter_m);
        if (j.contains("farm_origin"))
            s.farm_origin = GeoPoint{j.at("farm_origin").at("lat").get<double>(),
                                     j.at("farm_origin").at("lon").get<double>()};
        if (j.contains("harbor"))
            s.harbor = GeoPoint{j.at("harbor").at("lat").get<double>(),
                                j.at("harbor").at("lon").get<double>()};
        s.n_berths = j.value("n_berths", s.n_berths);
        s.berth_spacing_m = j.value("berth_spacing_m", s.berth_spacing_m);
        s.gps_jitter_m = j.value("gps_jitter_m", s.gps_jitter_m);
        s.speed_mps = j.value("speed_mps", s.speed_mps);
        s.batch_size = j.value("batch_size", s.batch_size);
        s.sample_interval = millis_field(j, "sample_interval_ms", s.sample_interval);
        s.dwell_min = millis_field(j, "dwell_min_ms", s.dwell_min);
        s.dwell_max = millis_field(j, "dwell_max_ms", s.dwell_max);
        s.harbor_dwell_min = millis_field(j, "harbor_dwell_min_ms", s.harbor_dwell_min);
        s.harbor_dwell_max = millis_field(j, "harbor_dwell_max_ms", s.harbor_dwell_max);
        s.gap_start_probability = j.value("gap_start_probability", s.gap_start_probability);
        s.gap_min = millis_field(j, "gap_min_ms", s.gap_min);
        s.gap_max = millis_field(j, "gap_max_ms", s.gap_max);
        s.radius_m = j.value("radius_m", s.radius_m);
        s.min_segment_duration_h = j.value("min_segment_duration_h", s.min_segment_duration_h);
        s.seed = j.value("seed", s.seed);
        s.mmsi = j.value("mmsi", s.mmsi);
        if (j.contains("start"))
            s.start = parse_ts_or_throw(j.at("start"), "campaign start");
    } catch (const json::exception& e) {
        throw ConfigError("bad campaign script " + path + ": " + e.what());
    }
    return s;
}

}  // namespace jacktrack
