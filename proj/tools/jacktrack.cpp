#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jacktrack/config.hpp"
#include "jacktrack/digest.hpp"
#include "jacktrack/errors.hpp"
#include "jacktrack/ingest.hpp"
#include "jacktrack/nmea.hpp"
#include "jacktrack/pipeline.hpp"
#include "jacktrack/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace jacktrack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;

json decode_stats_json(const nmea::DecodeStats& s) {
    json by_type = json::object();
    for (const auto& [type, n] : s.skipped_by_type) by_type[std::to_string(type)] = n;
    return json{{"lines_in", s.lines_in},
                {"sentences_ok", s.sentences_ok},
                {"checksum_failures", s.checksum_failures},
                {"framing_errors", s.framing_errors},
                {"decode_errors", s.decode_errors},
                {"positions", s.positions},
                {"positions_unavailable", s.positions_unavailable},
                {"multipart_expired", s.multipart_expired},
                {"multipart_duplicates", s.multipart_duplicates},
                {"multipart_pending", s.multipart_pending},
                {"skipped_by_type", by_type}};
}

int cmd_decode(const std::vector<std::string>& files, const std::string& out_path,
               bool strict) {
    nmea::StreamDecoder decoder({strict, 32});
    std::ostringstream csv;
    csv << kInterchangeHeader << '\n';
    for (const auto& path : files) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open input file: " + path);
        std::string line;
        while (std::getline(in, line)) {
            const auto timed = decoder.feed_line(line);
            if (!timed) continue;
            const auto& p = timed->position;
            if (timed->broker_ts) csv << format_iso8601(*timed->broker_ts);
            csv << ',' << p.mmsi << ',';
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.7f,%.7f", p.lat, p.lon);
            csv << buf << ',';
            if (p.sog_kn) csv << *p.sog_kn;
            csv << ',';
            if (p.cog_deg) csv << *p.cog_deg;
            csv << ',';
            if (p.nav_status) csv << *p.nav_status;
            csv << '\n';
        }
    }
    decoder.finish();
    atomic_write_file(out_path, csv.str());
    atomic_write_file(out_path + ".stats.json", decode_stats_json(decoder.stats()).dump(1) + "\n");

    const auto& s = decoder.stats();
    std::cout << "decoded " << s.positions << " position reports from " << s.lines_in
              << " lines (" << s.checksum_failures << " checksum failures, "
              << s.framing_errors << " framing errors, " << s.positions_unavailable
              << " without a position)\n"
              << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_analyze(FarmConfig config) {
    CampaignAnalysis analysis = analyze_campaign(config);
    const std::string hash = write_report_bundle(config, analysis);
    std::cout << "report bundle written to " << config.out_dir << " (determinism hash "
              << hash.substr(0, 12) << "...)\n";
    std::cout << "installations: " << analysis.farm.n << "/" << analysis.farm.n_actual
              << ", harbor segments: " << analysis.harbor_stats.n << ", transit "
              << analysis.share.transit_pct << "%\n";
    return kExitOk;
}

std::string label_string(const std::vector<PointLabel>& labels) {
    std::string s;
    s.reserve(labels.size());
    for (const auto l : labels)
        s += l == PointLabel::installation ? 'i' : l == PointLabel::harbor ? 'h' : 't';
    return s;
}

int cmd_synth(const CampaignScript& script, const std::string& out_dir) {
    const Campaign campaign = generate_campaign(script);
    fs::create_directories(out_dir);

    std::ostringstream csv;
    csv << kInterchangeHeader << '\n';
    for (const auto& r : campaign.trajectory.records) write_interchange_row(csv, r);
    const std::string campaign_csv = (fs::path(out_dir) / "campaign.csv").string();
    atomic_write_file(campaign_csv, csv.str());

    const auto& truth = campaign.truth;
    json sites = json::array();
    for (const auto& s : truth.sites)
        sites.push_back(json{{"lat", s.center.lat},
                             {"lon", s.center.lon},
                             {"arrive", format_iso8601(s.arrive)},
                             {"depart", format_iso8601(s.depart)},
                             {"scripted_dwell_s", s.scripted_dwell.count() / 1000.0}});
    json berths = json::array();
    for (const auto& b : truth.berths) berths.push_back(json{{"lat", b.lat}, {"lon", b.lon}});
    json calls = json::array();
    for (const auto& c : truth.port_calls)
        calls.push_back(json{{"berth", c.berth},
                             {"arrive", format_iso8601(c.arrive)},
                             {"depart", format_iso8601(c.depart)},
                             {"duration_s", c.duration.count() / 1000.0}});
    json truth_json{{"seed", script.seed},
                    {"mmsi", script.mmsi},
                    {"window",
                     {{"start", format_iso8601(truth.window.start)},
                      {"end", format_iso8601(truth.window.end)}}},
                    {"sites", sites},
                    {"berths", berths},
                    {"port_calls", calls},
                    {"labels", label_string(truth.labels)}};
    atomic_write_file((fs::path(out_dir) / "ground_truth.json").string(),
                      truth_json.dump(1) + "\n");

    // A ready-to-run analysis config: hint regions padded well beyond the
    // dwell radius, the way a user would frame them on a plot.
    double site_min_lat = 90, site_max_lat = -90, site_min_lon = 180, site_max_lon = -180;
    for (const auto& s : truth.sites) {
        site_min_lat = std::min(site_min_lat, s.center.lat);
        site_max_lat = std::max(site_max_lat, s.center.lat);
        site_min_lon = std::min(site_min_lon, s.center.lon);
        site_max_lon = std::max(site_max_lon, s.center.lon);
    }
    const double margin_lat = 2.5 * script.radius_m / kMetersPerDegLat;
    const double margin_lon =
        2.5 * script.radius_m /
        (kMetersPerDegLat * std::cos(script.farm_origin.lat * kDegToRad));
    double h_min_lat = 90, h_max_lat = -90, h_min_lon = 180, h_max_lon = -180;
    for (const auto& b : truth.berths) {
        h_min_lat = std::min(h_min_lat, b.lat);
        h_max_lat = std::max(h_max_lat, b.lat);
        h_min_lon = std::min(h_min_lon, b.lon);
        h_max_lon = std::max(h_max_lon, b.lon);
    }
    json config{{"farm_name", "synthetic campaign seed " + std::to_string(script.seed)},
                {"mmsi", script.mmsi},
                {"window",
                 {{"start", format_iso8601(truth.window.start)},
                  {"end", format_iso8601(truth.window.end)}}},
                {"n_turbines", script.n_sites},
                {"extra_clusters", 5},
                {"seeds", json::array({1, 2, 3, 4})},
                {"radius_m", script.radius_m},
                {"min_segment_duration_h", script.min_segment_duration_h},
                {"farm_bbox",
                 {{"min_lat", site_min_lat - margin_lat},
                  {"max_lat", site_max_lat + margin_lat},
                  {"min_lon", site_min_lon - margin_lon},
                  {"max_lon", site_max_lon + margin_lon}}},
                {"harbor",
                 {{"bbox",
                   {{"min_lat", h_min_lat - margin_lat},
                    {"max_lat", h_max_lat + margin_lat},
                    {"min_lon", h_min_lon - margin_lon},
                    {"max_lon", h_max_lon + margin_lon}}},
                  {"k", 4}}},
                {"inputs",
                 {{"ais_csv", json::array({campaign_csv})},
                  {"column_map", "interchange"}}},
                {"out_dir", (fs::path(out_dir) / "analysis").string()}};
    atomic_write_file((fs::path(out_dir) / "farm_config.json").string(),
                      config.dump(1) + "\n");

    std::cout << "synthetic campaign: " << campaign.trajectory.size() << " records, "
              << truth.sites.size() << " sites, " << truth.port_calls.size()
              << " port calls\nwrote " << out_dir
              << "/{campaign.csv,ground_truth.json,farm_config.json}\n";
    return kExitOk;
}

int cmd_stats(const std::string& segments_path, const std::string& window_start,
              const std::string& window_end, int n_turbines, double min_duration_h,
              const std::string& out_dir) {
    const auto start = parse_iso8601(window_start);
    const auto end = parse_iso8601(window_end);
    if (!start || !end) throw ConfigError("stats: unparseable window timestamps");
    const AnalysisWindow window = make_window(*start, *end);
    if (n_turbines < 1) throw ConfigError("stats: --n-turbines must be at least 1");

    const auto rows = read_segment_csv(segments_path);
    const Millis min_duration = millis_from_hours(min_duration_h);

    std::map<int, InstallationRecord> by_cluster;
    Millis harbor_total{0};
    std::vector<double> harbor_h;
    for (const auto& row : rows) {
        const auto& seg = row.segment;
        if (seg.duration() < min_duration) continue;
        if (seg.kind == DwellKind::harbor) {
            harbor_total += seg.duration();
            harbor_h.push_back(hours(seg.duration()));
            continue;
        }
        auto& rec = by_cluster[seg.cluster_id];
        rec.cluster_id = seg.cluster_id;
        rec.center = row.center;
        rec.segments.push_back(seg);
        rec.total_duration += seg.duration();
        rec.uncertainty_hi += seg.bracket_width();
    }
    std::vector<double> durations_h;
    Millis installation_total{0};
    for (const auto& [id, rec] : by_cluster) {
        durations_h.push_back(hours(rec.total_duration));
        installation_total += rec.total_duration;
    }
    if (durations_h.empty())
        throw InsufficientDataError("stats: no installation segments pass the duration filter");

    const FarmStats farm = farm_stats(durations_h, n_turbines);
    const TimeShare share = time_share(window, installation_total, harbor_total);
    const auto histogram = cumulative_histogram(durations_h);
    DurationStats harbor_stats{};
    if (!harbor_h.empty()) harbor_stats = duration_stats(harbor_h);

    json j{{"farm",
            {{"n", farm.n},
             {"avg_h", farm.avg_h},
             {"sd_h", farm.sd_h},
             {"min_h", farm.min_h},
             {"median_h", farm.median_h},
             {"max_h", farm.max_h},
             {"n_actual", farm.n_actual},
             {"coverage_pct", farm.coverage_pct}}},
           {"harbor",
            {{"n", harbor_stats.n},
             {"avg_h", harbor_stats.avg_h},
             {"sd_h", harbor_stats.sd_h},
             {"min_h", harbor_stats.min_h},
             {"median_h", harbor_stats.median_h},
             {"max_h", harbor_stats.max_h}}},
           {"time_share",
            {{"transit_h", hours(share.transit)},
             {"installation_h", hours(share.installation)},
             {"harbor_h", hours(share.harbor)},
             {"total_h", hours(share.total)},
             {"transit_pct", share.transit_pct},
             {"installation_pct", share.installation_pct},
             {"harbor_pct", share.harbor_pct}}},
           {"naive_avg_h", naive_average_h(window, n_turbines)}};
    json hist = json::array();
    for (const auto& [d, f] : histogram) hist.push_back(json::array({d, f}));
    j["cumulative_histogram"] = hist;

    fs::create_directories(out_dir);
    atomic_write_file((fs::path(out_dir) / "stats_report.json").string(), j.dump(1) + "\n");
    std::cout << "recomputed statistics for " << farm.n << " installations, "
              << harbor_stats.n << " harbor segments\nwrote " << out_dir
              << "/stats_report.json\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Offshore installation-campaign decomposition from jackup-vessel AIS data"};
    app.require_subcommand(1);

    auto* decode = app.add_subcommand("decode", "Decode raw !AIVDM files to interchange CSV");
    std::vector<std::string> decode_files;
    std::string decode_out = "decoded.csv";
    bool decode_strict = false;
    decode->add_option("files", decode_files, "Input files of raw AIVDM sentences")
        ->required()
        ->expected(-1);
    decode->add_option("--out", decode_out, "Output CSV path");
    decode->add_flag("--strict", decode_strict, "First bad sentence aborts the run");

    auto* analyze = app.add_subcommand("analyze", "Run the full campaign analysis");
    std::string config_path;
    analyze->add_option("--config", config_path, "Farm configuration JSON")->required();
    std::vector<std::uint64_t> seed_override;
    double radius_override = -1.0;
    int extra_override = -1;
    std::int64_t min_points_override = -1;
    std::string out_dir_override;
    bool analyze_strict = false;
    analyze->add_option("--seed", seed_override, "Replace the configured k-means seeds");
    analyze->add_option("--radius-m", radius_override, "Dwell radius in meters");
    analyze->add_option("--extra-clusters", extra_override, "Extra clusters beyond the turbine count");
    analyze->add_option("--min-points", min_points_override, "Cluster discard threshold (points)");
    analyze->add_option("--out-dir", out_dir_override, "Report output directory");
    analyze->add_flag("--strict", analyze_strict, "Strict AIVDM decoding");

    auto* synth = app.add_subcommand("synth", "Generate a ground-truth synthetic campaign");
    std::string script_path;
    std::string synth_out = "synth_campaign";
    std::uint64_t synth_seed = 0;
    bool synth_seed_set = false;
    synth->add_option("--script", script_path, "Campaign script JSON (defaults when omitted)");
    synth->add_option("--out-dir", synth_out, "Output directory");
    synth->add_option("--seed", synth_seed, "Override the script seed")
        ->each([&](const std::string&) { synth_seed_set = true; });

    auto* stats = app.add_subcommand("stats", "Recompute analytics from a segment CSV");
    std::string seg_path, win_start, win_end, stats_out = "stats_out";
    int stats_turbines = 0;
    double stats_min_duration = 1.0;
    stats->add_option("--segments", seg_path, "segments.csv from a previous run")->required();
    stats->add_option("--window-start", win_start, "Analysis window start (ISO-8601)")->required();
    stats->add_option("--window-end", win_end, "Analysis window end (ISO-8601)")->required();
    stats->add_option("--n-turbines", stats_turbines, "Actual turbine count")->required();
    stats->add_option("--min-duration-h", stats_min_duration, "Segment duration filter (hours)");
    stats->add_option("--out-dir", stats_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (decode->parsed()) return cmd_decode(decode_files, decode_out, decode_strict);
        if (analyze->parsed()) {
            FarmConfig config = load_farm_config(config_path);
            if (!seed_override.empty()) config.seeds = seed_override;
            if (radius_override > 0.0) config.radius_m = radius_override;
            if (extra_override >= 0) config.extra_clusters = extra_override;
            if (min_points_override >= 0)
                config.min_cluster_points = static_cast<std::size_t>(min_points_override);
            if (!out_dir_override.empty()) config.out_dir = out_dir_override;
            if (analyze_strict) config.strict = true;
            return cmd_analyze(std::move(config));
        }
        if (synth->parsed()) {
            CampaignScript script;
            if (!script_path.empty()) script = load_campaign_script(script_path);
            if (synth_seed_set) script.seed = synth_seed;
            return cmd_synth(script, synth_out);
        }
        if (stats->parsed())
            return cmd_stats(seg_path, win_start, win_end, stats_turbines, stats_min_duration,
                             stats_out);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InconsistencyError& e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
