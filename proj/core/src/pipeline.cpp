#include "jacktrack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "jacktrack/csv.hpp"
#include "jacktrack/errors.hpp"

namespace jacktrack {

namespace {

std::vector<WindSample> read_wind_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open wind CSV: " + path);
    CsvReader reader(in);
    const int ts_col = reader.column_index("timestamp_utc");
    const int speed_col = reader.column_index("wind_speed_mps");
    if (ts_col < 0 || speed_col < 0)
        throw InputError("wind CSV needs columns timestamp_utc,wind_speed_mps: " + path);
    std::vector<WindSample> wind;
    std::vector<std::string> row;
    while (reader.next_row(row)) {
        if (row.size() <= static_cast<std::size_t>(std::max(ts_col, speed_col))) continue;
        const auto ts = parse_iso8601(row[static_cast<std::size_t>(ts_col)]);
        if (!ts) throw InputError("wind CSV has an unparseable timestamp: " +
                                  row[static_cast<std::size_t>(ts_col)]);
        WindSample w;
        w.ts = *ts;
        try {
            w.speed_mps = std::stod(row[static_cast<std::size_t>(speed_col)]);
        } catch (...) {
            throw InputError("wind CSV has an unparseable speed: " +
                             row[static_cast<std::size_t>(speed_col)]);
        }
        wind.push_back(w);
    }
    std::sort(wind.begin(), wind.end(),
              [](const WindSample& a, const WindSample& b) { return a.ts < b.ts; });
    return wind;
}

struct Inputs {
    std::vector<PositionRecord> records;
    IngestStats ingest;
    nmea::DecodeStats decode;
    std::vector<WindSample> wind;
};

Inputs read_inputs(const FarmConfig& config) {
    Inputs in;
    for (const auto& path : config.ais_csv_paths) {
        std::ifstream f(path);
        if (!f) throw InputError("cannot open AIS CSV: " + path);
        auto rec = parse_csv(f, config.column_map, in.ingest);
        in.records.insert(in.records.end(), rec.begin(), rec.end());
    }
    if (!config.aivdm_paths.empty()) {
        nmea::StreamDecoder decoder({config.strict, 32});
        for (const auto& path : config.aivdm_paths) {
            std::ifstream f(path);
            if (!f) throw InputError("cannot open AIVDM file: " + path);
            std::string line;
            while (std::getline(f, line)) {
                const auto timed = decoder.feed_line(line);
                if (!timed) continue;
                ++in.ingest.rows_in;
                if (!timed->broker_ts) {
                    ++in.ingest.skipped["no broker timestamp"];
                    continue;
                }
                const auto& p = timed->position;
                PositionRecord r;
                r.ts = *timed->broker_ts;
                r.mmsi = p.mmsi;
                r.lat = p.lat;
                r.lon = p.lon;
                r.sog_kn = p.sog_kn;
                r.cog_deg = p.cog_deg;
                r.nav_status = p.nav_status;
                in.records.push_back(r);
                ++in.ingest.records_out;
            }
        }
        decoder.finish();
        in.decode = decoder.stats();
    }
    if (config.wind_csv_path) in.wind = read_wind_csv(*config.wind_csv_path);
    return in;
}

}  // namespace

CampaignAnalysis analyze_trajectory(const FarmConfig& config, Trajectory traj,
                                    std::vector<WindSample> wind) {
    CampaignAnalysis a;

    RecordFilter filter;
    filter.mmsi = config.mmsi;
    filter.window = config.window;
    auto windowed = filter_records(traj.records, filter);
    if (config.teleport_filter) {
        std::uint64_t dropped = 0;
        auto sorted = build_trajectory(std::move(windowed)).records;
        windowed = drop_teleports(sorted, config.teleport_max_kn, &dropped);
        if (dropped > 0)
            a.warnings.push_back("teleport filter dropped " + std::to_string(dropped) +
                                 " records");
    }
    a.trajectory = build_trajectory(std::move(windowed), std::move(traj.source));
    if (a.trajectory.size() < 2)
        throw InsufficientDataError("only " + std::to_string(a.trajectory.size()) +
                                    " records for MMSI " + std::to_string(config.mmsi) +
                                    " inside the analysis window");
    a.sampling = sampling_report(a.trajectory);

    // Clustering input: the farm area when configured, otherwise everything
    // outside the harbor hint region.
    Trajectory farm_traj;
    farm_traj.mmsi = a.trajectory.mmsi;
    std::vector<std::size_t> farm_index;  // farm record -> windowed record
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        const auto& r = a.trajectory.records[i];
        bool use;
        if (config.farm_bbox)
            use = config.farm_bbox->contains(r.point());
        else if (config.harbor_hint.configured())
            use = !config.harbor_hint.contains(r.point());
        else
            use = true;
        if (use) {
            farm_traj.records.push_back(r);
            farm_index.push_back(i);
        }
    }
    a.clustered_points = farm_traj.size();

    std::vector<GeoPoint> points;
    points.reserve(farm_traj.size());
    for (const auto& r : farm_traj.records) points.push_back(r.point());

    const int k = select_k(config.n_turbines, config.extra_clusters);
    a.model = best_of_restarts(points, k, config.seeds, config.kmeans_max_iter,
                               config.kmeans_tol_deg);
    a.min_cluster_points = config.min_cluster_points.value_or(std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(config.min_cluster_points_frac *
                                               static_cast<double>(points.size())))));
    a.verdicts = discard_path_clusters(a.model, farm_traj, a.min_cluster_points,
                                       config.radius_m);

    std::vector<GeoPoint> kept;
    std::vector<std::size_t> kept_weight;
    for (const auto& v : a.verdicts) {
        if (!v.kept) continue;
        kept.push_back(a.model.centers[static_cast<std::size_t>(v.cluster)]);
        kept_weight.push_back(v.point_count);
    }
    a.installation_centers = merge_close_centers(kept, kept_weight, 2.0 * config.radius_m);
    if (a.installation_centers.size() != kept.size())
        a.warnings.push_back(std::to_string(kept.size() - a.installation_centers.size()) +
                             " kept clusters merged with a close neighbor");

    const Millis min_duration = millis_from_hours(config.min_segment_duration_h);
    Millis installation_total{0};
    std::vector<double> durations_h;
    for (std::size_t c = 0; c < a.installation_centers.size(); ++c) {
        auto segs = extract_dwell_segments(a.trajectory, a.installation_centers[c],
                                           config.radius_m, DwellKind::installation,
                                           static_cast<int>(c));
        a.audit_segments.insert(a.audit_segments.end(), segs.begin(), segs.end());
        std::vector<DwellSegment> qualified;
        for (const auto& s : segs)
            if (s.duration() >= min_duration) qualified.push_back(s);
        if (auto rec = aggregate_installation(static_cast<int>(c), a.installation_centers[c],
                                              std::move(qualified))) {
            installation_total += rec->total_duration;
            durations_h.push_back(hours(rec->total_duration));
            a.installations.push_back(std::move(*rec));
        }
    }

    Millis harbor_total{0};
    if (config.harbor_hint.configured()) {
        HarborOptions hopt;
        hopt.k_harbor = config.k_harbor;
        hopt.radius_m = config.radius_m;
        hopt.seeds = config.seeds;
        hopt.max_iter = config.kmeans_max_iter;
        a.harbor = detect_harbor(a.trajectory, config.harbor_hint, hopt);
        if (a.harbor.empty_hint)
            a.warnings.push_back("no records inside the harbor hint region");
        a.audit_segments.insert(a.audit_segments.end(), a.harbor.segments.begin(),
                                a.harbor.segments.end());
        for (const auto& s : a.harbor.segments)
            if (s.duration() >= min_duration) {
                a.harbor_segments.push_back(s);
                harbor_total += s.duration();
            }
    } else {
        a.warnings.push_back("no harbor hint configured; harbor time counted as zero");
    }

    if (durations_h.empty())
        throw InconsistencyError("no installations survived segmentation; check the farm "
                                 "bbox, radius, and discard threshold");
    a.farm = farm_stats(durations_h, config.n_turbines);
    if (a.farm.n > static_cast<std::size_t>(config.n_turbines))
        a.warnings.push_back("identified more installations (" + std::to_string(a.farm.n) +
                             ") than actual turbines (" + std::to_string(config.n_turbines) +
                             ")");
    if (a.farm.avg_h < a.farm.median_h)
        a.warnings.push_back("farm average below median, unusual for campaign data");
    if (!a.harbor_segments.empty()) {
        std::vector<double> harbor_h;
        harbor_h.reserve(a.harbor_segments.size());
        for (const auto& s : a.harbor_segments) harbor_h.push_back(hours(s.duration()));
        a.harbor_stats = duration_stats(harbor_h);
    }

    a.share = time_share(config.window, installation_total, harbor_total);
    a.histogram = cumulative_histogram(durations_h);
    a.naive_avg_h = naive_average_h(config.window, config.n_turbines);
    a.naive_increase_pct = 100.0 * (a.naive_avg_h / a.farm.avg_h - 1.0);

    if (!wind.empty()) a.wind_rows = wind_join(a.installations, wind);

    std::vector<GeoPoint> harbor_centers = a.harbor.centers;
    a.labels = label_points(a.trajectory, a.installation_centers, harbor_centers,
                            config.radius_m);
    a.label_counts = count_labels(a.labels);

    // Assignment export bookkeeping: map windowed records back to their
    // cluster, -1 for records that were not part of the clustering input.
    a.record_cluster.assign(a.trajectory.size(), -1);
    for (std::size_t fi = 0; fi < farm_index.size(); ++fi)
        a.record_cluster[farm_index[fi]] = a.model.assignments[fi];

    return a;
}

CampaignAnalysis analyze_campaign(const FarmConfig& config) {
    Inputs in = read_inputs(config);
    Trajectory traj;
    traj.records = std::move(in.records);
    if (!traj.records.empty()) traj.mmsi = config.mmsi;
    // build_trajectory enforces the single-MMSI invariant after filtering.
    std::vector<PositionRecord> mine;
    for (auto& r : traj.records)
        if (r.mmsi == config.mmsi) mine.push_back(r);
    Trajectory vessel;
    vessel.mmsi = config.mmsi;
    vessel.records = std::move(mine);
    vessel.source = "configured inputs";
    CampaignAnalysis a = analyze_trajectory(config, std::move(vessel), std::move(in.wind));
    a.ingest = in.ingest;
    a.decode = in.decode;
    return a;
}

}  // namespace jacktrack
