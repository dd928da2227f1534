#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jacktrack/csv.hpp"
#include "jacktrack/digest.hpp"
#include "jacktrack/errors.hpp"
#include "jacktrack/pipeline.hpp"

namespace jacktrack {

using json = nlohmann::ordered_json;

namespace fs = std::filesystem;

void atomic_write_file(const std::string& path, const std::string& contents) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << contents;
        if (!out.good()) throw InputError("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

std::string fmt(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

json stats_json(const DurationStats& s) {
    return json{{"n", s.n},        {"avg_h", s.avg_h},       {"sd_h", s.sd_h},
                {"min_h", s.min_h}, {"median_h", s.median_h}, {"max_h", s.max_h}};
}

json build_report_json(const FarmConfig& config, const CampaignAnalysis& a) {
    json j;
    j["farm_name"] = config.farm_name;
    j["mmsi"] = config.mmsi;
    j["window"] = {{"start", format_iso8601(config.window.start)},
                   {"end", format_iso8601(config.window.end)},
                   {"hours", hours(config.window.length())}};

    json farm = stats_json(a.farm);
    farm["n_actual"] = a.farm.n_actual;
    farm["coverage_pct"] = a.farm.coverage_pct;
    j["farm"] = farm;
    j["harbor"] = stats_json(a.harbor_stats);

    j["time_share"] = {{"transit_h", hours(a.share.transit)},
                       {"installation_h", hours(a.share.installation)},
                       {"harbor_h", hours(a.share.harbor)},
                       {"total_h", hours(a.share.total)},
                       {"transit_pct", a.share.transit_pct},
                       {"installation_pct", a.share.installation_pct},
                       {"harbor_pct", a.share.harbor_pct}};

    json hist = json::array();
    for (const auto& [d, f] : a.histogram) hist.push_back(json::array({d, f}));
    j["cumulative_histogram"] = hist;

    j["naive_comparison"] = {{"naive_avg_h", a.naive_avg_h},
                             {"farm_avg_h", a.farm.avg_h},
                             {"increase_pct", a.naive_increase_pct}};

    json wind = json::array();
    for (const auto& w : a.wind_rows)
        wind.push_back(json{{"cluster_id", w.cluster_id},
                            {"avg_wind_mps", w.avg_wind_mps},
                            {"duration_h", w.duration_h},
                            {"n_samples", w.n_samples},
                            {"flagged", w.flagged}});
    j["wind_join"] = wind;

    j["labels"] = {{"installation", a.label_counts.installation},
                   {"harbor", a.label_counts.harbor},
                   {"transit", a.label_counts.transit}};

    json gaps = json::array();
    for (const auto& g : a.sampling.largest)
        gaps.push_back(json{{"gap_s", g.gap.count() / 1000.0},
                            {"from", format_iso8601(g.from)},
                            {"to", format_iso8601(g.to)}});
    j["sampling"] = {{"median_gap_s", a.sampling.median_gap.count() / 1000.0},
                     {"mean_gap_s", a.sampling.mean_gap.count() / 1000.0},
                     {"approx_rate_hz", a.sampling.approx_rate_hz},
                     {"largest_gaps", gaps}};

    std::size_t kept = 0;
    for (const auto& v : a.verdicts)
        if (v.kept) ++kept;
    j["clusters"] = {{"k", a.model.k},
                     {"seed", a.model.seed},
                     {"inertia", a.model.inertia},
                     {"iterations", a.model.iterations_run},
                     {"clustered_points", a.clustered_points},
                     {"min_cluster_points", a.min_cluster_points},
                     {"kept", kept},
                     {"discarded", a.verdicts.size() - kept},
                     {"installation_centers", a.installation_centers.size()},
                     {"harbor_centers", a.harbor.centers.size()}};

    json skips = json::object();
    for (const auto& [reason, n] : a.ingest.skipped) skips[reason] = n;
    j["ingest_stats"] = {{"rows_in", a.ingest.rows_in},
                         {"records_out", a.ingest.records_out},
                         {"skipped", skips},
                         {"lossless", a.ingest.lossless()}};

    json by_type = json::object();
    for (const auto& [type, n] : a.decode.skipped_by_type) by_type[std::to_string(type)] = n;
    j["decode_stats"] = {{"lines_in", a.decode.lines_in},
                         {"sentences_ok", a.decode.sentences_ok},
                         {"checksum_failures", a.decode.checksum_failures},
                         {"framing_errors", a.decode.framing_errors},
                         {"decode_errors", a.decode.decode_errors},
                         {"positions", a.decode.positions},
                         {"positions_unavailable", a.decode.positions_unavailable},
                         {"multipart_expired", a.decode.multipart_expired},
                         {"multipart_duplicates", a.decode.multipart_duplicates},
                         {"skipped_by_type", by_type}};

    j["warnings"] = a.warnings;

    json inputs = json::array();
    auto add_input = [&](const std::string& path) {
        inputs.push_back(json{{"path", path}, {"sha256", sha256_file_hex(path)}});
    };
    for (const auto& p : config.ais_csv_paths) add_input(p);
    for (const auto& p : config.aivdm_paths) add_input(p);
    if (config.wind_csv_path) add_input(*config.wind_csv_path);
    j["provenance"] = {{"config_sha256", sha256_hex(config_canonical_json(config))},
                       {"seeds", config.seeds},
                       {"inputs", inputs}};
    return j;
}

std::string segments_csv(const CampaignAnalysis& a) {
    std::ostringstream out;
    out << kSegmentCsvHeader << '\n';
    for (const auto& s : a.audit_segments) {
        const GeoPoint center = s.kind == DwellKind::installation
                                    ? a.installation_centers[static_cast<std::size_t>(s.cluster_id)]
                                    : a.harbor.centers[static_cast<std::size_t>(s.cluster_id)];
        write_segment_csv_row(out, s, center);
    }
    return out.str();
}

std::string assignments_csv(const CampaignAnalysis& a, bool with_labels) {
    std::ostringstream out;
    out << (with_labels ? "timestamp,lat,lon,cluster,kept,label" : "timestamp,lat,lon,cluster,kept")
        << '\n';
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        const auto& r = a.trajectory.records[i];
        const std::int32_t cluster = a.record_cluster[i];
        const bool kept =
            cluster >= 0 && a.verdicts[static_cast<std::size_t>(cluster)].kept;
        out << format_iso8601(r.ts) << ',' << fmt(r.lat, 7) << ',' << fmt(r.lon, 7) << ','
            << cluster << ',' << (kept ? 1 : 0);
        if (with_labels) {
            const char* label = a.labels[i] == PointLabel::installation ? "installation"
                                : a.labels[i] == PointLabel::harbor     ? "harbor"
                                                                        : "transit";
            out << ',' << label;
        }
        out << '\n';
    }
    return out.str();
}

std::string nav_status_csv(const CampaignAnalysis& a) {
    std::ostringstream out;
    out << "timestamp,lat,lon,nav_status\n";
    for (const auto& r : a.trajectory.records) {
        out << format_iso8601(r.ts) << ',' << fmt(r.lat, 7) << ',' << fmt(r.lon, 7) << ',';
        if (r.nav_status) out << *r.nav_status;
        out << '\n';
    }
    return out.str();
}

std::string model_json(const CampaignAnalysis& a) {
    json j;
    j["k"] = a.model.k;
    j["seed"] = a.model.seed;
    j["inertia"] = a.model.inertia;
    j["iterations"] = a.model.iterations_run;
    json centers = json::array();
    for (std::size_t c = 0; c < a.model.centers.size(); ++c) {
        const auto& v = a.verdicts[c];
        centers.push_back(json{{"cluster", c},
                               {"lat", a.model.centers[c].lat},
                               {"lon", a.model.centers[c].lon},
                               {"points", v.point_count},
                               {"dwell_h", hours(v.dwell)},
                               {"kept", v.kept},
                               {"reason", v.reason}});
    }
    j["clusters"] = centers;
    return j.dump(1) + "\n";
}

std::string summary_text(const FarmConfig& config, const CampaignAnalysis& a) {
    std::ostringstream out;
    out << "Campaign analysis: " << config.farm_name << " (MMSI " << config.mmsi << ")\n";
    out << "Window: " << format_iso8601(config.window.start) << " .. "
        << format_iso8601(config.window.end) << " = " << fmt(hours(config.window.length()), 1)
        << " h\n";
    out << "Records in window: " << a.trajectory.size() << " (median gap "
        << fmt(static_cast<double>(a.sampling.median_gap.count()) / 1000.0, 1) << " s)\n\n";
    out << "Installations identified: " << a.farm.n << " of " << a.farm.n_actual << " ("
        << a.farm.coverage_pct << "% coverage)\n";
    out << "  avg " << fmt(a.farm.avg_h, 1) << " h, sd " << fmt(a.farm.sd_h, 1) << ", min "
        << fmt(a.farm.min_h, 1) << ", median " << fmt(a.farm.median_h, 1) << ", max "
        << fmt(a.farm.max_h, 1) << "\n";
    out << "Harbor segments: " << a.harbor_stats.n;
    if (a.harbor_stats.n > 0)
        out << " (avg " << fmt(a.harbor_stats.avg_h, 1) << " h, median "
            << fmt(a.harbor_stats.median_h, 1) << ", max " << fmt(a.harbor_stats.max_h, 1)
            << ")";
    out << "\n\nTime share:\n";
    out << "  transit      " << fmt(hours(a.share.transit), 1) << " h ("
        << fmt(a.share.transit_pct, 1) << "%)\n";
    out << "  installation " << fmt(hours(a.share.installation), 1) << " h ("
        << fmt(a.share.installation_pct, 1) << "%)\n";
    out << "  harbor       " << fmt(hours(a.share.harbor), 1) << " h ("
        << fmt(a.share.harbor_pct, 1) << "%)\n";
    out << "  total        " << fmt(hours(a.share.total), 1) << " h\n\n";
    out << "Naive per-turbine average (window / turbines): " << fmt(a.naive_avg_h, 2)
        << " h = " << fmt(a.naive_increase_pct, 1) << "% above the identified average\n";
    for (const auto& w : a.warnings) out << "warning: " << w << "\n";
    return out.str();
}

}  // namespace

const char* const kSegmentCsvHeader =
    "kind,cluster_id,center_lat,center_lon,enter_utc,exit_utc,duration_h,"
    "bracket_lo_utc,bracket_hi_utc,bracket_h";

void write_segment_csv_row(std::ostream& out, const DwellSegment& seg, const GeoPoint& center) {
    out << (seg.kind == DwellKind::installation ? "installation" : "harbor") << ','
        << seg.cluster_id << ',' << fmt(center.lat, 7) << ',' << fmt(center.lon, 7) << ','
        << format_iso8601(seg.enter_ts) << ',' << format_iso8601(seg.exit_ts) << ','
        << fmt(hours(seg.duration()), 6) << ',' << format_iso8601(seg.bracket_lo_ts) << ','
        << format_iso8601(seg.bracket_hi_ts) << ',' << fmt(hours(seg.bracket_width()), 6)
        << '\n';
}

std::vector<SegmentCsvRow> read_segment_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open segment CSV: " + path);
    CsvReader reader(in);
    const char* needed[] = {"kind",      "cluster_id",     "center_lat",     "center_lon",
                            "enter_utc", "exit_utc",       "bracket_lo_utc", "bracket_hi_utc"};
    int idx[8];
    for (int i = 0; i < 8; ++i) {
        idx[i] = reader.column_index(needed[i]);
        if (idx[i] < 0)
            throw InputError(std::string("segment CSV misses column ") + needed[i]);
    }
    std::vector<SegmentCsvRow> rows;
    std::vector<std::string> row;
    auto ts = [&](const std::string& s) {
        const auto t = parse_iso8601(s);
        if (!t) throw InputError("segment CSV has an unparseable timestamp: " + s);
        return *t;
    };
    while (reader.next_row(row)) {
        SegmentCsvRow r;
        const std::string& kind = row[static_cast<std::size_t>(idx[0])];
        if (kind == "installation") r.segment.kind = DwellKind::installation;
        else if (kind == "harbor") r.segment.kind = DwellKind::harbor;
        else throw InputError("segment CSV has an unknown kind: " + kind);
        r.segment.cluster_id = std::stoi(row[static_cast<std::size_t>(idx[1])]);
        r.center = GeoPoint{std::stod(row[static_cast<std::size_t>(idx[2])]),
                            std::stod(row[static_cast<std::size_t>(idx[3])])};
        r.segment.enter_ts = ts(row[static_cast<std::size_t>(idx[4])]);
        r.segment.exit_ts = ts(row[static_cast<std::size_t>(idx[5])]);
        r.segment.bracket_lo_ts = ts(row[static_cast<std::size_t>(idx[6])]);
        r.segment.bracket_hi_ts = ts(row[static_cast<std::size_t>(idx[7])]);
        rows.push_back(r);
    }
    return rows;
}

std::string write_report_bundle(const FarmConfig& config, const CampaignAnalysis& a) {
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);

    json report = build_report_json(config, a);
    const std::string determinism_hash = sha256_hex(report.dump());
    report["provenance"]["determinism_sha256"] = determinism_hash;
    report["provenance"]["generated_at_utc"] = format_iso8601(
        std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now()));
    atomic_write_file((dir / "report.json").string(), report.dump(1) + "\n");

    atomic_write_file((dir / "segments.csv").string(), segments_csv(a));
    atomic_write_file((dir / "assignments.csv").string(), assignments_csv(a, false));
    atomic_write_file((dir / "labels.csv").string(), assignments_csv(a, true));
    atomic_write_file((dir / "nav_status.csv").string(), nav_status_csv(a));
    atomic_write_file((dir / "model.json").string(), model_json(a));

    std::ostringstream hist;
    hist << "duration_h,cumulative_fraction\n";
    for (const auto& [d, f] : a.histogram) hist << fmt(d, 6) << ',' << fmt(f, 9) << '\n';
    atomic_write_file((dir / "histogram.csv").string(), hist.str());

    std::ostringstream farm;
    farm << "n_identified,avg_h,sd_h,min_h,median_h,max_h,n_actual,coverage_pct\n"
         << a.farm.n << ',' << fmt(a.farm.avg_h, 4) << ',' << fmt(a.farm.sd_h, 4) << ','
         << fmt(a.farm.min_h, 4) << ',' << fmt(a.farm.median_h, 4) << ','
         << fmt(a.farm.max_h, 4) << ',' << a.farm.n_actual << ',' << a.farm.coverage_pct
         << '\n';
    atomic_write_file((dir / "farm_stats.csv").string(), farm.str());

    std::ostringstream harbor;
    harbor << "segments,avg_h,sd_h,min_h,median_h,max_h\n"
           << a.harbor_stats.n << ',' << fmt(a.harbor_stats.avg_h, 4) << ','
           << fmt(a.harbor_stats.sd_h, 4) << ',' << fmt(a.harbor_stats.min_h, 4) << ','
           << fmt(a.harbor_stats.median_h, 4) << ',' << fmt(a.harbor_stats.max_h, 4) << '\n';
    atomic_write_file((dir / "harbor_stats.csv").string(), harbor.str());

    std::ostringstream share;
    share << "transit_h,installation_h,harbor_h,total_h,transit_pct,installation_pct,harbor_pct\n"
          << fmt(hours(a.share.transit), 4) << ',' << fmt(hours(a.share.installation), 4) << ','
          << fmt(hours(a.share.harbor), 4) << ',' << fmt(hours(a.share.total), 4) << ','
          << fmt(a.share.transit_pct, 1) << ',' << fmt(a.share.installation_pct, 1) << ','
          << fmt(a.share.harbor_pct, 1) << '\n';
    atomic_write_file((dir / "time_share.csv").string(), share.str());

    std::ostringstream wind;
    wind << "cluster_id,avg_wind_mps,duration_h,n_samples,flagged\n";
    for (const auto& w : a.wind_rows)
        wind << w.cluster_id << ',' << fmt(w.avg_wind_mps, 3) << ',' << fmt(w.duration_h, 4)
             << ',' << w.n_samples << ',' << (w.flagged ? 1 : 0) << '\n';
    atomic_write_file((dir / "wind_join.csv").string(), wind.str());

    atomic_write_file((dir / "summary.txt").string(), summary_text(config, a));
    return determinism_hash;
}

}  // namespace jacktrack
