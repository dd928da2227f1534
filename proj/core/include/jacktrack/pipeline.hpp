#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jacktrack/analytics.hpp"
#include "jacktrack/clustering.hpp"
#include "jacktrack/config.hpp"
#include "jacktrack/ingest.hpp"
#include "jacktrack/nmea.hpp"
#include "jacktrack/segmentation.hpp"

namespace jacktrack {

// Everything cmd_analyze computes, before serialization.
struct CampaignAnalysis {
    Trajectory trajectory;  // windowed, per-vessel
    SamplingReport sampling;
    IngestStats ingest;
    nmea::DecodeStats decode;

    ClusterModel model;
    std::vector<ClusterVerdict> verdicts;
    std::vector<GeoPoint> installation_centers;  // kept, merged
    std::size_t clustered_points = 0;
    std::size_t min_cluster_points = 0;

    std::vector<InstallationRecord> installations;   // duration-filtered
    std::vector<DwellSegment> audit_segments;        // unfiltered, all kinds
    HarborDetection harbor;
    std::vector<DwellSegment> harbor_segments;       // duration-filtered

    FarmStats farm{};
    DurationStats harbor_stats{};
    TimeShare share{};
    std::vector<std::pair<double, double>> histogram;
    double naive_avg_h = 0.0;
    double naive_increase_pct = 0.0;  // naive vs farm average
    std::vector<WindJoinRow> wind_rows;

    std::vector<PointLabel> labels;
    LabelCounts label_counts{};
    // Per windowed record: its cluster assignment, -1 when the record was
    // not part of the clustering input.
    std::vector<std::int32_t> record_cluster;
    std::vector<std::string> warnings;
};

// Ingest from the configured inputs, then cluster -> discard -> segment ->
// harbor -> transit -> analytics. Deterministic for fixed config + inputs.
CampaignAnalysis analyze_campaign(const FarmConfig& config);

// The same pipeline on an in-memory trajectory (used by synth-driven tests).
CampaignAnalysis analyze_trajectory(const FarmConfig& config, Trajectory traj,
                                    std::vector<WindSample> wind = {});

// Writes report.json, the per-table CSVs, diagnostics, and summary.txt.
// All files are written atomically (temp + rename). Returns the
// determinism hash embedded in the report.
std::string write_report_bundle(const FarmConfig& config, const CampaignAnalysis& analysis);

// Recomputes analytics from an existing segment CSV (cmd_stats).
struct SegmentCsvRow {
    DwellSegment segment;
    GeoPoint center;
};
std::vector<SegmentCsvRow> read_segment_csv(const std::string& path);

extern const char* const kSegmentCsvHeader;
void write_segment_csv_row(std::ostream& out, const DwellSegment& seg, const GeoPoint& center);

// Atomic file write helper (temp + rename in the target directory).
void atomic_write_file(const std::string& path, const std::string& contents);

}  // namespace jacktrack
