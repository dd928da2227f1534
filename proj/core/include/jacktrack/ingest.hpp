#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jacktrack/geo.hpp"
#include "jacktrack/records.hpp"
#include "jacktrack/time.hpp"

namespace jacktrack {

// Maps broker CSV columns onto PositionRecord fields. Defaults match the
// Danish Maritime Authority export.
struct ColumnMap {
    std::string timestamp = "# Timestamp";
    std::string mmsi = "MMSI";
    std::string lat = "Latitude";
    std::string lon = "Longitude";
    std::string sog = "SOG";
    std::string cog = "COG";
    std::string nav_status = "Navigational status";
    // One of "DD/MM/YYYY HH:MM:SS", "ISO8601", "EPOCH_S".
    std::string timestamp_format = "DD/MM/YYYY HH:MM:SS";

    static ColumnMap danish() { return ColumnMap{}; }
    // The canonical interchange form every downstream command consumes.
    static ColumnMap interchange();
};

struct IngestStats {
    std::uint64_t rows_in = 0;
    std::uint64_t records_out = 0;
    std::map<std::string, std::uint64_t> skipped;  // reason -> count

    // Lossless modulo declared skips: rows_in == records_out + sum(skips).
    bool lossless() const;
    void merge(const IngestStats& other);
};

// One record per valid row; invalid rows are counted per reason and
// skipped. Throws InputError if a mapped column is missing (checked
// before any row is processed).
std::vector<PositionRecord> parse_csv(std::istream& in, const ColumnMap& map, IngestStats& stats);

struct RecordFilter {
    std::optional<std::uint32_t> mmsi;
    std::optional<AnalysisWindow> window;
    std::optional<BoundingBox> bbox;

    bool matches(const PositionRecord& r) const;
};

std::vector<PositionRecord> filter_records(std::span<const PositionRecord> records,
                                           const RecordFilter& filter);

// Optional teleport filter: drops records implying more than `max_kn`
// from their predecessor. Off by default in the pipeline.
std::vector<PositionRecord> drop_teleports(std::span<const PositionRecord> sorted_records,
                                           double max_kn, std::uint64_t* dropped = nullptr);

// Sorts by timestamp (stable), collapses exact-duplicate timestamps to
// the first record in input order. Throws InputError on mixed MMSIs.
Trajectory build_trajectory(std::vector<PositionRecord> records, std::string source = {});

struct GapInfo {
    Millis gap{};
    Timestamp from{};
    Timestamp to{};
};

struct SamplingReport {
    Millis median_gap{};
    Millis mean_gap{};
    double approx_rate_hz = 0.0;
    std::vector<GapInfo> largest;  // descending, up to top_n
};

// Gap statistics over consecutive records. Throws InsufficientDataError
// for fewer than 2 records.
SamplingReport sampling_report(const Trajectory& traj, std::size_t top_n = 10);

// Canonical interchange CSV: "timestamp_utc,mmsi,lat,lon,sog,cog,nav_status".
extern const char* const kInterchangeHeader;
void write_interchange_row(std::ostream& out, const PositionRecord& r);

}  // namespace jacktrack
