#include "jacktrack/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "jacktrack/csv.hpp"
#include "jacktrack/errors.hpp"

namespace jacktrack {

namespace {

std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::uint32_t> parse_mmsi(std::string_view s) {
    if (s.empty() || s.size() > 9) return std::nullopt;
    std::uint32_t v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) return std::nullopt;
    return v;
}

// The Danish feed reports navigational status as text.
std::optional<int> parse_nav_status(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        ec == std::errc{} && p == s.data() + s.size())
        return v >= 0 && v <= 15 ? std::optional<int>{v} : std::nullopt;
    static const std::pair<std::string_view, int> kNames[] = {
        {"Under way using engine", 0}, {"At anchor", 1},
        {"Not under command", 2},      {"Restricted maneuverability", 3},
        {"Constrained by her draught", 4}, {"Moored", 5},
        {"Aground", 6},                {"Engaged in fishing", 7},
        {"Under way sailing", 8},      {"Reserved for future amendment [HSC]", 9},
        {"Reserved for future amendment [WIG]", 10}, {"Power-driven vessel towing astern", 11},
        {"Power-driven vessel pushing ahead", 12},   {"Reserved for future use", 13},
        {"AIS-SART", 14},              {"Unknown value", 15},
    };
    for (const auto& [name, code] : kNames)
        if (s == name) return code;
    return std::nullopt;
}

std::optional<Timestamp> parse_ts(std::string_view s, const std::string& format) {
    if (format == "ISO8601") return parse_iso8601(s);
    if (format == "EPOCH_S") return parse_epoch_seconds(s);
    if (format == "DD/MM/YYYY HH:MM:SS") return parse_dmy_hms(s);
    if (format == "YYYY-MM-DD HH:MM:SS") return parse_iso8601(s);
    return std::nullopt;
}

}  // namespace

ColumnMap ColumnMap::interchange() {
    ColumnMap m;
    m.timestamp = "timestamp_utc";
    m.mmsi = "mmsi";
    m.lat = "lat";
    m.lon = "lon";
    m.sog = "sog";
    m.cog = "cog";
    m.nav_status = "nav_status";
    m.timestamp_format = "ISO8601";
    return m;
}

bool IngestStats::lossless() const {
    const std::uint64_t skips = std::accumulate(
        skipped.begin(), skipped.end(), std::uint64_t{0},
        [](std::uint64_t acc, const auto& kv) { return acc + kv.second; });
    return rows_in == records_out + skips;
}

void IngestStats::merge(const IngestStats& other) {
    rows_in += other.rows_in;
    records_out += other.records_out;
    for (const auto& [reason, n] : other.skipped) skipped[reason] += n;
}

std::vector<PositionRecord> parse_csv(std::istream& in, const ColumnMap& map,
                                      IngestStats& stats) {
    CsvReader reader(in);
    if (reader.header().empty()) return {};  // empty file: zero rows, zero records

    struct Cols {
        int ts, mmsi, lat, lon, sog, cog, nav;
    } cols{};
    auto require = [&](const std::string& name) {
        const int idx = reader.column_index(name);
        if (idx < 0) throw InputError("missing mapped column \"" + name + "\"");
        return idx;
    };
    cols.ts = require(map.timestamp);
    cols.mmsi = require(map.mmsi);
    cols.lat = require(map.lat);
    cols.lon = require(map.lon);
    // Kinematics and status are optional in the schema sense: absent columns
    // simply leave the fields empty.
    cols.sog = reader.column_index(map.sog);
    cols.cog = reader.column_index(map.cog);
    cols.nav = reader.column_index(map.nav_status);

    if (parse_ts("2020-01-02T03:04:05Z", map.timestamp_format) == std::nullopt &&
        parse_ts("02/01/2020 03:04:05", map.timestamp_format) == std::nullopt &&
        parse_ts("1577934245", map.timestamp_format) == std::nullopt)
        throw InputError("unsupported timestamp format \"" + map.timestamp_format + "\"");

    std::vector<PositionRecord> out;
    std::vector<std::string> row;
    auto field = [&](int idx) -> std::string_view {
        return idx >= 0 && static_cast<std::size_t>(idx) < row.size() ? row[idx]
                                                                       : std::string_view{};
    };
    while (reader.next_row(row)) {
        ++stats.rows_in;
        const std::size_t needed = static_cast<std::size_t>(
            std::max({cols.ts, cols.mmsi, cols.lat, cols.lon}));
        if (row.size() <= needed) {
            ++stats.skipped["short row"];
            continue;
        }
        const auto ts = parse_ts(field(cols.ts), map.timestamp_format);
        if (!ts) {
            ++stats.skipped["unparseable timestamp"];
            continue;
        }
        const auto mmsi = parse_mmsi(field(cols.mmsi));
        if (!mmsi) {
            ++stats.skipped["malformed MMSI"];
            continue;
        }
        const auto lat = parse_double(field(cols.lat));
        const auto lon = parse_double(field(cols.lon));
        if (!lat || !lon) {
            ++stats.skipped["unparseable coordinate"];
            continue;
        }
        if (!coords_valid(*lat, *lon)) {
            ++stats.skipped["coordinate out of range"];
            continue;
        }
        PositionRecord r;
        r.ts = *ts;
        r.mmsi = *mmsi;
        r.lat = *lat;
        r.lon = *lon;
        if (auto sog = parse_double(field(cols.sog)); sog && *sog >= 0.0) r.sog_kn = sog;
        if (auto cog = parse_double(field(cols.cog)); cog && *cog >= 0.0 && *cog < 360.0)
            r.cog_deg = cog;
        r.nav_status = parse_nav_status(field(cols.nav));
        out.push_back(r);
        ++stats.records_out;
    }
    return out;
}

bool RecordFilter::matches(const PositionRecord& r) const {
    if (mmsi && r.mmsi != *mmsi) return false;
    if (window && !window->contains(r.ts)) return false;
    if (bbox && !bbox->contains(r.point())) return false;
    return true;
}

std::vector<PositionRecord> filter_records(std::span<const PositionRecord> records,
                                           const RecordFilter& filter) {
    std::vector<PositionRecord> out;
    for (const auto& r : records)
        if (filter.matches(r)) out.push_back(r);
    return out;
}

std::vector<PositionRecord> drop_teleports(std::span<const PositionRecord> sorted_records,
                                           double max_kn, std::uint64_t* dropped) {
    constexpr double kKnotsToMps = 0.514444;
    std::vector<PositionRecord> out;
    std::uint64_t n_dropped = 0;
    for (const auto& r : sorted_records) {
        if (!out.empty()) {
            const auto& prev = out.back();
            const double dt_s = std::chrono::duration<double>(r.ts - prev.ts).count();
            if (dt_s > 0.0) {
                const double mps = haversine_m(prev.point(), r.point()) / dt_s;
                if (mps > max_kn * kKnotsToMps) {
                    ++n_dropped;
                    continue;
                }
            }
        }
        out.push_back(r);
    }
    if (dropped) *dropped = n_dropped;
    return out;
}

Trajectory build_trajectory(std::vector<PositionRecord> records, std::string source) {
    Trajectory traj;
    traj.source = std::move(source);
    if (records.empty()) return traj;
    traj.mmsi = records.front().mmsi;
    for (const auto& r : records)
        if (r.mmsi != traj.mmsi)
            throw InputError("build_trajectory: mixed MMSIs " + std::to_string(traj.mmsi) +
                             " and " + std::to_string(r.mmsi));
    std::stable_sort(records.begin(), records.end(),
                     [](const PositionRecord& a, const PositionRecord& b) { return a.ts < b.ts; });
    traj.records.reserve(records.size());
    for (auto& r : records) {
        if (!traj.records.empty() && traj.records.back().ts == r.ts) continue;  // first wins
        traj.records.push_back(std::move(r));
    }
    return traj;
}

SamplingReport sampling_report(const Trajectory& traj, std::size_t top_n) {
    if (traj.size() < 2)
        throw InsufficientDataError("sampling_report needs at least 2 records, got " +
                                    std::to_string(traj.size()));
    std::vector<Millis> gaps;
    gaps.reserve(traj.size() - 1);
    for (std::size_t i = 1; i < traj.size(); ++i)
        gaps.push_back(traj.records[i].ts - traj.records[i - 1].ts);

    SamplingReport rep;
    std::vector<Millis> sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    rep.median_gap = n % 2 == 1 ? sorted[n / 2] : Millis{(sorted[n / 2 - 1] + sorted[n / 2]).count() / 2};
    std::int64_t total = 0;
    for (const auto g : gaps) total += g.count();
    rep.mean_gap = Millis{total / static_cast<std::int64_t>(n)};
    rep.approx_rate_hz =
        rep.median_gap.count() > 0 ? 1000.0 / static_cast<double>(rep.median_gap.count()) : 0.0;

    std::vector<std::size_t> idx(gaps.size());
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t keep = std::min(top_n, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          return gaps[a] != gaps[b] ? gaps[a] > gaps[b] : a < b;
                      });
    for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t g = idx[i];
        rep.largest.push_back(GapInfo{gaps[g], traj.records[g].ts, traj.records[g + 1].ts});
    }
    return rep;
}

const char* const kInterchangeHeader = "timestamp_utc,mmsi,lat,lon,sog,cog,nav_status";

void write_interchange_row(std::ostream& out, const PositionRecord& r) {
    out << format_iso8601(r.ts) << ',' << r.mmsi << ',';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7f,%.7f", r.lat, r.lon);
    out << buf;
    out << ',';
    if (r.sog_kn) {
        std::snprintf(buf, sizeof buf, "%.1f", *r.sog_kn);
        out << buf;
    }
    out << ',';
    if (r.cog_deg) {
        std::snprintf(buf, sizeof buf, "%.1f", *r.cog_deg);
        out << buf;
    }
    out << ',';
    if (r.nav_status) out << *r.nav_status;
    out << '\n';
}

}  // namespace jacktrack
