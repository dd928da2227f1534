#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "jacktrack/clustering.hpp"
#include "jacktrack/geo.hpp"
#include "jacktrack/records.hpp"
#include "jacktrack/time.hpp"

namespace jacktrack {

enum class DwellKind { installation, harbor };

// One maximal radius-entry-to-exit interval. Durations come from the
// in-radius endpoints (lower bound); the bracket spans the adjacent
// out-of-radius fixes (upper bound on the true dwell).
struct DwellSegment {
    int cluster_id = 0;
    DwellKind kind = DwellKind::installation;
    Timestamp enter_ts{};
    Timestamp exit_ts{};
    Timestamp bracket_lo_ts{};
    Timestamp bracket_hi_ts{};

    Millis duration() const { return exit_ts - enter_ts; }
    Millis bracket_width() const { return bracket_hi_ts - bracket_lo_ts; }
};

// Maximal runs of consecutive in-radius records. A data gap inside the
// radius does not break a run; only an out-of-radius record does.
std::vector<DwellSegment> extract_dwell_segments(const Trajectory& traj, const GeoPoint& center,
                                                 double radius_m, DwellKind kind,
                                                 int cluster_id);

struct InstallationRecord {
    int cluster_id = 0;
    GeoPoint center{};
    std::vector<DwellSegment> segments;
    Millis total_duration{};   // sum of segment durations
    Millis uncertainty_hi{};   // sum of bracket widths
    std::size_t n_segments() const { return segments.size(); }
};

// Sums segments into one cumulative record; empty input yields nothing
// (the cluster contributes no installation).
std::optional<InstallationRecord> aggregate_installation(int cluster_id, const GeoPoint& center,
                                                         std::vector<DwellSegment> segments);

struct HarborHint {
    std::optional<BoundingBox> bbox;
    std::optional<GeoPoint> seed;
    double seed_radius_m = 5000.0;

    bool configured() const { return bbox.has_value() || seed.has_value(); }
    bool contains(const GeoPoint& p) const;
};

struct HarborOptions {
    int k_harbor = 4;  // must allow multiple berths
    std::optional<std::size_t> min_points;  // absent: 1% of hint-region records
    double radius_m = 100.0;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4};
    int max_iter = 300;
};

struct HarborDetection {
    std::vector<GeoPoint> centers;            // kept berth centers, merged
    std::vector<ClusterVerdict> verdicts;
    std::vector<DwellSegment> segments;       // against the full trajectory
    bool empty_hint = false;                  // no records in the hint region
};

// Same method as turbine identification, restricted to the hint region:
// cluster, discard path clusters, extract dwell segments with the same
// radius rule against kept centers.
HarborDetection detect_harbor(const Trajectory& traj, const HarborHint& hint,
                              const HarborOptions& options);

// Kept centers closer than merge_dist collapse into one point-count
// weighted center, so dwell circles of distinct berths cannot overlap.
std::vector<GeoPoint> merge_close_centers(std::span<const GeoPoint> centers,
                                          std::span<const std::size_t> weights,
                                          double merge_dist_m);

// transit = window - installation - harbor, exact in integer milliseconds.
// Throws InconsistencyError (naming all three inputs) on a negative residual.
Millis compute_transit(const AnalysisWindow& window, Millis installation_total,
                       Millis harbor_total);

enum class PointLabel : std::uint8_t { installation, harbor, transit };

struct LabelCounts {
    std::size_t installation = 0;
    std::size_t harbor = 0;
    std::size_t transit = 0;
};

// Radius membership against kept centers; installation wins when a record
// is within both an installation and a harbor circle.
std::vector<PointLabel> label_points(const Trajectory& traj,
                                     std::span<const GeoPoint> installation_centers,
                                     std::span<const GeoPoint> harbor_centers,
                                     double radius_m = 100.0);

LabelCounts count_labels(std::span<const PointLabel> labels);

}  // namespace jacktrack
