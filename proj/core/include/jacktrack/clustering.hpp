#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jacktrack/geo.hpp"
#include "jacktrack/records.hpp"

namespace jacktrack {

// k = actual turbine count plus a few extra to soak up transit paths.
int select_k(int n_turbines, int extra);

struct KMeansOptions {
    int k = 1;
    std::uint64_t seed = 1;
    int max_iter = 300;
    // Center-movement stop threshold in degrees; 0 keeps iterating until
    // the assignment is a fixpoint, which guarantees the center-mean
    // identity exactly.
    double tol_deg = 0.0;
};

struct ClusterModel {
    int k = 0;
    std::vector<GeoPoint> centers;          // raw-degree means
    std::vector<std::int32_t> assignments;  // per input point, index into centers
    double inertia = 0.0;                   // sum of squared degree-space distances
    int iterations_run = 0;
    std::uint64_t seed = 0;
};

// Squared Euclidean distance in raw degrees; the clustering metric.
inline double degree_dist2(const GeoPoint& a, const GeoPoint& b) {
    const double dlat = a.lat - b.lat;
    const double dlon = a.lon - b.lon;
    return dlat * dlat + dlon * dlon;
}

// Lloyd iterations from a seeded k-means++ initialization. Points are
// canonically pre-sorted internally so that permuting the input changes
// labels only. Throws ConfigError when points.size() < k or k < 1.
ClusterModel kmeans_fit(std::span<const GeoPoint> points, const KMeansOptions& options);

// Best (minimal-inertia) model across seeds; ties break to the lowest seed.
ClusterModel best_of_restarts(std::span<const GeoPoint> points, int k,
                              std::span<const std::uint64_t> seeds, int max_iter = 300,
                              double tol_deg = 0.0);

// Recomputed objective for a model over its input points (verification path).
double recompute_inertia(std::span<const GeoPoint> points, const ClusterModel& model);

struct ClusterVerdict {
    int cluster = 0;
    std::size_t point_count = 0;
    Millis dwell{};  // diagnostic: in-radius time of assigned records
    bool kept = false;
    std::string reason;
};

// Marks clusters with fewer than min_points assigned records as
// discarded; the trajectory must be the record sequence the model was
// fitted on (index-aligned with assignments).
std::vector<ClusterVerdict> discard_path_clusters(const ClusterModel& model,
                                                  const Trajectory& traj,
                                                  std::size_t min_points,
                                                  double radius_m = 100.0);

}  // namespace jacktrack
