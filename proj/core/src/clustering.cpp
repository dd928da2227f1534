#include "jacktrack/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "jacktrack/errors.hpp"

namespace jacktrack {

namespace {

double u01(std::mt19937_64& rng) {
    // 53-bit mantissa draw; identical across standard libraries.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// D^2-weighted k-means++ seeding over the canonically ordered points.
std::vector<GeoPoint> kmeanspp_init(const std::vector<GeoPoint>& pts, int k,
                                    std::mt19937_64& rng) {
    const std::size_t n = pts.size();
    std::vector<GeoPoint> centers;
    centers.reserve(static_cast<std::size_t>(k));
    std::size_t first = static_cast<std::size_t>(u01(rng) * static_cast<double>(n));
    if (first >= n) first = n - 1;
    centers.push_back(pts[first]);

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = degree_dist2(pts[i], centers[0]);
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        std::size_t pick;
        if (total <= 0.0) {
            pick = static_cast<std::size_t>(u01(rng) * static_cast<double>(n));
            if (pick >= n) pick = n - 1;
        } else {
            const double r = u01(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(pts[pick]);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], degree_dist2(pts[i], centers.back()));
    }
    return centers;
}

std::size_t nearest_center(const GeoPoint& p, const std::vector<GeoPoint>& centers) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = degree_dist2(p, centers[c]);
        if (d < best_d) {  // ties break to the lowest index
            best_d = d;
            best = c;
        }
    }
    return best;
}

double objective(const std::vector<GeoPoint>& pts, const std::vector<GeoPoint>& centers,
                 const std::vector<std::int32_t>& assign) {
    double j = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        j += degree_dist2(pts[i], centers[static_cast<std::size_t>(assign[i])]);
    return j;
}

}  // namespace

int select_k(int n_turbines, int extra) {
    if (n_turbines < 1)
        throw ConfigError("select_k: turbine count must be at least 1, got " +
                          std::to_string(n_turbines));
    if (extra < 0) throw ConfigError("select_k: extra cluster count must be non-negative");
    return n_turbines + extra;
}

ClusterModel kmeans_fit(std::span<const GeoPoint> points, const KMeansOptions& options) {
    const std::size_t n = points.size();
    if (options.k < 1) throw ConfigError("kmeans_fit: k must be at least 1");
    if (n < static_cast<std::size_t>(options.k))
        throw ConfigError("kmeans_fit: " + std::to_string(n) + " points cannot support k = " +
                          std::to_string(options.k));
    const auto k = static_cast<std::size_t>(options.k);

    // Canonical order (lat, lon, input index): permutation invariance of
    // everything downstream of the seeded RNG.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].lat != points[b].lat) return points[a].lat < points[b].lat;
        return points[a].lon < points[b].lon;
    });
    std::vector<GeoPoint> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = points[order[i]];

    std::mt19937_64 rng(options.seed);
    std::vector<GeoPoint> centers = kmeanspp_init(pts, options.k, rng);

    std::vector<std::int32_t> assign(n);
    for (std::size_t i = 0; i < n; ++i)
        assign[i] = static_cast<std::int32_t>(nearest_center(pts[i], centers));

    double prev_j = objective(pts, centers, assign);
    int iterations = 0;
    std::vector<double> sum_lat(k), sum_lon(k);
    std::vector<std::size_t> count(k);

    for (; iterations < options.max_iter; ++iterations) {
        // Update: each non-empty center becomes its members' mean, summed in
        // canonical order.
        std::fill(sum_lat.begin(), sum_lat.end(), 0.0);
        std::fill(sum_lon.begin(), sum_lon.end(), 0.0);
        std::fill(count.begin(), count.end(), std::size_t{0});
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(assign[i]);
            sum_lat[c] += pts[i].lat;
            sum_lon[c] += pts[i].lon;
            ++count[c];
        }
        std::vector<GeoPoint> new_centers(k);
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] > 0)
                new_centers[c] = GeoPoint{sum_lat[c] / static_cast<double>(count[c]),
                                          sum_lon[c] / static_cast<double>(count[c])};
            else
                new_centers[c] = centers[c];
        }
        // Empty-cluster repair: re-seed at the point farthest from its
        // nearest center; k is deliberately oversized so empties happen.
        std::vector<bool> taken(n, false);
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] > 0) continue;
            double worst = -1.0;
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i]) continue;
                const double d =
                    degree_dist2(pts[i], new_centers[nearest_center(pts[i], new_centers)]);
                if (d > worst) {
                    worst = d;
                    worst_i = i;
                }
            }
            new_centers[c] = pts[worst_i];
            taken[worst_i] = true;
        }

        std::vector<std::int32_t> new_assign(n);
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            new_assign[i] = static_cast<std::int32_t>(nearest_center(pts[i], new_centers));
            changed |= new_assign[i] != assign[i];
        }

        const double j = objective(pts, new_centers, new_assign);
        if (j > prev_j * (1.0 + 1e-12) + 1e-18)
            throw std::logic_error("kmeans_fit: objective increased across an iteration");

        double max_move2 = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            max_move2 = std::max(max_move2, degree_dist2(centers[c], new_centers[c]));

        centers = std::move(new_centers);
        assign = std::move(new_assign);
        prev_j = j;
        if (!changed) {
            ++iterations;
            break;
        }
        if (options.tol_deg > 0.0 && max_move2 < options.tol_deg * options.tol_deg) {
            ++iterations;
            break;
        }
    }

    ClusterModel model;
    model.k = options.k;
    model.centers = std::move(centers);
    model.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) model.assignments[order[i]] = assign[i];
    model.inertia = prev_j;
    model.iterations_run = iterations;
    model.seed = options.seed;
    return model;
}

ClusterModel best_of_restarts(std::span<const GeoPoint> points, int k,
                              std::span<const std::uint64_t> seeds, int max_iter,
                              double tol_deg) {
    if (seeds.empty()) throw ConfigError("best_of_restarts: at least one seed required");
    std::vector<std::uint64_t> ordered(seeds.begin(), seeds.end());
    std::sort(ordered.begin(), ordered.end());
    std::optional<ClusterModel> best;
    for (const auto seed : ordered) {
        KMeansOptions opt;
        opt.k = k;
        opt.seed = seed;
        opt.max_iter = max_iter;
        opt.tol_deg = tol_deg;
        ClusterModel m = kmeans_fit(points, opt);
        if (!best || m.inertia < best->inertia) best = std::move(m);
    }
    return *best;
}

double recompute_inertia(std::span<const GeoPoint> points, const ClusterModel& model) {
    double j = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        j += degree_dist2(points[i],
                          model.centers[static_cast<std::size_t>(model.assignments[i])]);
    return j;
}

std::vector<ClusterVerdict> discard_path_clusters(const ClusterModel& model,
                                                  const Trajectory& traj,
                                                  std::size_t min_points, double radius_m) {
    if (model.assignments.size() != traj.size())
        throw ConfigError("discard_path_clusters: assignments do not cover the trajectory (" +
                          std::to_string(model.assignments.size()) + " vs " +
                          std::to_string(traj.size()) + " records)");
    const auto k = static_cast<std::size_t>(model.k);
    std::vector<ClusterVerdict> verdicts(k);
    for (std::size_t c = 0; c < k; ++c) verdicts[c].cluster = static_cast<int>(c);
    for (const auto a : model.assignments)
        ++verdicts[static_cast<std::size_t>(a)].point_count;

    // Diagnostic dwell: time spanned by maximal runs of assigned-and-in-radius
    // records, mirroring the segmentation rule.
    std::ptrdiff_t run_cluster = -1;
    Timestamp run_start{}, run_last{};
    auto flush = [&] {
        if (run_cluster >= 0)
            verdicts[static_cast<std::size_t>(run_cluster)].dwell += run_last - run_start;
        run_cluster = -1;
    };
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto c = static_cast<std::size_t>(model.assignments[i]);
        const bool in_radius =
            haversine_m(traj.records[i].point(), model.centers[c]) <= radius_m;
        if (!in_radius || static_cast<std::ptrdiff_t>(c) != run_cluster) flush();
        if (in_radius) {
            if (run_cluster < 0) {
                run_cluster = static_cast<std::ptrdiff_t>(c);
                run_start = traj.records[i].ts;
            }
            run_last = traj.records[i].ts;
        }
    }
    flush();

    for (auto& v : verdicts) {
        v.kept = v.point_count >= min_points;
        v.reason = v.kept ? "ok"
                          : "below point threshold (" + std::to_string(v.point_count) + " < " +
                                std::to_string(min_points) + ")";
    }
    return verdicts;
}

}  // namespace jacktrack
