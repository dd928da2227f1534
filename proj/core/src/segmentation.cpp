#include "jacktrack/segmentation.hpp"

#include <algorithm>

#include "jacktrack/errors.hpp"

namespace jacktrack {

std::vector<DwellSegment> extract_dwell_segments(const Trajectory& traj, const GeoPoint& center,
                                                 double radius_m, DwellKind kind,
                                                 int cluster_id) {
    std::vector<DwellSegment> segments;
    const auto& recs = traj.records;
    const std::size_t n = recs.size();
    std::size_t i = 0;
    while (i < n) {
        if (haversine_m(recs[i].point(), center) > radius_m) {
            ++i;
            continue;
        }
        std::size_t j = i;  // maximal in-radius run [i, j]
        while (j + 1 < n && haversine_m(recs[j + 1].point(), center) <= radius_m) ++j;
        DwellSegment seg;
        seg.cluster_id = cluster_id;
        seg.kind = kind;
        seg.enter_ts = recs[i].ts;
        seg.exit_ts = recs[j].ts;
        seg.bracket_lo_ts = i > 0 ? recs[i - 1].ts : seg.enter_ts;
        seg.bracket_hi_ts = j + 1 < n ? recs[j + 1].ts : seg.exit_ts;
        segments.push_back(seg);
        i = j + 1;
    }
    return segments;
}

std::optional<InstallationRecord> aggregate_installation(int cluster_id, const GeoPoint& center,
                                                         std::vector<DwellSegment> segments) {
    if (segments.empty()) return std::nullopt;
    InstallationRecord rec;
    rec.cluster_id = cluster_id;
    rec.center = center;
    for (const auto& s : segments) {
        rec.total_duration += s.duration();
        rec.uncertainty_hi += s.bracket_width();
    }
    rec.segments = std::move(segments);
    return rec;
}

bool HarborHint::contains(const GeoPoint& p) const {
    if (bbox && bbox->contains(p)) return true;
    if (seed && haversine_m(*seed, p) <= seed_radius_m) return true;
    return false;
}

std::vector<GeoPoint> merge_close_centers(std::span<const GeoPoint> centers,
                                          std::span<const std::size_t> weights,
                                          double merge_dist_m) {
    // Greedy, heaviest first: a center folds into the first accepted one
    // within merge_dist_m, weighted by point count.
    std::vector<std::size_t> order(centers.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    std::vector<GeoPoint> merged;
    std::vector<double> merged_weight;
    for (const std::size_t i : order) {
        bool folded = false;
        for (std::size_t m = 0; m < merged.size(); ++m) {
            if (haversine_m(centers[i], merged[m]) <= merge_dist_m) {
                const double w = static_cast<double>(weights[i]);
                const double total = merged_weight[m] + w;
                merged[m].lat = (merged[m].lat * merged_weight[m] + centers[i].lat * w) / total;
                merged[m].lon = (merged[m].lon * merged_weight[m] + centers[i].lon * w) / total;
                merged_weight[m] = total;
                folded = true;
                break;
            }
        }
        if (!folded) {
            merged.push_back(centers[i]);
            merged_weight.push_back(static_cast<double>(weights[i]));
        }
    }
    return merged;
}

HarborDetection detect_harbor(const Trajectory& traj, const HarborHint& hint,
                              const HarborOptions& options) {
    HarborDetection det;
    if (!hint.configured())
        throw ConfigError("detect_harbor: no harbor hint region configured");

    std::vector<PositionRecord> in_hint;
    for (const auto& r : traj.records)
        if (hint.contains(r.point())) in_hint.push_back(r);
    if (in_hint.empty()) {
        det.empty_hint = true;
        return det;
    }

    Trajectory hint_traj;
    hint_traj.mmsi = traj.mmsi;
    hint_traj.records = std::move(in_hint);

    std::vector<GeoPoint> pts;
    pts.reserve(hint_traj.size());
    for (const auto& r : hint_traj.records) pts.push_back(r.point());

    const int k = std::min<int>(options.k_harbor, static_cast<int>(pts.size()));
    const ClusterModel model =
        best_of_restarts(pts, k, options.seeds, options.max_iter, 0.0);

    const std::size_t min_points =
        options.min_points.value_or(std::max<std::size_t>(1, pts.size() / 100));
    det.verdicts = discard_path_clusters(model, hint_traj, min_points, options.radius_m);

    std::vector<GeoPoint> kept;
    std::vector<std::size_t> kept_weight;
    for (const auto& v : det.verdicts) {
        if (!v.kept) continue;
        kept.push_back(model.centers[static_cast<std::size_t>(v.cluster)]);
        kept_weight.push_back(v.point_count);
    }
    det.centers = merge_close_centers(kept, kept_weight, 2.0 * options.radius_m);

    for (std::size_t c = 0; c < det.centers.size(); ++c) {
        auto segs = extract_dwell_segments(traj, det.centers[c], options.radius_m,
                                           DwellKind::harbor, static_cast<int>(c));
        det.segments.insert(det.segments.end(), segs.begin(), segs.end());
    }
    std::sort(det.segments.begin(), det.segments.end(),
              [](const DwellSegment& a, const DwellSegment& b) { return a.enter_ts < b.enter_ts; });
    return det;
}

Millis compute_transit(const AnalysisWindow& window, Millis installation_total,
                       Millis harbor_total) {
    const Millis transit = window.length() - installation_total - harbor_total;
    if (transit < Millis::zero())
        throw InconsistencyError(
            "negative transit residual: window " + std::to_string(window.length().count()) +
            " ms, installation " + std::to_string(installation_total.count()) +
            " ms, harbor " + std::to_string(harbor_total.count()) +
            " ms (overlapping installation/harbor regions?)");
    return transit;
}

std::vector<PointLabel> label_points(const Trajectory& traj,
                                     std::span<const GeoPoint> installation_centers,
                                     std::span<const GeoPoint> harbor_centers, double radius_m) {
    std::vector<PointLabel> labels;
    labels.reserve(traj.size());
    auto within_any = [&](const GeoPoint& p, std::span<const GeoPoint> centers) {
        for (const auto& c : centers)
            if (haversine_m(p, c) <= radius_m) return true;
        return false;
    };
    for (const auto& r : traj.records) {
        const GeoPoint p = r.point();
        if (within_any(p, installation_centers))
            labels.push_back(PointLabel::installation);
        else if (within_any(p, harbor_centers))
            labels.push_back(PointLabel::harbor);
        else
            labels.push_back(PointLabel::transit);
    }
    return labels;
}

LabelCounts count_labels(std::span<const PointLabel> labels) {
    LabelCounts counts;
    for (const auto l : labels) {
        if (l == PointLabel::installation) ++counts.installation;
        else if (l == PointLabel::harbor) ++counts.harbor;
        else ++counts.transit;
    }
    return counts;
}

}  // namespace jacktrack
