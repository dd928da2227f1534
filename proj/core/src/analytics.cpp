#include "jacktrack/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "jacktrack/errors.hpp"

namespace jacktrack {

DurationStats duration_stats(std::span<const double> durations_h) {
    if (durations_h.empty())
        throw InsufficientDataError("duration statistics need at least one duration");
    DurationStats s;
    s.n = durations_h.size();
    std::vector<double> sorted(durations_h.begin(), durations_h.end());
    std::sort(sorted.begin(), sorted.end());
    s.min_h = sorted.front();
    s.max_h = sorted.back();
    const std::size_t n = sorted.size();
    s.median_h = n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    double sum = 0.0;
    for (double d : sorted) sum += d;
    s.avg_h = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double d : sorted) ss += (d - s.avg_h) * (d - s.avg_h);
        s.sd_h = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
}

FarmStats farm_stats(std::span<const double> durations_h, int n_actual) {
    if (n_actual < 1)
        throw ConfigError("farm_stats: actual turbine count must be at least 1");
    FarmStats s;
    static_cast<DurationStats&>(s) = duration_stats(durations_h);
    s.n_actual = n_actual;
    s.coverage_pct = static_cast<int>(
        std::lround(100.0 * static_cast<double>(s.n) / static_cast<double>(n_actual)));
    return s;
}

std::vector<std::pair<double, double>> cumulative_histogram(std::span<const double> durations_h) {
    if (durations_h.empty())
        throw InsufficientDataError("cumulative histogram needs at least one duration");
    std::vector<double> sorted(durations_h.begin(), durations_h.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(sorted.size());
    const double n = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        out.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
    out.back().second = 1.0;  // exact, independent of the division
    return out;
}

double naive_average_h(const AnalysisWindow& window, int n_turbines) {
    if (n_turbines < 1)
        throw ConfigError("naive_average: turbine count must be at least 1");
    return hours(window.length()) / static_cast<double>(n_turbines);
}

TimeShare time_share(const AnalysisWindow& window, Millis installation_total,
                     Millis harbor_total) {
    TimeShare ts;
    ts.total = window.length();
    ts.installation = installation_total;
    ts.harbor = harbor_total;
    ts.transit = compute_transit(window, installation_total, harbor_total);
    const double total = static_cast<double>(ts.total.count());
    ts.transit_pct = 100.0 * static_cast<double>(ts.transit.count()) / total;
    ts.installation_pct = 100.0 * static_cast<double>(ts.installation.count()) / total;
    ts.harbor_pct = 100.0 * static_cast<double>(ts.harbor.count()) / total;
    return ts;
}

std::vector<WindJoinRow> wind_join(std::span<const InstallationRecord> installations,
                                   std::span<const WindSample> wind) {
    for (std::size_t i = 1; i < wind.size(); ++i)
        if (wind[i].ts < wind[i - 1].ts)
            throw InputError("wind_join: wind series must be sorted by timestamp (row " +
                             std::to_string(i) + " goes backwards)");
    std::vector<WindJoinRow> rows;
    rows.reserve(installations.size());
    for (const auto& inst : installations) {
        WindJoinRow row;
        row.cluster_id = inst.cluster_id;
        row.duration_h = hours(inst.total_duration);
        double sum = 0.0;
        for (const auto& seg : inst.segments) {
            const auto lo = std::lower_bound(
                wind.begin(), wind.end(), seg.enter_ts,
                [](const WindSample& w, Timestamp t) { return w.ts < t; });
            for (auto it = lo; it != wind.end() && it->ts <= seg.exit_ts; ++it) {
                sum += it->speed_mps;
                ++row.n_samples;
            }
        }
        if (row.n_samples > 0)
            row.avg_wind_mps = sum / static_cast<double>(row.n_samples);
        else
            row.flagged = true;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace jacktrack
