#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "jacktrack/segmentation.hpp"
#include "jacktrack/time.hpp"

namespace jacktrack {

struct DurationStats {
    std::size_t n = 0;
    double avg_h = 0.0;
    double sd_h = 0.0;  // sample standard deviation (n-1); 0 for n == 1
    double min_h = 0.0;
    double median_h = 0.0;  // mean of the two middle values for even n
    double max_h = 0.0;
};

DurationStats duration_stats(std::span<const double> durations_h);

struct FarmStats : DurationStats {
    int n_actual = 0;
    int coverage_pct = 0;  // round(100 * n / n_actual)
};

// Throws InsufficientDataError on empty durations, ConfigError on
// n_actual < 1.
FarmStats farm_stats(std::span<const double> durations_h, int n_actual);

// Step-function support points (d_(i), i/n) over sorted durations;
// final fraction is exactly 1.
std::vector<std::pair<double, double>> cumulative_histogram(std::span<const double> durations_h);

// Window length in hours divided by the turbine count: the prior
// state-of-the-art per-turbine figure.
double naive_average_h(const AnalysisWindow& window, int n_turbines);

struct TimeShare {
    Millis transit{};
    Millis installation{};
    Millis harbor{};
    Millis total{};
    double transit_pct = 0.0;
    double installation_pct = 0.0;
    double harbor_pct = 0.0;
};

// Parts always sum to total exactly (integer milliseconds); shares are
// 100 * part / total.
TimeShare time_share(const AnalysisWindow& window, Millis installation_total,
                     Millis harbor_total);

struct WindSample {
    Timestamp ts{};
    double speed_mps = 0.0;
};

struct WindJoinRow {
    int cluster_id = 0;
    double avg_wind_mps = 0.0;
    double duration_h = 0.0;
    std::size_t n_samples = 0;
    bool flagged = false;  // no wind samples overlapped the dwell segments
};

// Per installation, the mean of wind samples whose timestamps fall inside
// any of its dwell segments (inclusive endpoints). Throws InputError on
// an unsorted wind series.
std::vector<WindJoinRow> wind_join(std::span<const InstallationRecord> installations,
                                   std::span<const WindSample> wind);

}  // namespace jacktrack
