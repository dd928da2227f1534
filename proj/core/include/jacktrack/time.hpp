#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace jacktrack {

// All timestamps are UTC. Millisecond resolution keeps duration sums and
// the transit residual in exact integer arithmetic.
using Millis = std::chrono::milliseconds;
using Timestamp = std::chrono::sys_time<Millis>;

inline double hours(Millis d) { return static_cast<double>(d.count()) / 3'600'000.0; }
inline Millis millis_from_hours(double h) {
    return Millis{static_cast<std::int64_t>(h * 3'600'000.0 + (h >= 0 ? 0.5 : -0.5))};
}

// "YYYY-MM-DD HH:MM:SS[.fff]" with 'T' or ' ' separator, optional trailing 'Z'.
std::optional<Timestamp> parse_iso8601(std::string_view s);

// "DD/MM/YYYY HH:MM:SS" as used by the Danish public AIS export.
std::optional<Timestamp> parse_dmy_hms(std::string_view s);

// Integer or fractional unix epoch seconds.
std::optional<Timestamp> parse_epoch_seconds(std::string_view s);

// "YYYY-MM-DDTHH:MM:SSZ", with ".fff" inserted when sub-second.
std::string format_iso8601(Timestamp t);

struct AnalysisWindow {
    Timestamp start{};
    Timestamp end{};

    Millis length() const { return end - start; }
    bool contains(Timestamp t) const { return t >= start && t <= end; }
};

// Throws ConfigError unless start < end.
AnalysisWindow make_window(Timestamp start, Timestamp end);

}  // namespace jacktrack
