#include "jacktrack/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "jacktrack/errors.hpp"

namespace jacktrack {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

std::optional<Timestamp> make_timestamp(int year, int month, int day, int hour, int minute,
                                        int second, int milli) {
    namespace chr = std::chrono;
    const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                  chr::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) return std::nullopt;
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60)
        return std::nullopt;
    if (second == 60) second = 59;  // leap-second input collapses
    const chr::sys_days days{ymd};
    return Timestamp{chr::duration_cast<Millis>(days.time_since_epoch()) +
                     chr::hours{hour} + chr::minutes{minute} + chr::seconds{second} +
                     Millis{milli}};
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view s) {
    int year, month, day, hour, minute, second;
    int n = 0;
    char sep;
    if (std::sscanf(std::string(s).c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%n", &year, &month, &day,
                    &sep, &hour, &minute, &second, &n) != 7)
        return std::nullopt;
    if (sep != 'T' && sep != ' ') return std::nullopt;
    std::string_view rest = s.substr(static_cast<std::size_t>(n));
    int milli = 0;
    if (!rest.empty() && rest.front() == '.') {
        rest.remove_prefix(1);
        std::size_t nd = 0;
        while (nd < rest.size() && rest[nd] >= '0' && rest[nd] <= '9') ++nd;
        if (nd == 0) return std::nullopt;
        int frac = 0;
        std::from_chars(rest.data(), rest.data() + std::min<std::size_t>(nd, 3), frac);
        // scale to milliseconds regardless of the digit count given
        if (nd == 1) frac *= 100;
        else if (nd == 2) frac *= 10;
        milli = frac;
        rest.remove_prefix(nd);
    }
    if (!rest.empty()) {
        if (rest == "Z" || rest == "+00:00" || rest == "+0000")
            rest = {};
        else
            return std::nullopt;  // non-UTC offsets need an explicit conversion upstream
    }
    return make_timestamp(year, month, day, hour, minute, second, milli);
}

std::optional<Timestamp> parse_dmy_hms(std::string_view s) {
    int day, month, year, hour, minute, second;
    int n = 0;
    if (std::sscanf(std::string(s).c_str(), "%2d/%2d/%4d %2d:%2d:%2d%n", &day, &month, &year,
                    &hour, &minute, &second, &n) != 6)
        return std::nullopt;
    if (static_cast<std::size_t>(n) != s.size()) return std::nullopt;
    return make_timestamp(year, month, day, hour, minute, second, 0);
}

std::optional<Timestamp> parse_epoch_seconds(std::string_view s) {
    const auto dot = s.find('.');
    std::string_view whole = dot == std::string_view::npos ? s : s.substr(0, dot);
    std::string_view sign;
    if (!whole.empty() && whole.front() == '-') {
        sign = whole.substr(0, 1);
        whole.remove_prefix(1);
    }
    if (!all_digits(whole)) return std::nullopt;
    std::int64_t seconds = 0;
    std::from_chars(whole.data(), whole.data() + whole.size(), seconds);
    if (!sign.empty()) seconds = -seconds;
    int milli = 0;
    if (dot != std::string_view::npos) {
        std::string_view frac = s.substr(dot + 1);
        if (!all_digits(frac)) return std::nullopt;
        int v = 0;
        std::from_chars(frac.data(), frac.data() + std::min<std::size_t>(frac.size(), 3), v);
        if (frac.size() == 1) v *= 100;
        else if (frac.size() == 2) v *= 10;
        milli = v;
    }
    return Timestamp{std::chrono::seconds{seconds} + Millis{sign.empty() ? milli : -milli}};
}

std::string format_iso8601(Timestamp t) {
    namespace chr = std::chrono;
    const auto days = chr::floor<chr::days>(t);
    const chr::year_month_day ymd{days};
    auto rem = t - days;
    const auto h = chr::duration_cast<chr::hours>(rem);
    rem -= h;
    const auto m = chr::duration_cast<chr::minutes>(rem);
    rem -= m;
    const auto sec = chr::duration_cast<chr::seconds>(rem);
    rem -= sec;
    const int milli = static_cast<int>(rem.count());
    char buf[40];
    if (milli == 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                      static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                      static_cast<unsigned>(ymd.day()), static_cast<int>(h.count()),
                      static_cast<int>(m.count()), static_cast<int>(sec.count()));
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                      static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                      static_cast<unsigned>(ymd.day()), static_cast<int>(h.count()),
                      static_cast<int>(m.count()), static_cast<int>(sec.count()), milli);
    }
    return buf;
}

AnalysisWindow make_window(Timestamp start, Timestamp end) {
    if (!(start < end))
        throw ConfigError("analysis window start " + format_iso8601(start) +
                          " is not before end " + format_iso8601(end));
    return AnalysisWindow{start, end};
}

}  // namespace jacktrack
