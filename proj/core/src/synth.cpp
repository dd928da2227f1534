#include "jacktrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "jacktrack/errors.hpp"

namespace jacktrack {

namespace {

struct LocalFrame {
    GeoPoint origin;
    double mpd_lat;
    double mpd_lon;

    GeoPoint to_geo(double x_east_m, double y_north_m) const {
        return GeoPoint{origin.lat + y_north_m / mpd_lat, origin.lon + x_east_m / mpd_lon};
    }
    std::pair<double, double> to_local(const GeoPoint& p) const {
        return {(p.lon - origin.lon) * mpd_lon, (p.lat - origin.lat) * mpd_lat};
    }
};

struct Leg {
    bool dwell = false;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // dwell legs: x0 == x1, y0 == y1
    Timestamp t0{}, t1{};
    PointLabel nav_hint = PointLabel::transit;
};

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::int64_t uniform_steps(std::mt19937_64& rng, std::int64_t n_steps) {
    auto v = static_cast<std::int64_t>(u01(rng) * static_cast<double>(n_steps + 1));
    return std::min(v, n_steps);
}

Millis draw_snapped(std::mt19937_64& rng, Millis lo, Millis hi, Millis step) {
    const std::int64_t steps = (hi - lo).count() / step.count();
    return lo + Millis{step.count() * uniform_steps(rng, steps)};
}

}  // namespace

Campaign generate_campaign(const CampaignScript& script) {
    if (script.n_sites < 1) throw ConfigError("campaign script: n_sites must be at least 1");
    if (script.grid_cols < 1) throw ConfigError("campaign script: grid_cols must be at least 1");
    if (script.batch_size < 1) throw ConfigError("campaign script: batch_size must be at least 1");
    if (script.n_berths < 1) throw ConfigError("campaign script: n_berths must be at least 1");
    if (script.speed_mps <= 0.0) throw ConfigError("campaign script: speed must be positive");
    if (script.sample_interval <= Millis::zero())
        throw ConfigError("campaign script: sample interval must be positive");
    if (script.site_spacing_m <= 2.0 * script.radius_m)
        throw ConfigError("campaign script: site spacing must exceed twice the dwell radius");
    if (script.layout_jitter_m < 0.0 ||
        script.site_spacing_m - 2.0 * script.layout_jitter_m <= 2.0 * script.radius_m)
        throw ConfigError("campaign script: layout jitter breaks the minimum site spacing");
    if (script.gps_jitter_m < 0.0 || script.gps_jitter_m > script.radius_m / 2.0)
        throw ConfigError("campaign script: GPS jitter must stay well inside the dwell radius");
    if (script.dwell_min > script.dwell_max ||
        script.harbor_dwell_min > script.harbor_dwell_max)
        throw ConfigError("campaign script: dwell duration range is backwards");
    if (hours(script.dwell_min) <= script.min_segment_duration_h)
        throw ConfigError("campaign script: scripted dwells must exceed the segment duration filter");
    if (script.dwell_min < script.sample_interval)
        throw ConfigError("campaign script: dwells must span at least one sampling interval");
    if (script.gap_start_probability < 0.0 || script.gap_start_probability >= 1.0)
        throw ConfigError("campaign script: gap start probability must be in [0, 1)");
    if (script.gap_min > script.gap_max || script.gap_min < Millis::zero())
        throw ConfigError("campaign script: gap duration range is backwards");
    if (script.n_berths > 1 && script.berth_spacing_m <= 2.0 * script.radius_m)
        throw ConfigError("campaign script: berth spacing must exceed twice the dwell radius");

    const LocalFrame frame{script.farm_origin, kMetersPerDegLat,
                           kMetersPerDegLat * std::cos(script.farm_origin.lat * kDegToRad)};
    std::mt19937_64 rng(script.seed);
    const Millis interval = script.sample_interval;

    // Site layout: jittered grid in the local frame.
    std::vector<std::pair<double, double>> site_xy;
    site_xy.reserve(static_cast<std::size_t>(script.n_sites));
    for (int i = 0; i < script.n_sites; ++i) {
        const int row = i / script.grid_cols;
        const int col = i % script.grid_cols;
        const double jx = script.layout_jitter_m * (2.0 * u01(rng) - 1.0);
        const double jy = script.layout_jitter_m * (2.0 * u01(rng) - 1.0);
        site_xy.emplace_back(col * script.site_spacing_m + jx, row * script.site_spacing_m + jy);
    }
    Campaign campaign;
    auto& truth = campaign.truth;
    for (const auto& [x, y] : site_xy)
        truth.sites.push_back(GroundTruthSite{frame.to_geo(x, y), {}, {}, Millis::zero()});
    for (std::size_t a = 0; a < truth.sites.size(); ++a)
        for (std::size_t b = a + 1; b < truth.sites.size(); ++b)
            if (haversine_m(truth.sites[a].center, truth.sites[b].center) <=
                2.0 * script.radius_m)
                throw ConfigError("campaign script: two sites ended up within twice the radius");

    std::vector<std::pair<double, double>> berth_xy;
    for (int b = 0; b < script.n_berths; ++b) {
        auto [hx, hy] = frame.to_local(script.harbor);
        berth_xy.emplace_back(hx + b * script.berth_spacing_m, hy);
        truth.berths.push_back(frame.to_geo(berth_xy.back().first, berth_xy.back().second));
    }
    for (const auto& berth : truth.berths)
        for (const auto& site : truth.sites)
            if (haversine_m(berth, site.center) <= 2.0 * script.radius_m)
                throw ConfigError("campaign script: a berth lies within twice the radius of a site");

    // Scripted durations, snapped to the sampling grid so arrivals and
    // departures land exactly on sample instants.
    std::vector<Millis> site_dwell(static_cast<std::size_t>(script.n_sites));
    for (auto& d : site_dwell) d = draw_snapped(rng, script.dwell_min, script.dwell_max, interval);
    const int n_voyages = (script.n_sites + script.batch_size - 1) / script.batch_size;
    std::vector<Millis> port_dwell(static_cast<std::size_t>(n_voyages));
    for (auto& d : port_dwell)
        d = draw_snapped(rng, script.harbor_dwell_min, script.harbor_dwell_max, interval);

    // Itinerary: port call, then the batch's sites in order, then back.
    std::vector<Leg> legs;
    Timestamp t = script.start;
    auto add_dwell = [&](double x, double y, Millis dur, PointLabel hint) {
        legs.push_back(Leg{true, x, y, x, y, t, t + dur, hint});
        t += dur;
    };
    auto add_transit = [&](double x0, double y0, double x1, double y1) {
        const double dist = std::hypot(x1 - x0, y1 - y0);
        const auto raw_ms = dist / script.speed_mps * 1000.0;
        auto dur = Millis{static_cast<std::int64_t>(std::ceil(raw_ms / interval.count())) *
                          interval.count()};
        if (dur <= Millis::zero()) dur = interval;
        legs.push_back(Leg{false, x0, y0, x1, y1, t, t + dur, PointLabel::transit});
        t += dur;
    };
    double cx = berth_xy[0].first, cy = berth_xy[0].second;
    for (int v = 0; v < n_voyages; ++v) {
        const auto berth_idx = static_cast<std::size_t>(v % script.n_berths);
        const Timestamp call_start = t;
        add_dwell(berth_xy[berth_idx].first, berth_xy[berth_idx].second,
                  port_dwell[static_cast<std::size_t>(v)], PointLabel::harbor);
        truth.port_calls.push_back(GroundTruthPortCall{
            static_cast<int>(berth_idx), call_start, t, t - call_start});
        cx = berth_xy[berth_idx].first;
        cy = berth_xy[berth_idx].second;
        const int lo = v * script.batch_size;
        const int hi = std::min(script.n_sites, lo + script.batch_size);
        for (int s = lo; s < hi; ++s) {
            const auto [sx, sy] = site_xy[static_cast<std::size_t>(s)];
            add_transit(cx, cy, sx, sy);
            auto& site = truth.sites[static_cast<std::size_t>(s)];
            site.arrive = t;
            add_dwell(sx, sy, site_dwell[static_cast<std::size_t>(s)],
                      PointLabel::installation);
            site.depart = t;
            site.scripted_dwell = site.depart - site.arrive;
            cx = sx;
            cy = sy;
        }
        const auto next_berth = static_cast<std::size_t>((v + 1) % script.n_berths);
        add_transit(cx, cy, berth_xy[next_berth].first, berth_xy[next_berth].second);
        cx = berth_xy[next_berth].first;
        cy = berth_xy[next_berth].second;
    }
    const Timestamp end = t;
    truth.window = AnalysisWindow{script.start, end};

    // Sample on the global grid, injecting receiver outages.
    auto& traj = campaign.trajectory;
    traj.mmsi = script.mmsi;
    traj.source = "synthetic campaign, seed " + std::to_string(script.seed);
    std::size_t leg_i = 0;
    Timestamp gap_until = script.start - Millis{1};
    for (Timestamp tk = script.start; tk <= end; tk += interval) {
        if (tk < gap_until) continue;
        if (script.gap_start_probability > 0.0 && u01(rng) < script.gap_start_probability) {
            gap_until = tk + draw_snapped(rng, script.gap_min, script.gap_max, Millis{1});
            continue;
        }
        while (leg_i + 1 < legs.size() && tk >= legs[leg_i].t1) ++leg_i;
        const Leg& leg = legs[leg_i];
        double x, y;
        if (leg.dwell) {
            x = leg.x0;
            y = leg.y0;
            if (script.gps_jitter_m > 0.0) {
                const double r = script.gps_jitter_m * std::sqrt(u01(rng));
                const double theta = 2.0 * kPi * u01(rng);
                x += r * std::cos(theta);
                y += r * std::sin(theta);
            }
        } else {
            const double f = static_cast<double>((tk - leg.t0).count()) /
                             static_cast<double>((leg.t1 - leg.t0).count());
            x = leg.x0 + f * (leg.x1 - leg.x0);
            y = leg.y0 + f * (leg.y1 - leg.y0);
        }
        const GeoPoint p = frame.to_geo(x, y);

        PositionRecord rec;
        rec.ts = tk;
        rec.mmsi = script.mmsi;
        rec.lat = p.lat;
        rec.lon = p.lon;
        rec.sog_kn = leg.dwell ? 0.0 : script.speed_mps / 0.514444;
        if (!leg.dwell) {
            double heading = std::atan2(leg.x1 - leg.x0, leg.y1 - leg.y0) / kDegToRad;
            if (heading < 0) heading += 360.0;
            rec.cog_deg = heading;
        }
        rec.nav_status = leg.nav_hint == PointLabel::harbor          ? 5
                         : leg.nav_hint == PointLabel::installation ? 3
                                                                     : 0;
        traj.records.push_back(rec);

        // Geometric ground-truth label, same metric as the pipeline.
        PointLabel label = PointLabel::transit;
        for (const auto& site : truth.sites)
            if (haversine_m(p, site.center) <= script.radius_m) {
                label = PointLabel::installation;
                break;
            }
        if (label == PointLabel::transit)
            for (const auto& berth : truth.berths)
                if (haversine_m(p, berth) <= script.radius_m) {
                    label = PointLabel::harbor;
                    break;
                }
        truth.labels.push_back(label);
    }
    return campaign;
}

}  // namespace jacktrack
