// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "heatmat/errors.hpp"
#include "heatmat/city_scene.hpp"
#include "heatmat/rng.hpp"
#include "heatmat/scene_tracer.hpp"

namespace heatmat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_shape(const Raster& a, const Raster& b)
{
    if (a.width != b.width || a.height != b.height || a.values.size() != b.values.size()) {
        throw ArgumentError("raster dimensions differ: " + std::to_string(a.width) + "x" +
                            std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                            std::to_string(b.height));
    }
}

constexpr EphemerisCase kEphemeris[] = {
    {42.33, -83.05, "2024-06-17 14:00", -4, 70.2783, 198.4222},
    {42.33, -83.05, "2024-12-21 12:00", -5, 23.8511, 172.3269},
    {48.85, 2.35, "2023-03-20 13:00", 1, 40.9913, 180.6223},
    {-33.87, 151.21, "2022-01-15 09:30", 11, 41.3680, 89.3494},
    {-33.87, 151.21, "2022-07-15 15:00", 10, 20.1450, 315.8015},
    {0.0, 0.0, "2024-03-20 12:07", 0, 89.8329, 27.3569},
    {64.13, -21.9, "2021-06-21 23:30", 0, 0.6143, 332.7904},
    {-54.8, -68.3, "2019-09-23 11:00", -3, 27.7324, 42.1048},
    {35.68, 139.69, "1995-10-10 07:15", 9, 17.2926, 111.4799},
    {19.43, -99.13, "2049-05-05 17:45", -6, 16.4701, 282.2118},
};

}  // namespace

void ConductionProblem::validate() const
{
    if (size < 3) {
        throw ArgumentError("conduction grid must be at least 3x3");
    }
    for (double v : {top, bottom, left, right}) {
        if (!std::isfinite(v)) {
            throw ArgumentError("boundary temperatures must be finite");
        }
    }
    if (!initial.values.empty() && (initial.width != size || initial.height != size)) {
        throw ArgumentError("initial field must be " + std::to_string(size) + "x" +
                            std::to_string(size));
    }
}

double ConductionProblem::boundary(int i, int j) const
{
    const int n = size - 1;
    const bool w = i == 0;
    const bool e = i == n;
    const bool s = j == 0;
    const bool nn = j == n;
    if ((w || e) && (s || nn)) {
        return 0.5 * ((w ? left : right) + (s ? bottom : top));
    }
    if (w) return left;
    if (e) return right;
    if (s) return bottom;
    if (nn) return top;
    return kNaN;
}

FdmResult fdm_steady_conduction(const ConductionProblem& problem, double tolerance,
                                int max_iterations, bool keep_history)
{
    problem.validate();
    if (!(tolerance > 0.0)) {
        throw ArgumentError("tolerance must be > 0");
    }
    const int n = problem.size;
    Raster cur = problem.initial.values.empty() ? Raster(n, n, 0.0) : problem.initial;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double b = problem.boundary(i, j);
            if (!std::isnan(b)) {
                cur.at(i, j) = b;
            }
        }
    }
    Raster next = cur;
    FdmResult out;
    for (int it = 1; it <= max_iterations; ++it) {
        double change = 0.0;
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                const double v =
                    0.25 * (cur.at(i - 1, j) + cur.at(i + 1, j) + cur.at(i, j - 1) + cur.at(i, j + 1));
                change = std::max(change, std::abs(v - cur.at(i, j)));
                next.at(i, j) = v;
            }
        }
        std::swap(cur, next);
        out.iterations = it;
        out.residual = change;
        if (keep_history) {
            out.history.push_back(change);
        }
        if (change < tolerance) {
            out.field = std::move(cur);
            return out;
        }
    }
    throw ConvergenceError("finite-difference solve did not converge in " +
                           std::to_string(max_iterations) + " iterations (residual " +
                           std::to_string(out.residual) + ")");
}

WalkResult walk_steady_conduction(const ConductionProblem& problem, int walks_per_cell,
                                  double delta, std::uint64_t seed, int threads)
{
    problem.validate();
    const int n = problem.size;
    const double side = n - 1;
    if (walks_per_cell < 1) {
        throw ArgumentError("walks_per_cell must be >= 1");
    }
    if (!(delta > 0.0) || delta > side / 20.0 + 1e-12) {
        throw ArgumentError("delta must lie in (0, plate size / 20]");
    }
    WalkResult out{Raster(n, n, 0.0), Raster(n, n, 0.0)};
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double b = problem.boundary(i, j);
            if (!std::isnan(b)) {
                out.temperature.at(i, j) = b;
            }
        }
    }

    const double eps = 1e-4 * delta;
    auto walk_cell = [&](int i, int j) {
        double sum = 0.0;
        double sum2 = 0.0;
        for (int w = 0; w < walks_per_cell; ++w) {
            PathRng rng(seed, 0x57A1u, static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(i),
                        static_cast<std::uint32_t>(j));
            double x = i;
            double y = j;
            double score = 0.0;
            for (;;) {
                // Nearest edge; the step shrinks to it so the circle stays on the plate.
                const double dl = x;
                const double dr = side - x;
                const double db = y;
                const double dt = side - y;
                const double d = std::min(std::min(dl, dr), std::min(db, dt));
                if (d < eps) {
                    score = d == dl ? problem.left : d == dr ? problem.right : d == db ? problem.bottom : problem.top;
                    break;
                }
                const double r = std::min(delta, d);
                double dx = 0.0;
                double dy = 0.0;
                double r2 = 0.0;
                do {
                    dx = 2.0 * rng.uniform() - 1.0;
                    dy = 2.0 * rng.uniform() - 1.0;
                    r2 = dx * dx + dy * dy;
                } while (r2 > 1.0 || r2 < 1e-12);
                const double k = r / std::sqrt(r2);
                x += k * dx;
                y += k * dy;
            }
            sum += score;
            sum2 += score * score;
        }
        const double m = sum / walks_per_cell;
        const double var =
            walks_per_cell > 1 ? std::max(0.0, (sum2 - walks_per_cell * m * m) / (walks_per_cell - 1))
                               : 0.0;
        out.temperature.at(i, j) = m;
        out.std_error.at(i, j) = std::sqrt(var / walks_per_cell);
    };

    int nthreads = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nthreads = std::max(1, std::min(nthreads, n - 2));
    std::atomic<int> next{1};
    auto worker = [&] {
        for (int j = next++; j < n - 1; j = next++) {
            for (int i = 1; i < n - 1; ++i) {
                walk_cell(i, j);
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    return out;
}

double scaled_difference(const Raster& candidate, const Raster& reference)
{
    require_same_shape(candidate, reference);
    if (reference.values.empty()) {
        throw ArgumentError("empty rasters");
    }
    const auto [lo, hi] = std::minmax_element(reference.values.begin(), reference.values.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
        throw ArgumentError("scaled difference is undefined for a constant reference");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < reference.values.size(); ++k) {
        sum += std::abs(candidate.values[k] - reference.values[k]);
    }
    return sum / static_cast<double>(reference.values.size()) / range * 100.0;
}

double rmse(const Raster& a, const Raster& b)
{
    require_same_shape(a, b);
    if (a.values.empty()) {
        throw ArgumentError("empty rasters");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        const double d = a.values[k] - b.values[k];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.values.size()));
}

double brute_force_sdf(std::span<const Segment2> segments, Vec2 p)
{
    if (segments.empty()) {
        throw ArgumentError("brute_force_sdf needs at least one segment");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const Segment2& s : segments) {
        best = std::min(best, point_segment_distance(p, s));
    }
    return best;
}

Raster resample_bilinear(const Raster& in, int width, int height)
{
    if (width < 1 || height < 1 || in.width < 1 || in.height < 1) {
        throw ArgumentError("resample dimensions must be >= 1");
    }
    Raster out(width, height);
    const double sx = static_cast<double>(in.width) / width;
    const double sy = static_cast<double>(in.height) / height;
    auto lerp = [](double a, double b, double t) { return t == 0.0 || a == b ? a : a + (b - a) * t; };
    for (int j = 0; j < height; ++j) {
        const double fy = std::clamp((j + 0.5) * sy - 0.5, 0.0, in.height - 1.0);
        const int j0 = static_cast<int>(fy);
        const int j1 = std::min(j0 + 1, in.height - 1);
        const double ty = fy - j0;
        for (int i = 0; i < width; ++i) {
            const double fx = std::clamp((i + 0.5) * sx - 0.5, 0.0, in.width - 1.0);
            const int i0 = static_cast<int>(fx);
            const int i1 = std::min(i0 + 1, in.width - 1);
            const double tx = fx - i0;
            out.at(i, j) = lerp(lerp(in.at(i0, j0), in.at(i1, j0), tx),
                                lerp(in.at(i0, j1), in.at(i1, j1), tx), ty);
        }
    }
    return out;
}

SunPosition psa_sun_position(double latitude_deg, double longitude_deg, const LocalDateTime& when)
{
    constexpr double kRad = kPi / 180.0;
    const double jd = when.julian_day();
    const double n = jd - 2451545.0;
    const double hours = (jd + 0.5 - std::floor(jd + 0.5)) * 24.0;

    const double omega = 2.1429 - 0.0010394594 * n;
    const double mean_long = 4.8950630 + 0.017202791698 * n;
    const double mean_anom = 6.2400600 + 0.0172019699 * n;
    const double ecl_long = mean_long + 0.03341607 * std::sin(mean_anom) +
                            0.00034894 * std::sin(2.0 * mean_anom) - 0.0001134 -
                            0.0000203 * std::sin(omega);
    const double obliq = 0.4090928 - 6.2140e-9 * n + 0.0000396 * std::cos(omega);
    double ra = std::atan2(std::cos(obliq) * std::sin(ecl_long), std::cos(ecl_long));
    if (ra < 0.0) {
        ra += 2.0 * kPi;
    }
    const double decl = std::asin(std::sin(obliq) * std::sin(ecl_long));
    const double gmst = 6.6974243242 + 0.0657098283 * n + hours;
    const double lmst = (gmst * 15.0 + longitude_deg) * kRad;
    const double ha = lmst - ra;
    const double lat = latitude_deg * kRad;
    double zen = std::acos(std::clamp(std::cos(lat) * std::cos(ha) * std::cos(decl) +
                                          std::sin(decl) * std::sin(lat),
                                      -1.0, 1.0));
    double az = std::atan2(-std::sin(ha), std::tan(decl) * std::cos(lat) - std::sin(lat) * std::cos(ha));
    if (az < 0.0) {
        az += 2.0 * kPi;
    }
    zen += (6371.01 / 149597890.0) * std::sin(zen);
    SunPosition out;
    out.elevation = kPi / 2.0 - zen;
    out.azimuth = az;
    out.direction = sun_vector(out.elevation, out.azimuth);
    return out;
}

std::span<const EphemerisCase> ephemeris_reference() { return kEphemeris; }

double angular_separation_deg(Vec3 a, Vec3 b)
{
    return std::atan2(length(cross(a, b)), dot(a, b)) * 180.0 / kPi;
}

std::vector<std::uint8_t> sunlit_near_facade_mask(const MapSet& maps, Vec3 sun_direction,
                                                  double max_distance_m)
{
    const CityScene scene(maps, FacadePattern{});
    const TraceConfig tc = TraceConfig::for_grid(maps.grid);
    std::vector<std::uint8_t> mask(maps.cells(), 0);
    for (int j = 0; j < maps.grid.height; ++j) {
        for (int i = 0; i < maps.grid.width; ++i) {
            const std::size_t k = maps.grid.index(i, j);
            const Vec2 c = maps.grid.centroid(i, j);
            if (maps.building_id[k] != 0 || scene.owner_at(c) != 0 || maps.sdf_m[k] > max_distance_m) {
                continue;
            }
            mask[k] = occluded_toward_sun({c.x, c.y, 0.0}, {0.0, 0.0, 1.0}, sun_direction, scene, tc) ? 0 : 1;
        }
    }
    return mask;
}

WhatIfSummary summarize_difference(const Raster& diff, const std::vector<std::uint8_t>& mask)
{
    WhatIfSummary s;
    double sum = 0.0;
    s.max_difference = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < diff.values.size() && k < mask.size(); ++k) {
        const double d = diff.values[k];
        if (!mask[k] || !std::isfinite(d)) {
            continue;
        }
        ++s.cells;
        s.non_negative += d >= 0.0 ? 1 : 0;
        s.max_difference = std::max(s.max_difference, d);
        sum += d;
    }
    if (s.cells) {
        s.fraction_non_negative = static_cast<double>(s.non_negative) / static_cast<double>(s.cells);
        s.mean_difference = sum / static_cast<double>(s.cells);
    } else {
        s.max_difference = kNaN;
    }
    return s;
}

}  // namespace heatmat
