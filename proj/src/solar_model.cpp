// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/solar_model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "heatmat/errors.hpp"

namespace heatmat {

namespace {

constexpr double kDeg = kPi / 180.0;

double wrap360(double a)
{
    a = std::fmod(a, 360.0);
    return a < 0.0 ? a + 360.0 : a;
}

long days_from_civil(int y, int m, int d)
{
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw ParseError("invalid calendar date " + std::to_string(y) + "-" + std::to_string(m) +
                         "-" + std::to_string(d));
    }
    return sys_days{ymd}.time_since_epoch().count();
}

double parse_clock(const std::string& s)
{
    int h = 0;
    int m = 0;
    int sec = 0;
    char tail = 0;
    const int n = std::sscanf(s.c_str(), "%d:%d:%d%c", &h, &m, &sec, &tail);
    if (n < 2 || n > 3 || h < 0 || h > 24 || m < 0 || m > 59 || sec < 0 || sec > 59) {
        throw ParseError("invalid time of day '" + s + "' (expected HH:MM)");
    }
    return h * 3600.0 + m * 60.0 + sec;
}

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace

LocalDateTime LocalDateTime::parse(const std::string& text, double utc_offset_h)
{
    LocalDateTime t;
    t.utc_offset_h = utc_offset_h;
    char sep = 0;
    int sec = 0;
    char tail = 0;
    const int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d%c", &t.year, &t.month, &t.day,
                              &sep, &t.hour, &t.minute, &sec, &tail);
    if ((n != 6 && n != 7) || (sep != ' ' && sep != 'T') || t.hour < 0 || t.hour > 23 ||
        t.minute < 0 || t.minute > 59 || sec < 0 || sec > 59) {
        throw ParseError("invalid datetime '" + text + "' (expected YYYY-MM-DD HH:MM)");
    }
    t.second = sec;
    days_from_civil(t.year, t.month, t.day);
    return t;
}

LocalDateTime LocalDateTime::plus_seconds(double seconds) const
{
    using namespace std::chrono;
    const double total = static_cast<double>(days_from_civil(year, month, day)) * 86400.0 +
                         seconds_of_day() + seconds;
    const double nd = std::floor(total / 86400.0);
    double rem = total - nd * 86400.0;
    const year_month_day ymd{sys_days{days{static_cast<int>(nd)}}};
    LocalDateTime out = *this;
    out.year = static_cast<int>(ymd.year());
    out.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
    out.day = static_cast<int>(static_cast<unsigned>(ymd.day()));
    out.hour = static_cast<int>(rem / 3600.0);
    rem -= out.hour * 3600.0;
    out.minute = static_cast<int>(rem / 60.0);
    out.second = rem - out.minute * 60.0;
    return out;
}

double LocalDateTime::julian_day() const
{
    const double days = static_cast<double>(days_from_civil(year, month, day));
    const double utc_seconds = seconds_of_day() - utc_offset_h * 3600.0;
    return 2440587.5 + days + utc_seconds / 86400.0;
}

std::string LocalDateTime::to_string() const
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d:%02d", year, month, day, hour, minute,
                  static_cast<int>(std::lround(second)) % 60);
    return buf;
}

SunPosition sun_position(double latitude_deg, double longitude_deg, const LocalDateTime& when)
{
    const double jc = (when.julian_day() - 2451545.0) / 36525.0;
    const double l0 = wrap360(280.46646 + jc * (36000.76983 + jc * 0.0003032));
    const double m = 357.52911 + jc * (35999.05029 - 0.0001537 * jc);
    const double e = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc);
    const double c = std::sin(m * kDeg) * (1.914602 - jc * (0.004817 + 0.000014 * jc)) +
                     std::sin(2 * m * kDeg) * (0.019993 - 0.000101 * jc) +
                     std::sin(3 * m * kDeg) * 0.000289;
    const double true_long = l0 + c;
    const double omega = 125.04 - 1934.136 * jc;
    const double app_long = true_long - 0.00569 - 0.00478 * std::sin(omega * kDeg);
    const double mean_obliq =
        23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0) / 60.0;
    const double obliq = mean_obliq + 0.00256 * std::cos(omega * kDeg);
    const double decl = std::asin(std::sin(obliq * kDeg) * std::sin(app_long * kDeg));
    const double y = std::pow(std::tan(obliq * kDeg / 2.0), 2);
    const double eot =
        4.0 / kDeg *
        (y * std::sin(2 * l0 * kDeg) - 2 * e * std::sin(m * kDeg) +
         4 * e * y * std::sin(m * kDeg) * std::cos(2 * l0 * kDeg) -
         0.5 * y * y * std::sin(4 * l0 * kDeg) - 1.25 * e * e * std::sin(2 * m * kDeg));

    const double local_min = when.seconds_of_day() / 60.0;
    const double tst = std::fmod(
        std::fmod(local_min + eot + 4.0 * longitude_deg - 60.0 * when.utc_offset_h, 1440.0) + 1440.0,
        1440.0);
    const double hour_angle = (tst / 4.0 < 0.0 ? tst / 4.0 + 180.0 : tst / 4.0 - 180.0) * kDeg;
    const double lat = latitude_deg * kDeg;
    const double cos_zen = std::clamp(std::sin(lat) * std::sin(decl) +
                                          std::cos(lat) * std::cos(decl) * std::cos(hour_angle),
                                      -1.0, 1.0);
    const double zen = std::acos(cos_zen);
    double az = 0.0;
    const double denom = std::cos(lat) * std::sin(zen);
    if (std::abs(denom) > 1e-12) {
        const double a = std::acos(std::clamp(
                             (std::sin(lat) * cos_zen - std::sin(decl)) / denom, -1.0, 1.0)) /
                         kDeg;
        az = hour_angle > 0.0 ? wrap360(a + 180.0) : wrap360(540.0 - a);
    } else {
        az = latitude_deg > 0.0 ? 180.0 : 0.0;
    }
    SunPosition out;
    out.elevation = kPi / 2.0 - zen;
    out.azimuth = az * kDeg;
    out.direction = sun_vector(out.elevation, out.azimuth);
    return out;
}

Vec3 sun_vector(double elevation, double azimuth)
{
    const double ce = std::cos(elevation);
    return {std::sin(azimuth) * ce, std::cos(azimuth) * ce, std::sin(elevation)};
}

double direct_irradiance(double elevation, double solar_constant)
{
    if (!(elevation > 0.0)) {
        return 0.0;
    }
    const double am = 1.0 / std::max(std::sin(elevation), 0.01);
    return solar_constant * std::pow(0.7, std::pow(am, 0.678));
}

double cone_solid_angle(double half_angle)
{
    // 2 pi (1 - cos a) written with the half-angle identity for accuracy.
    const double s = std::sin(0.5 * half_angle);
    return 4.0 * kPi * s * s;
}

SolarState make_solar_state(double elevation, double azimuth, double half_angle,
                            double solar_constant)
{
    if (!(half_angle > 0.0 && half_angle < kPi / 2.0)) {
        throw ArgumentError("sun half angle must lie in (0, 90) degrees");
    }
    SolarState s;
    s.elevation = elevation;
    s.azimuth = azimuth;
    s.direction = sun_vector(elevation, azimuth);
    s.direct = direct_irradiance(elevation, solar_constant);
    s.half_angle = half_angle;
    s.cos_half_angle = std::cos(half_angle);
    s.intensity = s.direct / cone_solid_angle(half_angle);
    return s;
}

bool in_sun_cone(Vec3 direction, const SolarState& sun)
{
    // Compare angles rather than cosines so the closed boundary is honoured.
    const double c = std::clamp(dot(direction, sun.direction), -1.0, 1.0);
    const Vec3 x = cross(direction, sun.direction);
    const double angle = std::atan2(length(x), c);
    return angle <= sun.half_angle + 1e-12;
}

double f_sky(Vec3 direction, double diffuse_fraction, const SolarState& sun)
{
    if (!(direction.z > 0.0)) {
        return 0.0;
    }
    return diffuse_fraction * cone_solid_angle(sun.half_angle) / kPi;
}

Schedule::Schedule(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots))
{
    if (knots_.empty()) {
        throw ArgumentError("schedule needs at least one knot");
    }
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        if (!(knots_[k].first > knots_[k - 1].first)) {
            throw ArgumentError("schedule times must be strictly increasing");
        }
    }
    for (const auto& [t, v] : knots_) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw ArgumentError("schedule temperatures must be positive Kelvin values");
        }
    }
}

Schedule Schedule::parse(const std::string& text)
{
    const std::string body = trim(text);
    if (body.empty()) {
        throw ParseError("empty schedule");
    }
    if (body.find('=') == std::string::npos) {
        try {
            std::size_t used = 0;
            const double v = std::stod(body, &used);
            if (used != body.size()) {
                throw ParseError("invalid schedule '" + text + "'");
            }
            return Schedule(std::vector<std::pair<double, double>>{{0.0, v}});
        } catch (const std::logic_error&) {
            throw ParseError("invalid schedule '" + text + "'");
        }
    }
    std::vector<std::pair<double, double>> knots;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ParseError("schedule entry '" + item + "' lacks '='");
        }
        double v = 0.0;
        try {
            std::size_t used = 0;
            const std::string val = trim(item.substr(eq + 1));
            v = std::stod(val, &used);
            if (used != val.size()) {
                throw ParseError("bad value in schedule entry '" + item + "'");
            }
        } catch (const std::logic_error&) {
            throw ParseError("bad value in schedule entry '" + item + "'");
        }
        knots.emplace_back(parse_clock(trim(item.substr(0, eq))), v);
    }
    try {
        return Schedule(std::move(knots));
    } catch (const ArgumentError& e) {
        throw ParseError(e.what());
    }
}

double Schedule::at(double t) const
{
    if (knots_.empty()) {
        throw ArgumentError("empty schedule");
    }
    if (t <= knots_.front().first) {
        return knots_.front().second;
    }
    if (t >= knots_.back().first) {
        return knots_.back().second;
    }
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                     [](double x, const auto& k) { return x < k.first; });
    const auto& [t1, v1] = *it;
    const auto& [t0, v0] = *(it - 1);
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

double Schedule::min_value() const
{
    double m = knots_.front().second;
    for (const auto& k : knots_) {
        m = std::min(m, k.second);
    }
    return m;
}

double Schedule::max_value() const
{
    double m = knots_.front().second;
    for (const auto& k : knots_) {
        m = std::max(m, k.second);
    }
    return m;
}

}  // namespace heatmat
