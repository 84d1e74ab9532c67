// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sun position, clear-sky direct irradiance and the isotropic diffuse sky.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "heatmat/geometry.hpp"

namespace heatmat {

inline constexpr double kSolarConstant = 1361.0;  // W/m^2
inline constexpr double kDefaultSunHalfAngleDeg = 0.266;

/// Civil date and time at a fixed UTC offset.
struct LocalDateTime {
    int year = 2000;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    double second = 0.0;
    double utc_offset_h = 0.0;

    /// "YYYY-MM-DD HH:MM[:SS]" (a 'T' separator is accepted). Throws ParseError.
    static LocalDateTime parse(const std::string& text, double utc_offset_h);
    double seconds_of_day() const { return hour * 3600.0 + minute * 60.0 + second; }
    /// Same offset, shifted by `seconds` (may cross midnight).
    LocalDateTime plus_seconds(double seconds) const;
    /// Julian day of the instant (UTC based).
    double julian_day() const;
    std::string to_string() const;
};

struct SunPosition {
    double elevation = 0.0;  // radians, geometric (no refraction)
    double azimuth = 0.0;    // radians, clockwise from north
    Vec3 direction;          // unit vector toward the sun; x east, y north, z up
};

/// NOAA declination/hour-angle solar position.
SunPosition sun_position(double latitude_deg, double longitude_deg, const LocalDateTime& when);

/// Unit vector for an (elevation, azimuth) pair.
Vec3 sun_vector(double elevation, double azimuth);

/// 0 at or below the horizon, otherwise E0 * 0.7^(AM^0.678) with
/// AM = 1 / max(sin(elevation), 0.01).
double direct_irradiance(double elevation, double solar_constant = kSolarConstant);

/// Solid angle of a cone of the given half angle.
double cone_solid_angle(double half_angle);

struct SolarState {
    Vec3 direction;
    double elevation = 0.0;
    double azimuth = 0.0;
    double direct = 0.0;     // D_o, W/m^2
    double intensity = 0.0;  // I_od = D_o / cone solid angle, W/(m^2 sr)
    double half_angle = 0.0;
    double cos_half_angle = 1.0;

    bool above_horizon() const { return elevation > 0.0 && direct > 0.0; }
};

SolarState make_solar_state(double elevation, double azimuth, double half_angle,
                            double solar_constant = kSolarConstant);

/// Closed cone test: angle(direction, sun) <= half angle.
bool in_sun_cone(Vec3 direction, const SolarState& sun);

/// Isotropic diffuse sky, per steradian. Zero for non-ascending directions.
/// Scaled so that a sky-terminated bounce of the indirect solar path weighs
/// epsilon * diffuse_fraction * D_o (see transport).
double f_sky(Vec3 direction, double diffuse_fraction, const SolarState& sun);

/// Piecewise-linear function of local time of day, clamped outside its knots.
class Schedule {
public:
    Schedule() = default;
    explicit Schedule(double constant) : knots_{{0.0, constant}} {}
    /// Knots in seconds of day, strictly increasing. Throws ArgumentError.
    explicit Schedule(std::vector<std::pair<double, double>> knots);
    /// "295" or "06:00=295,14:00=308,22:00=300". Throws ParseError.
    static Schedule parse(const std::string& text);

    double at(double seconds_of_day) const;
    bool is_constant() const { return knots_.size() == 1; }
    double first_time() const { return knots_.front().first; }
    double last_time() const { return knots_.back().first; }
    double min_value() const;
    double max_value() const;
    bool empty() const { return knots_.empty(); }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    std::vector<std::pair<double, double>> knots_;
};

}  // namespace heatmat
