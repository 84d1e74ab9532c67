// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-pixel Monte Carlo surface temperature estimation.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "heatmat/city_scene.hpp"
#include "heatmat/facade_sampler.hpp"
#include "heatmat/map_store.hpp"
#include "heatmat/material_db.hpp"
#include "heatmat/rng.hpp"
#include "heatmat/scene_tracer.hpp"
#include "heatmat/solar_model.hpp"

namespace heatmat {

struct SimulationConfig {
    // Sampling budgets.
    int spp = 5000;
    int max_radiative_bounces = 30;
    int conductive_steps_per_chain = 700;
    int max_transitions = 100;
    int trace_max_steps = 512;

    // Conductive step length; 0 derives it from the facade pattern.
    double delta = 0.0;
    FacadePattern pattern;

    // Environment, as functions of local time of day.
    Schedule air_temperature{300.0};
    Schedule sky_temperature{280.0};
    double initial_temperature = 300.0;  // T_I wherever the map layer is NaN
    double lookback = 3600.0;            // seconds
    double t_ref = 300.0;
    double h_conv = 10.0;

    // Sun.
    bool sun_enabled = true;
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    LocalDateTime time;
    double diffuse_fraction = 0.1;
    double sun_half_angle_deg = kDefaultSunHalfAngleDeg;
    double solar_constant = kSolarConstant;

    // Fixed-temperature materials (id -> Kelvin); empty in city scenes.
    std::map<MaterialId, double> dirichlet;

    std::uint64_t seed = 1;
    std::uint32_t stream_tag = 0;
    int threads = 0;  // 0 = hardware concurrency
    /// Only pixels with i and j divisible by the stride are estimated; the
    /// rest stay NaN. 1 = every pixel.
    int pixel_stride = 1;

    /// Testing hook: replaces the material-derived mode probabilities.
    std::optional<ModeProbabilities> forced_modes;

    double effective_delta() const;
    /// Throws ConfigError listing every invalid field.
    void validate() const;
};

struct PixelEstimate {
    double temperature = 0.0;  // NaN when no path was valid
    double std_error = 0.0;
    std::uint32_t valid = 0;
    std::uint32_t discarded = 0;
};

struct SimulationStats {
    std::uint64_t valid_paths = 0;
    std::uint64_t discarded_paths = 0;
    std::uint64_t discarded_transitions = 0;
    std::uint64_t discarded_bounces = 0;
    std::uint64_t trace_budget_errors = 0;
    std::uint64_t invalid_pixels = 0;
    double mean_std_error = 0.0;
    double wall_seconds = 0.0;
    int threads = 1;

    double discard_fraction() const
    {
        const auto total = valid_paths + discarded_paths;
        return total == 0 ? 0.0 : static_cast<double>(discarded_paths) / total;
    }
    bool discard_warning() const { return discard_fraction() > 0.01; }
};

struct SimulationResult {
    Raster temperature;
    Raster std_error;
    std::vector<std::uint32_t> valid;
    std::vector<std::uint32_t> discarded;
    SimulationStats stats;
};

/// Solar states tabulated over the lookback window, indexed by path time.
class SolarTimeline {
public:
    SolarTimeline() = default;
    SolarTimeline(const SimulationConfig& cfg, double lookback);
    const SolarState& at(double path_time) const;
    double step() const { return step_; }
    std::size_t size() const { return states_.size(); }

private:
    std::vector<SolarState> states_;
    double step_ = 60.0;
};

PixelEstimate estimate_pixel(int px, int py, const CityScene& scene, const MaterialDb& db,
                             const SimulationConfig& cfg);

using ProgressFn = std::function<void(int rows_done, int rows_total)>;

SimulationResult simulate(const MapSet& maps, const MaterialDb& db, const SimulationConfig& cfg,
                          const ProgressFn& progress = {});

/// Runs simulate at each timestamp, feeding each raster forward as the next
/// initial temperature; the lookback of step k > 0 is the gap to step k-1.
std::vector<SimulationResult> chain_simulate(const MapSet& maps, const MaterialDb& db,
                                             const SimulationConfig& cfg,
                                             const std::vector<LocalDateTime>& timestamps,
                                             const ProgressFn& progress = {});

/// Direction with pdf cos(theta)/pi around the unit normal.
Vec3 cosine_sample_hemisphere(Vec3 normal, PathRng& rng);

}  // namespace heatmat
