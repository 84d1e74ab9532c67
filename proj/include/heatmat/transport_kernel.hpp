// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Path sampling kernel, generic over the scene so that small analytic test
// scenes can drive the exact code used on city maps.
#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>

#include "heatmat/geometry.hpp"
#include "heatmat/material_db.hpp"
#include "heatmat/rng.hpp"
#include "heatmat/solar_model.hpp"
#include "heatmat/transport.hpp"

namespace heatmat {

enum class SurfaceKind : std::uint8_t { facade, roof, ground };

struct SurfacePoint {
    SurfaceKind kind = SurfaceKind::ground;
    Vec3 p;
    Vec3 n{0.0, 0.0, 1.0};
    std::int64_t cell = -1;
    std::uint32_t building = 0;
    std::int64_t facade_cell = -1;  // chord cell, facades only
    double s = 0.0;                 // arc length along the outline, facades only
    MaterialId material = kNoMaterial;
    double emissivity = 0.0;
    double conductivity = 0.0;
    double rho_c = 0.0;  // volumetric heat capacity
    ReflectanceKind reflectance = ReflectanceKind::lambertian;
};

enum class TraceOutcome : std::uint8_t { surface, sky, lost };

struct SurfaceHit {
    TraceOutcome outcome = TraceOutcome::lost;
    SurfacePoint point;
};

template <class S>
concept PathScene = requires(const S& s, const SurfacePoint& x, SurfacePoint& m, Vec3 d,
                             double delta, PathRng& rng) {
    { s.trace(x, d) } -> std::same_as<SurfaceHit>;
    { s.sunlit(x, d) } -> std::same_as<bool>;
    { s.initial_temperature(x) } -> std::convertible_to<double>;
    s.conduct_step(m, delta, rng);
};

struct KernelParams {
    int max_bounces = 30;
    int steps_per_chain = 700;
    int max_transitions = 100;
    double delta = 0.135;
    double t_ref = 300.0;
    double h_conv = 10.0;
    double lookback = 3600.0;
    double t0 = 0.0;  // query time, seconds of day
    const Schedule* air = nullptr;
    const Schedule* sky = nullptr;
    const SolarTimeline* solar = nullptr;  // nullptr: no sun
    double diffuse_fraction = 0.1;
    std::optional<ModeProbabilities> forced_modes;
    const std::map<MaterialId, double>* dirichlet = nullptr;

    double clock(double path_time) const
    {
        const double c = std::fmod(t0 - path_time, 86400.0);
        return c < 0.0 ? c + 86400.0 : c;
    }
};

enum class PathEnd : std::uint8_t {
    initial,
    dirichlet,
    fluid,
    sky,
    too_many_transitions,
    too_many_bounces,
    lost_ray,
};

struct PathOutcome {
    double weight = 0.0;
    PathEnd end = PathEnd::lost_ray;
    bool valid() const
    {
        return end != PathEnd::too_many_transitions && end != PathEnd::too_many_bounces &&
               end != PathEnd::lost_ray;
    }
};

inline Vec3 mirror(Vec3 d, Vec3 n) { return d - n * (2.0 * dot(d, n)); }

/// Solar weight gathered at one interface visit, before the 1/h_total scale:
/// the direct term plus one indirect path.
template <PathScene Scene>
double solar_visit(const Scene& scene, const SurfacePoint& x, const SolarState& sun,
                   double diffuse_fraction, int max_bounces, PathRng& rng)
{
    const double e0 = x.emissivity;
    if (!sun.above_horizon() || !(e0 > 0.0)) {
        return 0.0;
    }
    const Vec3 w = sun.direction;
    double acc = 0.0;
    if (scene.sunlit(x, w)) {
        acc += e0 * std::abs(dot(w, x.n)) * sun.direct;
    }

    SurfacePoint y = x;
    Vec3 dir = cosine_sample_hemisphere(y.n, rng);
    bool specular = false;
    for (int b = 0; b <= max_bounces; ++b) {
        const SurfaceHit h = scene.trace(y, dir);
        if (h.outcome == TraceOutcome::sky) {
            if (specular && in_sun_cone(dir, sun)) {
                acc += e0 * kPi * sun.intensity;
            } else {
                acc += e0 * kPi * f_sky(dir, diffuse_fraction, sun) * sun.intensity;
            }
            break;
        }
        if (h.outcome == TraceOutcome::lost) {
            break;
        }
        const SurfacePoint& z = h.point;
        // Absorbed at z with probability eps(z); survivors carry the albedo.
        if (rng.uniform() < z.emissivity) {
            break;
        }
        if (z.reflectance == ReflectanceKind::specular) {
            dir = mirror(dir, z.n);
            specular = true;
        } else {
            if (scene.sunlit(z, w)) {
                acc += e0 * std::abs(dot(w, z.n)) * sun.direct;
            }
            dir = cosine_sample_hemisphere(z.n, rng);
            specular = false;
        }
        y = z;
    }
    return acc;
}

/// One realisation of the coupled estimator started at an interface point.
template <PathScene Scene>
PathOutcome sample_path(const Scene& scene, SurfacePoint x, const KernelParams& kp, PathRng& rng)
{
    double t = 0.0;
    double weight = 0.0;
    int transitions = 0;
    int bounces = 0;
    if (!(kp.lookback > 0.0)) {
        return {scene.initial_temperature(x), PathEnd::initial};
    }
    for (;;) {
        if (kp.dirichlet) {
            if (const auto it = kp.dirichlet->find(x.material); it != kp.dirichlet->end()) {
                return {it->second + weight, PathEnd::dirichlet};
            }
        }
        if (++transitions > kp.max_transitions) {
            return {0.0, PathEnd::too_many_transitions};
        }
        const TransferCoefficients c =
            transfer_coefficients(x.emissivity, x.conductivity, kp.delta, kp.t_ref, kp.h_conv);
        const ModeProbabilities pm = kp.forced_modes ? *kp.forced_modes : mode_probabilities(c);
        if (kp.solar) {
            weight += solar_visit(scene, x, kp.solar->at(t), kp.diffuse_fraction, kp.max_bounces,
                                  rng) /
                      c.h_total;
        }

        const double u = rng.uniform();
        if (u < pm.radiative) {
            if (++bounces > kp.max_bounces) {
                return {0.0, PathEnd::too_many_bounces};
            }
            const SurfaceHit h = scene.trace(x, cosine_sample_hemisphere(x.n, rng));
            if (h.outcome == TraceOutcome::sky) {
                return {kp.sky->at(kp.clock(t)) + weight, PathEnd::sky};
            }
            if (h.outcome == TraceOutcome::lost) {
                return {0.0, PathEnd::lost_ray};
            }
            x = h.point;
            continue;
        }
        if (u < pm.radiative + pm.convective) {
            return {kp.air->at(kp.clock(t)) + weight, PathEnd::fluid};
        }

        bounces = 0;
        for (int k = 0; k < kp.steps_per_chain; ++k) {
            scene.conduct_step(x, kp.delta, rng);
            t += rng.exponential(x.rho_c * kp.delta * kp.delta / (4.0 * x.conductivity));
            if (t >= kp.lookback) {
                return {scene.initial_temperature(x) + weight, PathEnd::initial};
            }
        }
    }
}

}  // namespace heatmat
