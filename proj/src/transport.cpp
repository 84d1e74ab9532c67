// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/transport.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "heatmat/errors.hpp"
#include "heatmat/transport_kernel.hpp"

namespace heatmat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double reflect_into(double v, double hi)
{
    if (!(hi > 0.0)) {
        return 0.0;
    }
    // Steps are far shorter than any wall, so one fold is enough in practice.
    if (v < 0.0) {
        v = -v;
    }
    if (v > hi) {
        v = 2.0 * hi - v;
    }
    return std::clamp(v, 0.0, hi);
}

struct MaterialProps {
    double emissivity = 0.0;
    double conductivity = 0.0;
    double rho_c = 0.0;
    ReflectanceKind reflectance = ReflectanceKind::lambertian;
};

// Adapts the encoded city maps to the kernel's scene interface.
class CityPathScene {
public:
    CityPathScene(const CityScene& scene, const MaterialDb& db, const SimulationConfig& cfg)
        : scene_(scene), maps_(scene.maps()), default_ti_(cfg.initial_temperature)
    {
        tcfg_ = TraceConfig::for_grid(scene.grid());
        tcfg_.max_steps = cfg.trace_max_steps;
        props_.resize(256);
        for (const Material& m : db.materials()) {
            props_[m.id] = {m.emissivity, m.conductivity, m.density * m.heat_capacity,
                            m.reflectance};
        }
        known_.assign(256, false);
        for (const Material& m : db.materials()) {
            known_[m.id] = true;
        }
    }

    SurfaceHit trace(const SurfacePoint& from, Vec3 dir) const
    {
        const Hit h = sphere_trace({from.p + from.n * tcfg_.eps_hit, dir}, scene_, tcfg_);
        SurfaceHit out;
        switch (h.kind) {
        case HitKind::sky:
        case HitKind::domain_edge: out.outcome = TraceOutcome::sky; return out;
        case HitKind::exhausted: out.outcome = TraceOutcome::lost; return out;
        case HitKind::ground:
            out.outcome = TraceOutcome::surface;
            out.point = ground_point(h.point, h.cell);
            return out;
        case HitKind::roof:
            out.outcome = TraceOutcome::surface;
            out.point = roof_point(h.point, h.cell, h.building_id);
            return out;
        case HitKind::facade: {
            const Chord* c = h.facade_cell >= 0 ? scene_.chord(static_cast<std::size_t>(h.facade_cell))
                                                : nullptr;
            if (!c) {
                out.outcome = TraceOutcome::lost;
                return out;
            }
            const Vec2 d = c->b - c->a;
            const double along =
                c->length > 0.0 ? std::clamp(dot(h.point.xy() - c->a, d) / c->length, 0.0, c->length)
                                : 0.0;
            out.outcome = TraceOutcome::surface;
            out.point = facade_point(*c, c->s_start + along, std::clamp(h.point.z, 0.0, c->height));
            out.point.p = h.point;
            out.point.n = h.normal;
            return out;
        }
        }
        return out;
    }

    bool sunlit(const SurfacePoint& x, Vec3 w) const
    {
        return !occluded_toward_sun(x.p, x.n, w, scene_, tcfg_);
    }

    double initial_temperature(const SurfacePoint& x) const
    {
        const auto c = scene_.grid().locate(x.p.xy());
        if (!c) {
            return default_ti_;
        }
        const float v = maps_.initial_temperature_k[scene_.grid().index(*c)];
        return std::isfinite(v) ? static_cast<double>(v) : default_ti_;
    }

    void conduct_step(SurfacePoint& x, double delta, PathRng& rng) const
    {
        const double a = 2.0 * kPi * rng.uniform();
        const double dx = delta * std::cos(a);
        const double dy = delta * std::sin(a);
        if (x.kind == SurfaceKind::facade) {
            const Chord& c0 = *scene_.chord(static_cast<std::size_t>(x.facade_cell));
            const double s = reflect_into(x.s + dx, c0.perimeter);
            const double z = reflect_into(x.p.z + dy, c0.height);
            x = facade_at(c0.building, s, z);
            return;
        }
        const std::uint32_t target = x.kind == SurfaceKind::roof ? x.building : 0;
        const Vec2 p = x.p.xy();
        const Vec2 tries[4] = {{dx, dy}, {-dx, dy}, {dx, -dy}, {-dx, -dy}};
        for (const Vec2& t : tries) {
            const Vec2 q = p + t;
            if (!scene_.grid().contains(q) || scene_.owner_at(q) != target) {
                continue;
            }
            const auto c = scene_.grid().locate(q);
            const auto cell = static_cast<std::int64_t>(scene_.grid().index(*c));
            const Vec3 q3{q.x, q.y, x.p.z};
            x = x.kind == SurfaceKind::roof ? roof_point(q3, cell, target) : ground_point(q3, cell);
            return;
        }
    }

    // Pixel start: roof or ground at the cell centroid.
    SurfacePoint start_point(int px, int py) const
    {
        const GridSpec& g = scene_.grid();
        const Vec2 c = g.centroid(px, py);
        const auto cell = static_cast<std::int64_t>(g.index(px, py));
        const std::uint32_t b = scene_.owner_at(c);
        if (b == 0) {
            return ground_point({c.x, c.y, 0.0}, cell);
        }
        return roof_point({c.x, c.y, scene_.building(b)->height}, cell, b);
    }

private:
    void apply(SurfacePoint& x, MaterialId m) const
    {
        if (!known_[m]) {
            throw UnknownMaterialError("material id " + std::to_string(m) + " is not in the database");
        }
        const MaterialProps& pr = props_[m];
        x.material = m;
        x.emissivity = pr.emissivity;
        x.conductivity = pr.conductivity;
        x.rho_c = pr.rho_c;
        x.reflectance = pr.reflectance;
    }

    void apply_override(SurfacePoint& x) const
    {
        const float e = maps_.emissivity_override[static_cast<std::size_t>(x.cell)];
        if (std::isfinite(e)) {
            x.emissivity = e;
        }
    }

    SurfacePoint ground_point(Vec3 p, std::int64_t cell) const
    {
        SurfacePoint x;
        x.kind = SurfaceKind::ground;
        x.p = {p.x, p.y, 0.0};
        x.n = {0.0, 0.0, 1.0};
        x.cell = cell;
        apply(x, maps_.ground_material[static_cast<std::size_t>(cell)]);
        apply_override(x);
        return x;
    }

    SurfacePoint roof_point(Vec3 p, std::int64_t cell, std::uint32_t building) const
    {
        SurfacePoint x;
        x.kind = SurfaceKind::roof;
        x.n = {0.0, 0.0, 1.0};
        x.cell = cell;
        x.building = building;
        const auto k = static_cast<std::size_t>(cell);
        const BuildingInfo* info = scene_.building(building);
        x.p = {p.x, p.y, info ? info->height : p.z};
        MaterialId m = maps_.building_id[k] == building ? maps_.roof_material[k] : kNoMaterial;
        if (m == kNoMaterial && info) {
            m = info->roof_material;
        }
        apply(x, m);
        apply_override(x);
        return x;
    }

    SurfacePoint facade_point(const Chord& c, double s, double z) const
    {
        SurfacePoint x;
        x.kind = SurfaceKind::facade;
        x.building = c.building;
        x.facade_cell = static_cast<std::int64_t>(c.cell);
        x.cell = x.facade_cell;
        x.s = s;
        const Vec2 d = c.length > 0.0 ? (c.b - c.a) * (1.0 / c.length) : Vec2{};
        const Vec2 q = c.a + d * std::clamp(s - c.s_start, 0.0, c.length);
        x.p = {q.x, q.y, z};
        x.n = {c.normal.x, c.normal.y, 0.0};
        const double u = c.perimeter > 0.0 ? s / c.perimeter : 0.0;
        const double h = c.height > 0.0 ? z / c.height : 0.0;
        const FacadePoint fp =
            sample_component(std::clamp(u, 0.0, 1.0), std::clamp(h, 0.0, 1.0),
                             scene_.layouts()[static_cast<std::size_t>(c.layout)], c.height,
                             c.perimeter);
        apply(x, fp.material);
        return x;
    }

    SurfacePoint facade_at(std::uint32_t building, double s, double z) const
    {
        const std::vector<int>& outline = scene_.outline(building);
        const auto& chords = scene_.chords();
        auto it = std::upper_bound(outline.begin(), outline.end(), s,
                                   [&](double v, int k) { return v < chords[k].s_start; });
        if (it != outline.begin()) {
            --it;
        }
        return facade_point(chords[*it], s, z);
    }

    const CityScene& scene_;
    const MapSet& maps_;
    double default_ti_;
    TraceConfig tcfg_;
    std::vector<MaterialProps> props_;
    std::vector<bool> known_;
};

struct Welford {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x)
    {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double std_error() const
    {
        return n < 2 ? 0.0 : std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

struct PixelCounters {
    std::uint64_t transitions = 0;
    std::uint64_t bounces = 0;
    std::uint64_t lost = 0;
};

class PixelRunner {
public:
    PixelRunner(const CityScene& scene, const MaterialDb& db, const SimulationConfig& cfg)
        : cfg_(cfg), adapter_(scene, db, cfg), timeline_(cfg, cfg.lookback)
    {
        kp_.max_bounces = cfg.max_radiative_bounces;
        kp_.steps_per_chain = cfg.conductive_steps_per_chain;
        kp_.max_transitions = cfg.max_transitions;
        kp_.delta = cfg.effective_delta();
        kp_.t_ref = cfg.t_ref;
        kp_.h_conv = cfg.h_conv;
        kp_.lookback = cfg.lookback;
        kp_.t0 = cfg.time.seconds_of_day();
        kp_.air = &cfg_.air_temperature;
        kp_.sky = &cfg_.sky_temperature;
        kp_.solar = cfg.sun_enabled ? &timeline_ : nullptr;
        kp_.diffuse_fraction = cfg.diffuse_fraction;
        kp_.forced_modes = cfg.forced_modes;
        kp_.dirichlet = cfg.dirichlet.empty() ? nullptr : &cfg_.dirichlet;
    }

    PixelEstimate run(int px, int py, PixelCounters& counters) const
    {
        const SurfacePoint start = adapter_.start_point(px, py);
        Welford acc;
        PixelEstimate est;
        for (int k = 0; k < cfg_.spp; ++k) {
            PathRng rng(cfg_.seed, cfg_.stream_tag, static_cast<std::uint32_t>(k),
                        static_cast<std::uint32_t>(px), static_cast<std::uint32_t>(py));
            const PathOutcome o = sample_path(adapter_, start, kp_, rng);
            if (o.valid()) {
                acc.add(o.weight);
                continue;
            }
            ++est.discarded;
            switch (o.end) {
            case PathEnd::too_many_transitions: ++counters.transitions; break;
            case PathEnd::too_many_bounces: ++counters.bounces; break;
            default: ++counters.lost; break;
            }
        }
        est.valid = static_cast<std::uint32_t>(acc.n);
        est.temperature = acc.n > 0 ? acc.mean : kNaN;
        est.std_error = acc.n > 0 ? acc.std_error() : kNaN;
        return est;
    }

private:
    const SimulationConfig& cfg_;
    CityPathScene adapter_;
    SolarTimeline timeline_;
    KernelParams kp_;
};

}  // namespace

double SimulationConfig::effective_delta() const
{
    return delta > 0.0 ? delta : characteristic_delta(pattern);
}

void SimulationConfig::validate() const
{
    std::vector<std::string> bad;
    if (spp < 1) bad.push_back("spp must be >= 1");
    if (max_radiative_bounces < 1) bad.push_back("max_radiative_bounces must be >= 1");
    if (conductive_steps_per_chain < 1) bad.push_back("conductive_steps_per_chain must be >= 1");
    if (max_transitions < 1) bad.push_back("max_transitions must be >= 1");
    if (trace_max_steps < 1) bad.push_back("trace_max_steps must be >= 1");
    if (delta < 0.0 || !std::isfinite(delta)) bad.push_back("delta must be >= 0");
    if (!(lookback > 0.0) || !std::isfinite(lookback)) bad.push_back("lookback must be > 0");
    if (!(t_ref > 0.0)) bad.push_back("t_ref must be > 0");
    if (!(h_conv >= 0.0)) bad.push_back("h_conv must be >= 0");
    if (!(initial_temperature > 0.0)) bad.push_back("initial temperature must be > 0 K");
    if (air_temperature.empty()) bad.push_back("air temperature schedule is empty");
    if (sky_temperature.empty()) bad.push_back("sky temperature schedule is empty");
    if (!(diffuse_fraction >= 0.0 && diffuse_fraction <= 1.0))
        bad.push_back("diffuse_fraction must lie in [0, 1]");
    if (!(sun_half_angle_deg > 0.0 && sun_half_angle_deg < 90.0))
        bad.push_back("sun half angle must lie in (0, 90) degrees");
    if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0)) bad.push_back("latitude out of range");
    if (!(longitude_deg >= -180.0 && longitude_deg <= 180.0)) bad.push_back("longitude out of range");
    if (threads < 0) bad.push_back("threads must be >= 0");
    if (pixel_stride < 1) bad.push_back("pixel_stride must be >= 1");
    try {
        pattern.validate();
    } catch (const Error& e) {
        bad.push_back(e.what());
    }
    if (forced_modes) {
        const auto& m = *forced_modes;
        if (m.radiative < 0.0 || m.convective < 0.0 || m.conductive < 0.0 ||
            std::abs(m.radiative + m.convective + m.conductive - 1.0) > 1e-9) {
            bad.push_back("forced mode probabilities must be non-negative and sum to 1");
        }
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "invalid configuration:";
        for (const auto& b : bad) {
            os << "\n  - " << b;
        }
        throw ConfigError(os.str());
    }
}

SolarTimeline::SolarTimeline(const SimulationConfig& cfg, double lookback)
{
    const double half = cfg.sun_half_angle_deg * kPi / 180.0;
    step_ = std::max(60.0, lookback / 4096.0);
    if (!cfg.sun_enabled) {
        states_.push_back(make_solar_state(-kPi / 2.0, 0.0, half, cfg.solar_constant));
        return;
    }
    const auto n = static_cast<std::size_t>(std::ceil(std::max(lookback, 0.0) / step_)) + 1;
    states_.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const SunPosition sp = sun_position(cfg.latitude_deg, cfg.longitude_deg,
                                            cfg.time.plus_seconds(-static_cast<double>(k) * step_));
        states_.push_back(make_solar_state(sp.elevation, sp.azimuth, half, cfg.solar_constant));
    }
}

const SolarState& SolarTimeline::at(double path_time) const
{
    const double k = std::round(std::max(path_time, 0.0) / step_);
    const auto i = std::min(static_cast<std::size_t>(k), states_.size() - 1);
    return states_[i];
}

Vec3 cosine_sample_hemisphere(Vec3 normal, PathRng& rng)
{
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(u1);
    const double phi = 2.0 * kPi * u2;
    // Branchless orthonormal basis around the normal.
    const double sign = std::copysign(1.0, normal.z);
    const double a = -1.0 / (sign + normal.z);
    const double b = normal.x * normal.y * a;
    const Vec3 t1{1.0 + sign * normal.x * normal.x * a, sign * b, -sign * normal.x};
    const Vec3 t2{b, sign + normal.y * normal.y * a, -normal.y};
    return normalized(t1 * (r * std::cos(phi)) + t2 * (r * std::sin(phi)) +
                      normal * std::sqrt(1.0 - u1));
}

PixelEstimate estimate_pixel(int px, int py, const CityScene& scene, const MaterialDb& db,
                             const SimulationConfig& cfg)
{
    cfg.validate();
    if (!scene.grid().in_range(px, py)) {
        throw ArgumentError("pixel (" + std::to_string(px) + ", " + std::to_string(py) +
                            ") outside the grid");
    }
    PixelRunner runner(scene, db, cfg);
    PixelCounters counters;
    return runner.run(px, py, counters);
}

SimulationResult simulate(const MapSet& maps, const MaterialDb& db, const SimulationConfig& cfg,
                          const ProgressFn& progress)
{
    cfg.validate();
    maps.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const CityScene scene(maps, cfg.pattern);
    const PixelRunner runner(scene, db, cfg);
    const GridSpec& g = maps.grid;

    SimulationResult out;
    out.temperature = Raster(g.width, g.height, kNaN);
    out.std_error = Raster(g.width, g.height, kNaN);
    out.valid.assign(g.cells(), 0);
    out.discarded.assign(g.cells(), 0);

    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::max(1, std::min(threads, g.height));

    std::atomic<int> next_row{0};
    std::atomic<int> rows_done{0};
    std::mutex progress_mu;
    std::vector<PixelCounters> counters(static_cast<std::size_t>(threads));
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto worker = [&](int tid) {
        try {
            const int stride = cfg.pixel_stride;
            for (int j = next_row++; j < g.height; j = next_row++) {
                for (int i = 0; i < g.width && j % stride == 0; i += stride) {
                    const std::size_t k = g.index(i, j);
                    const PixelEstimate e = runner.run(i, j, counters[tid]);
                    out.temperature.values[k] = e.temperature;
                    out.std_error.values[k] = e.std_error;
                    out.valid[k] = e.valid;
                    out.discarded[k] = e.discarded;
                }
                const int done = ++rows_done;
                if (progress) {
                    std::lock_guard lock(progress_mu);
                    progress(done, g.height);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) {
                failure = std::current_exception();
            }
            next_row = g.height;
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker, t);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    SimulationStats& st = out.stats;
    st.threads = threads;
    for (const auto& c : counters) {
        st.discarded_transitions += c.transitions;
        st.discarded_bounces += c.bounces;
        st.trace_budget_errors += c.lost;
    }
    double se_sum = 0.0;
    std::uint64_t se_n = 0;
    for (std::size_t k = 0; k < g.cells(); ++k) {
        const int i = static_cast<int>(k % g.width);
        const int j = static_cast<int>(k / g.width);
        if (i % cfg.pixel_stride != 0 || j % cfg.pixel_stride != 0) {
            continue;
        }
        st.valid_paths += out.valid[k];
        st.discarded_paths += out.discarded[k];
        if (out.valid[k] == 0) {
            ++st.invalid_pixels;
        } else {
            se_sum += out.std_error.values[k];
            ++se_n;
        }
    }
    st.mean_std_error = se_n ? se_sum / static_cast<double>(se_n) : 0.0;
    st.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return out;
}

std::vector<SimulationResult> chain_simulate(const MapSet& maps, const MaterialDb& db,
                                             const SimulationConfig& cfg,
                                             const std::vector<LocalDateTime>& timestamps,
                                             const ProgressFn& progress)
{
    if (timestamps.empty()) {
        throw ArgumentError("chain needs at least one timestamp");
    }
    for (std::size_t k = 1; k < timestamps.size(); ++k) {
        if (!(timestamps[k].julian_day() > timestamps[k - 1].julian_day())) {
            throw ArgumentError("chain timestamps must be strictly increasing (" +
                                timestamps[k - 1].to_string() + " then " +
                                timestamps[k].to_string() + ")");
        }
    }
    MapSet state = maps;
    std::vector<SimulationResult> results;
    results.reserve(timestamps.size());
    for (std::size_t k = 0; k < timestamps.size(); ++k) {
        SimulationConfig step = cfg;
        step.time = timestamps[k];
        step.stream_tag = cfg.stream_tag + static_cast<std::uint32_t>(k);
        if (k > 0) {
            const double gap =
                (timestamps[k].julian_day() - timestamps[k - 1].julian_day()) * 86400.0;
            step.lookback = std::round(gap * 1000.0) / 1000.0;
        }
        results.push_back(simulate(state, db, step, progress));
        const Raster& t = results.back().temperature;
        for (std::size_t c = 0; c < state.cells(); ++c) {
            if (std::isfinite(t.values[c])) {
                state.initial_temperature_k[c] = static_cast<float>(t.values[c]);
            }
        }
    }
    return results;
}

}  // namespace heatmat
