// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Subcommand bodies behind the `heatmat` executable. Each writes its
// artifacts under an output directory and returns a summary; argument
// parsing and exit codes live in tools/heatmat_cli.cpp.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "heatmat/map_store.hpp"
#include "heatmat/scenario.hpp"
#include "heatmat/suites.hpp"
#include "heatmat/transport.hpp"
#include "heatmat/validation.hpp"

namespace heatmat {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitCompute = 3,
    kExitTolerance = 4,
};

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<int> spp;
    std::optional<int> threads;
    std::string out_dir;  // empty = scenario output_dir
    bool quiet = false;
    std::ostream* log = nullptr;  // summaries; nullptr = silent
};

/// Thread count from --threads, else HEATMAT_THREADS, else 0 (auto).
/// Throws ArgumentError on a malformed environment value.
int resolve_threads(std::optional<int> flag);

/// Applies seed/spp/threads overrides to the scenario config.
void apply_overrides(Scenario& s, const RunOptions& opt);

struct EncodeSummary {
    std::size_t buildings = 0;
    std::size_t building_cells = 0;
    std::size_t facade_cells = 0;
    std::size_t corner_flags = 0;
    std::vector<std::string> warnings;
};

EncodeSummary cmd_encode(const std::string& geojson_path, const GridSpec& grid,
                         const std::string& out_path, const std::string& materials_csv = {},
                         const std::string& ground_material = "Asphalt",
                         std::ostream* log = nullptr);

/// Deterministic stats document: no wall-clock fields.
std::string stats_json(const SimulationResult& r, const SimulationConfig& cfg);

/// Bilinear samples along the scenario profile line, "distance_m,x_m,y_m,temperature_k".
std::string profile_csv(const GridSpec& grid, const Raster& r, Vec2 a, Vec2 b, int samples);

struct SimulateOutputs {
    std::string raster;
    std::string pgm;
    std::string stats;
    std::string profile;  // empty when no profile line is configured
    SimulationResult result;
};

/// temperature.hm25, temperature.pgm (+ .json window), stats.json, profile.csv.
SimulateOutputs cmd_simulate(Scenario& s, const RunOptions& opt);

struct ChainOutputs {
    std::vector<std::string> rasters;
    std::vector<double> mean_temperature;
    std::vector<double> air_temperature;
};

/// step_NNN.hm25/.pgm per timestamp plus chain.csv. A single timestamp
/// writes the same temperature.hm25 bytes as cmd_simulate.
ChainOutputs cmd_chain(Scenario& s, const RunOptions& opt);

/// Region masks for difference summaries.
struct RegionMasks {
    std::vector<std::uint8_t> roofs;
    std::vector<std::uint8_t> far_ground;   // open ground >= 10 m from any facade
    std::vector<std::uint8_t> in_between;   // open ground closer than 10 m
};
RegionMasks region_masks(const MapSet& maps);

struct DiffOutputs {
    Raster difference;  // b - a
    WhatIfSummary all;
    WhatIfSummary roofs;
    WhatIfSummary far_ground;
    WhatIfSummary in_between;
    WhatIfSummary sunlit_near_facade;  // open ground within 3 m of a facade, sun visible
    std::string summary_path;
};

/// Applies a facade override to a loaded scene: "Limestone" replaces the
/// main material everywhere, "3=Limestone,5=Glass" per building.
void apply_facade_override(LoadedScene& scene, const std::string& override_spec);

/// Runs both overrides with the same seed; writes a.hm25, b.hm25, diff.hm25,
/// diff.pgm and diff_summary.json.
DiffOutputs cmd_diff(Scenario& s, const std::string& override_a, const std::string& override_b,
                     const RunOptions& opt);

/// Writes <suite>_report.md and <suite>_report.csv; returns the report.
SuiteReport cmd_validate(const std::string& suite, const SuiteOptions& suite_opt,
                         const std::string& out_dir, std::ostream* log = nullptr);

}  // namespace heatmat
