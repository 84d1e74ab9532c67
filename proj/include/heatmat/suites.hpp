// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Oracle comparison suites shared by `heatmat validate` and the acceptance
// runner.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace heatmat {

struct SuiteCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<SuiteCheck> checks;
    std::vector<std::string> csv;  // suite-specific table, first row is the header
    double seconds = 0.0;

    bool pass() const;
    std::string markdown() const;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    int threads = 0;
    int walks_per_cell = 10000;  // conduction
    int plate_size = 64;         // conduction
    int scenes = 20;             // sdf
    int stride = 8;              // convergence: every stride-th pixel per axis, 1 = full grid
    int reference_factor = 16;   // convergence
    int base_spp = 125;          // convergence: base, 4x, 16x
};

SuiteReport run_conduction_suite(const SuiteOptions& opt);
SuiteReport run_sdf_suite(const SuiteOptions& opt);
SuiteReport run_solar_suite(const SuiteOptions& opt);
SuiteReport run_convergence_suite(const SuiteOptions& opt);
SuiteReport run_null_suite(const SuiteOptions& opt);

/// Dispatches on conduction | sdf | solar | convergence | null.
/// Throws ArgumentError for other names.
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

const std::vector<std::string>& suite_names();

}  // namespace heatmat
