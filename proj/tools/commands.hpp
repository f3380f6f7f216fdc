// SPDX-License-Identifier: Apache-2.0
//
// thzchan - terahertz line-of-sight channel synthesis and sweep post-processing
// Copyright (C) 2026 The thzchan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thzchan/thzchan.hpp"

namespace thzchan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;

inline constexpr std::string_view kManifestSchema = "thzchan-manifest/1";
inline constexpr const char *kManifestName = "manifest.json";
inline constexpr const char *kReportName = "report.json";
inline constexpr const char *kTiltReportName = "tilt_report.json";

struct SimulateConfig {
    std::uint64_t seed = 1;
    FrequencyGrid grid = FrequencyGrid::measurement_default();
    std::vector<double> distances_m;
    std::vector<double> tilts_deg{0.0};
    std::vector<double> humidities_db{0.0};
    LosChannelSpec los{};            // distance, tilt and humidity are overridden per scenario
    double exponent_variance = 0.0;  // per-frequency exponent spread
    std::optional<double> noise_floor_db;
    std::vector<TapSpec> taps;       // multipath added on top of the LOS path
    std::filesystem::path out_dir = ".";
};

struct SweepInput {
    std::filesystem::path path;
    std::string display_path;
    std::string label;
    double distance_m = 0.0;
    double tilt_deg = 0.0;
    double humidity_db = 0.0;
};

struct AnalyzeConfig {
    std::uint64_t seed = 0;
    std::vector<SweepInput> sweeps;
    std::optional<std::filesystem::path> calibration;
    WindowKind window = WindowKind::Rectangular;
    std::size_t pad_factor = 1;
    double threshold_db = -10.0;
    double ref_distance_m = 0.1;
    double c_mps = kSpeedOfLight;
    std::filesystem::path out_dir = ".";
    bool write_profiles = true;
};

/// Scenario label, e.g. "d0.8m_tilt10deg_hum0dB". Seeds are keyed on it, so the order in which
/// scenarios are listed does not change any realisation.
std::string scenario_label(double distance_m, double tilt_deg, double humidity_db);

/// Writes one sweep CSV per (distance, tilt, humidity) scenario plus manifest.json.
/// Returns the manifest path.
std::filesystem::path cmd_simulate(const SimulateConfig &config, std::ostream &log);

/// Reads a manifest written by cmd_simulate into sweep inputs (paths resolved next to it).
std::vector<SweepInput> load_manifest(const std::filesystem::path &manifest, std::uint64_t *seed = nullptr,
                                      double *ref_distance_m = nullptr);

/// Delay transform, peak detection, path-loss, exponent and decay fits; writes report.json and
/// profile CSVs. Returns the report.
Report cmd_analyze(const AnalyzeConfig &config, std::ostream &log);

/// Peak drops against the boresight sweep; writes tilt_report.json.
Report cmd_tilt(const AnalyzeConfig &config, std::ostream &log);

/// Validates a report file and prints a summary; optionally writes the canonical form.
Report cmd_report(const std::filesystem::path &in, const std::optional<std::filesystem::path> &out,
                  std::ostream &log);

/// Full command-line entry point. Returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace thzchan::cli
