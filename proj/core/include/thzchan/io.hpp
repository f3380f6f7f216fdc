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
#include <string_view>
#include <vector>

#include "thzchan/estimate.hpp"

namespace thzchan {

/// Version string embedded in every emitted artifact.
std::string_view tool_version();

/// Schema identifier of the analysis report.
inline constexpr std::string_view kReportSchema = "thzchan-report/1";

// ================================================================================================
// Sweep CSV: header `freq_hz,s21_re,s21_im`, one record per line
// ================================================================================================

/// Relative tolerance on the frequency step when checking that a file is uniformly sampled.
inline constexpr double kGridUniformityTol = 1e-9;

FrequencySweep parse_sweep_csv(std::istream &in, std::string_view source = "<stream>");
FrequencySweep read_sweep_csv(const std::filesystem::path &path);

/// Writes with 17 significant digits, so reading the file back is value-identical.
void write_sweep_csv(const FrequencySweep &sweep, std::ostream &out);
void write_sweep_csv(const FrequencySweep &sweep, const std::filesystem::path &path);

// ================================================================================================
// Calibration
// ================================================================================================

// Through-connection reference recorded with the two ports joined directly.
class CalibrationSet {
public:
    explicit CalibrationSet(FrequencySweep through);
    const FrequencySweep &through() const { return through_; }

private:
    FrequencySweep through_;
};

/// Per-point complex division raw / through.
FrequencySweep apply_calibration(const FrequencySweep &raw, const CalibrationSet &cal);

// ================================================================================================
// Profile CSV: header `axis_value,power_db`
// ================================================================================================

enum class ProfileAxis { Delay, Distance };

struct ProfileRow {
    double axis_value;
    double power_db;
};

/// Rows of the plot-ready profile. Zero-power bins are clamped to kProfileFloorDb.
std::vector<ProfileRow> profile_rows(const DelayProfile &profile, ProfileAxis axis, double c_mps = kSpeedOfLight);

inline constexpr double kProfileFloorDb = -400.0;

void write_profile_csv(const DelayProfile &profile, ProfileAxis axis, std::ostream &out,
                       double c_mps = kSpeedOfLight);
void write_profile_csv(const DelayProfile &profile, ProfileAxis axis, const std::filesystem::path &path,
                       double c_mps = kSpeedOfLight);
std::vector<ProfileRow> read_profile_csv(const std::filesystem::path &path);

// ================================================================================================
// Report JSON ("thzchan-report/1")
// ================================================================================================

struct LabeledFit {
    std::string label;
    std::optional<double> frequency_hz; // empty for band-averaged fits
    PathLossFit fit;
};

struct InputDigest {
    std::string path;
    std::string fnv1a64; // 16 lowercase hex digits
};

struct GridInfo {
    double f_start_hz = 0.0;
    double f_stop_hz = 0.0;
    std::size_t n_points = 0;
    double spacing_hz = 0.0;
};

GridInfo grid_info(const FrequencyGrid &grid);

struct ReportMeta {
    std::string tool_version;
    std::uint64_t seed = 0;
    std::optional<GridInfo> grid;
    std::string window;
    std::vector<InputDigest> inputs;
};

struct Report {
    std::optional<std::vector<LabeledFit>> path_loss_fits;
    std::optional<ExponentStats> exponent_stats;
    std::optional<DecayCurveFit> decay_fit;
    std::optional<std::vector<TiltDrop>> tilt_report;
    ReportMeta meta;
};

/// Serialises with a fixed key order and 12 significant digits per number.
std::string write_report_json(const Report &report);
void write_report_json(const Report &report, const std::filesystem::path &path);

Report parse_report_json(std::string_view text);
Report read_report_json(const std::filesystem::path &path);

/// Rounds to 12 significant digits, the precision numbers carry in reports.
double round_sig12(double value);

// ================================================================================================
// Misc helpers
// ================================================================================================

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view contents);
std::string hex64(std::uint64_t value);
InputDigest digest_file(const std::filesystem::path &path, std::string display_path);

} // namespace thzchan
