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

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "thzchan/model.hpp"

namespace thzchan {

// Delay-domain samples of a sweep. Bin k sits at k * delay_step_s + t0_removed_s.
// When ref_power_db is set the samples are scaled so that the raw power
// 10 log10|x|^2 equal to ref_power_db maps to 0 dB.
struct DelayProfile {
    double delay_step_s = 0.0;
    std::vector<cdouble> samples;
    double t0_removed_s = 0.0;
    std::optional<double> ref_power_db;

    std::size_t size() const { return samples.size(); }
    double delay_at(std::size_t bin) const { return static_cast<double>(bin) * delay_step_s + t0_removed_s; }
    /// Total delay span covered by the profile.
    double span_s() const { return static_cast<double>(samples.size()) * delay_step_s; }
};

void validate(const DelayProfile &profile);

enum class WindowKind { Rectangular, Hann, Hamming };

WindowKind parse_window(std::string_view name);
std::string_view to_string(WindowKind kind);

/// Window coefficients scaled to unit mean, so a flat sweep keeps its amplitude at bin 0.
std::vector<double> window_coefficients(WindowKind kind, std::size_t n);

/// Windowed inverse DFT, x[m] = (1/N) sum_k X[k] exp(+j 2 pi k m / N).
/// A sweep with phase slope exp(-j 2 pi f t0) peaks at bin t0 * span. With pad_factor > 1 the
/// sweep is zero-padded to pad_factor * n points (pad_factor must be a power of two) and the
/// bin width shrinks accordingly.
DelayProfile sweep_to_delay(const FrequencySweep &sweep, WindowKind window = WindowKind::Rectangular,
                            std::size_t pad_factor = 1);

/// Forward DFT of the profile samples, the inverse of sweep_to_delay without padding.
std::vector<cdouble> delay_to_frequency(const DelayProfile &profile);

/// Distance of each bin, (k * step + t0_removed) * c.
std::vector<double> delay_to_distance(const DelayProfile &profile, double c_mps = kSpeedOfLight);

/// 10 log10 |x|^2 per bin. Exact zeros map to -inf.
std::vector<double> power_db(const DelayProfile &profile);

struct Peak {
    std::size_t bin = 0;
    double delay_s = 0.0;
    double power_db = 0.0;    // in the profile's scale
    double relative_db = 0.0; // relative to the global maximum (<= 0)
};

/// Earliest local maximum whose power is within threshold_db (<= 0) of the global maximum.
/// Noise-only profiles still return a bin; filtering by absolute floor is up to the caller.
Peak find_first_peak(const DelayProfile &profile, double threshold_db);

/// Rescales the profile so that raw power ref_power_db reads 0 dB. The reference is absolute
/// (with respect to the unnormalised transform), so repeating the call with the same value is a
/// no-op and a reference of 0 dB restores the raw scale.
DelayProfile normalize_profile(const DelayProfile &profile, double ref_power_db);

/// Normalises so that the profile's own maximum reads 0 dB.
DelayProfile normalize_to_peak(const DelayProfile &profile);

/// Rotates the profile left so the bin nearest t0_s becomes bin 0 and records t0_s.
/// Half-bin ties go to the earlier bin. t0_s is measured on the raw delay axis.
DelayProfile remove_propagation_delay(const DelayProfile &profile, double t0_s);

} // namespace thzchan
