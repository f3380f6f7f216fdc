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

#include "thzchan/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "thzchan/error.hpp"

namespace thzchan {

using detail::require;

namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex &planner_mutex()
{
    static std::mutex m;
    return m;
}

// Unnormalised complex DFT. sign = FFTW_FORWARD (exp(-j...)) or FFTW_BACKWARD (exp(+j...)).
std::vector<cdouble> fftw_transform(std::vector<cdouble> data, int sign)
{
    const int n = static_cast<int>(data.size());
    std::vector<cdouble> out(data.size());
    auto *in_ptr = reinterpret_cast<fftw_complex *>(data.data());
    auto *out_ptr = reinterpret_cast<fftw_complex *>(out.data());

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, sign, FFTW_ESTIMATE);
    }
    if (plan == nullptr)
        throw std::runtime_error("FFTW failed to create a plan of size " + std::to_string(n));
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

} // namespace

void validate(const DelayProfile &profile)
{
    require(std::isfinite(profile.delay_step_s) && profile.delay_step_s > 0.0,
            "DelayProfile: delay_step_s must be > 0");
    require(!profile.samples.empty(), "DelayProfile: samples must not be empty");
    for (const auto &s : profile.samples)
        require(std::isfinite(s.real()) && std::isfinite(s.imag()), "DelayProfile: samples must be finite");
    require(std::isfinite(profile.t0_removed_s), "DelayProfile: t0_removed_s must be finite");
}

WindowKind parse_window(std::string_view name)
{
    if (name == "rectangular" || name == "rect")
        return WindowKind::Rectangular;
    if (name == "hann")
        return WindowKind::Hann;
    if (name == "hamming")
        return WindowKind::Hamming;
    throw ValidationError("unknown window '" + std::string(name) + "' (expected rectangular, hann or hamming)");
}

std::string_view to_string(WindowKind kind)
{
    switch (kind) {
    case WindowKind::Rectangular:
        return "rectangular";
    case WindowKind::Hann:
        return "hann";
    case WindowKind::Hamming:
        return "hamming";
    }
    return "rectangular";
}

std::vector<double> window_coefficients(WindowKind kind, std::size_t n)
{
    require(n >= 2, "window_coefficients: length must be >= 2");
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::Rectangular)
        return w;

    const double a0 = kind == WindowKind::Hann ? 0.5 : 0.54;
    const double denom = static_cast<double>(n - 1);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = a0 - (1.0 - a0) * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / denom);
        sum += w[k];
    }
    const double mean = sum / static_cast<double>(n);
    for (auto &v : w)
        v /= mean;
    return w;
}

DelayProfile sweep_to_delay(const FrequencySweep &sweep, WindowKind window, std::size_t pad_factor)
{
    const std::size_t n = sweep.size();
    require(n >= 2, "sweep_to_delay: at least two frequency points are required");
    require(is_power_of_two(pad_factor), "sweep_to_delay: pad_factor must be a power of two");

    const auto w = window_coefficients(window, n);
    const std::size_t total = n * pad_factor;
    std::vector<cdouble> buffer(total, cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k)
        buffer[k] = sweep.samples()[k] * w[k];

    auto samples = fftw_transform(std::move(buffer), FFTW_BACKWARD);
    // Scale by the number of measured points so padding does not change the peak amplitude.
    const double scale = 1.0 / static_cast<double>(n);
    for (auto &s : samples)
        s *= scale;

    DelayProfile profile;
    profile.delay_step_s = 1.0 / (static_cast<double>(total) * sweep.grid().spacing());
    profile.samples = std::move(samples);
    return profile;
}

std::vector<cdouble> delay_to_frequency(const DelayProfile &profile)
{
    validate(profile);
    return fftw_transform(profile.samples, FFTW_FORWARD);
}

std::vector<double> delay_to_distance(const DelayProfile &profile, double c_mps)
{
    validate(profile);
    require(std::isfinite(c_mps) && c_mps > 0.0, "delay_to_distance: c must be > 0");
    std::vector<double> out(profile.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = profile.delay_at(k) * c_mps;
    return out;
}

std::vector<double> power_db(const DelayProfile &profile)
{
    std::vector<double> out(profile.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = 10.0 * std::log10(std::norm(profile.samples[k]));
    return out;
}

Peak find_first_peak(const DelayProfile &profile, double threshold_db)
{
    validate(profile);
    require(threshold_db <= 0.0 && !std::isnan(threshold_db), "find_first_peak: threshold must be <= 0 dB");

    const std::size_t n = profile.size();
    std::vector<double> p(n);
    double max_power = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        p[k] = std::norm(profile.samples[k]);
        max_power = std::max(max_power, p[k]);
    }
    if (max_power <= 0.0)
        throw NoPeakError("find_first_peak: profile has no non-zero sample");

    const double floor = max_power * std::pow(10.0, threshold_db / 10.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (p[k] < floor || p[k] <= 0.0)
            continue;
        const bool left_ok = k == 0 || p[k] >= p[k - 1];
        const bool right_ok = k + 1 == n || p[k] >= p[k + 1];
        if (left_ok && right_ok) {
            Peak peak;
            peak.bin = k;
            peak.delay_s = profile.delay_at(k);
            peak.power_db = 10.0 * std::log10(p[k]);
            peak.relative_db = 10.0 * std::log10(p[k] / max_power);
            return peak;
        }
    }
    // Unreachable: the global maximum is always a local maximum above the floor.
    throw NoPeakError("find_first_peak: no local maximum above threshold");
}

DelayProfile normalize_profile(const DelayProfile &profile, double ref_power_db)
{
    validate(profile);
    require(std::isfinite(ref_power_db), "normalize_profile: reference power must be finite");
    const double current = profile.ref_power_db.value_or(0.0);
    const double gain = std::pow(10.0, (current - ref_power_db) / 20.0);

    DelayProfile out = profile;
    if (gain != 1.0)
        for (auto &s : out.samples)
            s *= gain;
    out.ref_power_db = ref_power_db;
    return out;
}

DelayProfile normalize_to_peak(const DelayProfile &profile)
{
    validate(profile);
    double max_power = 0.0;
    for (const auto &s : profile.samples)
        max_power = std::max(max_power, std::norm(s));
    if (max_power <= 0.0)
        throw NoPeakError("normalize_to_peak: profile has no non-zero sample");
    return normalize_profile(profile, profile.ref_power_db.value_or(0.0) + 10.0 * std::log10(max_power));
}

DelayProfile remove_propagation_delay(const DelayProfile &profile, double t0_s)
{
    validate(profile);
    require(std::isfinite(t0_s) && t0_s >= 0.0, "remove_propagation_delay: t0 must be >= 0");
    const double offset = (t0_s - profile.t0_removed_s) / profile.delay_step_s;
    require(offset >= 0.0, "remove_propagation_delay: t0 precedes the delay already removed");
    require(offset < static_cast<double>(profile.size()),
            "remove_propagation_delay: t0 lies beyond the profile span");

    // Nearest bin, ties toward the earlier bin.
    auto shift = static_cast<std::size_t>(std::ceil(offset - 0.5));
    if (shift >= profile.size())
        shift = profile.size() - 1;

    DelayProfile out = profile;
    std::rotate(out.samples.begin(), out.samples.begin() + static_cast<std::ptrdiff_t>(shift), out.samples.end());
    out.t0_removed_s = t0_s;
    return out;
}

} // namespace thzchan
