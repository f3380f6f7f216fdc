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

#include "thzchan/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "thzchan/error.hpp"

namespace thzchan {

using detail::require;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string describe(double value)
{
    std::ostringstream os;
    os.precision(12);
    os << value;
    return os.str();
}

// exp(j 2 pi f cos(theta)) with the product reduced modulo one cycle first.
cdouble static_aoa_phasor(double carrier_hz, double theta_rad, double phi_rad, double amplitude)
{
    const double cycles = carrier_hz * std::cos(theta_rad);
    const double frac = cycles - std::floor(cycles);
    return std::polar(amplitude, kTwoPi * frac + phi_rad);
}

} // namespace

// ------------------------------------------------------------------------------------------------
// FrequencyGrid / FrequencySweep
// ------------------------------------------------------------------------------------------------

FrequencyGrid::FrequencyGrid(double f_start_hz, double f_stop_hz, std::size_t n_points)
    : f_start_(f_start_hz), f_stop_(f_stop_hz), n_points_(n_points)
{
    require(std::isfinite(f_start_hz) && std::isfinite(f_stop_hz), "FrequencyGrid: frequencies must be finite");
    require(f_start_hz > 0.0, "FrequencyGrid: f_start must be > 0 (got " + describe(f_start_hz) + ")");
    require(f_stop_hz > f_start_hz, "FrequencyGrid: f_stop must exceed f_start");
    require(n_points >= 2, "FrequencyGrid: n_points must be >= 2");
    spacing_ = (f_stop_hz - f_start_hz) / static_cast<double>(n_points - 1);
}

FrequencyGrid FrequencyGrid::from_spacing(double f_start_hz, double spacing_hz, std::size_t n_points)
{
    require(std::isfinite(spacing_hz) && spacing_hz > 0.0, "FrequencyGrid: spacing must be > 0");
    require(n_points >= 2, "FrequencyGrid: n_points must be >= 2");
    FrequencyGrid grid(f_start_hz, f_start_hz + static_cast<double>(n_points - 1) * spacing_hz, n_points);
    grid.spacing_ = spacing_hz;
    return grid;
}

FrequencyGrid FrequencyGrid::measurement_default()
{
    return from_spacing(240e9, 60e9 / 4096.0, 4096);
}

std::size_t FrequencyGrid::nearest_index(double f_hz) const
{
    const double k = std::round((f_hz - f_start_) / spacing_);
    if (k <= 0.0)
        return 0;
    return std::min(static_cast<std::size_t>(k), n_points_ - 1);
}

bool FrequencyGrid::matches(const FrequencyGrid &other, double rel_tol) const
{
    if (n_points_ != other.n_points_)
        return false;
    const double tol = rel_tol * std::max(spacing_, other.spacing_);
    return std::abs(f_start_ - other.f_start_) <= tol * static_cast<double>(n_points_) &&
           std::abs(spacing_ - other.spacing_) <= tol;
}

FrequencySweep::FrequencySweep(FrequencyGrid grid, std::vector<cdouble> samples, std::string label)
    : grid_(grid), samples_(std::move(samples)), label_(std::move(label))
{
    require(samples_.size() == grid_.n_points(),
            "FrequencySweep: sample count " + std::to_string(samples_.size()) + " does not match grid size " +
                std::to_string(grid_.n_points()));
    for (std::size_t k = 0; k < samples_.size(); ++k)
        require(std::isfinite(samples_[k].real()) && std::isfinite(samples_[k].imag()),
                "FrequencySweep: sample " + std::to_string(k) + " is not finite");
}

double FrequencySweep::mean_power_db() const
{
    double acc = 0.0;
    for (const auto &s : samples_)
        acc += std::norm(s);
    return 10.0 * std::log10(acc / static_cast<double>(samples_.size()));
}

// ------------------------------------------------------------------------------------------------
// Validation
// ------------------------------------------------------------------------------------------------

void validate(const AntennaPattern &pattern)
{
    const auto &a = pattern.tilt_anchors;
    require(!a.empty(), "AntennaPattern: tilt_anchors must not be empty");
    require(a.front().angle_deg == 0.0 && a.front().loss_db == 0.0,
            "AntennaPattern: tilt_anchors must start at (0 deg, 0 dB)");
    for (std::size_t i = 1; i < a.size(); ++i) {
        require(a[i].angle_deg > a[i - 1].angle_deg, "AntennaPattern: anchor angles must be strictly increasing");
        require(a[i].loss_db >= a[i - 1].loss_db, "AntennaPattern: anchor losses must be non-decreasing");
    }
    for (const auto &anchor : a)
        require(std::isfinite(anchor.angle_deg) && std::isfinite(anchor.loss_db),
                "AntennaPattern: anchors must be finite");
    if (pattern.notch) {
        const auto &n = *pattern.notch;
        require(n.f_lo_hz < n.f_hi_hz, "AntennaPattern: notch f_lo must be below f_hi");
        require(n.depth_db >= 0.0, "AntennaPattern: notch depth must be >= 0 dB");
    }
}

void validate(const LosChannelSpec &spec)
{
    require(spec.ref_distance_m > 0.0, "LosChannelSpec: ref_distance_m must be > 0");
    require(spec.distance_m >= spec.ref_distance_m,
            "LosChannelSpec: distance_m (" + describe(spec.distance_m) + ") must be >= ref_distance_m (" +
                describe(spec.ref_distance_m) + ")");
    require(spec.sigma_m_db >= 0.0, "LosChannelSpec: sigma_m_db must be >= 0");
    require(spec.humidity_atten_db >= 0.0, "LosChannelSpec: humidity_atten_db must be >= 0");
    require(spec.tilt_deg >= 0.0, "LosChannelSpec: tilt_deg must be >= 0");
    require(spec.c_mps > 0.0, "LosChannelSpec: c_mps must be > 0");
    require(std::isfinite(spec.pl0_db) && std::isfinite(spec.n_exponent) && std::isfinite(spec.phase_rad),
            "LosChannelSpec: pl0_db, n_exponent and phase_rad must be finite");
    require(spec.propagation_delay_s() > 0.0, "LosChannelSpec: propagation delay must be > 0");
    validate(spec.antenna);
}

void validate(const TapSpec &tap)
{
    require(tap.delay_s >= 0.0, "TapSpec: delay_s must be >= 0");
    require(tap.sigma_s >= 0.0 && tap.sigma_d >= 0.0, "TapSpec: sigma_s and sigma_d must be >= 0");
    if (const auto *waves = std::get_if<std::vector<DiffuseWave>>(&tap.aoa)) {
        require(waves->size() == tap.m_waves, "TapSpec: FixedList length " + std::to_string(waves->size()) +
                                                  " does not match m_waves " + std::to_string(tap.m_waves));
        for (const auto &w : *waves)
            require(w.amplitude >= 0.0, "TapSpec: FixedList amplitudes must be >= 0");
    }
}

// ------------------------------------------------------------------------------------------------
// Losses
// ------------------------------------------------------------------------------------------------

double free_space_reference_loss_db(double f_hz, double distance_m, double gain_tx_dbi, double gain_rx_dbi,
                                    double c_mps)
{
    return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * f_hz / c_mps) - gain_tx_dbi - gain_rx_dbi;
}

double tilt_loss(const AntennaPattern &pattern, double tilt_deg)
{
    validate(pattern);
    require(tilt_deg >= 0.0, "tilt_loss: tilt angle must be >= 0 deg");
    const auto &a = pattern.tilt_anchors;
    if (a.size() == 1)
        return a.front().loss_db;

    // Segment [i-1, i] containing the angle; the last segment also covers the extrapolation.
    auto it = std::upper_bound(a.begin(), a.end(), tilt_deg,
                               [](double angle, const TiltAnchor &anchor) { return angle < anchor.angle_deg; });
    std::size_t i = static_cast<std::size_t>(it - a.begin());
    if (i >= a.size())
        i = a.size() - 1;
    if (i == 0)
        i = 1;
    const auto &lo = a[i - 1];
    const auto &hi = a[i];
    if (tilt_deg == lo.angle_deg)
        return lo.loss_db;
    if (tilt_deg == hi.angle_deg)
        return hi.loss_db;
    const double t = (tilt_deg - lo.angle_deg) / (hi.angle_deg - lo.angle_deg);
    return lo.loss_db + t * (hi.loss_db - lo.loss_db);
}

double notch_loss(const AntennaPattern &pattern, double f_hz)
{
    if (!pattern.notch)
        return 0.0;
    const auto &n = *pattern.notch;
    return (f_hz >= n.f_lo_hz && f_hz <= n.f_hi_hz) ? n.depth_db : 0.0;
}

double los_loss_db(const LosChannelSpec &spec, double f_hz, double n_exponent)
{
    return spec.pl0_db + 10.0 * n_exponent * std::log10(spec.distance_m / spec.ref_distance_m) +
           tilt_loss(spec.antenna, spec.tilt_deg) + spec.humidity_atten_db + notch_loss(spec.antenna, f_hz);
}

// ------------------------------------------------------------------------------------------------
// LOS response
// ------------------------------------------------------------------------------------------------

namespace {

template <typename ExponentAt>
FrequencySweep los_response_impl(const LosChannelSpec &spec, const FrequencyGrid &grid, double misalignment_db,
                                 ExponentAt exponent_at)
{
    validate(spec);
    require(std::isfinite(misalignment_db), "los_frequency_response: misalignment must be finite");

    const double t0 = spec.propagation_delay_s();
    const double distance_term = std::log10(spec.distance_m / spec.ref_distance_m);
    const double flat_loss = spec.pl0_db + tilt_loss(spec.antenna, spec.tilt_deg) + spec.humidity_atten_db +
                             misalignment_db;

    std::vector<cdouble> samples(grid.n_points());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double f = grid.frequency(k);
        const double loss_db = flat_loss + 10.0 * exponent_at(k) * distance_term + notch_loss(spec.antenna, f);
        const double amplitude = std::pow(10.0, -loss_db / 20.0);
        samples[k] = std::polar(amplitude, spec.phase_rad - kTwoPi * f * t0);
    }
    return FrequencySweep(grid, std::move(samples));
}

} // namespace

FrequencySweep los_frequency_response(const LosChannelSpec &spec, const FrequencyGrid &grid)
{
    return los_frequency_response(spec, grid, 0.0);
}

FrequencySweep los_frequency_response(const LosChannelSpec &spec, const FrequencyGrid &grid,
                                      double misalignment_db)
{
    return los_response_impl(spec, grid, misalignment_db, [&](std::size_t) { return spec.n_exponent; });
}

FrequencySweep los_frequency_response(const LosChannelSpec &spec, const FrequencyGrid &grid,
                                      std::span<const double> exponent_per_point, double misalignment_db)
{
    require(exponent_per_point.size() == grid.n_points(),
            "los_frequency_response: one exponent per grid point is required");
    for (double n : exponent_per_point)
        require(std::isfinite(n), "los_frequency_response: exponents must be finite");
    return los_response_impl(spec, grid, misalignment_db, [&](std::size_t k) { return exponent_per_point[k]; });
}

// ------------------------------------------------------------------------------------------------
// Random components
// ------------------------------------------------------------------------------------------------

double sample_misalignment_db(double sigma_m_db, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_misalignment_db(sigma_m_db, rng);
}

double sample_misalignment_db(double sigma_m_db, Rng &rng)
{
    require(std::isfinite(sigma_m_db) && sigma_m_db >= 0.0, "sample_misalignment_db: sigma must be >= 0");
    if (sigma_m_db == 0.0)
        return 0.0;
    return sigma_m_db * rng.normal();
}

cdouble synthesize_tap(const TapSpec &tap, double carrier_hz, std::uint64_t seed)
{
    validate(tap);
    require(carrier_hz > 0.0, "synthesize_tap: carrier must be > 0");

    cdouble specular{0.0, 0.0};
    if (tap.sigma_s > 0.0)
        specular = static_aoa_phasor(carrier_hz, tap.theta_rad, tap.phi_rad, tap.sigma_s);

    cdouble diffuse{0.0, 0.0};
    if (tap.sigma_d > 0.0 && tap.m_waves > 0) {
        if (const auto *waves = std::get_if<std::vector<DiffuseWave>>(&tap.aoa)) {
            for (const auto &w : *waves)
                diffuse += static_aoa_phasor(carrier_hz, w.theta_rad, w.phi_rad, w.amplitude);
        } else {
            Rng rng(seed);
            for (std::size_t m = 0; m < tap.m_waves; ++m) {
                const double theta = kTwoPi * rng.uniform();
                const double phi = kTwoPi * rng.uniform();
                diffuse += static_aoa_phasor(carrier_hz, theta, phi, 1.0);
            }
        }
        diffuse *= tap.sigma_d / std::sqrt(static_cast<double>(tap.m_waves));
    }
    return specular + diffuse;
}

FrequencySweep multipath_frequency_response(const MultipathSpec &spec, const FrequencyGrid &grid,
                                            std::uint64_t seed)
{
    require(!spec.taps.empty(), "multipath_frequency_response: tap list must not be empty");

    std::vector<cdouble> gains(spec.taps.size());
    for (std::size_t l = 0; l < spec.taps.size(); ++l)
        gains[l] = synthesize_tap(spec.taps[l], spec.carrier_hz, derive_seed(seed, l));

    std::vector<cdouble> samples(grid.n_points(), cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double f = grid.frequency(k);
        for (std::size_t l = 0; l < gains.size(); ++l)
            samples[k] += gains[l] * std::polar(1.0, -kTwoPi * f * spec.taps[l].delay_s);
    }
    return FrequencySweep(grid, std::move(samples));
}

FrequencySweep add_noise_floor(const FrequencySweep &sweep, double floor_db, std::uint64_t seed)
{
    require(std::isfinite(floor_db), "add_noise_floor: floor must be finite");
    Rng rng(seed);
    // Complex noise of total variance 10^(floor/10): each quadrature carries half.
    const double sd = std::sqrt(0.5 * std::pow(10.0, floor_db / 10.0));
    std::vector<cdouble> samples = sweep.samples();
    for (auto &s : samples) {
        const double re = rng.normal();
        const double im = rng.normal();
        s += cdouble{sd * re, sd * im};
    }
    return FrequencySweep(sweep.grid(), std::move(samples), sweep.label());
}

std::vector<double> draw_exponents(std::size_t count, double mean, double variance, std::uint64_t seed)
{
    require(variance >= 0.0, "draw_exponents: variance must be >= 0");
    Rng rng(seed);
    const double sd = std::sqrt(variance);
    std::vector<double> out(count);
    for (auto &n : out)
        n = mean + sd * rng.normal();
    return out;
}

} // namespace thzchan
