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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "thzchan/random.hpp"

namespace thzchan {

using cdouble = std::complex<double>;

/// CODATA speed of light in vacuum [m/s].
inline constexpr double kSpeedOfLight = 2.99792458e8;

/// Rounded speed of light [m/s], for reproducing hand arithmetic done with 3e8.
inline constexpr double kSpeedOfLightRounded = 3.0e8;

// ================================================================================================
// Frequency grid and sweep
// ================================================================================================

// Equally spaced frequency points covering [f_start, f_stop] inclusive.
// The spacing is stored explicitly so that frequency(k) = f_start + k * spacing
// holds with one constant step for every k.
class FrequencyGrid {
public:
    FrequencyGrid(double f_start_hz, double f_stop_hz, std::size_t n_points);

    /// Grid from start frequency and spacing; f_stop = f_start + (n - 1) * spacing.
    static FrequencyGrid from_spacing(double f_start_hz, double spacing_hz, std::size_t n_points);

    /// Measurement grid: 4096 points starting at 240 GHz with 60 GHz / 4096 = 14.6484375 MHz
    /// spacing, i.e. an unambiguous delay span of exactly 1 / 60 GHz.
    static FrequencyGrid measurement_default();

    double f_start() const { return f_start_; }
    double f_stop() const { return f_stop_; }
    std::size_t n_points() const { return n_points_; }
    double spacing() const { return spacing_; }

    /// n_points * spacing; the reciprocal of the delay-domain bin width.
    double span() const { return static_cast<double>(n_points_) * spacing_; }

    double center() const { return 0.5 * (f_start_ + f_stop_); }
    double frequency(std::size_t k) const
    {
        return k + 1 == n_points_ ? f_stop_ : f_start_ + static_cast<double>(k) * spacing_;
    }

    /// Index of the grid point closest to f_hz (clamped to the grid).
    std::size_t nearest_index(double f_hz) const;

    /// Same point count, start and spacing within `rel_tol` (relative to spacing).
    bool matches(const FrequencyGrid &other, double rel_tol = 1e-9) const;

    bool operator==(const FrequencyGrid &) const = default;

private:
    double f_start_ = 0.0;
    double f_stop_ = 0.0;
    std::size_t n_points_ = 0;
    double spacing_ = 0.0;
};

// Complex S21 samples (linear, dimensionless) on a frequency grid.
class FrequencySweep {
public:
    FrequencySweep(FrequencyGrid grid, std::vector<cdouble> samples, std::string label = {});

    const FrequencyGrid &grid() const { return grid_; }
    const std::vector<cdouble> &samples() const { return samples_; }
    const std::string &label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    std::size_t size() const { return samples_.size(); }

    /// Mean of |S21|^2 over the band, in dB.
    double mean_power_db() const;

private:
    FrequencyGrid grid_;
    std::vector<cdouble> samples_;
    std::string label_;
};

// ================================================================================================
// Antenna, LOS channel and multipath parameterisation
// ================================================================================================

struct TiltAnchor {
    double angle_deg;
    double loss_db;
};

// Rectangular gain dip between f_lo and f_hi (inclusive).
struct GainNotch {
    double f_lo_hz;
    double f_hi_hz;
    double depth_db;
};

struct AntennaPattern {
    double boresight_gain_dbi = 24.8;
    std::vector<TiltAnchor> tilt_anchors = {{0.0, 0.0}, {10.0, 2.3}, {20.0, 13.0}};
    std::optional<GainNotch> notch;
};

void validate(const AntennaPattern &pattern);

/// Friis free-space loss between two antennas at distance d, net of both antenna gains [dB].
double free_space_reference_loss_db(double f_hz, double distance_m, double gain_tx_dbi, double gain_rx_dbi,
                                    double c_mps = kSpeedOfLight);

// Parameters of one line-of-sight sweep.
//
// The received amplitude a_f satisfies
//   20 log10 a_f(f) = -(PL0 + 10 n log10(d / d0) + tilt_loss + humidity + notch_loss(f) [+ M])
// and the response carries exp(j phase) exp(-j 2 pi f d / c).
struct LosChannelSpec {
    double distance_m = 1.0;
    double ref_distance_m = 0.1;
    // Default: free-space loss at 0.1 m and 270 GHz between two 24.8 dBi horns.
    double pl0_db = free_space_reference_loss_db(270e9, 0.1, 24.8, 24.8);
    double n_exponent = 2.0;
    double phase_rad = 0.0;
    double tilt_deg = 0.0;
    double sigma_m_db = 0.0;
    double humidity_atten_db = 0.0;
    AntennaPattern antenna{};
    double c_mps = kSpeedOfLight;

    double propagation_delay_s() const { return distance_m / c_mps; }
};

void validate(const LosChannelSpec &spec);

// One sub-wave of a diffuse component with explicit angle of arrival, phase and amplitude.
struct DiffuseWave {
    double theta_rad;
    double phi_rad;
    double amplitude;
};

// Angles of arrival and phases i.i.d. uniform on [0, 2 pi), unit amplitudes.
struct UniformAoa {};

using AoaModel = std::variant<UniformAoa, std::vector<DiffuseWave>>;

struct TapSpec {
    double delay_s = 0.0;
    double sigma_s = 0.0;   // specular magnitude
    double theta_rad = 0.0; // specular angle of arrival
    double phi_rad = 0.0;   // specular phase
    double sigma_d = 0.0;   // diffuse magnitude
    std::size_t m_waves = 0;
    AoaModel aoa = UniformAoa{};
};

void validate(const TapSpec &tap);

struct MultipathSpec {
    std::vector<TapSpec> taps;
    double carrier_hz = 270e9;
};

// ================================================================================================
// Operations
// ================================================================================================

/// Piecewise-linear tilt loss through the pattern's anchors [dB]. Beyond the last anchor the
/// last segment is extended. Negative tilt is rejected.
double tilt_loss(const AntennaPattern &pattern, double tilt_deg);

/// Extra loss of the notch at frequency f [dB]; zero outside the notch or without one.
double notch_loss(const AntennaPattern &pattern, double f_hz);

/// Total deterministic loss of the LOS path at frequency f for exponent n [dB].
double los_loss_db(const LosChannelSpec &spec, double f_hz, double n_exponent);

/// Deterministic LOS frequency response. Random misalignment is not applied.
FrequencySweep los_frequency_response(const LosChannelSpec &spec, const FrequencyGrid &grid);

/// LOS response with one realised misalignment gain M [dB] added to the loss.
FrequencySweep los_frequency_response(const LosChannelSpec &spec, const FrequencyGrid &grid,
                                      double misalignment_db);

/// LOS response where each grid point uses its own path-loss exponent (spec.n_exponent is ignored).
FrequencySweep los_frequency_response(const LosChannelSpec &spec, const FrequencyGrid &grid,
                                      std::span<const double> exponent_per_point, double misalignment_db = 0.0);

/// One draw of the zero-mean Gaussian misalignment gain [dB]. sigma = 0 returns exactly 0.
double sample_misalignment_db(double sigma_m_db, std::uint64_t seed);
double sample_misalignment_db(double sigma_m_db, Rng &rng);

/// Complex gain m_l = s_l + d_l of one tap (specular plus diffuse part).
cdouble synthesize_tap(const TapSpec &tap, double carrier_hz, std::uint64_t seed);

/// H(f) = sum_l m_l exp(-j 2 pi f t_l); tap l draws from derive_seed(seed, l).
FrequencySweep multipath_frequency_response(const MultipathSpec &spec, const FrequencyGrid &grid,
                                            std::uint64_t seed);

/// Adds circular complex Gaussian noise with total power floor_db relative to |S21| = 1.
FrequencySweep add_noise_floor(const FrequencySweep &sweep, double floor_db, std::uint64_t seed);

/// Per-point exponents drawn i.i.d. from Normal(mean, variance).
std::vector<double> draw_exponents(std::size_t count, double mean, double variance, std::uint64_t seed);

} // namespace thzchan
