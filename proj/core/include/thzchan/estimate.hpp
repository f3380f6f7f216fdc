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

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "thzchan/dsp.hpp"

namespace thzchan {

// ================================================================================================
// Path loss
// ================================================================================================

struct PathLossPoint {
    double distance_m;
    double rx_power_db; // 20 log10 |S21|, i.e. minus the path loss
};

struct PathLossFit {
    double n_hat = 0.0;
    double pl0_hat_db = 0.0;
    double residual_rms_db = 0.0;
    std::size_t points_used = 0;
};

/// Ordinary least squares of rx power against -10 log10(d / d0). The slope is the exponent and
/// minus the intercept the reference loss PL0.
PathLossFit fit_path_loss(std::span<const PathLossPoint> points, double ref_distance_m);

struct ExponentStats {
    double mean_n = 0.0;
    double var_n = 0.0;    // unbiased, 1/(N-1); 0 for a single value
    double mle_mean = 0.0; // Gaussian MLE mean (the sample mean)
    double mle_var = 0.0;  // Gaussian MLE variance, 1/N
    std::size_t count = 0;
};

ExponentStats aggregate_exponents(std::span<const double> n_values);

// ================================================================================================
// Exponential decay
// ================================================================================================

struct ExpDecayFit {
    double lambda_hat = 0.0;
    std::size_t n_samples = 0;
    double log_likelihood = 0.0;
};

/// Exponential-rate MLE: the root of N / lambda - sum(x) = 0, lambda = N / sum(x).
ExpDecayFit fit_exponential_mle(std::span<const double> samples);

struct DecayPeak {
    double distance_m;
    double linear_power; // normalised to the reference
};

struct DecayCurveFit {
    ExpDecayFit fit;
    std::vector<double> residuals; // linear_power - exp(-lambda * distance) per peak
    bool degenerate = false;
};

/// Fits exp(-lambda d) to normalised peak powers.
///
/// Each peak contributes -ln(p_k) units of attenuation over an exposure of d_k, and the score
/// equation sum(-ln p_k) / lambda - sum(d_k) = 0 gives lambda = sum(-ln p_k) / sum(d_k). This
/// recovers lambda exactly when the peaks lie on the curve. With fewer than two peaks, or when
/// the peaks carry no attenuation or no distance, the fit is flagged degenerate and lambda falls
/// back to fit_exponential_mle over the powers themselves.
DecayCurveFit fit_decay_to_peaks(std::span<const DecayPeak> peaks);

// ================================================================================================
// Envelope statistics
// ================================================================================================

struct RayleighDist {
    double scale; // sigma; E[r^2] = 2 sigma^2
};

struct RiceDist {
    double k_factor; // linear specular-to-diffuse power ratio
    double scale;    // total power Omega = nu^2 + 2 sigma^2
};

using EnvelopeDist = std::variant<RayleighDist, RiceDist>;

double envelope_cdf(const EnvelopeDist &dist, double r);

struct KsResult {
    double statistic = 0.0;
    double critical_value = 0.0; // 1.63 / sqrt(N)
    bool pass_at_01 = false;
};

/// One-sample Kolmogorov-Smirnov test at alpha = 0.01 with the asymptotic critical value.
KsResult envelope_ks_check(std::span<const double> envelopes, const EnvelopeDist &dist);

/// Linear K-factor from dB.
double k_factor_from_db(double k_db);

// ================================================================================================
// Tilt / humidity peak drops
// ================================================================================================

/// Peak drops of at least this much count as significant.
inline constexpr double kSignificantDropDb = 1.0;

struct TiltObservation {
    double tilt_deg;
    DelayProfile profile;
    std::string label;
};

struct TiltDrop {
    double tilt_deg = 0.0;
    std::string label;
    double peak_drop_db = 0.0;
    bool significant = false;
};

/// Peak power drop of each observation relative to the first 0-degree entry (the boresight
/// reference, which is not itself reported). Peaks are the global maxima of each profile.
std::vector<TiltDrop> tilt_loss_report(std::span<const TiltObservation> observations);

} // namespace thzchan
