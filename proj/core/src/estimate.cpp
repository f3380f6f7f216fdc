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

#include "thzchan/estimate.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "thzchan/error.hpp"

namespace thzchan {

using detail::require;

PathLossFit fit_path_loss(std::span<const PathLossPoint> points, double ref_distance_m)
{
    require(std::isfinite(ref_distance_m) && ref_distance_m > 0.0, "fit_path_loss: reference distance must be > 0");
    std::set<double> distinct;
    for (const auto &p : points) {
        require(std::isfinite(p.distance_m) && p.distance_m > 0.0, "fit_path_loss: distances must be > 0");
        require(std::isfinite(p.rx_power_db), "fit_path_loss: received powers must be finite");
        distinct.insert(p.distance_m);
    }
    require(distinct.size() >= 2, "fit_path_loss: at least two distinct distances are required");

    // y = a + n x with x = -10 log10(d / d0); centred sums for stability.
    const auto count = static_cast<double>(points.size());
    std::vector<double> x(points.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        x[i] = -10.0 * std::log10(points[i].distance_m / ref_distance_m);
        mean_x += x[i];
        mean_y += points[i].rx_power_db;
    }
    mean_x /= count;
    mean_y /= count;

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double dx = x[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (points[i].rx_power_db - mean_y);
    }
    PathLossFit fit;
    fit.n_hat = sxy / sxx;
    const double intercept = mean_y - fit.n_hat * mean_x;
    fit.pl0_hat_db = -intercept;
    fit.points_used = points.size();

    double ss = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double r = points[i].rx_power_db - (intercept + fit.n_hat * x[i]);
        ss += r * r;
    }
    fit.residual_rms_db = std::sqrt(ss / count);
    return fit;
}

ExponentStats aggregate_exponents(std::span<const double> n_values)
{
    require(!n_values.empty(), "aggregate_exponents: at least one exponent is required");
    for (double n : n_values)
        require(std::isfinite(n), "aggregate_exponents: exponents must be finite");

    const auto count = static_cast<double>(n_values.size());
    double mean = 0.0;
    for (double n : n_values)
        mean += n;
    mean /= count;

    double ss = 0.0;
    for (double n : n_values)
        ss += (n - mean) * (n - mean);

    ExponentStats stats;
    stats.count = n_values.size();
    stats.mean_n = mean;
    stats.mle_mean = mean;
    stats.var_n = n_values.size() > 1 ? ss / (count - 1.0) : 0.0;
    stats.mle_var = ss / count;
    return stats;
}

ExpDecayFit fit_exponential_mle(std::span<const double> samples)
{
    require(!samples.empty(), "fit_exponential_mle: at least one sample is required");
    double sum = 0.0;
    for (double x : samples) {
        require(std::isfinite(x) && x > 0.0, "fit_exponential_mle: samples must be > 0");
        sum += x;
    }
    ExpDecayFit fit;
    fit.n_samples = samples.size();
    fit.lambda_hat = static_cast<double>(samples.size()) / sum;
    fit.log_likelihood = static_cast<double>(samples.size()) * std::log(fit.lambda_hat) - fit.lambda_hat * sum;
    return fit;
}

DecayCurveFit fit_decay_to_peaks(std::span<const DecayPeak> peaks)
{
    require(!peaks.empty(), "fit_decay_to_peaks: at least one peak is required");
    double attenuation = 0.0; // sum of -ln p
    double exposure = 0.0;    // sum of d
    std::vector<double> powers;
    powers.reserve(peaks.size());
    for (const auto &p : peaks) {
        require(std::isfinite(p.linear_power) && p.linear_power > 0.0, "fit_decay_to_peaks: powers must be > 0");
        require(std::isfinite(p.distance_m) && p.distance_m >= 0.0, "fit_decay_to_peaks: distances must be >= 0");
        attenuation += -std::log(p.linear_power);
        exposure += p.distance_m;
        powers.push_back(p.linear_power);
    }

    DecayCurveFit out;
    if (peaks.size() >= 2 && attenuation > 0.0 && exposure > 0.0) {
        out.fit.lambda_hat = attenuation / exposure;
        out.fit.n_samples = peaks.size();
        out.fit.log_likelihood = attenuation * std::log(out.fit.lambda_hat) - out.fit.lambda_hat * exposure;
    } else {
        out.fit = fit_exponential_mle(powers);
        out.degenerate = true;
    }
    out.residuals.reserve(peaks.size());
    for (const auto &p : peaks)
        out.residuals.push_back(p.linear_power - std::exp(-out.fit.lambda_hat * p.distance_m));
    return out;
}

double k_factor_from_db(double k_db)
{
    return std::pow(10.0, k_db / 10.0);
}

namespace {

void validate_dist(const EnvelopeDist &dist)
{
    if (const auto *r = std::get_if<RayleighDist>(&dist)) {
        require(std::isfinite(r->scale) && r->scale > 0.0, "Rayleigh: scale must be > 0");
    } else {
        const auto &rice = std::get<RiceDist>(dist);
        require(std::isfinite(rice.scale) && rice.scale > 0.0, "Rice: scale (total power) must be > 0");
        require(std::isfinite(rice.k_factor) && rice.k_factor >= 0.0, "Rice: K-factor must be >= 0");
    }
}

} // namespace

double envelope_cdf(const EnvelopeDist &dist, double r)
{
    validate_dist(dist);
    if (r <= 0.0)
        return 0.0;
    if (const auto *ray = std::get_if<RayleighDist>(&dist))
        return -std::expm1(-r * r / (2.0 * ray->scale * ray->scale));

    const auto &rice = std::get<RiceDist>(dist);
    const double two_sigma2 = rice.scale / (rice.k_factor + 1.0);
    if (rice.k_factor == 0.0)
        return -std::expm1(-r * r / two_sigma2);
    // r^2 / sigma^2 is non-central chi-squared with 2 degrees of freedom and
    // non-centrality nu^2 / sigma^2 = 2K.
    const double sigma2 = 0.5 * two_sigma2;
    boost::math::non_central_chi_squared ncx2(2.0, 2.0 * rice.k_factor);
    return boost::math::cdf(ncx2, r * r / sigma2);
}

KsResult envelope_ks_check(std::span<const double> envelopes, const EnvelopeDist &dist)
{
    validate_dist(dist);
    require(!envelopes.empty(), "envelope_ks_check: at least one sample is required");
    std::vector<double> sorted(envelopes.begin(), envelopes.end());
    for (double v : sorted)
        require(std::isfinite(v) && v >= 0.0, "envelope_ks_check: envelopes must be finite and >= 0");
    std::sort(sorted.begin(), sorted.end());

    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = envelope_cdf(dist, sorted[i]);
        const double i_d = static_cast<double>(i);
        d = std::max({d, (i_d + 1.0) / n - f, f - i_d / n});
    }
    KsResult result;
    result.statistic = d;
    result.critical_value = 1.63 / std::sqrt(n);
    result.pass_at_01 = d < result.critical_value;
    return result;
}

std::vector<TiltDrop> tilt_loss_report(std::span<const TiltObservation> observations)
{
    auto ref = std::find_if(observations.begin(), observations.end(),
                            [](const TiltObservation &o) { return o.tilt_deg == 0.0; });
    require(ref != observations.end(), "tilt_loss_report: a 0 deg boresight observation is required");

    auto absolute_peak_db = [](const DelayProfile &profile) {
        const Peak peak = find_first_peak(profile, 0.0);
        return peak.power_db + profile.ref_power_db.value_or(0.0);
    };
    const double ref_db = absolute_peak_db(ref->profile);

    std::vector<TiltDrop> drops;
    for (auto it = observations.begin(); it != observations.end(); ++it) {
        if (it == ref)
            continue;
        require(it->tilt_deg >= 0.0, "tilt_loss_report: tilt angles must be >= 0");
        TiltDrop drop;
        drop.tilt_deg = it->tilt_deg;
        drop.label = it->label;
        drop.peak_drop_db = ref_db - absolute_peak_db(it->profile);
        drop.significant = drop.peak_drop_db >= kSignificantDropDb;
        drops.push_back(std::move(drop));
    }
    return drops;
}

} // namespace thzchan
