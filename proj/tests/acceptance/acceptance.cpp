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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "oracles.hpp"
#include "thzchan/thzchan.hpp"

using namespace thzchan;
namespace fs = std::filesystem;

namespace {

// ------------------------------------------------------------------------------------------------
// Pinned tolerances
// ------------------------------------------------------------------------------------------------

constexpr double kResolutionHz = 14'648'438.0;
constexpr double kResolutionTolHz = 0.5;         // stated to 6 decimals in MHz
constexpr double kCoarseResolutionMhz = 14.648;
constexpr double kCoarseResolutionTolMhz = 0.0005; // 3 decimals
constexpr double kDelayBinPs = 16.276;
constexpr double kDelayBinTolPs = 0.0005;
constexpr double kDistanceBinMm = 4.879;
constexpr double kDistanceBinTolMm = 0.0005;

constexpr double kNoiselessExponentTol = 1e-6;
constexpr double kNoisyExponentTol = 0.02;
constexpr double kNoiseFloorDb = -75.0;
constexpr double kTrueExponent = 1.9704;
constexpr double kDrawMean = 1.97;
constexpr double kDrawVariance = 0.0035;
constexpr double kStandardErrors = 3.0;

constexpr double kTableMean = 1.97571;
constexpr double kTableMeanTol = 1e-5;

constexpr double kScoreTolRel = 1e-12;
constexpr double kMcRate = 3.0;
constexpr double kMcRateTolRel = 0.01;
constexpr double kEquivarianceTolRel = 1e-12;

constexpr double kDropTolDb = 1e-9;
constexpr double kHumidityDb = 0.2;

constexpr std::size_t kTapWaves = 128;
constexpr std::size_t kTapSeeds = 10'000;
constexpr double kRiceKDb = 10.0;

constexpr double kParsevalTolRel = 1e-9;
constexpr double kRoundTripTol = 1e-9;
constexpr double kCalibrationTol = 1e-12;

constexpr double kRuntime2s = 1.0;
constexpr double kRuntime3s = 30.0;
constexpr double kRuntime5s = 5.0;
constexpr double kRuntime8s = 10.0;

// ------------------------------------------------------------------------------------------------

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string &what)
    {
        if (!detail.empty())
            detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
        pass = pass && ok;
    }
};

std::string fmt(const char *format, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path work_dir(const fs::path &root, const std::string &name)
{
    const auto dir = root / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

cli::AnalyzeConfig analyze_config(const fs::path &manifest, const fs::path &out)
{
    cli::AnalyzeConfig a;
    a.sweeps = cli::load_manifest(manifest, &a.seed, &a.ref_distance_m);
    a.out_dir = out;
    return a;
}

const LabeledFit &band_fit(const Report &r)
{
    return r.path_loss_fits->front();
}

// ------------------------------------------------------------------------------------------------

Outcome criterion_grid()
{
    Outcome o;
    const auto grid = FrequencyGrid::measurement_default();
    const auto profile = sweep_to_delay(FrequencySweep(grid, std::vector<cdouble>(grid.n_points(), 1.0)));
    const double res_mhz = grid.spacing() / 1e6;
    const double bin_ps = profile.delay_step_s * 1e12;
    const double dist_mm = delay_to_distance(profile)[1] * 1e3;

    o.check(std::abs(grid.spacing() - kResolutionHz) <= kResolutionTolHz &&
                std::abs(res_mhz - kCoarseResolutionMhz) <= kCoarseResolutionTolMhz,
            fmt("resolution %.6f MHz", res_mhz));
    o.check(std::abs(bin_ps - kDelayBinPs) <= kDelayBinTolPs, fmt("delay bin %.3f ps (expected %.3f)", bin_ps, kDelayBinPs));
    o.check(std::abs(dist_mm - kDistanceBinMm) <= kDistanceBinTolMm,
            fmt("distance bin %.3f mm (expected %.3f)", dist_mm, kDistanceBinMm));
    return o;
}

Outcome criterion_delay_distance()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = FrequencyGrid::measurement_default();
    for (double d : {0.4, 0.8, 1.2, 2.0}) {
        LosChannelSpec spec;
        spec.distance_m = d;
        const auto profile = sweep_to_delay(los_frequency_response(spec, grid));
        const auto peak = find_first_peak(profile, 0.0);
        const auto axis = delay_to_distance(profile);
        const double step = axis[1] - axis[0];
        o.check(std::abs(axis[peak.bin] - d) <= step, fmt("%.1f m -> %.5f m", d, axis[peak.bin]));
    }
    const double elapsed = seconds_since(t0);
    o.check(elapsed < kRuntime2s, fmt("%.3f s", elapsed));
    return o;
}

Outcome criterion_path_loss(const fs::path &root)
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream log;

    cli::SimulateConfig base;
    base.seed = 2024;
    base.distances_m = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2};
    base.los.n_exponent = kTrueExponent;

    {
        auto config = base;
        config.out_dir = work_dir(root, "c3_noiseless");
        const auto report = cli::cmd_analyze(analyze_config(cli::cmd_simulate(config, log), config.out_dir), log);
        const double err = std::abs(band_fit(report).fit.n_hat - kTrueExponent);
        o.check(err < kNoiselessExponentTol, fmt("noiseless |dn| = %.2e", err));
    }
    {
        auto config = base;
        config.noise_floor_db = kNoiseFloorDb;
        config.out_dir = work_dir(root, "c3_noisy");
        const auto report = cli::cmd_analyze(analyze_config(cli::cmd_simulate(config, log), config.out_dir), log);
        const double err = std::abs(band_fit(report).fit.n_hat - kTrueExponent);
        o.check(err < kNoisyExponentTol, fmt("-75 dB noise |dn| = %.2e", err));
    }
    {
        auto config = base;
        config.los.n_exponent = kDrawMean;
        config.exponent_variance = kDrawVariance;
        config.out_dir = work_dir(root, "c3_dispersed");
        const auto report = cli::cmd_analyze(analyze_config(cli::cmd_simulate(config, log), config.out_dir), log);
        const auto &s = *report.exponent_stats;
        const double n = static_cast<double>(s.count);
        const double se_mean = std::sqrt(kDrawVariance / n);
        const double se_var = kDrawVariance * std::sqrt(2.0 / (n - 1.0));
        o.check(s.count == 4096, fmt("%.0f per-frequency fits", n));
        o.check(std::abs(s.mean_n - kDrawMean) <= kStandardErrors * se_mean,
                fmt("mean %.5f (%.2f SE)", s.mean_n, std::abs(s.mean_n - kDrawMean) / se_mean));
        o.check(std::abs(s.var_n - kDrawVariance) <= kStandardErrors * se_var,
                fmt("var %.6f (%.2f SE)", s.var_n, std::abs(s.var_n - kDrawVariance) / se_var));
    }
    const double elapsed = seconds_since(t0);
    o.check(elapsed < kRuntime3s, fmt("%.2f s", elapsed));
    return o;
}

Outcome criterion_table()
{
    Outcome o;
    const std::vector<double> row{2.02, 2.04, 1.96, 1.90, 1.96, 1.94, 2.01};
    const auto stats = aggregate_exponents(row);
    o.check(std::abs(stats.mean_n - kTableMean) <= kTableMeanTol, fmt("mean %.6f", stats.mean_n));
    return o;
}

Outcome criterion_exponential_mle()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(derive_seed(5, 0));

    double worst_score = 0.0, worst_equivariance = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> x(1 + static_cast<std::size_t>(rng.uniform() * 100));
        for (auto &v : x)
            v = 1e-3 + 10.0 * rng.uniform();
        const double sum = std::accumulate(x.begin(), x.end(), 0.0);
        const auto fit = fit_exponential_mle(x);
        worst_score = std::max(worst_score, std::abs(static_cast<double>(x.size()) / fit.lambda_hat - sum) / sum);

        const double c = 1e-3 + 1e3 * rng.uniform();
        for (auto &v : x)
            v *= c;
        worst_equivariance =
            std::max(worst_equivariance, std::abs(fit_exponential_mle(x).lambda_hat * c - fit.lambda_hat) / fit.lambda_hat);
    }
    o.check(worst_score <= kScoreTolRel, fmt("score residual %.1e", worst_score));

    std::vector<double> draws(100'000);
    for (auto &v : draws)
        v = oracle::exponential_inverse_cdf(rng.uniform(), kMcRate);
    const double lambda = fit_exponential_mle(draws).lambda_hat;
    o.check(std::abs(lambda - kMcRate) <= kMcRateTolRel * kMcRate, fmt("lambda %.4f", lambda));
    o.check(worst_equivariance <= kEquivarianceTolRel, fmt("equivariance %.1e", worst_equivariance));

    const double elapsed = seconds_since(t0);
    o.check(elapsed < kRuntime5s, fmt("%.2f s", elapsed));
    return o;
}

Outcome criterion_tilt(const fs::path &root)
{
    Outcome o;
    std::ostringstream log;
    cli::SimulateConfig config;
    config.seed = 6;
    config.distances_m = {0.8};
    config.tilts_deg = {0.0, 10.0, 20.0};
    config.out_dir = work_dir(root, "c6");
    const auto report = cli::cmd_analyze(analyze_config(cli::cmd_simulate(config, log), config.out_dir), log);
    if (!report.tilt_report || report.tilt_report->size() != 2) {
        o.check(false, "tilt report missing");
        return o;
    }
    const double at10 = report.tilt_report->at(0).peak_drop_db;
    const double at20 = report.tilt_report->at(1).peak_drop_db;
    o.check(std::abs(at10 - 2.3) <= kDropTolDb, fmt("10 deg: %.12f dB", at10));
    o.check(std::abs(at20 - 13.0) <= kDropTolDb, fmt("20 deg: %.12f dB", at20));
    return o;
}

Outcome criterion_humidity(const fs::path &root)
{
    Outcome o;
    std::ostringstream log;
    cli::SimulateConfig config;
    config.seed = 7;
    config.distances_m = {0.8};
    config.humidities_db = {0.0, kHumidityDb, 0.5, 1.5};
    config.out_dir = work_dir(root, "c7");
    const auto report = cli::cmd_analyze(analyze_config(cli::cmd_simulate(config, log), config.out_dir), log);
    if (!report.tilt_report || report.tilt_report->size() != 3) {
        o.check(false, "humidity drops missing");
        return o;
    }
    const double alphas[] = {kHumidityDb, 0.5, 1.5};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto &d = report.tilt_report->at(i);
        o.check(std::abs(d.peak_drop_db - alphas[i]) <= kDropTolDb, fmt("%.1f dB -> %.12f dB", alphas[i], d.peak_drop_db));
        o.check(d.significant == (alphas[i] >= kSignificantDropDb), d.significant ? "significant" : "not significant");
    }
    return o;
}

Outcome criterion_envelopes()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();

    TapSpec diffuse;
    diffuse.sigma_d = 1.0;
    diffuse.m_waves = kTapWaves;
    std::vector<double> r(kTapSeeds);
    for (std::size_t s = 0; s < kTapSeeds; ++s)
        r[s] = std::abs(synthesize_tap(diffuse, 270e9, derive_seed(8, s)));
    const auto rayleigh = envelope_ks_check(r, RayleighDist{1.0 / std::sqrt(2.0)});
    o.check(rayleigh.pass_at_01, fmt("diffuse vs Rayleigh D = %.4f (crit %.4f)", rayleigh.statistic, rayleigh.critical_value));

    const double k = k_factor_from_db(kRiceKDb);
    TapSpec rician = diffuse;
    rician.sigma_s = std::sqrt(k);
    rician.theta_rad = 0.3;
    for (std::size_t s = 0; s < kTapSeeds; ++s)
        r[s] = std::abs(synthesize_tap(rician, 270e9, derive_seed(9, s)));
    const double omega = k + 1.0;
    const auto wrong = envelope_ks_check(r, RayleighDist{std::sqrt(omega / 2.0)});
    const auto right = envelope_ks_check(r, RiceDist{k, omega});
    o.check(!wrong.pass_at_01, fmt("K=10 dB vs Rayleigh D = %.4f", wrong.statistic));
    o.check(right.pass_at_01, fmt("K=10 dB vs Rice D = %.4f", right.statistic));

    const double elapsed = seconds_since(t0);
    o.check(elapsed < kRuntime8s, fmt("%.2f s", elapsed));
    return o;
}

Outcome criterion_hygiene(const fs::path &root)
{
    Outcome o;
    const auto grid = FrequencyGrid::measurement_default();
    Rng rng(derive_seed(9, 1));
    std::vector<cdouble> x(grid.n_points());
    for (auto &v : x)
        v = {rng.normal(), rng.normal()};
    const FrequencySweep sweep(grid, x);
    const auto profile = sweep_to_delay(sweep);

    double e_freq = 0.0, e_delay = 0.0;
    for (const auto &v : x)
        e_freq += std::norm(v);
    for (const auto &v : profile.samples)
        e_delay += std::norm(v);
    const double parseval = std::abs(e_freq - static_cast<double>(x.size()) * e_delay) / e_freq;
    o.check(parseval < kParsevalTolRel, fmt("Parseval %.1e", parseval));

    const auto back = delay_to_frequency(profile);
    double round_trip = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        round_trip = std::max(round_trip, std::abs(back[k] - x[k]));
    o.check(round_trip < kRoundTripTol, fmt("round trip %.1e", round_trip));

    const auto cal = apply_calibration(sweep, CalibrationSet(sweep));
    double identity = 0.0;
    for (const auto &v : cal.samples())
        identity = std::max(identity, std::abs(v - cdouble{1.0, 0.0}));
    o.check(identity <= kCalibrationTol, fmt("self-calibration %.1e", identity));

    // Two full simulate + analyze runs with the same seed.
    std::ostringstream log;
    std::vector<fs::path> dirs;
    for (const char *name : {"c9_a", "c9_b"}) {
        cli::SimulateConfig config;
        config.seed = 99;
        config.distances_m = {0.3, 0.7};
        config.tilts_deg = {0.0, 10.0};
        config.los.sigma_m_db = 1.0;
        config.noise_floor_db = kNoiseFloorDb;
        config.out_dir = work_dir(root, name);
        cli::cmd_analyze(analyze_config(cli::cmd_simulate(config, log), config.out_dir), log);
        dirs.push_back(config.out_dir);
    }
    std::size_t files = 0, identical = 0;
    for (const auto &entry : fs::directory_iterator(dirs[0])) {
        ++files;
        const auto other = dirs[1] / entry.path().filename();
        identical += fs::exists(other) && read_file(entry.path()) == read_file(other);
    }
    o.check(files > 0 && identical == files, fmt("%.0f/%.0f files byte-identical", double(identical), double(files)));
    return o;
}

} // namespace

int main(int argc, char **argv)
{
    const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "thzchan_acceptance";
    fs::create_directories(root);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"grid arithmetic", criterion_grid},
        {"delay-distance validation", criterion_delay_distance},
        {"path-loss round trip", [&] { return criterion_path_loss(root); }},
        {"exponent row aggregate", criterion_table},
        {"exponential MLE", criterion_exponential_mle},
        {"tilt anchors", [&] { return criterion_tilt(root); }},
        {"humidity", [&] { return criterion_humidity(root); }},
        {"envelope statistics", criterion_envelopes},
        {"numerical hygiene", [&] { return criterion_hygiene(root); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception &e) {
            outcome.check(false, std::string("exception: ") + e.what());
        }
        failures += outcome.pass ? 0 : 1;
        std::printf("%s criterion %zu (%s): %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    outcome.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
