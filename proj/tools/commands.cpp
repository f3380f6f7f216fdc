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

#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace thzchan::cli {

using json = nlohmann::ordered_json;

namespace {

// Sub-streams of a scenario seed.
constexpr std::uint64_t kStreamMisalignment = 0;
constexpr std::uint64_t kStreamNoise = 1;
constexpr std::uint64_t kStreamMultipath = 2;

// Frequencies at which individual fits are reported alongside the band average.
constexpr double kSpotFrequenciesHz[] = {240e9, 250e9, 260e9, 270e9, 280e9, 290e9, 300e9};

std::string fmt_g(double v, int precision = 6)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::vector<std::string> split(const std::string &text, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        out.push_back(item);
    return out;
}

double to_double(const std::string &text, const std::string &what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v))
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception &) {
        throw ValidationError("cannot parse " + what + " from '" + text + "'");
    }
}

FrequencyGrid parse_grid(const std::string &text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw ValidationError("--grid expects f_start:f_stop:n_points (got '" + text + "')");
    const double n = to_double(parts[2], "grid point count");
    if (n < 2 || n != std::floor(n))
        throw ValidationError("--grid point count must be an integer >= 2");
    return FrequencyGrid(to_double(parts[0], "grid start"), to_double(parts[1], "grid stop"),
                         static_cast<std::size_t>(n));
}

std::vector<TiltAnchor> parse_anchors(const std::string &text)
{
    std::vector<TiltAnchor> anchors;
    for (const auto &item : split(text, ',')) {
        const auto pair = split(item, ':');
        if (pair.size() != 2)
            throw ValidationError("--anchors expects angle:loss pairs separated by commas (got '" + item + "')");
        anchors.push_back({to_double(pair[0], "anchor angle"), to_double(pair[1], "anchor loss")});
    }
    return anchors;
}

GainNotch parse_notch(const std::string &text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw ValidationError("--notch expects f_lo:f_hi:depth_db (got '" + text + "')");
    return GainNotch{to_double(parts[0], "notch f_lo"), to_double(parts[1], "notch f_hi"),
                     to_double(parts[2], "notch depth")};
}

TapSpec parse_tap(const std::string &text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 4 && parts.size() != 6)
        throw ValidationError("--tap expects delay_ns:sigma_s:sigma_d:m_waves[:theta_rad:phi_rad] (got '" + text +
                              "')");
    TapSpec tap;
    tap.delay_s = to_double(parts[0], "tap delay") * 1e-9;
    tap.sigma_s = to_double(parts[1], "tap sigma_s");
    tap.sigma_d = to_double(parts[2], "tap sigma_d");
    const double m = to_double(parts[3], "tap m_waves");
    if (m < 0 || m != std::floor(m))
        throw ValidationError("--tap m_waves must be a non-negative integer");
    tap.m_waves = static_cast<std::size_t>(m);
    if (parts.size() == 6) {
        tap.theta_rad = to_double(parts[4], "tap theta");
        tap.phi_rad = to_double(parts[5], "tap phi");
    }
    return tap;
}

SweepInput parse_keyed_sweep(const std::string &text, bool key_is_tilt)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
        throw ValidationError(std::string("--sweep expects ") + (key_is_tilt ? "tilt_deg" : "distance_m") +
                              "=path (got '" + text + "')");
    SweepInput in;
    const double key = to_double(text.substr(0, eq), key_is_tilt ? "tilt" : "distance");
    (key_is_tilt ? in.tilt_deg : in.distance_m) = key;
    in.path = text.substr(eq + 1);
    in.display_path = text.substr(eq + 1);
    in.label = in.path.stem().string();
    return in;
}

json grid_json(const FrequencyGrid &grid)
{
    json g;
    g["f_start_hz"] = grid.f_start();
    g["f_stop_hz"] = grid.f_stop();
    g["n_points"] = grid.n_points();
    g["spacing_hz"] = grid.spacing();
    return g;
}

void ensure_dir(const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

// One loaded, calibrated and transformed sweep.
struct Processed {
    SweepInput input;
    FrequencySweep sweep;
    DelayProfile profile;
    Peak peak;
    double peak_abs_db = 0.0;
};

std::vector<Processed> load_and_transform(const AnalyzeConfig &config)
{
    if (config.sweeps.empty())
        throw ValidationError("no sweep inputs given; pass --manifest or at least one --sweep");

    std::optional<CalibrationSet> cal;
    if (config.calibration)
        cal.emplace(read_sweep_csv(*config.calibration));

    // Sweeps are independent; results land by index so completion order is irrelevant.
    std::vector<std::future<Processed>> jobs;
    jobs.reserve(config.sweeps.size());
    for (const auto &input : config.sweeps) {
        jobs.push_back(std::async(std::launch::async, [&config, &cal, input]() {
            FrequencySweep sweep = read_sweep_csv(input.path);
            if (cal)
                sweep = apply_calibration(sweep, *cal);
            sweep.set_label(input.label);
            DelayProfile profile = sweep_to_delay(sweep, config.window, config.pad_factor);
            const Peak peak = find_first_peak(profile, config.threshold_db);
            return Processed{input, std::move(sweep), std::move(profile), peak, peak.power_db};
        }));
    }
    std::vector<Processed> out;
    out.reserve(jobs.size());
    for (auto &job : jobs)
        out.push_back(job.get());

    const auto &grid = out.front().sweep.grid();
    for (const auto &p : out)
        if (!p.sweep.grid().matches(grid))
            throw ValidationError("sweep '" + p.input.display_path + "' is on a different frequency grid than '" +
                                  out.front().input.display_path + "'");
    return out;
}

ReportMeta make_meta(const AnalyzeConfig &config, const std::vector<Processed> &processed)
{
    ReportMeta meta;
    meta.tool_version = std::string(tool_version());
    meta.seed = config.seed;
    meta.grid = grid_info(processed.front().sweep.grid());
    meta.window = std::string(to_string(config.window));
    if (config.calibration)
        meta.inputs.push_back(digest_file(*config.calibration, config.calibration->string()));
    for (const auto &p : processed)
        meta.inputs.push_back(digest_file(p.input.path, p.input.display_path));
    return meta;
}

bool is_boresight(const SweepInput &in) { return in.tilt_deg == 0.0 && in.humidity_db == 0.0; }

// Tilt/humidity observations grouped by distance; the reference of each group is its first
// boresight sweep. Returns nullopt when no group has anything to compare.
std::optional<std::vector<TiltDrop>> tilt_drops_by_distance(const std::vector<Processed> &processed,
                                                            bool require_reference)
{
    std::map<double, std::vector<const Processed *>> groups;
    for (const auto &p : processed)
        groups[p.input.distance_m].push_back(&p);

    std::vector<TiltDrop> drops;
    bool any_reference = false;
    for (const auto &[distance, members] : groups) {
        std::vector<TiltObservation> obs;
        // Boresight first so it becomes the reference.
        auto ref = std::find_if(members.begin(), members.end(), [](const Processed *p) { return is_boresight(p->input); });
        if (ref == members.end()) {
            if (require_reference)
                throw ValidationError("no boresight (0 deg, dry) sweep at distance " + fmt_g(distance) +
                                      " m; add one with --tilt 0 or pass 0=path");
            continue;
        }
        any_reference = true;
        obs.push_back(TiltObservation{0.0, (*ref)->profile, (*ref)->input.label});
        for (auto it = members.begin(); it != members.end(); ++it)
            if (it != ref)
                obs.push_back(TiltObservation{(*it)->input.tilt_deg, (*it)->profile, (*it)->input.label});
        auto group_drops = tilt_loss_report(obs);
        drops.insert(drops.end(), group_drops.begin(), group_drops.end());
    }
    if (!any_reference || (drops.empty() && !require_reference))
        return std::nullopt;
    return drops;
}

} // namespace

// ================================================================================================
// simulate
// ================================================================================================

std::string scenario_label(double distance_m, double tilt_deg, double humidity_db)
{
    return "d" + fmt_g(distance_m, 12) + "m_tilt" + fmt_g(tilt_deg, 12) + "deg_hum" + fmt_g(humidity_db, 12) + "dB";
}

std::filesystem::path cmd_simulate(const SimulateConfig &config, std::ostream &log)
{
    for (double d : config.distances_m)
        if (d < config.los.ref_distance_m)
            throw ValidationError("distance " + fmt_g(d) + " m is below the reference distance " +
                                  fmt_g(config.los.ref_distance_m) +
                                  " m; increase --distance or lower --ref-distance");
    for (double t : config.tilts_deg)
        if (t < 0.0)
            throw ValidationError("tilt " + fmt_g(t) + " deg is negative; tilt angles are magnitudes, use " +
                                  fmt_g(-t));
    for (double h : config.humidities_db)
        if (h < 0.0)
            throw ValidationError("humidity attenuation " + fmt_g(h) + " dB is negative; pass a loss >= 0");
    if (config.exponent_variance < 0.0)
        throw ValidationError("--exponent-variance must be >= 0");
    validate(config.los.antenna);
    for (const auto &tap : config.taps)
        validate(tap);

    ensure_dir(config.out_dir);
    const auto &grid = config.grid;

    std::vector<double> exponents;
    if (config.exponent_variance > 0.0)
        exponents = draw_exponents(grid.n_points(), config.los.n_exponent, config.exponent_variance,
                                   derive_seed(config.seed, fnv1a64("exponents")));

    json sweeps = json::array();
    for (double d : config.distances_m) {
        for (double tilt : config.tilts_deg) {
            for (double hum : config.humidities_db) {
                LosChannelSpec spec = config.los;
                spec.distance_m = d;
                spec.tilt_deg = tilt;
                spec.humidity_atten_db = hum;

                const std::string label = scenario_label(d, tilt, hum);
                const std::uint64_t scenario_seed = derive_seed(config.seed, fnv1a64(label));
                const double misalignment =
                    sample_misalignment_db(spec.sigma_m_db, derive_seed(scenario_seed, kStreamMisalignment));

                FrequencySweep sweep = exponents.empty()
                                           ? los_frequency_response(spec, grid, misalignment)
                                           : los_frequency_response(spec, grid, exponents, misalignment);
                if (!config.taps.empty()) {
                    MultipathSpec mp{config.taps, grid.center()};
                    const auto extra =
                        multipath_frequency_response(mp, grid, derive_seed(scenario_seed, kStreamMultipath));
                    std::vector<cdouble> sum = sweep.samples();
                    for (std::size_t k = 0; k < sum.size(); ++k)
                        sum[k] += extra.samples()[k];
                    sweep = FrequencySweep(grid, std::move(sum));
                }
                if (config.noise_floor_db)
                    sweep = add_noise_floor(sweep, *config.noise_floor_db, derive_seed(scenario_seed, kStreamNoise));

                const std::string file = label + ".csv";
                const auto path = config.out_dir / file;
                write_sweep_csv(sweep, path);

                json entry;
                entry["file"] = file;
                entry["label"] = label;
                entry["distance_m"] = d;
                entry["tilt_deg"] = tilt;
                entry["humidity_db"] = hum;
                entry["seed"] = scenario_seed;
                entry["misalignment_db"] = misalignment;
                entry["fnv1a64"] = hex64(fnv1a64(read_file(path)));
                sweeps.push_back(std::move(entry));
                log << "wrote " << path.string() << "\n";
            }
        }
    }

    json manifest;
    manifest["schema"] = kManifestSchema;
    manifest["tool_version"] = tool_version();
    manifest["seed"] = config.seed;
    manifest["grid"] = grid_json(grid);
    json model;
    model["pl0_db"] = config.los.pl0_db;
    model["ref_distance_m"] = config.los.ref_distance_m;
    model["n_exponent"] = config.los.n_exponent;
    model["exponent_variance"] = config.exponent_variance;
    model["phase_rad"] = config.los.phase_rad;
    model["sigma_m_db"] = config.los.sigma_m_db;
    model["c_mps"] = config.los.c_mps;
    model["boresight_gain_dbi"] = config.los.antenna.boresight_gain_dbi;
    json anchors = json::array();
    for (const auto &a : config.los.antenna.tilt_anchors)
        anchors.push_back(json::array({a.angle_deg, a.loss_db}));
    model["tilt_anchors"] = std::move(anchors);
    if (const auto &n = config.los.antenna.notch)
        model["notch"] = json{{"f_lo_hz", n->f_lo_hz}, {"f_hi_hz", n->f_hi_hz}, {"depth_db", n->depth_db}};
    else
        model["notch"] = nullptr;
    model["noise_floor_db"] = config.noise_floor_db ? json(*config.noise_floor_db) : json(nullptr);
    model["taps"] = config.taps.size();
    manifest["model"] = std::move(model);
    manifest["sweeps"] = std::move(sweeps);

    const auto manifest_path = config.out_dir / kManifestName;
    write_file(manifest_path, manifest.dump(2) + "\n");
    log << "wrote " << manifest_path.string() << " (" << manifest["sweeps"].size() << " sweeps)\n";
    return manifest_path;
}

std::vector<SweepInput> load_manifest(const std::filesystem::path &manifest_path, std::uint64_t *seed,
                                      double *ref_distance_m)
{
    json doc;
    try {
        doc = json::parse(read_file(manifest_path));
    } catch (const json::parse_error &e) {
        throw ValidationError("manifest '" + manifest_path.string() + "' is not valid JSON: " + e.what());
    }
    try {
        if (doc.value("schema", std::string{}) != kManifestSchema)
            throw ValidationError("manifest '" + manifest_path.string() + "' has an unsupported schema");
        if (seed)
            *seed = doc.at("seed").get<std::uint64_t>();
        if (ref_distance_m)
            *ref_distance_m = doc.at("model").at("ref_distance_m").get<double>();
        const auto base = manifest_path.parent_path();
        std::vector<SweepInput> inputs;
        for (const auto &e : doc.at("sweeps")) {
            SweepInput in;
            const auto file = e.at("file").get<std::string>();
            in.path = base / file;
            in.display_path = file;
            in.label = e.at("label").get<std::string>();
            in.distance_m = e.at("distance_m").get<double>();
            in.tilt_deg = e.at("tilt_deg").get<double>();
            in.humidity_db = e.at("humidity_db").get<double>();
            inputs.push_back(std::move(in));
        }
        return inputs;
    } catch (const json::exception &e) {
        throw ValidationError("manifest '" + manifest_path.string() + "' is malformed: " + e.what());
    }
}

// ================================================================================================
// analyze
// ================================================================================================

Report cmd_analyze(const AnalyzeConfig &config, std::ostream &log)
{
    const auto processed = load_and_transform(config);
    const auto &grid = processed.front().sweep.grid();

    Report report;
    report.meta = make_meta(config, processed);

    std::vector<const Processed *> pl_set;
    for (const auto &p : processed)
        if (is_boresight(p.input))
            pl_set.push_back(&p);
    std::set<double> distinct;
    for (const auto *p : pl_set)
        distinct.insert(p->input.distance_m);

    if (distinct.size() >= 2) {
        std::vector<LabeledFit> fits;

        std::vector<PathLossPoint> band;
        for (const auto *p : pl_set)
            band.push_back({p->input.distance_m, p->sweep.mean_power_db()});
        fits.push_back({"band-mean", std::nullopt, fit_path_loss(band, config.ref_distance_m)});

        auto fit_at = [&](std::size_t k) {
            std::vector<PathLossPoint> pts;
            for (const auto *p : pl_set)
                pts.push_back({p->input.distance_m, 10.0 * std::log10(std::norm(p->sweep.samples()[k]))});
            return fit_path_loss(pts, config.ref_distance_m);
        };
        for (double f : kSpotFrequenciesHz) {
            if (f < grid.f_start() - grid.spacing() || f > grid.f_stop() + grid.spacing())
                continue;
            const std::size_t k = grid.nearest_index(f);
            fits.push_back({"f=" + fmt_g(f / 1e9) + "GHz", grid.frequency(k), fit_at(k)});
        }

        std::vector<double> per_frequency(grid.n_points());
        for (std::size_t k = 0; k < per_frequency.size(); ++k)
            per_frequency[k] = fit_at(k).n_hat;
        report.exponent_stats = aggregate_exponents(per_frequency);
        report.path_loss_fits = std::move(fits);

        // Peak powers relative to the nearest sweep, against distance beyond it.
        const auto nearest = *std::min_element(pl_set.begin(), pl_set.end(), [](const Processed *a, const Processed *b) {
            return a->input.distance_m < b->input.distance_m;
        });
        std::vector<DecayPeak> peaks;
        for (const auto *p : pl_set)
            peaks.push_back({p->input.distance_m - nearest->input.distance_m,
                             std::pow(10.0, (p->peak_abs_db - nearest->peak_abs_db) / 10.0)});
        report.decay_fit = fit_decay_to_peaks(peaks);
    }

    report.tilt_report = tilt_drops_by_distance(processed, false);

    ensure_dir(config.out_dir);
    if (config.write_profiles) {
        const double ref_db =
            std::max_element(processed.begin(), processed.end(), [](const Processed &a, const Processed &b) {
                return a.peak_abs_db < b.peak_abs_db;
            })->peak_abs_db;
        for (const auto &p : processed) {
            const auto raw = normalize_profile(p.profile, ref_db);
            write_profile_csv(raw, ProfileAxis::Distance, config.out_dir / (p.input.label + ".profile.csv"),
                              config.c_mps);
            const auto aligned = remove_propagation_delay(raw, p.peak.delay_s);
            write_profile_csv(aligned, ProfileAxis::Distance, config.out_dir / (p.input.label + ".aligned.csv"),
                              config.c_mps);
        }
    }
    write_report_json(report, config.out_dir / kReportName);

    for (const auto &p : processed)
        log << p.input.label << ": peak bin " << p.peak.bin << " at " << fmt_g(p.peak.delay_s * config.c_mps)
            << " m, " << fmt_g(p.peak_abs_db) << " dB\n";
    if (report.path_loss_fits)
        log << "path-loss exponent (band mean): " << fmt_g(report.path_loss_fits->front().fit.n_hat, 9) << "\n";
    else
        log << "path-loss fit skipped: fewer than two distinct boresight distances\n";
    log << "wrote " << (config.out_dir / kReportName).string() << "\n";
    return report;
}

// ================================================================================================
// tilt
// ================================================================================================

Report cmd_tilt(const AnalyzeConfig &config, std::ostream &log)
{
    const auto processed = load_and_transform(config);
    Report report;
    report.meta = make_meta(config, processed);
    report.tilt_report = tilt_drops_by_distance(processed, true).value_or(std::vector<TiltDrop>{});

    ensure_dir(config.out_dir);
    write_report_json(report, config.out_dir / kTiltReportName);
    for (const auto &d : *report.tilt_report)
        log << d.label << " (" << fmt_g(d.tilt_deg) << " deg): drop " << fmt_g(d.peak_drop_db) << " dB"
            << (d.significant ? " [significant]" : "") << "\n";
    log << "wrote " << (config.out_dir / kTiltReportName).string() << "\n";
    return report;
}

// ================================================================================================
// report
// ================================================================================================

Report cmd_report(const std::filesystem::path &in, const std::optional<std::filesystem::path> &out, std::ostream &log)
{
    Report report = read_report_json(in);
    log << "schema " << kReportSchema << ", tool " << report.meta.tool_version << ", seed " << report.meta.seed
        << "\n";
    if (report.path_loss_fits)
        for (const auto &f : *report.path_loss_fits)
            log << "  fit " << f.label << ": n = " << fmt_g(f.fit.n_hat, 9) << ", PL0 = " << fmt_g(f.fit.pl0_hat_db)
                << " dB, rms " << fmt_g(f.fit.residual_rms_db) << " dB\n";
    if (report.exponent_stats)
        log << "  exponents: mean " << fmt_g(report.exponent_stats->mean_n, 9) << ", var "
            << fmt_g(report.exponent_stats->var_n) << ", MLE var " << fmt_g(report.exponent_stats->mle_var)
            << " over " << report.exponent_stats->count << "\n";
    if (report.decay_fit)
        log << "  decay: lambda = " << fmt_g(report.decay_fit->fit.lambda_hat, 9)
            << (report.decay_fit->degenerate ? " (degenerate)" : "") << "\n";
    if (report.tilt_report)
        for (const auto &d : *report.tilt_report)
            log << "  tilt " << d.label << ": " << fmt_g(d.peak_drop_db) << " dB\n";
    if (out)
        write_report_json(report, *out);
    return report;
}

// ================================================================================================
// Entry point
// ================================================================================================

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"thzchan: terahertz LOS channel synthesis and sweep analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));

    const char *env_out = std::getenv("THZCHAN_OUT");
    const std::string default_out = env_out && *env_out ? env_out : ".";

    // simulate
    auto *sim = app.add_subcommand("simulate", "Synthesize LOS sweeps and write sweep CSVs plus a manifest");
    SimulateConfig sc;
    std::string sim_out = default_out, grid_text, anchors_text, notch_text;
    std::vector<std::string> tap_texts;
    double noise_floor = 0.0, gain_dbi = 24.8;
    bool c_rounded = false;
    std::optional<double> pl0;
    sim->add_option("--distance", sc.distances_m, "Tx-Rx separations [m]")->delimiter(',');
    sim->add_option("--tilt", sc.tilts_deg, "Antenna tilts [deg]")->delimiter(',')->capture_default_str();
    sim->add_option("--humidity", sc.humidities_db, "Flat humidity attenuations [dB]")->delimiter(',');
    sim->add_option("--seed", sc.seed, "Root seed")->capture_default_str();
    sim->add_option("--grid", grid_text, "f_start:f_stop:n_points (inclusive, Hz)");
    sim->add_option("--exponent", sc.los.n_exponent, "Path-loss exponent n")->capture_default_str();
    sim->add_option("--exponent-variance", sc.exponent_variance, "Variance of per-frequency exponents");
    sim->add_option("--pl0", pl0, "Path loss at the reference distance [dB] (default: Friis with horn gains)");
    sim->add_option("--ref-distance", sc.los.ref_distance_m, "Reference distance d0 [m]")->capture_default_str();
    sim->add_option("--phase", sc.los.phase_rad, "LOS phase [rad]");
    sim->add_option("--sigma-m", sc.los.sigma_m_db, "Misalignment standard deviation [dB]");
    sim->add_option("--gain-dbi", gain_dbi, "Horn gain at each end [dBi]")->capture_default_str();
    sim->add_option("--anchors", anchors_text, "Tilt anchors angle:loss,... (default 0:0,10:2.3,20:13)");
    sim->add_option("--notch", notch_text, "Antenna gain notch f_lo:f_hi:depth_db");
    auto *noise_opt = sim->add_option("--noise-floor-db", noise_floor, "Additive noise power relative to 0 dB S21");
    sim->add_option("--tap", tap_texts, "Extra multipath tap delay_ns:sigma_s:sigma_d:m_waves[:theta:phi]");
    sim->add_flag("--c-rounded", c_rounded, "Use c = 3e8 m/s instead of the CODATA value");
    sim->add_option("--out", sim_out, "Output directory (default $THZCHAN_OUT or .)");

    // analyze / tilt share their inputs
    AnalyzeConfig ac;
    std::string an_out = default_out, window_text = "rectangular", manifest_text, cal_text;
    std::vector<std::string> sweep_texts;
    std::optional<std::uint64_t> seed_override;
    std::optional<double> ref_override;
    auto add_inputs = [&](CLI::App *cmd, const char *sweep_help) {
        cmd->add_option("--manifest", manifest_text, "manifest.json written by simulate");
        cmd->add_option("--sweep", sweep_texts, sweep_help);
        cmd->add_option("--calibration", cal_text, "Through-connection sweep CSV to divide out");
        cmd->add_option("--window", window_text, "rectangular | hann | hamming")->capture_default_str();
        cmd->add_option("--pad-factor", ac.pad_factor, "Zero-padding factor (power of two)")->capture_default_str();
        cmd->add_option("--threshold-db", ac.threshold_db, "First-peak threshold relative to the maximum [dB]")
            ->capture_default_str();
        cmd->add_option("--seed", seed_override, "Seed recorded in the report (default: manifest seed or 0)");
        cmd->add_option("--out", an_out, "Output directory (default $THZCHAN_OUT or .)");
        cmd->add_flag("--c-rounded", c_rounded, "Use c = 3e8 m/s for distance axes");
    };
    auto *ana = app.add_subcommand("analyze", "Delay transform, peak detection and parameter fits");
    add_inputs(ana, "distance_m=path of a boresight sweep (repeatable)");
    ana->add_option("--ref-distance", ref_override, "Reference distance d0 for the fits [m]");
    auto *tilt = app.add_subcommand("tilt", "Peak power drop of tilted sweeps against boresight");
    add_inputs(tilt, "tilt_deg=path (repeatable; the first 0 deg entry is the reference)");

    auto *rep = app.add_subcommand("report", "Validate and summarise a report JSON");
    std::string report_in, report_out;
    rep->add_option("--in", report_in, "Report JSON to read")->required();
    rep->add_option("--out", report_out, "Write the canonical form here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*sim) {
            if (!grid_text.empty())
                sc.grid = parse_grid(grid_text);
            if (!anchors_text.empty())
                sc.los.antenna.tilt_anchors = parse_anchors(anchors_text);
            if (!notch_text.empty())
                sc.los.antenna.notch = parse_notch(notch_text);
            for (const auto &t : tap_texts)
                sc.taps.push_back(parse_tap(t));
            if (noise_opt->count() > 0)
                sc.noise_floor_db = noise_floor;
            sc.los.c_mps = c_rounded ? kSpeedOfLightRounded : kSpeedOfLight;
            sc.los.antenna.boresight_gain_dbi = gain_dbi;
            sc.los.pl0_db = pl0.value_or(free_space_reference_loss_db(sc.grid.center(), sc.los.ref_distance_m,
                                                                      gain_dbi, gain_dbi, sc.los.c_mps));
            sc.out_dir = sim_out;
            cmd_simulate(sc, out);
            return kExitOk;
        }
        if (*ana || *tilt) {
            const bool is_tilt = static_cast<bool>(*tilt);
            std::uint64_t manifest_seed = 0;
            double manifest_ref = ac.ref_distance_m;
            if (!manifest_text.empty())
                ac.sweeps = load_manifest(manifest_text, &manifest_seed, &manifest_ref);
            for (const auto &s : sweep_texts)
                ac.sweeps.push_back(parse_keyed_sweep(s, is_tilt));
            if (ac.sweeps.empty())
                throw ValidationError("no inputs: pass --manifest <manifest.json> or --sweep key=path");
            if (!cal_text.empty())
                ac.calibration = std::filesystem::path(cal_text);
            ac.window = parse_window(window_text);
            ac.seed = seed_override.value_or(manifest_seed);
            ac.ref_distance_m = ref_override.value_or(manifest_ref);
            ac.c_mps = c_rounded ? kSpeedOfLightRounded : kSpeedOfLight;
            ac.out_dir = an_out;
            if (is_tilt)
                cmd_tilt(ac, out);
            else
                cmd_analyze(ac, out);
            return kExitOk;
        }
        if (*rep) {
            cmd_report(report_in,
                       report_out.empty() ? std::nullopt : std::optional<std::filesystem::path>(report_out), out);
            return kExitOk;
        }
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return kExitValidation;
}

} // namespace thzchan::cli
