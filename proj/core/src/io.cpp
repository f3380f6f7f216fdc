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

#include "thzchan/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "thzchan/error.hpp"

#ifndef THZCHAN_VERSION
#define THZCHAN_VERSION "0.0.0"
#endif

namespace thzchan {

using detail::require;
using json = nlohmann::ordered_json;

std::string_view tool_version()
{
    return THZCHAN_VERSION;
}

// ------------------------------------------------------------------------------------------------
// Files
// ------------------------------------------------------------------------------------------------

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("failed reading '" + path.string() + "'");
    return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path.string() + "'");
}

std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

InputDigest digest_file(const std::filesystem::path &path, std::string display_path)
{
    return InputDigest{std::move(display_path), hex64(fnv1a64(read_file(path)))};
}

namespace {

std::string format_g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool parse_double(std::string_view text, double &out)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
    if (text.empty())
        return false;
    if (text.front() == '+')
        text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

std::string where(std::string_view source, std::size_t line_no)
{
    return std::string(source) + ":" + std::to_string(line_no);
}

void strip_line_end(std::string &line)
{
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
}

} // namespace

// ------------------------------------------------------------------------------------------------
// Sweep CSV
// ------------------------------------------------------------------------------------------------

FrequencySweep parse_sweep_csv(std::istream &in, std::string_view source)
{
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<double> freqs;
    std::vector<cdouble> samples;
    std::vector<std::size_t> record_lines;

    while (std::getline(in, line)) {
        ++line_no;
        strip_line_end(line);
        if (!have_header) {
            // Tolerate a UTF-8 byte order mark.
            if (line.rfind("\xEF\xBB\xBF", 0) == 0)
                line.erase(0, 3);
            if (line != "freq_hz,s21_re,s21_im")
                throw ValidationError(where(source, line_no) + ": expected header 'freq_hz,s21_re,s21_im'");
            have_header = true;
            continue;
        }
        if (line.empty())
            continue;
        const auto fields = split_fields(line);
        double f, re, im;
        if (fields.size() != 3 || !parse_double(fields[0], f) || !parse_double(fields[1], re) ||
            !parse_double(fields[2], im))
            throw ValidationError(where(source, line_no) + ": malformed record '" + line + "'");
        if (!freqs.empty() && !(f > freqs.back()))
            throw ValidationError(where(source, line_no) + ": frequency " + format_g17(f) +
                                  " is not strictly increasing");
        freqs.push_back(f);
        samples.emplace_back(re, im);
        record_lines.push_back(line_no);
    }
    if (!have_header)
        throw ValidationError(std::string(source) + ": empty file");
    if (freqs.size() < 2)
        throw ValidationError(std::string(source) + ": at least two records are required");

    const FrequencyGrid grid(freqs.front(), freqs.back(), freqs.size());
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const double expected = grid.frequency(k);
        if (std::abs(freqs[k] - expected) > kGridUniformityTol * freqs[k])
            throw ValidationError(where(source, record_lines[k]) + ": frequency grid is not uniform (got " +
                                  format_g17(freqs[k]) + ", expected " + format_g17(expected) + ")");
    }
    return FrequencySweep(grid, std::move(samples));
}

FrequencySweep read_sweep_csv(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open sweep file '" + path.string() + "'");
    auto sweep = parse_sweep_csv(in, path.string());
    sweep.set_label(path.stem().string());
    return sweep;
}

void write_sweep_csv(const FrequencySweep &sweep, std::ostream &out)
{
    out << "freq_hz,s21_re,s21_im\n";
    const auto &grid = sweep.grid();
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        const auto &s = sweep.samples()[k];
        out << format_g17(grid.frequency(k)) << ',' << format_g17(s.real()) << ',' << format_g17(s.imag()) << '\n';
    }
}

void write_sweep_csv(const FrequencySweep &sweep, const std::filesystem::path &path)
{
    std::ostringstream ss;
    write_sweep_csv(sweep, ss);
    write_file(path, ss.str());
}

// ------------------------------------------------------------------------------------------------
// Calibration
// ------------------------------------------------------------------------------------------------

CalibrationSet::CalibrationSet(FrequencySweep through) : through_(std::move(through))
{
    for (std::size_t k = 0; k < through_.size(); ++k)
        require(std::abs(through_.samples()[k]) > 0.0,
                "CalibrationSet: through sample " + std::to_string(k) + " has zero magnitude");
}

FrequencySweep apply_calibration(const FrequencySweep &raw, const CalibrationSet &cal)
{
    require(raw.grid().matches(cal.through().grid(), kGridUniformityTol),
            "apply_calibration: measurement and calibration grids differ");
    std::vector<cdouble> out(raw.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = raw.samples()[k] / cal.through().samples()[k];
    return FrequencySweep(raw.grid(), std::move(out), raw.label());
}

// ------------------------------------------------------------------------------------------------
// Profile CSV
// ------------------------------------------------------------------------------------------------

std::vector<ProfileRow> profile_rows(const DelayProfile &profile, ProfileAxis axis, double c_mps)
{
    validate(profile);
    std::vector<ProfileRow> rows(profile.size());
    const auto axis_values = axis == ProfileAxis::Distance ? delay_to_distance(profile, c_mps) : std::vector<double>{};
    const auto power = power_db(profile);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        rows[k].axis_value = axis == ProfileAxis::Distance ? axis_values[k] : profile.delay_at(k);
        rows[k].power_db = std::isfinite(power[k]) ? std::max(power[k], kProfileFloorDb) : kProfileFloorDb;
    }
    return rows;
}

void write_profile_csv(const DelayProfile &profile, ProfileAxis axis, std::ostream &out, double c_mps)
{
    out << "axis_value,power_db\n";
    for (const auto &row : profile_rows(profile, axis, c_mps))
        out << format_g17(row.axis_value) << ',' << format_g17(row.power_db) << '\n';
}

void write_profile_csv(const DelayProfile &profile, ProfileAxis axis, const std::filesystem::path &path,
                       double c_mps)
{
    std::ostringstream ss;
    write_profile_csv(profile, axis, ss, c_mps);
    write_file(path, ss.str());
}

std::vector<ProfileRow> read_profile_csv(const std::filesystem::path &path)
{
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    std::vector<ProfileRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        strip_line_end(line);
        if (line_no == 1) {
            if (line != "axis_value,power_db")
                throw ValidationError(where(path.string(), 1) + ": expected header 'axis_value,power_db'");
            continue;
        }
        if (line.empty())
            continue;
        const auto fields = split_fields(line);
        ProfileRow row{};
        if (fields.size() != 2 || !parse_double(fields[0], row.axis_value) || !parse_double(fields[1], row.power_db))
            throw ValidationError(where(path.string(), line_no) + ": malformed record '" + line + "'");
        rows.push_back(row);
    }
    if (line_no == 0)
        throw ValidationError(path.string() + ": empty file");
    return rows;
}

// ------------------------------------------------------------------------------------------------
// Report JSON
// ------------------------------------------------------------------------------------------------

double round_sig12(double value)
{
    if (!std::isfinite(value) || value == 0.0)
        return value;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return std::strtod(buf, nullptr);
}

GridInfo grid_info(const FrequencyGrid &grid)
{
    return GridInfo{grid.f_start(), grid.f_stop(), grid.n_points(), grid.spacing()};
}

namespace {

json num(double v)
{
    return json(round_sig12(v));
}

json num_or_null(const std::optional<double> &v)
{
    return v ? num(*v) : json(nullptr);
}

json to_json(const PathLossFit &fit)
{
    json j;
    j["n_hat"] = num(fit.n_hat);
    j["pl0_hat_db"] = num(fit.pl0_hat_db);
    j["residual_rms_db"] = num(fit.residual_rms_db);
    j["points_used"] = fit.points_used;
    return j;
}

json to_json(const ExponentStats &s)
{
    json j;
    j["mean_n"] = num(s.mean_n);
    j["var_n"] = num(s.var_n);
    j["mle_mean"] = num(s.mle_mean);
    j["mle_var"] = num(s.mle_var);
    j["count"] = s.count;
    return j;
}

json to_json(const DecayCurveFit &d)
{
    json j;
    j["lambda_hat"] = num(d.fit.lambda_hat);
    j["n_samples"] = d.fit.n_samples;
    j["log_likelihood"] = num(d.fit.log_likelihood);
    j["abscissa"] = "distance_m";
    j["degenerate"] = d.degenerate;
    json residuals = json::array();
    for (double r : d.residuals)
        residuals.push_back(num(r));
    j["residuals"] = std::move(residuals);
    return j;
}

json to_json(const TiltDrop &t)
{
    json j;
    j["label"] = t.label;
    j["tilt_deg"] = num(t.tilt_deg);
    j["peak_drop_db"] = num(t.peak_drop_db);
    j["significant"] = t.significant;
    return j;
}

double get_number(const json &j, const char *key)
{
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number())
        throw ValidationError(std::string("report: missing numeric field '") + key + "'");
    return it->get<double>();
}

std::size_t get_count(const json &j, const char *key)
{
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number_unsigned())
        throw ValidationError(std::string("report: missing count field '") + key + "'");
    return it->get<std::size_t>();
}

const json &get_member(const json &j, const char *key)
{
    const auto it = j.find(key);
    if (it == j.end())
        throw ValidationError(std::string("report: missing key '") + key + "'");
    return *it;
}

PathLossFit fit_from_json(const json &j)
{
    return PathLossFit{get_number(j, "n_hat"), get_number(j, "pl0_hat_db"), get_number(j, "residual_rms_db"),
                       get_count(j, "points_used")};
}

} // namespace

std::string write_report_json(const Report &report)
{
    json doc;
    doc["schema"] = kReportSchema;

    if (report.path_loss_fits) {
        json fits = json::array();
        for (const auto &f : *report.path_loss_fits) {
            json j;
            j["label"] = f.label;
            j["frequency_hz"] = num_or_null(f.frequency_hz);
            const json fit = to_json(f.fit);
            for (const auto &[k, v] : fit.items())
                j[k] = v;
            fits.push_back(std::move(j));
        }
        doc["path_loss_fits"] = std::move(fits);
    } else {
        doc["path_loss_fits"] = nullptr;
    }
    doc["exponent_stats"] = report.exponent_stats ? to_json(*report.exponent_stats) : json(nullptr);
    doc["decay_fit"] = report.decay_fit ? to_json(*report.decay_fit) : json(nullptr);
    if (report.tilt_report) {
        json drops = json::array();
        for (const auto &t : *report.tilt_report)
            drops.push_back(to_json(t));
        doc["tilt_report"] = std::move(drops);
    } else {
        doc["tilt_report"] = nullptr;
    }

    json meta;
    meta["tool_version"] = report.meta.tool_version;
    meta["seed"] = report.meta.seed;
    if (report.meta.grid) {
        json g;
        g["f_start_hz"] = num(report.meta.grid->f_start_hz);
        g["f_stop_hz"] = num(report.meta.grid->f_stop_hz);
        g["n_points"] = report.meta.grid->n_points;
        g["spacing_hz"] = num(report.meta.grid->spacing_hz);
        meta["grid"] = std::move(g);
    } else {
        meta["grid"] = nullptr;
    }
    meta["window"] = report.meta.window;
    json inputs = json::array();
    for (const auto &in : report.meta.inputs)
        inputs.push_back(json{{"path", in.path}, {"fnv1a64", in.fnv1a64}});
    meta["inputs"] = std::move(inputs);
    doc["meta"] = std::move(meta);

    return doc.dump(2) + "\n";
}

void write_report_json(const Report &report, const std::filesystem::path &path)
{
    write_file(path, write_report_json(report));
}

Report parse_report_json(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("report: invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ValidationError("report: top level must be an object");
    const auto &schema = get_member(doc, "schema");
    if (!schema.is_string() || schema.get<std::string>() != kReportSchema)
        throw ValidationError("report: unsupported schema (expected " + std::string(kReportSchema) + ")");

    Report report;
    try {
        if (const auto &fits = get_member(doc, "path_loss_fits"); !fits.is_null()) {
            report.path_loss_fits.emplace();
            for (const auto &j : fits) {
                LabeledFit f;
                f.label = get_member(j, "label").get<std::string>();
                const auto &freq = get_member(j, "frequency_hz");
                if (!freq.is_null())
                    f.frequency_hz = freq.get<double>();
                f.fit = fit_from_json(j);
                report.path_loss_fits->push_back(std::move(f));
            }
        }
        if (const auto &s = get_member(doc, "exponent_stats"); !s.is_null()) {
            ExponentStats stats;
            stats.mean_n = get_number(s, "mean_n");
            stats.var_n = get_number(s, "var_n");
            stats.mle_mean = get_number(s, "mle_mean");
            stats.mle_var = get_number(s, "mle_var");
            stats.count = get_count(s, "count");
            report.exponent_stats = stats;
        }
        if (const auto &d = get_member(doc, "decay_fit"); !d.is_null()) {
            DecayCurveFit fit;
            fit.fit.lambda_hat = get_number(d, "lambda_hat");
            fit.fit.n_samples = get_count(d, "n_samples");
            fit.fit.log_likelihood = get_number(d, "log_likelihood");
            fit.degenerate = get_member(d, "degenerate").get<bool>();
            for (const auto &r : get_member(d, "residuals"))
                fit.residuals.push_back(r.get<double>());
            report.decay_fit = std::move(fit);
        }
        if (const auto &t = get_member(doc, "tilt_report"); !t.is_null()) {
            report.tilt_report.emplace();
            for (const auto &j : t) {
                TiltDrop drop;
                drop.label = get_member(j, "label").get<std::string>();
                drop.tilt_deg = get_number(j, "tilt_deg");
                drop.peak_drop_db = get_number(j, "peak_drop_db");
                drop.significant = get_member(j, "significant").get<bool>();
                report.tilt_report->push_back(std::move(drop));
            }
        }
        const auto &meta = get_member(doc, "meta");
        report.meta.tool_version = get_member(meta, "tool_version").get<std::string>();
        report.meta.seed = get_member(meta, "seed").get<std::uint64_t>();
        if (const auto &g = get_member(meta, "grid"); !g.is_null())
            report.meta.grid =
                GridInfo{get_number(g, "f_start_hz"), get_number(g, "f_stop_hz"), get_count(g, "n_points"),
                         get_number(g, "spacing_hz")};
        report.meta.window = get_member(meta, "window").get<std::string>();
        for (const auto &in : get_member(meta, "inputs"))
            report.meta.inputs.push_back(
                InputDigest{get_member(in, "path").get<std::string>(), get_member(in, "fnv1a64").get<std::string>()});
    } catch (const json::exception &e) {
        throw ValidationError(std::string("report: wrong field type: ") + e.what());
    }
    return report;
}

Report read_report_json(const std::filesystem::path &path)
{
    return parse_report_json(read_file(path));
}

} // namespace thzchan
