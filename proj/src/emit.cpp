// SPDX-License-Identifier: Apache-2.0
//
// beamtrack — radar-assisted predictive beamforming simulator for V2I links
// Copyright (C) 2026 beamtrack contributors
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

#include "beamtrack/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace beamtrack {

namespace {

using ordered_json = nlohmann::ordered_json;

void write_text_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open file for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw IoError("error writing file: " + path);
}

ordered_json config_echo(const ScenarioConfig &cfg)
{
    ordered_json echo;
    echo["fc_hz"] = cfg.fc_hz;
    echo["c_mps"] = cfg.c_mps;
    echo["dt_s"] = cfg.dt_s;
    echo["epochs"] = cfg.epochs;
    echo["n_tx"] = cfg.n_tx;
    echo["n_rx"] = cfg.n_rx;
    echo["m_vehicle"] = cfg.m_vehicle;
    echo["tx_snr_db"] = cfg.tx_snr_db;
    echo["sigma_sq"] = cfg.sigma_sq;
    echo["sigma_c_sq"] = cfg.sigma_c_sq;
    echo["g_mf"] = cfg.g_mf;
    echo["a1"] = cfg.a1;
    echo["a2"] = cfg.a2;
    echo["a3"] = cfg.a3;
    echo["sigma_theta_deg"] = cfg.sigma_theta_deg;
    echo["sigma_d_m"] = cfg.sigma_d_m;
    echo["sigma_v_mps"] = cfg.sigma_v_mps;
    echo["sigma_beta"] = cfg.sigma_beta;
    echo["theta0_deg"] = cfg.theta0_deg;
    echo["d0_m"] = cfg.d0_m;
    echo["v0_mps"] = cfg.v0_mps;
    echo["beta0_re"] = cfg.beta0_re;
    echo["beta0_im"] = cfg.beta0_im;
    echo["alpha_ref"] = cfg.alpha_ref;
    echo["m0_theta_deg"] = cfg.m0_theta_deg;
    echo["m0_d_m"] = cfg.m0_d_m;
    echo["m0_v_mps"] = cfg.m0_v_mps;
    echo["m0_beta"] = cfg.m0_beta;
    echo["trials"] = cfg.trials;
    echo["master_seed"] = cfg.master_seed;
    ordered_json schemes = ordered_json::array();
    for (Scheme s : cfg.schemes)
        schemes.push_back(scheme_name(s));
    echo["schemes"] = schemes;
    echo["truth_model"] = cfg.truth_model;
    echo["noise_free_measurements"] = cfg.noise_free_measurements;
    return echo;
}

ordered_json to_json_array(const std::vector<double> &values)
{
    ordered_json arr = ordered_json::array();
    for (double v : values)
        arr.push_back(v);
    return arr;
}

// --- minimal SVG line-plot writer ------------------------------------------

struct PlotSeries
{
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_line_plot(const std::string &title, const std::string &x_label,
                          const std::string &y_label, const std::vector<PlotSeries> &series)
{
    constexpr double width = 720.0;
    constexpr double height = 480.0;
    constexpr double ml = 70.0, mr = 20.0, mt = 40.0, mb = 55.0;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const PlotSeries &s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
        {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            if (first)
            {
                x_min = x_max = s.x[i];
                y_min = y_max = s.y[i];
                first = false;
            }
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    if (x_max <= x_min)
        x_max = x_min + 1.0;
    if (y_max <= y_min)
        y_max = y_min + 1.0;
    // Pad the value axis a little so curves do not sit on the frame.
    double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width) +
           "\" height=\"" + format_double(height) + "\" viewBox=\"0 0 " + format_double(width) +
           " " + format_double(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_double(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";

    // Frame
    svg += "<rect x=\"" + format_double(ml) + "\" y=\"" + format_double(mt) + "\" width=\"" +
           format_double(pw) + "\" height=\"" + format_double(ph) +
           "\" fill=\"none\" stroke=\"#444444\"/>\n";

    // Ticks: 6 per axis, with grid lines.
    constexpr int n_ticks = 6;
    for (int i = 0; i <= n_ticks; ++i)
    {
        double fx = x_min + (x_max - x_min) * i / n_ticks;
        double px = sx(fx);
        svg += "<line x1=\"" + format_double(px) + "\" y1=\"" + format_double(mt) + "\" x2=\"" +
               format_double(px) + "\" y2=\"" + format_double(mt + ph) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + format_double(px) + "\" y=\"" + format_double(mt + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">";
        char buffer[64];
        std::snprintf(buffer, sizeof(buffer), "%.3g", fx);
        svg += buffer;
        svg += "</text>\n";

        double fy = y_min + (y_max - y_min) * i / n_ticks;
        double py = sy(fy);
        svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(py) + "\" x2=\"" +
               format_double(ml + pw) + "\" y2=\"" + format_double(py) +
               "\" stroke=\"#dddddd\"/>\n";
        std::snprintf(buffer, sizeof(buffer), "%.3g", fy);
        svg += "<text x=\"" + format_double(ml - 6) + "\" y=\"" + format_double(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">";
        svg += buffer;
        svg += "</text>\n";
    }

    // Axis labels
    svg += "<text x=\"" + format_double(ml + pw / 2) + "\" y=\"" + format_double(height - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + format_double(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " +
           format_double(mt + ph / 2) + ")\">" + y_label + "</text>\n";

    // Curves
    for (const PlotSeries &s : series)
    {
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); ++i)
        {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                continue;
            points += format_double(sx(s.x[i])) + "," + format_double(sy(s.y[i])) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    }

    // Legend (top-right corner of the frame)
    double lx = ml + pw - 150.0;
    double ly = mt + 14.0;
    for (const PlotSeries &s : series)
    {
        svg += "<line x1=\"" + format_double(lx) + "\" y1=\"" + format_double(ly) + "\" x2=\"" +
               format_double(lx + 24) + "\" y2=\"" + format_double(ly) + "\" stroke=\"" +
               s.color + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + format_double(lx + 30) + "\" y=\"" + format_double(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
        ly += 18.0;
    }

    svg += "</svg>\n";
    return svg;
}

const char *scheme_color(Scheme scheme)
{
    return scheme == Scheme::dfrc ? "#1f77b4" : "#d62728";
}

} // namespace

std::string format_double(double value)
{
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc())
        return "nan";
    return std::string(buffer, ptr);
}

std::string trace_csv_string(const std::vector<TrialResult> &results)
{
    std::string csv = "epoch,t_s,scheme,trial,theta_true_deg,theta_pred1_deg,theta_pred2_deg,"
                      "theta_est_deg,d_true_m,d_est_m,v_true_mps,v_est_mps,abs_delta,rate_bpshz,"
                      "clamped,track_lost\n";
    for (const TrialResult &tr : results)
    {
        for (const EpochRecord &rec : tr.records)
        {
            csv += std::to_string(rec.epoch);
            csv += ',';
            csv += format_double(rec.t_s);
            csv += ',';
            csv += scheme_name(rec.scheme);
            csv += ',';
            csv += std::to_string(rec.trial);
            csv += ',';
            csv += format_double(rec.theta_true_deg);
            csv += ',';
            csv += format_double(rec.theta_pred1_deg);
            csv += ',';
            csv += format_double(rec.theta_pred2_deg);
            csv += ',';
            csv += format_double(rec.theta_est_deg);
            csv += ',';
            csv += format_double(rec.d_true_m);
            csv += ',';
            csv += format_double(rec.d_est_m);
            csv += ',';
            csv += format_double(rec.v_true_mps);
            csv += ',';
            csv += format_double(rec.v_est_mps);
            csv += ',';
            csv += format_double(rec.abs_delta);
            csv += ',';
            csv += format_double(rec.rate_bpshz);
            csv += ',';
            csv += rec.clamped ? '1' : '0';
            csv += ',';
            csv += rec.track_lost ? '1' : '0';
            csv += '\n';
        }
    }
    return csv;
}

void write_trace_csv(const std::vector<TrialResult> &results, const std::string &path)
{
    write_text_file(path, trace_csv_string(results));
}

std::string summary_json_string(const ScenarioConfig &cfg, const RunSummary &summary)
{
    ordered_json doc;
    doc["config_echo"] = config_echo(cfg);

    ordered_json per_epoch;
    per_epoch["t_s"] = to_json_array(summary.t_s);
    for (const auto &[scheme, stats] : summary.per_epoch)
    {
        ordered_json s;
        s["mean_abs_angle_err_deg"] = to_json_array(stats.mean_abs_angle_err_deg);
        s["rms_abs_angle_err_deg"] = to_json_array(stats.rms_abs_angle_err_deg);
        s["stderr_abs_angle_err_deg"] = to_json_array(stats.stderr_abs_angle_err_deg);
        s["mean_rate_bpshz"] = to_json_array(stats.mean_rate_bpshz);
        s["stderr_rate_bpshz"] = to_json_array(stats.stderr_rate_bpshz);
        per_epoch[scheme_name(scheme)] = s;
    }
    doc["per_epoch"] = per_epoch;

    ordered_json per_scheme;
    for (const auto &[scheme, totals] : summary.per_scheme)
    {
        ordered_json s;
        s["trials"] = totals.trials;
        s["diverged_trials"] = totals.diverged_trials;
        s["clamped_epochs"] = totals.clamped_epochs;
        s["track_lost_epochs"] = totals.track_lost_epochs;
        s["mean_abs_angle_err_deg"] = totals.mean_abs_angle_err_deg;
        s["mean_rate_bpshz"] = totals.mean_rate_bpshz;
        per_scheme[scheme_name(scheme)] = s;
    }
    if (!std::isnan(summary.dfrc_better_fraction))
        per_scheme["dfrc_better_fraction"] = summary.dfrc_better_fraction;
    doc["per_scheme"] = per_scheme;

    doc["version"] = "1.0.0";
    return doc.dump(2) + "\n";
}

void write_summary_json(const ScenarioConfig &cfg, const RunSummary &summary,
                        const std::string &path)
{
    write_text_file(path, summary_json_string(cfg, summary));
}

void write_plots(const RunSummary &summary, const std::string &out_dir)
{
    ensure_directory(out_dir);

    std::vector<PlotSeries> error_series;
    std::vector<PlotSeries> rate_series;
    for (const auto &[scheme, stats] : summary.per_epoch)
    {
        PlotSeries err;
        err.label = scheme_name(scheme);
        err.color = scheme_color(scheme);
        err.x = summary.t_s;
        err.y.reserve(stats.mean_abs_angle_err_deg.size());
        for (double v : stats.mean_abs_angle_err_deg)
            err.y.push_back(std::log10(std::max(v, 1e-6)));
        error_series.push_back(std::move(err));

        PlotSeries rate;
        rate.label = scheme_name(scheme);
        rate.color = scheme_color(scheme);
        rate.x = summary.t_s;
        rate.y = stats.mean_rate_bpshz;
        rate_series.push_back(std::move(rate));
    }

    write_text_file(out_dir + "/angle_error.svg",
                    svg_line_plot("Angle tracking error", "time (s)",
                                  "log10 mean |angle error| (deg)", error_series));
    write_text_file(out_dir + "/rate.svg",
                    svg_line_plot("Achievable rate", "time (s)", "mean rate (bit/s/Hz)",
                                  rate_series));
}

void ensure_directory(const std::string &path)
{
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec)
        throw IoError("cannot create directory " + path + ": " + ec.message());
}

} // namespace beamtrack
