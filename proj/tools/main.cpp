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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamtrack/emit.hpp"
#include "beamtrack/harness.hpp"
#include "beamtrack/rng.hpp"

namespace {

constexpr int k_exit_ok = 0;
constexpr int k_exit_config = 2;
constexpr int k_exit_diverged = 3;
constexpr int k_exit_io = 4;

struct CommonOptions
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    std::string scheme = "both";
    bool plots = false;
    int threads = 0;
};

void add_common_options(CLI::App *cmd, CommonOptions &opts)
{
    cmd->add_option("--config", opts.config_path, "Path to a JSON config file");
    cmd->add_option("--seed", opts.seed, "Master seed override (unsigned 64-bit)");
    cmd->add_option("--out", opts.out_dir, "Output directory (default: out)");
    cmd->add_option("--scheme", opts.scheme, "Scheme selection: dfrc, feedback or both")
        ->check(CLI::IsMember({"dfrc", "feedback", "both"}));
    cmd->add_flag("--plots", opts.plots, "Also write SVG plots");
    cmd->add_option("--threads", opts.threads,
                    "Worker threads (0 = hardware concurrency); does not affect results");
}

beamtrack::ScenarioConfig resolve_config(const CommonOptions &opts)
{
    beamtrack::ScenarioConfig cfg = opts.config_path.empty()
                                        ? beamtrack::default_config()
                                        : beamtrack::load_config(opts.config_path);
    if (opts.seed)
        cfg.master_seed = *opts.seed;
    if (opts.scheme == "dfrc")
        cfg.schemes = {beamtrack::Scheme::dfrc};
    else if (opts.scheme == "feedback")
        cfg.schemes = {beamtrack::Scheme::feedback};
    else
        cfg.schemes = {beamtrack::Scheme::dfrc, beamtrack::Scheme::feedback};
    return cfg;
}

void write_run_artifacts(const beamtrack::ScenarioConfig &cfg,
                         const beamtrack::MonteCarloResult &result, const std::string &out_dir,
                         bool plots)
{
    beamtrack::ensure_directory(out_dir);
    beamtrack::write_trace_csv(result.trials, out_dir + "/trace.csv");
    beamtrack::write_summary_json(cfg, result.summary, out_dir + "/summary.json");
    if (plots)
        beamtrack::write_plots(result.summary, out_dir);
}

void print_scheme_lines(const beamtrack::RunSummary &summary)
{
    for (const auto &[scheme, totals] : summary.per_scheme)
    {
        std::printf("%-8s  mean |angle err| %.6g deg   mean rate %.6g bit/s/Hz   diverged %d/%d\n",
                    beamtrack::scheme_name(scheme), totals.mean_abs_angle_err_deg,
                    totals.mean_rate_bpshz, totals.diverged_trials, totals.trials);
    }
    if (!std::isnan(summary.dfrc_better_fraction))
        std::printf("echo-based tracker ahead in %.1f%% of epochs\n",
                    100.0 * summary.dfrc_better_fraction);
}

int cmd_run(const CommonOptions &opts)
{
    beamtrack::ScenarioConfig cfg = resolve_config(opts);
    beamtrack::MonteCarloResult result = beamtrack::run_monte_carlo(cfg, opts.threads);
    write_run_artifacts(cfg, result, opts.out_dir, opts.plots);
    print_scheme_lines(result.summary);
    std::printf("artifacts written to %s\n", opts.out_dir.c_str());
    return beamtrack::all_trials_diverged(result) ? k_exit_diverged : k_exit_ok;
}

int cmd_trial(const CommonOptions &opts, int trial_index, bool write_files)
{
    beamtrack::ScenarioConfig cfg = resolve_config(opts);

    std::vector<beamtrack::TrialResult> results;
    for (beamtrack::Scheme scheme : cfg.schemes)
    {
        beamtrack::TrialResult tr = beamtrack::run_trial(
            cfg, scheme,
            beamtrack::trial_seed(cfg.master_seed, static_cast<std::uint64_t>(trial_index)));
        tr.trial = trial_index;
        for (beamtrack::EpochRecord &rec : tr.records)
            rec.trial = trial_index;
        results.push_back(std::move(tr));
    }

    // Verbose trace straight to stdout in the canonical CSV schema.
    std::fputs(beamtrack::trace_csv_string(results).c_str(), stdout);
    for (const beamtrack::TrialResult &tr : results)
        if (tr.diverged)
            std::fprintf(stderr, "note: scheme %s diverged at epoch %d\n",
                         beamtrack::scheme_name(tr.scheme), tr.diverged_epoch);

    if (write_files)
    {
        beamtrack::ScenarioConfig echo_cfg = cfg;
        echo_cfg.trials = 1;
        beamtrack::RunSummary summary = beamtrack::summarize(echo_cfg, results);
        beamtrack::ensure_directory(opts.out_dir);
        beamtrack::write_trace_csv(results, opts.out_dir + "/trace.csv");
        beamtrack::write_summary_json(echo_cfg, summary, opts.out_dir + "/summary.json");
        if (opts.plots)
            beamtrack::write_plots(summary, opts.out_dir);
    }

    bool all_diverged = !results.empty();
    for (const beamtrack::TrialResult &tr : results)
        all_diverged = all_diverged && tr.diverged;
    return all_diverged ? k_exit_diverged : k_exit_ok;
}

void apply_sweep_value(beamtrack::ScenarioConfig &cfg, const std::string &key, double value)
{
    auto as_int = [&]() {
        int v = static_cast<int>(value);
        if (static_cast<double>(v) != value)
            throw beamtrack::ConfigError("sweep key '" + key + "' needs integer values");
        return v;
    };
    if (key == "antennas")
    {
        // Pseudo-key: scales all three arrays together.
        cfg.n_tx = cfg.n_rx = cfg.m_vehicle = as_int();
    }
    else if (key == "n_tx")
        cfg.n_tx = as_int();
    else if (key == "n_rx")
        cfg.n_rx = as_int();
    else if (key == "m_vehicle")
        cfg.m_vehicle = as_int();
    else if (key == "epochs")
        cfg.epochs = as_int();
    else if (key == "trials")
        cfg.trials = as_int();
    else if (key == "tx_snr_db")
        cfg.tx_snr_db = value;
    else if (key == "g_mf")
        cfg.g_mf = value;
    else if (key == "v0_mps")
        cfg.v0_mps = value;
    else if (key == "d0_m")
        cfg.d0_m = value;
    else if (key == "theta0_deg")
        cfg.theta0_deg = value;
    else if (key == "dt_s")
        cfg.dt_s = value;
    else
        throw beamtrack::ConfigError("unsupported sweep key '" + key + "'");
    beamtrack::validate_config(cfg);
}

int cmd_sweep(const CommonOptions &opts, const std::string &key, const std::vector<double> &values)
{
    if (values.empty())
        throw beamtrack::ConfigError("sweep needs at least one --values entry");

    beamtrack::ensure_directory(opts.out_dir);
    nlohmann::ordered_json sweep_doc;
    sweep_doc["key"] = key;
    sweep_doc["values"] = values;
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();

    bool everything_diverged = true;
    for (double value : values)
    {
        beamtrack::ScenarioConfig cfg = resolve_config(opts);
        apply_sweep_value(cfg, key, value);

        std::string label = key + "=" + beamtrack::format_double(value);
        std::string run_dir = opts.out_dir + "/" + label;
        beamtrack::MonteCarloResult result = beamtrack::run_monte_carlo(cfg, opts.threads);
        write_run_artifacts(cfg, result, run_dir, opts.plots);
        everything_diverged = everything_diverged && beamtrack::all_trials_diverged(result);

        nlohmann::ordered_json entry;
        entry["value"] = value;
        entry["dir"] = label;
        for (const auto &[scheme, totals] : result.summary.per_scheme)
        {
            nlohmann::ordered_json s;
            s["mean_abs_angle_err_deg"] = totals.mean_abs_angle_err_deg;
            s["mean_rate_bpshz"] = totals.mean_rate_bpshz;
            s["diverged_trials"] = totals.diverged_trials;
            entry[beamtrack::scheme_name(scheme)] = s;
        }
        runs.push_back(entry);
        std::printf("[%s]\n", label.c_str());
        print_scheme_lines(result.summary);
    }
    sweep_doc["runs"] = runs;

    std::ofstream out(opts.out_dir + "/sweep.json", std::ios::binary);
    if (!out)
        throw beamtrack::IoError("cannot open file for writing: " + opts.out_dir + "/sweep.json");
    out << sweep_doc.dump(2) << "\n";
    if (!out)
        throw beamtrack::IoError("error writing file: " + opts.out_dir + "/sweep.json");

    return everything_diverged ? k_exit_diverged : k_exit_ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"beamtrack — radar-assisted predictive beam tracking simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    CLI::App *run_cmd = app.add_subcommand("run", "Full Monte Carlo run");
    add_common_options(run_cmd, run_opts);

    CommonOptions trial_opts;
    int trial_index = 0;
    bool trial_write = false;
    CLI::App *trial_cmd = app.add_subcommand("trial", "Single trial with verbose trace on stdout");
    add_common_options(trial_cmd, trial_opts);
    trial_cmd->add_option("--trial", trial_index, "Trial index (seeds derive from it)")
        ->check(CLI::NonNegativeNumber);
    trial_cmd->add_flag("--write", trial_write, "Also write trace/summary files to --out");

    CommonOptions sweep_opts;
    std::string sweep_key;
    std::vector<double> sweep_values;
    CLI::App *sweep_cmd =
        app.add_subcommand("sweep", "Run the scenario once per value of one config key");
    add_common_options(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--key", sweep_key, "Config key to vary (e.g. antennas)")->required();
    sweep_cmd->add_option("--values", sweep_values, "Values to sweep")
        ->required()
        ->delimiter(',');

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &err)
    {
        int code = app.exit(err);
        // Successful --help exits 0; anything else is a usage/config error.
        return code == 0 ? k_exit_ok : k_exit_config;
    }

    try
    {
        if (run_cmd->parsed())
            return cmd_run(run_opts);
        if (trial_cmd->parsed())
            return cmd_trial(trial_opts, trial_index, trial_write);
        return cmd_sweep(sweep_opts, sweep_key, sweep_values);
    }
    catch (const beamtrack::ConfigError &err)
    {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return k_exit_config;
    }
    catch (const beamtrack::IoError &err)
    {
        std::fprintf(stderr, "io error: %s\n", err.what());
        return k_exit_io;
    }
    catch (const std::filesystem::filesystem_error &err)
    {
        std::fprintf(stderr, "io error: %s\n", err.what());
        return k_exit_io;
    }
    catch (const std::runtime_error &err)
    {
        // load_config reports unreadable files as plain runtime errors.
        std::string what = err.what();
        if (what.find("config file") != std::string::npos)
        {
            std::fprintf(stderr, "config error: %s\n", what.c_str());
            return k_exit_config;
        }
        std::fprintf(stderr, "error: %s\n", what.c_str());
        return 1;
    }
    catch (const std::exception &err)
    {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
}
