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

#include "beamtrack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "beamtrack/array.hpp"
#include "beamtrack/motion.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

namespace {

bool state_is_sane(const RealVec &x)
{
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]))
            return false;
    return x[1] > 0.0; // distance estimate must stay positive
}

RealMat initial_mse(const ScenarioConfig &cfg, int dim)
{
    RealVec diag(dim);
    diag[0] = std::pow(deg_to_rad(cfg.m0_theta_deg), 2);
    diag[1] = cfg.m0_d_m * cfg.m0_d_m;
    diag[2] = cfg.m0_v_mps * cfg.m0_v_mps;
    if (dim == 5)
    {
        diag[3] = cfg.m0_beta * cfg.m0_beta;
        diag[4] = cfg.m0_beta * cfg.m0_beta;
    }
    return diag.asDiagonal();
}

RealMat process_noise(const ScenarioConfig &cfg, int dim)
{
    RealVec diag(dim);
    diag[0] = std::pow(deg_to_rad(cfg.sigma_theta_deg), 2);
    diag[1] = cfg.sigma_d_m * cfg.sigma_d_m;
    diag[2] = cfg.sigma_v_mps * cfg.sigma_v_mps;
    if (dim == 5)
    {
        // Total complex variance σ_β² splits evenly across the two real
        // components.
        diag[3] = 0.5 * cfg.sigma_beta * cfg.sigma_beta;
        diag[4] = 0.5 * cfg.sigma_beta * cfg.sigma_beta;
    }
    return diag.asDiagonal();
}

// Measurement synthesis from the true state. The echo-based scheme goes
// through synth_radar_measurement with the actual beamformer vector; the
// feedback scheme evaluates its measurement model at the truth and adds
// noise per the variance law at the true state — when the downlink beam
// misses the vehicle, the delay/Doppler error bars blow up with 1/|δ|²
// exactly as the echo-based law does. Both append noise in fixed index
// order.
RealVec synth_dfrc(const VehicleState &truth, const ComplexVec &f_beam, int n_rx,
                   const LinkBudget &budget, bool noise_free, NoiseRng &rng, bool &track_lost)
{
    RealVec y(2 * n_rx + 2);
    if (noise_free)
    {
        y.head(2 * n_rx) = real_augment_vec(radar_echo_mean(truth, f_beam, n_rx));
        y[2 * n_rx] = delay_mean(truth, budget);
        y[2 * n_rx + 1] = doppler_mean(truth, budget);
        return y;
    }
    RadarMeasurement meas = synth_radar_measurement(truth, f_beam, n_rx, budget, rng);
    track_lost |= meas.noise_clamped;
    y.head(2 * n_rx) = real_augment_vec(meas.r_tilde);
    y[2 * n_rx] = meas.tau;
    y[2 * n_rx + 1] = meas.mu;
    return y;
}

RealVec synth_feedback(const VehicleState &truth, const FeedbackMeasurementModel &model,
                       bool noise_free, NoiseRng &rng, bool &track_lost)
{
    RealVec x_true(3);
    x_true << truth.theta, truth.d, truth.v;
    RealVec y = model.mean(x_true);
    if (noise_free)
        return y;
    NoiseDiag qm = model.channel_noise_diag();
    track_lost |= qm.clamped;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] += rng.gauss(std::sqrt(qm.diag[i]));
    return y;
}

} // namespace

LinkBudget make_link_budget(const ScenarioConfig &cfg)
{
    LinkBudget budget;
    budget.p = tx_power(cfg);
    budget.sigma_sq = cfg.sigma_sq;
    budget.sigma_c_sq = cfg.sigma_c_sq;
    budget.g_mf = cfg.g_mf;
    budget.a1 = cfg.a1;
    budget.a2 = cfg.a2;
    budget.a3 = cfg.a3;
    budget.fc = cfg.fc_hz;
    budget.c = cfg.c_mps;
    return budget;
}

double tx_power(const ScenarioConfig &cfg)
{
    return cfg.sigma_sq * std::pow(10.0, cfg.tx_snr_db / 10.0);
}

DfrcMeasurementModel dfrc_measurement_model(const ScenarioConfig &cfg, double theta_beam)
{
    return DfrcMeasurementModel(make_link_budget(cfg), cfg.n_tx, cfg.n_rx, theta_beam);
}

FeedbackMeasurementModel feedback_measurement_model(const ScenarioConfig &cfg, Complex alpha,
                                                    double theta_tx_beam, double theta_rx_beam,
                                                    double delta_est)
{
    return FeedbackMeasurementModel(make_link_budget(cfg), cfg.n_tx, cfg.m_vehicle, alpha,
                                    theta_tx_beam, theta_rx_beam, delta_est);
}

TrialResult run_trial(const ScenarioConfig &cfg, Scheme scheme, std::uint64_t seed,
                      const TrialHooks *hooks)
{
    TrialResult result;
    result.scheme = scheme;
    result.records.reserve(cfg.epochs);

    // Per-scheme sub-stream: trials are decorrelated by seed, schemes by a
    // fixed salt, so each scheme sees the same noise stream whether it runs
    // alone or alongside the other.
    NoiseRng rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(scheme) + 1)));

    LinkBudget budget = make_link_budget(cfg);
    double theta0 = deg_to_rad(cfg.theta0_deg);
    Complex beta0(cfg.beta0_re, cfg.beta0_im);
    // Constant radar cross-section chosen so the initial reflection
    // coefficient comes out at the configured β₀.
    Complex epsilon = 2.0 * cfg.d0_m * beta0;

    bool cartesian_truth = cfg.truth_model == "cartesian";
    TruthPose pose;
    VehicleState truth;
    if (cartesian_truth)
    {
        pose = pose_from_polar(theta0, cfg.d0_m, cfg.v0_mps);
        truth = pose_to_state(pose, epsilon);
    }
    else
    {
        truth.theta = theta0;
        truth.d = cfg.d0_m;
        truth.v = cfg.v0_mps;
        truth.beta = beta0;
    }

    int dim = scheme == Scheme::dfrc ? 5 : 3;
    EkfBelief belief;
    belief.x_hat.resize(dim);
    belief.x_hat[0] = theta0;
    belief.x_hat[1] = cfg.d0_m;
    belief.x_hat[2] = cfg.v0_mps;
    if (dim == 5)
    {
        belief.x_hat[3] = cfg.beta0_re;
        belief.x_hat[4] = cfg.beta0_im;
    }
    belief.m = initial_mse(cfg, dim);
    RealMat q_s = process_noise(cfg, dim);

    // Receive-beam angle the vehicle points this epoch. Epochs 0 and 1 use
    // the initial angle; afterwards each epoch uses the two-step prediction
    // computed at the previous epoch (angle predicted two epochs ahead of
    // the belief it came from — the feedback-free latency compensation).
    double rx_angle_current = theta0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch)
    {
        double pred1 = 0.0;
        double pred2 = 0.0;
        EkfBelief belief_pred;
        ComplexVec f_beam;
        ComplexVec w_beam;
        double theta_rx = rx_angle_current;
        try
        {
            if (epoch == 0)
            {
                // No prior belief to propagate at the first epoch: beams come
                // from the configured initial estimate itself.
                belief_pred = belief;
                pred1 = belief.x_hat[0];
                pred2 = belief.x_hat[0];
            }
            else
            {
                PredictResult pr = predict(belief, cfg.dt_s, q_s);
                belief_pred = pr.one_step;
                pred1 = pr.one_step.x_hat[0];
                pred2 = pr.two_step_state[0];
            }
            f_beam = steering(cfg.n_tx, pred1);
            w_beam = steering(cfg.m_vehicle, theta_rx);
        }
        catch (const std::invalid_argument &)
        {
            result.diverged = true;
            result.diverged_epoch = epoch;
            break;
        }

        // Synthesize the measurement from the ground truth. A zero beam
        // gain means infinite delay/Doppler variance: the epoch is flagged
        // and the filter coasts on its prediction. The feedback synthesis
        // uses the variance law at the true transmit beam gain; the
        // feedback filter re-estimates that gain from the received pilot
        // power (κ̃|α| is known, so |pilot|/(κ̃|α|) measures the gain).
        bool track_lost = false;
        bool have_measurement = true;
        RealVec y;
        Complex alpha = los_channel(cfg.alpha_ref, truth.d, cfg.fc_hz, cfg.c_mps);
        try
        {
            if (scheme == Scheme::dfrc)
                y = synth_dfrc(truth, f_beam, cfg.n_rx, budget, cfg.noise_free_measurements, rng,
                               track_lost);
            else
            {
                // |gain| can graze 1 + ε at perfect alignment; keep it in the
                // model's domain.
                double delta_true = std::min(std::abs(beam_gain(truth.theta, pred1, cfg.n_tx)), 1.0);
                FeedbackMeasurementModel fb_synth =
                    feedback_measurement_model(cfg, alpha, pred1, theta_rx, delta_true);
                y = synth_feedback(truth, fb_synth, cfg.noise_free_measurements, rng, track_lost);
            }
        }
        catch (const TrackLossError &)
        {
            track_lost = true;
            have_measurement = false;
        }

        bool clamped = false;
        bool update_failed = false;
        if (have_measurement)
        {
            try
            {
                UpdateResult ur;
                if (scheme == Scheme::dfrc)
                    ur = update(belief_pred, y, dfrc_measurement_model(cfg, pred1));
                else
                {
                    // The vehicle reads the effective beamforming gain off the
                    // received pilot power; the model uses it both to set the
                    // delay/Doppler error bars and to decide pilot lock.
                    double kappa_alpha =
                        std::sqrt(double(cfg.n_tx) * double(cfg.m_vehicle)) * std::abs(alpha);
                    double delta_meas = std::min(std::hypot(y[0], y[1]) / kappa_alpha, 1.0);
                    FeedbackMeasurementModel fb_model =
                        feedback_measurement_model(cfg, alpha, pred1, theta_rx, delta_meas);
                    ur = update(belief_pred, y, fb_model);
                }
                belief = ur.belief;
                clamped = ur.theta_clamped;
                track_lost |= ur.noise_clamped;
            }
            catch (const TrackLossError &)
            {
                // Filter-side zero beam gain: coast on the prediction.
                track_lost = true;
                belief = belief_pred;
            }
            catch (const std::runtime_error &)
            {
                // Singular innovation covariance or an invalid state inside
                // the update: the filter has diverged.
                update_failed = true;
                belief = belief_pred;
            }
        }
        else
        {
            belief = belief_pred;
        }

        // Realized downlink rate with the true channel and the beams that
        // were actually committed this epoch.
        double snr = comm_snr(truth, f_beam, w_beam, alpha, budget, cfg.m_vehicle);

        EpochRecord rec;
        rec.epoch = epoch;
        rec.t_s = epoch * cfg.dt_s;
        rec.scheme = scheme;
        rec.trial = result.trial;
        rec.theta_true_deg = rad_to_deg(truth.theta);
        rec.theta_pred1_deg = rad_to_deg(pred1);
        rec.theta_pred2_deg = rad_to_deg(pred2);
        rec.theta_est_deg = rad_to_deg(belief.x_hat[0]);
        rec.d_true_m = truth.d;
        rec.d_est_m = belief.x_hat[1];
        rec.v_true_mps = truth.v;
        rec.v_est_mps = belief.x_hat[2];
        rec.abs_delta = std::abs(steering(cfg.n_tx, truth.theta).dot(f_beam));
        rec.rate_bpshz = rate(snr);
        rec.clamped = clamped;
        rec.track_lost = track_lost;
        result.records.push_back(rec);

        if (hooks && hooks->post_update)
            hooks->post_update(epoch, belief);

        if (update_failed || !state_is_sane(belief.x_hat))
        {
            result.diverged = true;
            result.diverged_epoch = epoch;
            break;
        }

        // Advance the ground truth: exact Cartesian motion by default, or
        // the filter's own approximate model for diagnostics.
        if (cartesian_truth)
        {
            pose = truth_step(pose, cfg.dt_s);
            truth = pose_to_state(pose, epsilon);
        }
        else
        {
            truth = evolve_state(truth, cfg.dt_s);
        }

        // The two-step angle predicted this epoch points the vehicle's
        // receive beam at epoch + 1 (epoch 0 ran no prediction, so epoch 1
        // keeps the initial angle).
        if (epoch > 0)
            rx_angle_current = pred2;
    }
    return result;
}

MonteCarloResult run_monte_carlo(const ScenarioConfig &cfg, int threads)
{
    struct Task
    {
        Scheme scheme;
        int trial;
    };
    std::vector<Task> tasks;
    tasks.reserve(cfg.schemes.size() * static_cast<std::size_t>(cfg.trials));
    for (Scheme scheme : cfg.schemes)
        for (int trial = 0; trial < cfg.trials; ++trial)
            tasks.push_back({scheme, trial});

    MonteCarloResult result;
    result.trials.resize(tasks.size());

    int worker_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    worker_count = std::max(1, std::min<int>(worker_count, static_cast<int>(tasks.size())));

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (true)
        {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size())
                return;
            try
            {
                TrialResult tr = run_trial(cfg, tasks[i].scheme,
                                           trial_seed(cfg.master_seed,
                                                      static_cast<std::uint64_t>(tasks[i].trial)));
                tr.trial = tasks[i].trial;
                for (EpochRecord &rec : tr.records)
                    rec.trial = tasks[i].trial;
                result.trials[i] = std::move(tr);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    if (worker_count == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (int i = 0; i < worker_count; ++i)
            pool.emplace_back(worker);
        for (std::thread &t : pool)
            t.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    result.summary = summarize(cfg, result.trials);
    return result;
}

RunSummary summarize(const ScenarioConfig &cfg, const std::vector<TrialResult> &results)
{
    RunSummary summary;
    summary.t_s.resize(cfg.epochs);
    for (int e = 0; e < cfg.epochs; ++e)
        summary.t_s[e] = e * cfg.dt_s;

    for (Scheme scheme : cfg.schemes)
    {
        SchemeSummary totals;
        totals.trials = cfg.trials;

        // Surviving trials in index order; aggregation order is fixed so the
        // result is independent of execution interleaving.
        std::vector<const TrialResult *> survivors;
        for (const TrialResult &tr : results)
        {
            if (tr.scheme != scheme)
                continue;
            if (tr.diverged)
                ++totals.diverged_trials;
            else
                survivors.push_back(&tr);
            for (const EpochRecord &rec : tr.records)
            {
                if (rec.clamped)
                    ++totals.clamped_epochs;
                if (rec.track_lost)
                    ++totals.track_lost_epochs;
            }
        }

        SchemeEpochStats stats;
        const int epochs = cfg.epochs;
        stats.mean_abs_angle_err_deg.assign(epochs, std::numeric_limits<double>::quiet_NaN());
        stats.rms_abs_angle_err_deg.assign(epochs, std::numeric_limits<double>::quiet_NaN());
        stats.stderr_abs_angle_err_deg.assign(epochs, std::numeric_limits<double>::quiet_NaN());
        stats.mean_rate_bpshz.assign(epochs, std::numeric_limits<double>::quiet_NaN());
        stats.stderr_rate_bpshz.assign(epochs, std::numeric_limits<double>::quiet_NaN());

        std::size_t n = survivors.size();
        if (n > 0)
        {
            double total_err = 0.0;
            double total_rate = 0.0;
            for (int e = 0; e < epochs; ++e)
            {
                double err_sum = 0.0;
                double err_sq_sum = 0.0;
                double rate_sum = 0.0;
                for (const TrialResult *tr : survivors)
                {
                    const EpochRecord &rec = tr->records[e];
                    double err = std::abs(rec.theta_est_deg - rec.theta_true_deg);
                    err_sum += err;
                    err_sq_sum += err * err;
                    rate_sum += rec.rate_bpshz;
                }
                double mean_err = err_sum / static_cast<double>(n);
                double mean_rate = rate_sum / static_cast<double>(n);
                stats.mean_abs_angle_err_deg[e] = mean_err;
                stats.rms_abs_angle_err_deg[e] = std::sqrt(err_sq_sum / static_cast<double>(n));
                stats.mean_rate_bpshz[e] = mean_rate;

                if (n > 1)
                {
                    double err_var = 0.0;
                    double rate_var = 0.0;
                    for (const TrialResult *tr : survivors)
                    {
                        const EpochRecord &rec = tr->records[e];
                        double err = std::abs(rec.theta_est_deg - rec.theta_true_deg);
                        err_var += (err - mean_err) * (err - mean_err);
                        rate_var += (rec.rate_bpshz - mean_rate) * (rec.rate_bpshz - mean_rate);
                    }
                    err_var /= static_cast<double>(n - 1);
                    rate_var /= static_cast<double>(n - 1);
                    stats.stderr_abs_angle_err_deg[e] =
                        std::sqrt(err_var / static_cast<double>(n));
                    stats.stderr_rate_bpshz[e] = std::sqrt(rate_var / static_cast<double>(n));
                }
                else
                {
                    stats.stderr_abs_angle_err_deg[e] = 0.0;
                    stats.stderr_rate_bpshz[e] = 0.0;
                }

                total_err += mean_err;
                total_rate += mean_rate;
            }
            totals.mean_abs_angle_err_deg = total_err / epochs;
            totals.mean_rate_bpshz = total_rate / epochs;
        }
        else
        {
            totals.mean_abs_angle_err_deg = std::numeric_limits<double>::quiet_NaN();
            totals.mean_rate_bpshz = std::numeric_limits<double>::quiet_NaN();
        }

        summary.per_epoch[scheme] = std::move(stats);
        summary.per_scheme[scheme] = totals;
    }

    // Head-to-head fraction, defined when both schemes have statistics.
    auto dfrc_it = summary.per_epoch.find(Scheme::dfrc);
    auto fb_it = summary.per_epoch.find(Scheme::feedback);
    if (dfrc_it != summary.per_epoch.end() && fb_it != summary.per_epoch.end())
    {
        int better = 0;
        int valid = 0;
        for (int e = 0; e < cfg.epochs; ++e)
        {
            double a = dfrc_it->second.mean_abs_angle_err_deg[e];
            double b = fb_it->second.mean_abs_angle_err_deg[e];
            if (std::isnan(a) || std::isnan(b))
                continue;
            ++valid;
            if (a < b)
                ++better;
        }
        if (valid > 0)
            summary.dfrc_better_fraction = static_cast<double>(better) / valid;
    }
    return summary;
}

bool all_trials_diverged(const MonteCarloResult &result)
{
    if (result.trials.empty())
        return false;
    for (const TrialResult &tr : result.trials)
        if (!tr.diverged)
            return false;
    return true;
}

} // namespace beamtrack
