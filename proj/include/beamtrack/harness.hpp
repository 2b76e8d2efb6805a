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

#pragma once

#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "beamtrack/config.hpp"
#include "beamtrack/tracker.hpp"

namespace beamtrack {

// One row of the trace: everything observed at one epoch of one trial under
// one scheme.
struct EpochRecord
{
    int epoch = 0;
    double t_s = 0.0;
    Scheme scheme = Scheme::dfrc;
    int trial = 0;
    double theta_true_deg = 0.0;
    double theta_pred1_deg = 0.0; // one-step prediction (transmit beam)
    double theta_pred2_deg = 0.0; // two-step prediction (future receive beam)
    double theta_est_deg = 0.0;
    double d_true_m = 0.0;
    double d_est_m = 0.0;
    double v_true_mps = 0.0;
    double v_est_mps = 0.0;
    double abs_delta = 0.0; // |aᴴ(θ_true)·f|, achieved transmit beam gain
    double rate_bpshz = 0.0;
    bool clamped = false;    // angle clamp hit in the update
    bool track_lost = false; // noise-variance ceiling or zero beam gain
};

// Outcome of one (scheme, trial) pair. A diverged trial keeps the records
// up to and including the epoch where the filter blew up.
struct TrialResult
{
    Scheme scheme = Scheme::dfrc;
    int trial = 0;
    std::vector<EpochRecord> records;
    bool diverged = false;
    int diverged_epoch = -1;
};

// Per-epoch aggregate arrays for one scheme (across surviving trials).
struct SchemeEpochStats
{
    std::vector<double> mean_abs_angle_err_deg;
    std::vector<double> rms_abs_angle_err_deg;
    std::vector<double> stderr_abs_angle_err_deg;
    std::vector<double> mean_rate_bpshz;
    std::vector<double> stderr_rate_bpshz;
};

// Whole-run scalars for one scheme.
struct SchemeSummary
{
    int trials = 0;
    int diverged_trials = 0;
    long clamped_epochs = 0;
    long track_lost_epochs = 0;
    double mean_abs_angle_err_deg = 0.0;
    double mean_rate_bpshz = 0.0;
};

struct RunSummary
{
    std::vector<double> t_s;
    std::map<Scheme, SchemeEpochStats> per_epoch;
    std::map<Scheme, SchemeSummary> per_scheme;
    // Fraction of epochs where the echo-based tracker's mean angle error is
    // strictly below the feedback baseline's. NaN unless both schemes have
    // surviving trials.
    double dfrc_better_fraction = std::numeric_limits<double>::quiet_NaN();
};

struct MonteCarloResult
{
    std::vector<TrialResult> trials; // ordered by (scheme, trial index)
    RunSummary summary;
};

// Optional per-epoch instrumentation. Hooks observe the run without
// affecting it (no RNG interaction), so hooked and unhooked runs produce
// identical records.
struct TrialHooks
{
    std::function<void(int epoch, const EkfBelief &post_update)> post_update;
};

// Link budget implied by the config; transmit power comes from the transmit
// SNR: p = σ²·10^(snr_dB/10).
LinkBudget make_link_budget(const ScenarioConfig &cfg);
double tx_power(const ScenarioConfig &cfg);

// Measurement-model factories bound to a config and the per-epoch beam
// directions. The feedback model also needs the epoch's channel
// coefficient, which that baseline treats as perfectly known, and the
// beam-gain modulus its delay/Doppler variance rows assume (true gain for
// synthesis; pilot-power estimate for the filter).
DfrcMeasurementModel dfrc_measurement_model(const ScenarioConfig &cfg, double theta_beam);
FeedbackMeasurementModel feedback_measurement_model(const ScenarioConfig &cfg, Complex alpha,
                                                    double theta_tx_beam, double theta_rx_beam,
                                                    double delta_est = 1.0);

// Runs one trial of one scheme. Per epoch: predict one and two steps ahead
// (epoch 0 starts from the configured belief without propagation), form the
// transmit beam from the one-step angle and the vehicle's receive beam from
// the two-step angle delivered two epochs earlier (the initial angle covers
// epochs 0 and 1), synthesize the measurement from the ground truth, update
// the filter, evaluate the realized rate with the true channel and the
// actually-used beams, then advance the truth. Deterministic given
// (cfg, scheme, seed).
TrialResult run_trial(const ScenarioConfig &cfg, Scheme scheme, std::uint64_t seed,
                      const TrialHooks *hooks = nullptr);

// Runs every (scheme, trial) pair across `threads` workers (0 = hardware
// concurrency). Results and aggregates are ordered and computed identically
// regardless of parallelism. Trial seeds: master_seed XOR splitmix64(index).
MonteCarloResult run_monte_carlo(const ScenarioConfig &cfg, int threads = 0);

// Aggregates trial results; diverged trials are excluded from statistics
// and counted per scheme.
RunSummary summarize(const ScenarioConfig &cfg, const std::vector<TrialResult> &results);

// True when every (scheme, trial) pair diverged — the CLI's exit-3 state.
bool all_trials_diverged(const MonteCarloResult &result);

} // namespace beamtrack
