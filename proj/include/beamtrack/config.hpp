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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace beamtrack {

// Invalid or malformed configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Scheme
{
    dfrc = 0,    // echo-based tracking at the RSU
    feedback = 1 // downlink-pilot tracking with uplink feedback
};

const char *scheme_name(Scheme scheme);

// Full scenario description. Defaults reproduce the reference operating
// point: 30 GHz carrier, 20 ms epochs, 64-element arrays, 10 dB transmit
// SNR, matched-filter gain 10, and the vehicle starting 25 m out at 9.2°
// doing 18 m/s. Config files are flat JSON objects; every key is optional
// and unknown keys are rejected.
struct ScenarioConfig
{
    // Physics and timing
    double fc_hz = 30e9;
    double c_mps = 3e8;
    double dt_s = 0.02;
    int epochs = 200;

    // Arrays: RSU transmit, RSU receive, vehicle receive
    int n_tx = 64;
    int n_rx = 64;
    int m_vehicle = 64;

    // Link budget
    double tx_snr_db = 10.0;
    double sigma_sq = 1.0;
    double sigma_c_sq = 1.0;
    double g_mf = 10.0;
    double a1 = 1.0;
    double a2 = 6.7e-7;
    double a3 = 2e4;

    // State evolution noise (per-component standard deviations)
    double sigma_theta_deg = 0.02;
    double sigma_d_m = 0.2;
    double sigma_v_mps = 0.5;
    double sigma_beta = 0.1;

    // Initial truth / initial belief
    double theta0_deg = 9.2;
    double d0_m = 25.0;
    double v0_mps = 18.0;
    double beta0_re = 0.7071067811865476;
    double beta0_im = 0.7071067811865476;
    double alpha_ref = 25.0;

    // Initial MSE matrix diagonal, as standard deviations. NaN means
    // "derive": √10 × the matching evolution-noise sigma (per real
    // component for the reflection coefficient).
    double m0_theta_deg = nan_marker();
    double m0_d_m = nan_marker();
    double m0_v_mps = nan_marker();
    double m0_beta = nan_marker();

    // Run control
    int trials = 100;
    std::uint64_t master_seed = 1;
    std::vector<Scheme> schemes = {Scheme::dfrc, Scheme::feedback};

    // Diagnostics: propagate the ground truth with the exact Cartesian
    // model ("cartesian", default) or with the filter's own approximate
    // model ("approx"); optionally synthesize measurements without noise.
    std::string truth_model = "cartesian";
    bool noise_free_measurements = false;

    static double nan_marker();
};

// Defaults with the derived fields resolved.
ScenarioConfig default_config();

// Parses a flat JSON object, applying values over the defaults. Unknown
// keys, wrong types, and out-of-range values throw ConfigError. The result
// is finalized and validated.
ScenarioConfig parse_config_json(const std::string &text);

// Reads and parses a config file. File-system failures throw
// std::runtime_error with the path; parse failures throw ConfigError.
ScenarioConfig load_config(const std::string &path);

// Fills derived defaults (m0_* from the evolution sigmas) and normalizes
// the scheme list (deduplicated, fixed order).
void finalize_config(ScenarioConfig &cfg);

// Range/consistency checks; throws ConfigError on violation.
void validate_config(const ScenarioConfig &cfg);

} // namespace beamtrack
