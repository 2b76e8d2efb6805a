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

#include <string>
#include <vector>

#include "beamtrack/harness.hpp"

namespace beamtrack {

// File-system failure while writing artifacts. The CLI maps this to exit
// code 4; the message names the path.
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal form that round-trips to the same double (via
// std::to_chars); locale-independent. NaN prints as "nan", infinities as
// "inf"/"-inf".
std::string format_double(double value);

// Trace CSV with the fixed header
//   epoch,t_s,scheme,trial,theta_true_deg,theta_pred1_deg,theta_pred2_deg,
//   theta_est_deg,d_true_m,d_est_m,v_true_mps,v_est_mps,abs_delta,
//   rate_bpshz,clamped,track_lost
// one row per record in (scheme, trial, epoch) order, '\n' newlines, floats
// in shortest round-trip form, flags as 0/1.
std::string trace_csv_string(const std::vector<TrialResult> &results);
void write_trace_csv(const std::vector<TrialResult> &results, const std::string &path);

// Summary JSON with top-level keys config_echo, per_epoch, per_scheme,
// version. Serialized with fixed key order and 2-space indentation so a
// parse → re-serialize round trip is byte-identical.
std::string summary_json_string(const ScenarioConfig &cfg, const RunSummary &summary);
void write_summary_json(const ScenarioConfig &cfg, const RunSummary &summary,
                        const std::string &path);

// Self-contained SVG line plots of the per-epoch aggregates, mirroring the
// tracking-error and rate figures: angle_error.svg (log₁₀ error axis) and
// rate.svg, one curve per scheme.
void write_plots(const RunSummary &summary, const std::string &out_dir);

// Creates the directory (and parents) if needed; throws IoError on failure.
void ensure_directory(const std::string &path);

} // namespace beamtrack
