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

#include "beamtrack/numerics.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

// Kinematic + reflection state of the vehicle as seen from the RSU:
// angle from the array axis (radians, in (0, π)), distance (m), speed (m/s),
// and the complex reflection coefficient β.
struct VehicleState
{
    double theta = 0.0;
    double d = 0.0;
    double v = 0.0;
    Complex beta{0.0, 0.0};
};

// Cartesian ground-truth pose. The RSU sits at the origin with its array
// along the +x axis (the road direction); the vehicle drives in −x at
// constant speed v with constant perpendicular offset y > 0. The polar view
// is theta = atan2(y, x), d = √(x² + y²).
struct TruthPose
{
    double x = 0.0;
    double y = 0.0;
    double v = 0.0;
};

// Per-component standard deviations of the state evolution noise
// (theta in radians). sigma_beta is the total complex std dev; the draw
// puts sigma_beta²/2 on each real component.
struct ProcessNoise
{
    double sigma_theta = 0.0;
    double sigma_d = 0.0;
    double sigma_v = 0.0;
    double sigma_beta = 0.0;
};

// One realized noise vector for evolve_state.
struct StateNoiseDraw
{
    double w_theta = 0.0;
    double w_d = 0.0;
    double w_v = 0.0;
    Complex w_beta{0.0, 0.0};
};

// Builds the Cartesian pose whose polar view is (theta, d) with speed v.
// Throws std::invalid_argument unless theta ∈ (0, π) and d > 0.
TruthPose pose_from_polar(double theta, double d, double v);

// Exact noise-free ground-truth step: x ← x − v·dt, y and v unchanged.
// Throws std::invalid_argument when dt ≤ 0.
TruthPose truth_step(const TruthPose &pose, double dt);

// Polar view of a pose plus the reflection coefficient β = ε/(2d) for a
// constant complex radar cross-section ε.
VehicleState pose_to_state(const TruthPose &pose, Complex epsilon);

// Approximate polar state-evolution model (the filter's g):
//   θ' = θ + d⁻¹·v·dt·sin θ
//   d' = d − v·dt·cos θ
//   v' = v
//   β' = β·(1 + d⁻¹·v·dt·cos θ)
// Noise-free variant; throws std::invalid_argument when d ≤ 0.
VehicleState evolve_state(const VehicleState &x, double dt);

// Noisy variant: adds the supplied draw after the deterministic step.
VehicleState evolve_state(const VehicleState &x, double dt, const StateNoiseDraw &noise);

// Samples a StateNoiseDraw from the given per-component sigmas. Draw order
// is fixed: theta, d, v, Re(beta), Im(beta).
StateNoiseDraw draw_state_noise(const ProcessNoise &sigmas, NoiseRng &rng);

} // namespace beamtrack
