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

#include "beamtrack/motion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "beamtrack/propagation.hpp"

namespace beamtrack {

TruthPose pose_from_polar(double theta, double d, double v)
{
    if (!(theta > 0.0 && theta < std::numbers::pi))
    {
        std::ostringstream oss;
        oss << "pose_from_polar: angle " << theta << " rad is outside (0, pi)";
        throw std::invalid_argument(oss.str());
    }
    if (!(d > 0.0))
    {
        std::ostringstream oss;
        oss << "pose_from_polar: distance must be positive, got " << d;
        throw std::invalid_argument(oss.str());
    }
    TruthPose pose;
    pose.x = d * std::cos(theta);
    pose.y = d * std::sin(theta);
    pose.v = v;
    return pose;
}

TruthPose truth_step(const TruthPose &pose, double dt)
{
    if (!(dt > 0.0))
    {
        std::ostringstream oss;
        oss << "truth_step: dt must be positive, got " << dt;
        throw std::invalid_argument(oss.str());
    }
    TruthPose next = pose;
    next.x = pose.x - pose.v * dt;
    return next;
}

VehicleState pose_to_state(const TruthPose &pose, Complex epsilon)
{
    VehicleState state;
    state.d = std::hypot(pose.x, pose.y);
    state.theta = std::atan2(pose.y, pose.x);
    state.v = pose.v;
    state.beta = reflection_coeff(epsilon, state.d);
    return state;
}

VehicleState evolve_state(const VehicleState &x, double dt)
{
    if (!(x.d > 0.0))
    {
        std::ostringstream oss;
        oss << "evolve_state: distance must be positive, got " << x.d;
        throw std::invalid_argument(oss.str());
    }

    double sin_theta = std::sin(x.theta);
    double cos_theta = std::cos(x.theta);
    double travel = x.v * dt;

    VehicleState next;
    next.theta = x.theta + travel * sin_theta / x.d;
    next.d = x.d - travel * cos_theta;
    next.v = x.v;
    next.beta = x.beta * (1.0 + travel * cos_theta / x.d);
    return next;
}

VehicleState evolve_state(const VehicleState &x, double dt, const StateNoiseDraw &noise)
{
    VehicleState next = evolve_state(x, dt);
    next.theta += noise.w_theta;
    next.d += noise.w_d;
    next.v += noise.w_v;
    next.beta += noise.w_beta;
    return next;
}

StateNoiseDraw draw_state_noise(const ProcessNoise &sigmas, NoiseRng &rng)
{
    StateNoiseDraw draw;
    draw.w_theta = rng.gauss(sigmas.sigma_theta);
    draw.w_d = rng.gauss(sigmas.sigma_d);
    draw.w_v = rng.gauss(sigmas.sigma_v);
    draw.w_beta = rng.circular_gauss(sigmas.sigma_beta * sigmas.sigma_beta);
    return draw;
}

} // namespace beamtrack
