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

#include "beamtrack/array.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace beamtrack {

namespace {

void check_array_args(int n, double theta, const char *op)
{
    if (n < 1)
    {
        std::ostringstream oss;
        oss << op << ": element count must be >= 1, got " << n;
        throw std::invalid_argument(oss.str());
    }
    if (!(theta > 0.0 && theta < std::numbers::pi))
    {
        std::ostringstream oss;
        oss << op << ": angle " << theta << " rad is outside (0, pi)";
        throw std::invalid_argument(oss.str());
    }
}

} // namespace

ComplexVec steering(int n, double theta)
{
    check_array_args(n, theta, "steering");

    double norm = 1.0 / std::sqrt(static_cast<double>(n));
    double phase_step = -std::numbers::pi * std::cos(theta);

    ComplexVec a(n);
    for (int k = 0; k < n; ++k)
        a[k] = std::polar(norm, phase_step * k);
    return a;
}

ComplexVec steering_dtheta(int n, double theta)
{
    check_array_args(n, theta, "steering_dtheta");

    ComplexVec a = steering(n, theta);
    Complex factor = Complex(0.0, std::numbers::pi * std::sin(theta));
    ComplexVec da(n);
    for (int k = 0; k < n; ++k)
        da[k] = a[k] * (factor * static_cast<double>(k));
    return da;
}

Complex beam_gain(double theta_true, double theta_beam, int n)
{
    check_array_args(n, theta_true, "beam_gain");
    check_array_args(n, theta_beam, "beam_gain");

    // δ = (1/n) Σ_k exp(jπk(cos θ_true − cos θ_beam)); evaluated as the sum
    // rather than a closed-form ratio so the aligned case is exactly 1.
    double dcos = std::cos(theta_true) - std::cos(theta_beam);
    double step = std::numbers::pi * dcos;
    Complex sum(0.0, 0.0);
    for (int k = 0; k < n; ++k)
        sum += std::polar(1.0, step * k);
    return sum / static_cast<double>(n);
}

Complex beam_gain_dtheta(double theta_true, double theta_beam, int n)
{
    check_array_args(n, theta_true, "beam_gain_dtheta");
    check_array_args(n, theta_beam, "beam_gain_dtheta");

    double dcos = std::cos(theta_true) - std::cos(theta_beam);
    double step = std::numbers::pi * dcos;
    Complex weighted(0.0, 0.0);
    for (int k = 0; k < n; ++k)
        weighted += static_cast<double>(k) * std::polar(1.0, step * k);

    Complex factor = Complex(0.0, -std::numbers::pi * std::sin(theta_true));
    return factor * weighted / static_cast<double>(n);
}

double array_gain(int n_tx, int n_rx)
{
    if (n_tx < 1 || n_rx < 1)
    {
        std::ostringstream oss;
        oss << "array_gain: element counts must be >= 1, got (" << n_tx << ", " << n_rx << ")";
        throw std::invalid_argument(oss.str());
    }
    return std::sqrt(static_cast<double>(n_tx) * static_cast<double>(n_rx));
}

} // namespace beamtrack
