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

#include "beamtrack/propagation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "beamtrack/array.hpp"

namespace beamtrack {

namespace {

// |δ| below this is treated as track loss: delay/Doppler variances are held
// at 1e6 × their perfect-alignment value instead of following the 1/|δ|² law
// to infinity, so the filter degrades instead of crashing.
constexpr double k_delta_clamp = 1e-6;
constexpr double k_variance_ceiling_factor = 1e6;

} // namespace

Complex reflection_coeff(Complex epsilon, double d)
{
    if (!(d > 0.0))
    {
        std::ostringstream oss;
        oss << "reflection_coeff: distance must be positive, got " << d;
        throw std::invalid_argument(oss.str());
    }
    return epsilon / (2.0 * d);
}

NoiseProfile noise_variances(const LinkBudget &budget, Complex beta, Complex delta, double kappa)
{
    double abs_beta_sq = std::norm(beta);
    double abs_delta = std::abs(delta);
    if (abs_beta_sq == 0.0)
        throw TrackLossError("noise_variances: zero reflection coefficient (track lost)");
    if (abs_delta == 0.0)
        throw TrackLossError("noise_variances: zero beam gain (track lost)");

    double gp = budget.g_mf * budget.p;
    NoiseProfile profile;
    profile.sigma1_sq = budget.a1 * budget.a1 * budget.sigma_sq / gp;

    // Delay/Doppler variances at perfect alignment (|δ| = 1).
    double base = budget.sigma_sq / (gp * kappa * kappa * abs_beta_sq);
    double s2_aligned = budget.a2 * budget.a2 * base;
    double s3_aligned = budget.a3 * budget.a3 * base;

    if (abs_delta < k_delta_clamp)
    {
        profile.sigma2_sq = k_variance_ceiling_factor * s2_aligned;
        profile.sigma3_sq = k_variance_ceiling_factor * s3_aligned;
        profile.clamped = true;
    }
    else
    {
        double inv_delta_sq = 1.0 / (abs_delta * abs_delta);
        profile.sigma2_sq = s2_aligned * inv_delta_sq;
        profile.sigma3_sq = s3_aligned * inv_delta_sq;
    }
    return profile;
}

ComplexVec radar_echo_mean(const VehicleState &state, const ComplexVec &f_beam, int n_rx)
{
    int n_tx = static_cast<int>(f_beam.size());
    double kappa = array_gain(n_tx, n_rx);

    // aᴴ(θ)·f: Eigen's dot() conjugates its left operand.
    Complex tx_gain = steering(n_tx, state.theta).dot(f_beam);
    ComplexVec b = steering(n_rx, state.theta);
    return (kappa * state.beta * tx_gain) * b;
}

double delay_mean(const VehicleState &state, const LinkBudget &budget)
{
    return 2.0 * state.d / budget.c;
}

double doppler_mean(const VehicleState &state, const LinkBudget &budget)
{
    return 2.0 * state.v * std::cos(state.theta) * budget.fc / budget.c;
}

RadarMeasurement synth_radar_measurement(const VehicleState &state, const ComplexVec &f_beam,
                                         int n_rx, const LinkBudget &budget, NoiseRng &rng)
{
    int n_tx = static_cast<int>(f_beam.size());
    double kappa = array_gain(n_tx, n_rx);
    Complex delta = steering(n_tx, state.theta).dot(f_beam);
    NoiseProfile profile = noise_variances(budget, state.beta, delta, kappa);

    RadarMeasurement meas;
    meas.r_tilde = radar_echo_mean(state, f_beam, n_rx);
    for (Eigen::Index i = 0; i < meas.r_tilde.size(); ++i)
        meas.r_tilde[i] += rng.circular_gauss(profile.sigma1_sq);
    meas.tau = delay_mean(state, budget) + rng.gauss(std::sqrt(profile.sigma2_sq));
    meas.mu = doppler_mean(state, budget) + rng.gauss(std::sqrt(profile.sigma3_sq));
    meas.noise_clamped = profile.clamped;
    return meas;
}

Complex los_channel(double alpha_ref, double d, double fc, double c)
{
    if (!(d > 0.0))
    {
        std::ostringstream oss;
        oss << "los_channel: distance must be positive, got " << d;
        throw std::invalid_argument(oss.str());
    }
    double phase = 2.0 * std::numbers::pi * fc * d / c;
    return std::polar(alpha_ref / d, phase);
}

double comm_snr(const VehicleState &state, const ComplexVec &f_beam, const ComplexVec &w_beam,
                Complex alpha, const LinkBudget &budget, int m_vehicle)
{
    if (static_cast<int>(w_beam.size()) != m_vehicle)
    {
        std::ostringstream oss;
        oss << "comm_snr: receive beam length " << w_beam.size()
            << " does not match vehicle element count " << m_vehicle;
        throw std::invalid_argument(oss.str());
    }
    int n_tx = static_cast<int>(f_beam.size());
    double kappa_c = array_gain(n_tx, m_vehicle);

    Complex tx_gain = steering(n_tx, state.theta).dot(f_beam);
    Complex rx_gain = w_beam.dot(steering(m_vehicle, state.theta));
    double amplitude = std::abs(kappa_c * alpha * rx_gain * tx_gain);
    return budget.p * amplitude * amplitude / budget.sigma_c_sq;
}

double rate(double snr)
{
    if (snr < 0.0)
    {
        std::ostringstream oss;
        oss << "rate: snr must be non-negative, got " << snr;
        throw std::invalid_argument(oss.str());
    }
    return std::log1p(snr) / std::numbers::ln2;
}

} // namespace beamtrack
