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

#include "beamtrack/motion.hpp"
#include "beamtrack/numerics.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

// Post-matched-filter radar measurement: normalized echo vector (length
// N_r), round-trip delay (s), and Doppler frequency (Hz). noise_clamped
// records whether the delay/Doppler noise variances hit the track-loss
// ceiling during synthesis.
struct RadarMeasurement
{
    ComplexVec r_tilde;
    double tau = 0.0;
    double mu = 0.0;
    bool noise_clamped = false;
};

// Measurement noise variances: per-complex-component echo variance,
// delay variance (s²), Doppler variance (Hz²). clamped marks that the
// delay/Doppler entries were held at the finite track-loss ceiling.
struct NoiseProfile
{
    double sigma1_sq = 0.0;
    double sigma2_sq = 0.0;
    double sigma3_sq = 0.0;
    bool clamped = false;
};

// Physical link parameters: transmit power p (linear), radar noise variance
// σ², communication noise variance σ_C², matched-filter gain G, the three
// measurement calibration constants, carrier frequency (Hz) and propagation
// speed (m/s).
struct LinkBudget
{
    double p = 0.0;
    double sigma_sq = 0.0;
    double sigma_c_sq = 0.0;
    double g_mf = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double fc = 0.0;
    double c = 0.0;
};

// Thrown by noise_variances when the reflection coefficient or the beam
// gain is exactly zero: the implied measurement variance is infinite and
// the caller should declare the track lost rather than crash.
class TrackLossError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// Reflection coefficient β = ε/(2d) for complex radar cross-section ε at
// distance d. Throws std::invalid_argument when d ≤ 0.
Complex reflection_coeff(Complex epsilon, double d);

// Measurement noise variances:
//   σ₁² = a₁²σ²/(G·p)                      (echo, per complex component)
//   σᵢ² = aᵢ²σ²/(G·κ²·|β|²·|δ|²·p), i=2,3  (delay, Doppler)
// A vanished beamforming gain means infinite delay/Doppler variance; |δ| = 0
// (or |β| = 0) throws std::invalid_argument so the caller can declare track
// loss. For 0 < |δ| < 1e-6 the delay/Doppler variances are clamped at the
// finite ceiling 1e6 × their |δ| = 1 value and the profile is flagged.
NoiseProfile noise_variances(const LinkBudget &budget, Complex beta, Complex delta, double kappa);

// Noise-free measurement means. The echo mean is κβ·b(θ)·(aᴴ(θ)·f_beam)
// with b the n_rx-element receive steering vector and κ = √(n_tx·n_rx),
// n_tx taken from f_beam's length.
ComplexVec radar_echo_mean(const VehicleState &state, const ComplexVec &f_beam, int n_rx);
double delay_mean(const VehicleState &state, const LinkBudget &budget);
double doppler_mean(const VehicleState &state, const LinkBudget &budget);

// Synthesizes one noisy radar measurement from the true state. The beam
// gain δ entering the noise law is computed from f_beam and the true angle.
// Draw order is fixed: echo components in element order (real part first),
// then delay, then Doppler. Propagates errors from noise_variances.
RadarMeasurement synth_radar_measurement(const VehicleState &state, const ComplexVec &f_beam,
                                         int n_rx, const LinkBudget &budget, NoiseRng &rng);

// Line-of-sight downlink channel coefficient α = (α̃/d)·exp(j·2π·f_c·d/c).
// Throws std::invalid_argument when d ≤ 0.
Complex los_channel(double alpha_ref, double d, double fc, double c);

// Receive SNR of the downlink:
//   SNR = p·|κ̃·α·(wᴴu(θ))·(aᴴ(θ)·f)|² / σ_C²
// with κ̃ = √(n_tx·m_vehicle), n_tx from f_beam's length and m_vehicle from
// w_beam's length (validated against the explicit count).
double comm_snr(const VehicleState &state, const ComplexVec &f_beam, const ComplexVec &w_beam,
                Complex alpha, const LinkBudget &budget, int m_vehicle);

// Achievable rate log₂(1 + snr) in bit/s/Hz. Throws std::invalid_argument
// on negative snr.
double rate(double snr);

} // namespace beamtrack
