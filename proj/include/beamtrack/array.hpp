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

namespace beamtrack {

// Uniform linear array with half-wavelength element spacing. Angles are
// measured from the array axis and live in the open interval (0, π);
// broadside is π/2. All steering phases follow the negative-exponent
// convention: element k carries exp(−jπk cos θ). The sign matters for the
// measurement Jacobians, so it is fixed here once.

// Unit-norm steering vector of an n-element ULA at angle theta (radians).
// Element k (0-based) is (1/√n)·exp(−jπk cos θ). Throws
// std::invalid_argument when n < 1 or theta is outside (0, π).
ComplexVec steering(int n, double theta);

// Elementwise derivative of steering() with respect to theta:
// d a_k/dθ = a_k · (jπk sin θ). Same domain checks as steering().
ComplexVec steering_dtheta(int n, double theta);

// Beamforming gain factor δ = aᴴ(θ_true)·a(θ_beam) for an n-element array.
// |δ| = 1 iff cos θ_true = cos θ_beam, and |δ| ≤ 1 always (Cauchy–Schwarz on
// unit vectors). Conjugate-symmetric in its arguments.
Complex beam_gain(double theta_true, double theta_beam, int n);

// Derivative of beam_gain with respect to its first argument:
// ∂δ/∂θ_true = −jπ sin θ_true · (1/n) Σ_k k·exp(jπk(cos θ_true − cos θ_beam)).
Complex beam_gain_dtheta(double theta_true, double theta_beam, int n);

// Array gain factor κ = √(n_tx · n_rx). Throws std::invalid_argument when
// either count is < 1.
double array_gain(int n_tx, int n_rx);

} // namespace beamtrack
