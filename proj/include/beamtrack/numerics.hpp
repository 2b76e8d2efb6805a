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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace beamtrack {

// Canonical scalar and small dense matrix types used throughout the library.
// All matrices are dense; dimensions stay small (at most a few hundred).
using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

// Thrown by invert() when the input is singular or its estimated condition
// number exceeds the configured cap. Carries the estimate so callers can
// report how badly conditioned the matrix was.
class SingularMatrixError : public std::runtime_error {
  public:
    SingularMatrixError(const std::string &message, double condition_estimate)
        : std::runtime_error(message), cond_(condition_estimate)
    {
    }

    double condition_estimate() const noexcept { return cond_; }

  private:
    double cond_;
};

// Checked matrix product. Throws std::invalid_argument naming both shapes
// when the inner dimensions disagree. No implicit conjugation — use
// hermitian() explicitly.
RealMat mat_mul(const RealMat &a, const RealMat &b);
ComplexMat mat_mul(const ComplexMat &a, const ComplexMat &b);

// Conjugate transpose. An involution: hermitian(hermitian(a)) == a exactly.
ComplexMat hermitian(const ComplexMat &a);

// Inverse of a square real matrix via pivoted LU with an explicit reciprocal
// condition estimate. Throws SingularMatrixError when the estimated condition
// number exceeds cond_cap (default 1e12) or the factorization is singular.
RealMat invert(const RealMat &a, double cond_cap = 1e12);

// Real augmentation of a complex vector. The single canonical layout is
// interleaved: [Re z1, Im z1, Re z2, Im z2, ...], so per-antenna noise blocks
// stay contiguous. Output dimension is 2n.
RealVec real_augment_vec(const ComplexVec &z);

// Inverse of real_augment_vec. Throws std::invalid_argument on odd length.
ComplexVec complex_from_augmented(const RealVec &r);

// Returns (A + Aᵀ)/2. Throws std::invalid_argument if a is not square.
RealMat symmetrize(const RealMat &a);

// True when max|A − Aᵀ| ≤ rel_tol · max|A| (and a is square). The zero
// matrix counts as symmetric.
bool is_symmetric(const RealMat &a, double rel_tol = 1e-12);

// Degree/radian conversions used at the config and reporting boundaries;
// all internal angles are radians.
double deg_to_rad(double deg);
double rad_to_deg(double rad);

} // namespace beamtrack
