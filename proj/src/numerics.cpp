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

#include "beamtrack/numerics.hpp"

#include <numbers>
#include <sstream>

namespace beamtrack {

namespace {

template <typename Mat>
void check_inner_dims(const Mat &a, const Mat &b)
{
    if (a.cols() != b.rows())
    {
        std::ostringstream oss;
        oss << "mat_mul: inner dimensions mismatch: (" << a.rows() << "x" << a.cols() << ") * ("
            << b.rows() << "x" << b.cols() << ")";
        throw std::invalid_argument(oss.str());
    }
}

} // namespace

RealMat mat_mul(const RealMat &a, const RealMat &b)
{
    check_inner_dims(a, b);
    return a * b;
}

ComplexMat mat_mul(const ComplexMat &a, const ComplexMat &b)
{
    check_inner_dims(a, b);
    return a * b;
}

ComplexMat hermitian(const ComplexMat &a)
{
    return a.adjoint();
}

RealMat invert(const RealMat &a, double cond_cap)
{
    if (a.rows() != a.cols())
    {
        std::ostringstream oss;
        oss << "invert: matrix is not square: (" << a.rows() << "x" << a.cols() << ")";
        throw std::invalid_argument(oss.str());
    }

    Eigen::PartialPivLU<RealMat> lu(a);
    double rcond = lu.rcond();
    if (!(rcond > 0.0) || !std::isfinite(rcond) || 1.0 / rcond > cond_cap)
    {
        double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        std::ostringstream oss;
        oss << "invert: matrix is singular or ill-conditioned (condition estimate " << cond
            << " exceeds cap " << cond_cap << ")";
        throw SingularMatrixError(oss.str(), cond);
    }
    return lu.inverse();
}

RealVec real_augment_vec(const ComplexVec &z)
{
    RealVec out(2 * z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
    {
        out[2 * i] = z[i].real();
        out[2 * i + 1] = z[i].imag();
    }
    return out;
}

ComplexVec complex_from_augmented(const RealVec &r)
{
    if (r.size() % 2 != 0)
        throw std::invalid_argument("complex_from_augmented: length " + std::to_string(r.size()) +
                                    " is odd");
    ComplexVec out(r.size() / 2);
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] = Complex(r[2 * i], r[2 * i + 1]);
    return out;
}

RealMat symmetrize(const RealMat &a)
{
    if (a.rows() != a.cols())
    {
        std::ostringstream oss;
        oss << "symmetrize: matrix is not square: (" << a.rows() << "x" << a.cols() << ")";
        throw std::invalid_argument(oss.str());
    }
    return 0.5 * (a + a.transpose());
}

bool is_symmetric(const RealMat &a, double rel_tol)
{
    if (a.rows() != a.cols())
        return false;
    if (a.size() == 0)
        return true;
    double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        return true;
    double skew = (a - a.transpose()).cwiseAbs().maxCoeff();
    return skew <= rel_tol * scale;
}

double deg_to_rad(double deg)
{
    return deg * std::numbers::pi / 180.0;
}

double rad_to_deg(double rad)
{
    return rad * 180.0 / std::numbers::pi;
}

} // namespace beamtrack
