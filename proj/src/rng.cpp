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

#include "beamtrack/rng.hpp"

#include <cmath>
#include <numbers>

namespace beamtrack {

double NoiseRng::gauss()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }

    // Uniforms in (0, 1]: take the top 53 bits and add 1 before scaling by
    // 2^-53, so log(u1) is always finite.
    double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;

    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;

    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double NoiseRng::gauss(double sigma)
{
    return sigma * gauss();
}

Complex NoiseRng::circular_gauss(double var_total)
{
    double sigma_part = std::sqrt(0.5 * var_total);
    double re = gauss(sigma_part);
    double im = gauss(sigma_part);
    return Complex(re, im);
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index)
{
    return master_seed ^ splitmix64(index);
}

} // namespace beamtrack
