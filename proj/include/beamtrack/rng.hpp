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

#include <cstdint>
#include <random>

#include "beamtrack/numerics.hpp"

namespace beamtrack {

// Deterministic Gaussian noise stream. std::mt19937_64 provides the uniform
// bits; the normal transform is a fixed Box–Muller implementation rather than
// std::normal_distribution, whose output sequence is not pinned by the
// standard and varies across library implementations. Identical seeds give
// identical draw sequences on every platform.
class NoiseRng {
  public:
    explicit NoiseRng(std::uint64_t seed) : gen_(seed) {}

    // Standard normal draw, N(0, 1).
    double gauss();

    // Scaled draw, N(0, sigma²).
    double gauss(double sigma);

    // Circularly symmetric complex Gaussian with total variance var_total
    // (var_total/2 per real component). Consumes two gauss() draws, real
    // part first.
    Complex circular_gauss(double var_total);

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// SplitMix64 mixing function (Steele, Lea & Flood's finalizer). Used to
// decorrelate derived seeds; mixes a 64-bit input into a well-distributed
// 64-bit output.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for Monte Carlo trial `index` derived from the master seed:
// master_seed XOR splitmix64(index). Trials get decorrelated streams while
// remaining reproducible independently of how many trials run.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

} // namespace beamtrack
