// Copyright 2026 The phasemc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace phasemc {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011).
// A draw is a pure function of (key, counter), so trajectories are
// reproducible regardless of execution order or thread schedule.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

enum class NoiseDist { kGaussian, kRademacher };

// Keyed noise stream. The key is the master seed; the counter encodes
// (trajectory, step, purpose). Purpose 0 is per-step noise, purpose 1 the
// initial-state draw, so the two streams never collide.
class NoiseSampler {
 public:
  NoiseSampler(NoiseDist dist, double gamma, std::uint64_t seed);

  // One noise value xi with E[xi] = 0 and E[xi^2] = gamma. The underlying
  // unit-variance variate depends only on (seed, trajectory, step), so a
  // gamma sweep at fixed seed reuses common random numbers.
  double xi(std::uint64_t trajectory, std::uint64_t step) const;

  // Unit-variance variate before the sqrt(gamma) scaling.
  double unit_variate(std::uint64_t trajectory, std::uint64_t step) const;

  // Uniform in [0,1) for initial-state selection, one per trajectory.
  double init_uniform(std::uint64_t trajectory) const;

  NoiseDist dist() const { return dist_; }
  double gamma() const { return gamma_; }
  std::uint64_t seed() const { return seed_; }

 private:
  NoiseDist dist_;
  double gamma_;
  std::uint64_t seed_;
};

}  // namespace phasemc
