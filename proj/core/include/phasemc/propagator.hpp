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

#include <cstdint>
#include <vector>

#include "phasemc/linalg.hpp"
#include "phasemc/noise.hpp"

namespace phasemc {

// One step advances z -> phase_factor * z + (tau/(i*h)) H z; the noise phase
// multiplies the whole vector, so by itself it never changes any |z_j|.
enum class Scheme {
  kExactPhase,  // phase factor e^{i sqrt(tau) xi}
  kExpanded,    // 1 + i sqrt(tau) xi - (tau/2) xi^2, same map up to O(tau^{3/2})
};

Scheme scheme_from_string(const std::string& name);
std::string to_string(Scheme scheme);
std::string to_string(NoiseDist dist);
NoiseDist noise_dist_from_string(const std::string& name);

struct SimulationParams {
  double tau = 1e-3;
  double gamma = 0.0;  // noise variance per unit time
  double planck_h = 1.0;
  double t_max = 1.0;
  Scheme scheme = Scheme::kExactPhase;
  bool renormalize = false;
  NoiseDist noise_dist = NoiseDist::kGaussian;
  std::int64_t record_stride = 1;

  // t_max/tau must be integral within 1e-9; silent truncation would hide
  // time-grid mismatches against the deterministic references.
  std::int64_t step_count() const;
  void validate() const;  // throws std::invalid_argument
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexVector> states;  // recorded every record_stride steps, plus the final state
  ComplexVector final_state;
  double norm_drift = 0.0;  // max over recorded states of | ||z|| - 1 |
};

ComplexVector step_exact_phase(const ComplexVector& z, const HermitianOperator& h,
                               const SimulationParams& p, double xi);
ComplexVector step_expanded(const ComplexVector& z, const HermitianOperator& h,
                            const SimulationParams& p, double xi);

// Advances round(t_max/tau) steps, one fresh xi per step from the
// (seed, trajectory_index, step) stream. Requires ||z0|| = 1 within 1e-12.
Trajectory run_trajectory(const ComplexVector& z0, const HermitianOperator& h,
                          const SimulationParams& p, const NoiseSampler& sampler,
                          std::uint64_t trajectory_index);

}  // namespace phasemc
