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

#include "phasemc/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace phasemc {

Scheme scheme_from_string(const std::string& name) {
  if (name == "exact-phase") return Scheme::kExactPhase;
  if (name == "expanded") return Scheme::kExpanded;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::kExactPhase ? "exact-phase" : "expanded";
}

NoiseDist noise_dist_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseDist::kGaussian;
  if (name == "rademacher") return NoiseDist::kRademacher;
  throw std::invalid_argument("unknown noise distribution '" + name + "'");
}

std::string to_string(NoiseDist dist) {
  return dist == NoiseDist::kGaussian ? "gaussian" : "rademacher";
}

std::int64_t SimulationParams::step_count() const {
  const double ratio = t_max / tau;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw std::invalid_argument("SimulationParams: t_max/tau is not an integer step count");
  }
  return static_cast<std::int64_t>(rounded);
}

void SimulationParams::validate() const {
  if (tau <= 0.0) throw std::invalid_argument("SimulationParams: tau must be positive");
  if (gamma < 0.0) throw std::invalid_argument("SimulationParams: gamma must be non-negative");
  if (planck_h <= 0.0) throw std::invalid_argument("SimulationParams: planck_h must be positive");
  if (t_max <= 0.0) throw std::invalid_argument("SimulationParams: t_max must be positive");
  if (tau > t_max) throw std::invalid_argument("SimulationParams: tau must not exceed t_max");
  if (record_stride < 1) {
    throw std::invalid_argument("SimulationParams: record_stride must be positive");
  }
  (void)step_count();
}

namespace {

inline void check_dims(const ComplexVector& z, const HermitianOperator& h) {
  if (z.size() != h.dim()) {
    throw std::invalid_argument("stochastic step: state and Hamiltonian dimensions differ");
  }
}

inline ComplexVector apply_step(const ComplexVector& z, const HermitianOperator& h,
                                const SimulationParams& p, Complex phase_factor) {
  // drift coefficient tau/(i h) = -i tau/h
  const Complex drift(0.0, -p.tau / p.planck_h);
  ComplexVector hz = h.matrix() * z;
  ComplexVector out = phase_factor * z + drift * hz;
  if (p.renormalize) out /= out.norm();
  return out;
}

}  // namespace

ComplexVector step_exact_phase(const ComplexVector& z, const HermitianOperator& h,
                               const SimulationParams& p, double xi) {
  check_dims(z, h);
  const double theta = std::sqrt(p.tau) * xi;
  return apply_step(z, h, p, Complex(std::cos(theta), std::sin(theta)));
}

ComplexVector step_expanded(const ComplexVector& z, const HermitianOperator& h,
                            const SimulationParams& p, double xi) {
  check_dims(z, h);
  // retains the sampled xi^2, not its mean gamma
  const Complex factor(1.0 - 0.5 * p.tau * xi * xi, std::sqrt(p.tau) * xi);
  return apply_step(z, h, p, factor);
}

Trajectory run_trajectory(const ComplexVector& z0, const HermitianOperator& h,
                          const SimulationParams& p, const NoiseSampler& sampler,
                          std::uint64_t trajectory_index) {
  p.validate();
  check_dims(z0, h);
  if (std::abs(z0.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("run_trajectory: initial state must be normalized");
  }

  const std::int64_t steps = p.step_count();
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps / p.record_stride) + 2);

  ComplexVector z = z0;
  auto record = [&](std::int64_t k) {
    traj.times.push_back(static_cast<double>(k) * p.tau);
    traj.states.push_back(z);
    traj.norm_drift = std::max(traj.norm_drift, std::abs(z.norm() - 1.0));
  };

  record(0);
  for (std::int64_t k = 0; k < steps; ++k) {
    const double xi = sampler.xi(trajectory_index, static_cast<std::uint64_t>(k));
    z = (p.scheme == Scheme::kExactPhase) ? step_exact_phase(z, h, p, xi)
                                          : step_expanded(z, h, p, xi);
    if ((k + 1) % p.record_stride == 0 || k + 1 == steps) record(k + 1);
  }
  traj.final_state = z;
  return traj;
}

}  // namespace phasemc
