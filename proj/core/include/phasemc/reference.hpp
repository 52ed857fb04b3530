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
#include "phasemc/propagator.hpp"

namespace phasemc {

// Hermitian, trace-1, positive-semidefinite matrix. Tolerances are defaults
// and can be overridden at construction.
class DensityMatrix {
 public:
  static constexpr double kHermTol = 1e-10;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPsdTol = 1e-10;

  explicit DensityMatrix(ComplexMatrix m, double herm_tol = kHermTol,
                         double trace_tol = kTraceTol, double psd_tol = kPsdTol);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

  static DensityMatrix pure(const ComplexVector& z);
  static DensityMatrix diagonal(const RealVector& weights);
  static DensityMatrix maximally_mixed(Eigen::Index n);

 private:
  ComplexMatrix m_;
};

// Real canonical coordinates of the underlying classical system, related to
// the complex amplitudes by z = alpha q + i beta p with 2 alpha beta = 1/h.
struct CanonicalState {
  RealVector q;
  RealVector p;
  double alpha = 0.0;
  double beta = 0.0;
};

// z(t) = exp(-iHt/h) z0
ComplexVector schrodinger_evolve(const ComplexVector& z0, const HermitianOperator& h, double t,
                                 double planck_h);

// rho(t) = U rho0 U^dagger; structure-preserving by construction.
DensityMatrix liouville_evolve(const DensityMatrix& rho0, const HermitianOperator& h, double t,
                               double planck_h);

// RK4 on d rho/dt = (1/ih)[H, rho]. Validation fallback only; the spectral
// propagator above is the reference.
ComplexMatrix liouville_evolve_rk4(const ComplexMatrix& rho0, const HermitianOperator& h,
                                   double t, double dt, double planck_h);

// Closed-form expectation of the stochastic map: the ensemble mean after one
// step is M z with M = E[e^{i sqrt(tau) xi}] I + (tau/(i h)) H, and
// E[e^{i sqrt(tau) xi}] = e^{-gamma tau/2} for gaussian noise. Requires the
// exact-phase scheme, gaussian noise, and renormalize=false.
ComplexVector exact_mean_recursion(const ComplexVector& z0, const HermitianOperator& h,
                                   const SimulationParams& p, std::int64_t steps);
std::vector<ComplexVector> exact_mean_recursion_path(const ComplexVector& z0,
                                                     const HermitianOperator& h,
                                                     const SimulationParams& p,
                                                     const std::vector<std::int64_t>& steps_at);

// Exact one-step second-moment map of the stochastic update:
//   rho' = rho + tau c1 (1/(ih))(H rho - rho H) + (tau^2/h^2) H rho H,
// with c1 = E[cos(sqrt(tau) xi)]. The trace is preserved only to O(tau^2)
// per step, so the final trace is reported alongside the matrix.
struct CovarianceRecursionResult {
  ComplexMatrix matrix;
  double trace = 0.0;
};
CovarianceRecursionResult exact_covariance_recursion(const ComplexMatrix& rho0,
                                                     const HermitianOperator& h,
                                                     const SimulationParams& p,
                                                     std::int64_t steps);
std::vector<CovarianceRecursionResult> exact_covariance_recursion_path(
    const ComplexMatrix& rho0, const HermitianOperator& h, const SimulationParams& p,
    const std::vector<std::int64_t>& steps_at);

// ---- underlying classical system ----------------------------------------

// Exact linear bijection z = alpha q + i beta p; beta is fixed by
// 2 alpha beta = 1/planck_h.
CanonicalState complex_to_canonical(const ComplexVector& z, double alpha, double planck_h);
ComplexVector canonical_to_complex(const CanonicalState& c);
inline double default_alpha(double planck_h) { return 1.0 / std::sqrt(2.0 * planck_h); }

enum class ClassicalScheme {
  kExactLinearFlow,  // matrix exponential of the 2n x 2n Hamiltonian flow
  kLeapfrog,         // symmetric second-order splitting
};

// Integrates Hamilton's equations of the quadratic Hamiltonian obtained by
// substituting z = alpha q + i beta p into sum_jk H_jk z_k z_j^*.
CanonicalState classical_evolve(const CanonicalState& c0, const HermitianOperator& h, double t,
                                double dt, double planck_h,
                                ClassicalScheme scheme = ClassicalScheme::kExactLinearFlow);

// The Hamiltonian function value at (q, p).
double classical_energy(const CanonicalState& c, const HermitianOperator& h);

}  // namespace phasemc
