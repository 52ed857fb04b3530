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

#include "phasemc/reference.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phasemc {

DensityMatrix::DensityMatrix(ComplexMatrix m, double herm_tol, double trace_tol, double psd_tol)
    : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
  }
  if (!is_hermitian(m_, herm_tol)) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian within tolerance");
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > trace_tol) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1 beyond tolerance");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -psd_tol) {
    throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& z) {
  if (std::abs(z.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("DensityMatrix::pure: state must be normalized");
  }
  return DensityMatrix(z * z.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const RealVector& weights) {
  ComplexMatrix m = ComplexMatrix::Zero(weights.size(), weights.size());
  for (Eigen::Index j = 0; j < weights.size(); ++j) m(j, j) = weights[j];
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

ComplexVector schrodinger_evolve(const ComplexVector& z0, const HermitianOperator& h, double t,
                                 double planck_h) {
  if (std::abs(z0.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("schrodinger_evolve: initial state must be normalized");
  }
  return unitary_propagator(h, t, planck_h) * z0;
}

DensityMatrix liouville_evolve(const DensityMatrix& rho0, const HermitianOperator& h, double t,
                               double planck_h) {
  const ComplexMatrix u = unitary_propagator(h, t, planck_h);
  return DensityMatrix(u * rho0.matrix() * u.adjoint());
}

ComplexMatrix liouville_evolve_rk4(const ComplexMatrix& rho0, const HermitianOperator& h,
                                   double t, double dt, double planck_h) {
  const double ratio = t / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw std::invalid_argument("liouville_evolve_rk4: dt does not divide t");
  }
  const auto deriv = [&](const ComplexMatrix& rho) -> ComplexMatrix {
    return (h.matrix() * rho - rho * h.matrix()) / Complex(0.0, planck_h);
  };
  ComplexMatrix rho = rho0;
  const auto steps = static_cast<std::int64_t>(rounded);
  for (std::int64_t k = 0; k < steps; ++k) {
    const ComplexMatrix k1 = deriv(rho);
    const ComplexMatrix k2 = deriv(rho + 0.5 * dt * k1);
    const ComplexMatrix k3 = deriv(rho + 0.5 * dt * k2);
    const ComplexMatrix k4 = deriv(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

namespace {

void require_moment_preconditions(const SimulationParams& p, bool gaussian_only) {
  if (p.scheme != Scheme::kExactPhase) {
    throw std::invalid_argument("moment recursion: requires the exact-phase scheme");
  }
  if (p.renormalize) {
    throw std::invalid_argument("moment recursion: requires renormalize=false");
  }
  if (gaussian_only && p.noise_dist != NoiseDist::kGaussian) {
    throw std::invalid_argument(
        "exact_mean_recursion: closed form holds for gaussian noise only");
  }
}

// E[cos(sqrt(tau) xi)] for the supported distributions
double phase_mean(const SimulationParams& p) {
  if (p.noise_dist == NoiseDist::kGaussian) return std::exp(-p.gamma * p.tau / 2.0);
  return std::cos(std::sqrt(p.tau * p.gamma));
}

}  // namespace

std::vector<ComplexVector> exact_mean_recursion_path(const ComplexVector& z0,
                                                     const HermitianOperator& h,
                                                     const SimulationParams& p,
                                                     const std::vector<std::int64_t>& steps_at) {
  require_moment_preconditions(p, /*gaussian_only=*/true);
  if (z0.size() != h.dim()) {
    throw std::invalid_argument("exact_mean_recursion: dimension mismatch");
  }
  // same arithmetic shape as one stochastic step so that gamma=0 matches the
  // Euler-integrated trajectory bit for bit
  const Complex c(phase_mean(p), 0.0);
  const Complex drift(0.0, -p.tau / p.planck_h);

  std::vector<ComplexVector> out;
  out.reserve(steps_at.size());
  const std::int64_t last = steps_at.empty() ? 0 : *std::max_element(steps_at.begin(), steps_at.end());
  ComplexVector z = z0;
  std::size_t cursor = 0;
  for (std::int64_t k = 0; k <= last; ++k) {
    while (cursor < steps_at.size() && steps_at[cursor] == k) {
      out.push_back(z);
      ++cursor;
    }
    if (k == last) break;
    ComplexVector hz = h.matrix() * z;
    z = c * z + drift * hz;
  }
  if (cursor != steps_at.size()) {
    throw std::invalid_argument("exact_mean_recursion: steps_at must be sorted and non-negative");
  }
  return out;
}

ComplexVector exact_mean_recursion(const ComplexVector& z0, const HermitianOperator& h,
                                   const SimulationParams& p, std::int64_t steps) {
  if (steps < 0) throw std::invalid_argument("exact_mean_recursion: steps must be >= 0");
  return exact_mean_recursion_path(z0, h, p, {steps}).front();
}

std::vector<CovarianceRecursionResult> exact_covariance_recursion_path(
    const ComplexMatrix& rho0, const HermitianOperator& h, const SimulationParams& p,
    const std::vector<std::int64_t>& steps_at) {
  require_moment_preconditions(p, /*gaussian_only=*/false);
  if (rho0.rows() != h.dim() || rho0.cols() != h.dim()) {
    throw std::invalid_argument("exact_covariance_recursion: dimension mismatch");
  }
  const double c1 = phase_mean(p);
  const Complex comm_coef = p.tau * c1 / Complex(0.0, p.planck_h);
  const double second = (p.tau * p.tau) / (p.planck_h * p.planck_h);
  const ComplexMatrix& hm = h.matrix();

  std::vector<CovarianceRecursionResult> out;
  out.reserve(steps_at.size());
  const std::int64_t last = steps_at.empty() ? 0 : *std::max_element(steps_at.begin(), steps_at.end());
  ComplexMatrix rho = rho0;
  std::size_t cursor = 0;
  for (std::int64_t k = 0; k <= last; ++k) {
    while (cursor < steps_at.size() && steps_at[cursor] == k) {
      out.push_back({rho, rho.trace().real()});
      ++cursor;
    }
    if (k == last) break;
    const ComplexMatrix hrho = hm * rho;
    rho = rho + comm_coef * (hrho - rho * hm) + second * (hrho * hm);
  }
  if (cursor != steps_at.size()) {
    throw std::invalid_argument(
        "exact_covariance_recursion: steps_at must be sorted and non-negative");
  }
  return out;
}

CovarianceRecursionResult exact_covariance_recursion(const ComplexMatrix& rho0,
                                                     const HermitianOperator& h,
                                                     const SimulationParams& p,
                                                     std::int64_t steps) {
  if (steps < 0) throw std::invalid_argument("exact_covariance_recursion: steps must be >= 0");
  return exact_covariance_recursion_path(rho0, h, p, {steps}).front();
}

// ---- underlying classical system ------------------------------------------

CanonicalState complex_to_canonical(const ComplexVector& z, double alpha, double planck_h) {
  if (alpha <= 0.0) throw std::invalid_argument("complex_to_canonical: alpha must be positive");
  if (planck_h <= 0.0) {
    throw std::invalid_argument("complex_to_canonical: planck_h must be positive");
  }
  const double beta = 1.0 / (2.0 * alpha * planck_h);
  CanonicalState c;
  c.alpha = alpha;
  c.beta = beta;
  c.q = z.real() / alpha;
  c.p = z.imag() / beta;
  return c;
}

ComplexVector canonical_to_complex(const CanonicalState& c) {
  if (c.alpha <= 0.0 || c.beta <= 0.0) {
    throw std::invalid_argument("canonical_to_complex: alpha and beta must be positive");
  }
  if (c.q.size() != c.p.size()) {
    throw std::invalid_argument("canonical_to_complex: q and p dimensions differ");
  }
  ComplexVector z(c.q.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    z[j] = Complex(c.alpha * c.q[j], c.beta * c.p[j]);
  }
  return z;
}

namespace {

void check_canonical(const CanonicalState& c, const HermitianOperator& h, double planck_h) {
  if (c.q.size() != h.dim() || c.p.size() != h.dim()) {
    throw std::invalid_argument("classical system: dimension mismatch");
  }
  const double product = 2.0 * c.alpha * c.beta;
  if (std::abs(product - 1.0 / planck_h) > 1e-12 * std::max(1.0, 1.0 / planck_h)) {
    throw std::invalid_argument("classical system: 2 alpha beta must equal 1/planck_h");
  }
}

// The flow matrix of Hamilton's equations for the quadratic Hamiltonian
//   H(q,p) = alpha^2 q^T A q + beta^2 p^T A p + 2 alpha beta p^T B q
// with H = A + iB (A symmetric, B antisymmetric):
//   d/dt [q; p] = [[2ab B, 2b^2 A], [-2a^2 A, 2ab B]] [q; p]
RealMatrix flow_matrix(const CanonicalState& c, const HermitianOperator& h) {
  const Eigen::Index n = h.dim();
  const RealMatrix a = h.matrix().real();
  const RealMatrix b = h.matrix().imag();
  RealMatrix k(2 * n, 2 * n);
  k.topLeftCorner(n, n) = 2.0 * c.alpha * c.beta * b;
  k.topRightCorner(n, n) = 2.0 * c.beta * c.beta * a;
  k.bottomLeftCorner(n, n) = -2.0 * c.alpha * c.alpha * a;
  k.bottomRightCorner(n, n) = 2.0 * c.alpha * c.beta * b;
  return k;
}

}  // namespace

double classical_energy(const CanonicalState& c, const HermitianOperator& h) {
  if (c.q.size() != h.dim() || c.p.size() != h.dim()) {
    throw std::invalid_argument("classical_energy: dimension mismatch");
  }
  const RealMatrix a = h.matrix().real();
  const RealMatrix b = h.matrix().imag();
  const double qa = c.q.dot(a * c.q);
  const double pa = c.p.dot(a * c.p);
  const double pb = c.p.dot(b * c.q);
  return c.alpha * c.alpha * qa + c.beta * c.beta * pa + 2.0 * c.alpha * c.beta * pb;
}

CanonicalState classical_evolve(const CanonicalState& c0, const HermitianOperator& h, double t,
                                double dt, double planck_h, ClassicalScheme scheme) {
  check_canonical(c0, h, planck_h);
  if (dt <= 0.0) throw std::invalid_argument("classical_evolve: dt must be positive");
  const double ratio = t / dt;
  const double rounded = std::round(ratio);
  if (t != 0.0 && std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw std::invalid_argument("classical_evolve: dt does not divide t");
  }
  const auto steps = static_cast<std::int64_t>(rounded);
  const Eigen::Index n = h.dim();

  CanonicalState c = c0;
  if (t == 0.0) return c;

  if (scheme == ClassicalScheme::kExactLinearFlow) {
    const RealMatrix flow = (flow_matrix(c0, h) * t).exp();
    RealVector state(2 * n);
    state << c0.q, c0.p;
    state = flow * state;
    c.q = state.head(n);
    c.p = state.tail(n);
    return c;
  }

  // Symmetric splitting: kick(dt/2) rot(dt/2) drift(dt) rot(dt/2) kick(dt/2).
  // Each subflow is exact, so the palindromic composition is order 2; with a
  // real Hamiltonian (B = 0) it reduces to plain leapfrog.
  const RealMatrix a = h.matrix().real();
  const RealMatrix b = h.matrix().imag();
  const double two_ab = 2.0 * c0.alpha * c0.beta;
  const bool has_cross = b.cwiseAbs().maxCoeff() > 0.0;
  const RealMatrix half_rot =
      has_cross ? RealMatrix((two_ab * 0.5 * dt * b).exp()) : RealMatrix::Identity(n, n);

  const double kick_coef = 2.0 * c0.alpha * c0.alpha * 0.5 * dt;
  const double drift_coef = 2.0 * c0.beta * c0.beta * dt;
  for (std::int64_t s = 0; s < steps; ++s) {
    c.p -= kick_coef * (a * c.q);
    if (has_cross) {
      c.q = half_rot * c.q;
      c.p = half_rot * c.p;
    }
    c.q += drift_coef * (a * c.p);
    if (has_cross) {
      c.q = half_rot * c.q;
      c.p = half_rot * c.p;
    }
    c.p -= kick_coef * (a * c.q);
  }
  return c;
}

}  // namespace phasemc
