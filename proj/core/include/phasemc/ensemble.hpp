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
#include <span>
#include <vector>

#include "phasemc/linalg.hpp"
#include "phasemc/noise.hpp"
#include "phasemc/propagator.hpp"

namespace phasemc {

// Compensated (Kahan) summation. Merging folds another partial sum in with a
// fixed two-add sequence, so a block-ordered reduction is bit-reproducible
// regardless of how blocks were scheduled across threads.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  void merge(const KahanSum& other) {
    add(other.sum_);
    add(-other.comp_);
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Mean/standard error accumulator for one complex sample series.
class ScalarAccumulator {
 public:
  void add(Complex v);
  void merge(const ScalarAccumulator& other);
  std::int64_t count() const { return count_; }
  Complex mean() const;
  // root-sum-square of the real- and imaginary-part standard errors
  double standard_error() const;

 private:
  std::int64_t count_ = 0;
  KahanSum re_, im_, re_sq_, im_sq_;
};

// rho_hat = (1/N) sum z z^dagger: the raw (uncentered) second moment, which
// is what plays the role of the density matrix here. The trace equals the
// mean squared norm of the trajectories, so it is 1 only up to the
// accumulated norm drift unless renormalization is on; it is reported rather
// than silently normalized away.
struct DensityEstimate {
  ComplexMatrix rho;
  RealMatrix standard_error;  // per element, rss of re/im standard errors
  double trace = 0.0;
  std::int64_t count = 0;
};

struct MeanEstimate {
  ComplexVector mean;
  RealVector standard_error;
  std::int64_t count = 0;
};

// Running sums of z and of the outer products z_j z_k^* over trajectories.
// Only the upper triangle of the outer sum is accumulated; the estimate is
// mirror-conjugated, so Hermitian symmetry holds exactly at every count.
class EnsembleAccumulator {
 public:
  explicit EnsembleAccumulator(Eigen::Index dim);

  void accumulate(const ComplexVector& z);

  // Folds in an accumulator covering the next contiguous trajectory-index
  // range. Merging in index order makes aggregates independent of the
  // worker schedule.
  void merge(const EnsembleAccumulator& other);

  Eigen::Index dim() const { return dim_; }
  std::int64_t count() const { return count_; }

  friend DensityEstimate estimate_density(const EnsembleAccumulator& acc);
  friend MeanEstimate estimate_mean(const EnsembleAccumulator& acc);

 private:
  Eigen::Index dim_;
  std::int64_t count_ = 0;
  std::size_t upper_size_;                      // dim*(dim+1)/2
  std::vector<KahanSum> z_re_, z_im_;           // per component
  std::vector<KahanSum> z_re_sq_, z_im_sq_;
  std::vector<KahanSum> outer_re_, outer_im_;   // upper triangle, row-major
  std::vector<KahanSum> outer_re_sq_, outer_im_sq_;
};

// Both throw std::invalid_argument for N < 2.
DensityEstimate estimate_density(const EnsembleAccumulator& acc);
MeanEstimate estimate_mean(const EnsembleAccumulator& acc);

// Initial condition of the trajectory ensemble: either one fixed state or a
// statistical mixture of basis states.
struct InitialEnsemble {
  enum class Kind { kDeterministic, kBasisMixture };

  Kind kind = Kind::kDeterministic;
  ComplexVector base_state;  // deterministic
  RealVector weights;        // basis-mixture; must sum to 1

  void validate(Eigen::Index dim) const;
  // Pure function of (sampler seed, trajectory), so mixtures pair up under
  // common random numbers across parameter sweeps.
  ComplexVector draw(const NoiseSampler& sampler, std::uint64_t trajectory) const;
  ComplexMatrix initial_density() const;
  ComplexVector initial_mean() const;
  Eigen::Index dim() const;
};

// F_jk coefficients of the bilinear function sum_jk F_jk z_j z_k^*.
// F need not be Hermitian.
struct BilinearObservable {
  ComplexMatrix coefficients;
};

Complex bilinear_value(const BilinearObservable& f, const ComplexVector& z);

// Paired one-step consistency check of the ensemble-average rate equation:
// lhs is the discrete time derivative of <F> between the paired ensembles,
// rhs the drift/noise expression evaluated at the earlier time. For bilinear
// F the -gamma/2 drift terms and the gamma diffusion term cancel exactly;
// gamma_term reports that cancellation (zero to roundoff), and rhs therefore
// carries no gamma dependence.
struct MomentCheckResult {
  Complex lhs;
  Complex rhs;
  Complex gamma_term;
  double discrepancy = 0.0;  // |lhs - rhs|
  double paired_se = 0.0;    // standard error of the per-trajectory lhs-rhs
};

MomentCheckResult moment_rate_check(std::span<const ComplexVector> states_t,
                                    std::span<const ComplexVector> states_t_plus_tau,
                                    const BilinearObservable& f, const HermitianOperator& h,
                                    const SimulationParams& p);

// Element-wise comparison of a Monte Carlo density estimate against a
// reference matrix. pass requires |delta_jk| <= k_sigma * se_jk + bias for
// every element, with bias = c_bias * tau covering the O(tau) discretization
// offset of the stochastic map.
struct ComparisonReport {
  double frobenius_error = 0.0;
  double max_element_error = 0.0;
  double trace_error = 0.0;
  double mean_error = 0.0;           // average |delta_jk|
  double standard_error_scale = 0.0; // rss of the per-element standard errors
  double bias_allowance = 0.0;
  bool pass = false;
};

ComparisonReport compare_to_oracle(const DensityEstimate& est, const ComplexMatrix& rho_ref,
                                   double k_sigma = 4.0, double c_bias = 1.0, double tau = 0.0);

// Pairwise comparison of two estimates (e.g. across a gamma sweep with
// common random numbers): |a-b|_jk <= k_sigma * sqrt(se_a^2 + se_b^2)_jk.
ComparisonReport compare_estimates(const DensityEstimate& a, const DensityEstimate& b,
                                   double k_sigma = 4.0);

}  // namespace phasemc
