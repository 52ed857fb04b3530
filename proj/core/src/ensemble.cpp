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

#include "phasemc/ensemble.hpp"

#include <cmath>
#include <stdexcept>

namespace phasemc {

namespace {

// unbiased sample variance from raw sums, clamped against roundoff
double sample_variance(double sum, double sum_sq, std::int64_t n) {
  const double mean = sum / static_cast<double>(n);
  const double raw = sum_sq / static_cast<double>(n) - mean * mean;
  const double corrected = raw * static_cast<double>(n) / static_cast<double>(n - 1);
  return std::max(corrected, 0.0);
}

double standard_error(double sum, double sum_sq, std::int64_t n) {
  return std::sqrt(sample_variance(sum, sum_sq, n) / static_cast<double>(n));
}

}  // namespace

void ScalarAccumulator::add(Complex v) {
  ++count_;
  re_.add(v.real());
  im_.add(v.imag());
  re_sq_.add(v.real() * v.real());
  im_sq_.add(v.imag() * v.imag());
}

void ScalarAccumulator::merge(const ScalarAccumulator& other) {
  count_ += other.count_;
  re_.merge(other.re_);
  im_.merge(other.im_);
  re_sq_.merge(other.re_sq_);
  im_sq_.merge(other.im_sq_);
}

Complex ScalarAccumulator::mean() const {
  if (count_ == 0) throw std::invalid_argument("ScalarAccumulator: empty");
  return Complex(re_.value(), im_.value()) / static_cast<double>(count_);
}

double ScalarAccumulator::standard_error() const {
  if (count_ < 2) throw std::invalid_argument("ScalarAccumulator: need at least two samples");
  const double se_re = phasemc::standard_error(re_.value(), re_sq_.value(), count_);
  const double se_im = phasemc::standard_error(im_.value(), im_sq_.value(), count_);
  return std::sqrt(se_re * se_re + se_im * se_im);
}

EnsembleAccumulator::EnsembleAccumulator(Eigen::Index dim)
    : dim_(dim), upper_size_(static_cast<std::size_t>(dim) * (dim + 1) / 2) {
  if (dim < 1) throw std::invalid_argument("EnsembleAccumulator: dimension must be positive");
  z_re_.resize(dim);
  z_im_.resize(dim);
  z_re_sq_.resize(dim);
  z_im_sq_.resize(dim);
  outer_re_.resize(upper_size_);
  outer_im_.resize(upper_size_);
  outer_re_sq_.resize(upper_size_);
  outer_im_sq_.resize(upper_size_);
}

void EnsembleAccumulator::accumulate(const ComplexVector& z) {
  if (z.size() != dim_) throw std::invalid_argument("EnsembleAccumulator: dimension mismatch");
  ++count_;
  std::size_t idx = 0;
  for (Eigen::Index j = 0; j < dim_; ++j) {
    const double ar = z[j].real();
    const double ai = z[j].imag();
    z_re_[j].add(ar);
    z_im_[j].add(ai);
    z_re_sq_[j].add(ar * ar);
    z_im_sq_[j].add(ai * ai);
    for (Eigen::Index k = j; k < dim_; ++k, ++idx) {
      // z_j * conj(z_k); j == k gives an exactly real product
      const double br = z[k].real();
      const double bi = z[k].imag();
      const double re = ar * br + ai * bi;
      const double im = ai * br - ar * bi;
      outer_re_[idx].add(re);
      outer_im_[idx].add(im);
      outer_re_sq_[idx].add(re * re);
      outer_im_sq_[idx].add(im * im);
    }
  }
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("EnsembleAccumulator: dimension mismatch");
  count_ += other.count_;
  for (Eigen::Index j = 0; j < dim_; ++j) {
    z_re_[j].merge(other.z_re_[j]);
    z_im_[j].merge(other.z_im_[j]);
    z_re_sq_[j].merge(other.z_re_sq_[j]);
    z_im_sq_[j].merge(other.z_im_sq_[j]);
  }
  for (std::size_t i = 0; i < upper_size_; ++i) {
    outer_re_[i].merge(other.outer_re_[i]);
    outer_im_[i].merge(other.outer_im_[i]);
    outer_re_sq_[i].merge(other.outer_re_sq_[i]);
    outer_im_sq_[i].merge(other.outer_im_sq_[i]);
  }
}

DensityEstimate estimate_density(const EnsembleAccumulator& acc) {
  if (acc.count_ < 2) throw std::invalid_argument("estimate_density: need at least two samples");
  const auto n = acc.dim_;
  const double inv_n = 1.0 / static_cast<double>(acc.count_);

  DensityEstimate est;
  est.count = acc.count_;
  est.rho = ComplexMatrix(n, n);
  est.standard_error = RealMatrix(n, n);

  std::size_t idx = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j; k < n; ++k, ++idx) {
      const Complex value(acc.outer_re_[idx].value() * inv_n, acc.outer_im_[idx].value() * inv_n);
      const double se_re = standard_error(acc.outer_re_[idx].value(),
                                          acc.outer_re_sq_[idx].value(), acc.count_);
      const double se_im = standard_error(acc.outer_im_[idx].value(),
                                          acc.outer_im_sq_[idx].value(), acc.count_);
      const double se = std::sqrt(se_re * se_re + se_im * se_im);
      est.rho(j, k) = value;
      est.rho(k, j) = std::conj(value);
      est.standard_error(j, k) = se;
      est.standard_error(k, j) = se;
    }
  }
  est.trace = est.rho.trace().real();
  return est;
}

MeanEstimate estimate_mean(const EnsembleAccumulator& acc) {
  if (acc.count_ < 2) throw std::invalid_argument("estimate_mean: need at least two samples");
  const auto n = acc.dim_;
  const double inv_n = 1.0 / static_cast<double>(acc.count_);

  MeanEstimate est;
  est.count = acc.count_;
  est.mean = ComplexVector(n);
  est.standard_error = RealVector(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    est.mean[j] = Complex(acc.z_re_[j].value() * inv_n, acc.z_im_[j].value() * inv_n);
    const double se_re = standard_error(acc.z_re_[j].value(), acc.z_re_sq_[j].value(), acc.count_);
    const double se_im = standard_error(acc.z_im_[j].value(), acc.z_im_sq_[j].value(), acc.count_);
    est.standard_error[j] = std::sqrt(se_re * se_re + se_im * se_im);
  }
  return est;
}

void InitialEnsemble::validate(Eigen::Index expected_dim) const {
  if (kind == Kind::kDeterministic) {
    if (base_state.size() != expected_dim) {
      throw std::invalid_argument("InitialEnsemble: base state dimension mismatch");
    }
    if (std::abs(base_state.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("InitialEnsemble: base state must be normalized");
    }
    return;
  }
  if (weights.size() != expected_dim) {
    throw std::invalid_argument("InitialEnsemble: weights dimension mismatch");
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (weights[j] < 0.0) throw std::invalid_argument("InitialEnsemble: weights must be >= 0");
    total += weights[j];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("InitialEnsemble: weights must sum to 1");
  }
}

Eigen::Index InitialEnsemble::dim() const {
  return kind == Kind::kDeterministic ? base_state.size() : weights.size();
}

ComplexVector InitialEnsemble::draw(const NoiseSampler& sampler, std::uint64_t trajectory) const {
  if (kind == Kind::kDeterministic) return base_state;
  const double u = sampler.init_uniform(trajectory);
  double cumulative = 0.0;
  Eigen::Index pick = weights.size() - 1;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    cumulative += weights[j];
    if (u < cumulative) {
      pick = j;
      break;
    }
  }
  ComplexVector z = ComplexVector::Zero(weights.size());
  z[pick] = 1.0;
  return z;
}

ComplexMatrix InitialEnsemble::initial_density() const {
  if (kind == Kind::kDeterministic) {
    return base_state * base_state.adjoint();
  }
  ComplexMatrix rho = ComplexMatrix::Zero(weights.size(), weights.size());
  for (Eigen::Index j = 0; j < weights.size(); ++j) rho(j, j) = weights[j];
  return rho;
}

ComplexVector InitialEnsemble::initial_mean() const {
  if (kind == Kind::kDeterministic) return base_state;
  ComplexVector mean(weights.size());
  for (Eigen::Index j = 0; j < weights.size(); ++j) mean[j] = weights[j];
  return mean;
}

Complex bilinear_value(const BilinearObservable& f, const ComplexVector& z) {
  if (f.coefficients.rows() != z.size() || f.coefficients.cols() != z.size()) {
    throw std::invalid_argument("bilinear_value: dimension mismatch");
  }
  // sum_jk F_jk z_j conj(z_k)
  return (z.transpose() * f.coefficients * z.conjugate()).value();
}

MomentCheckResult moment_rate_check(std::span<const ComplexVector> states_t,
                                    std::span<const ComplexVector> states_t_plus_tau,
                                    const BilinearObservable& f, const HermitianOperator& h,
                                    const SimulationParams& p) {
  if (states_t.size() != states_t_plus_tau.size()) {
    throw std::invalid_argument("moment_rate_check: ensembles must be paired sample for sample");
  }
  if (states_t.size() < 2) {
    throw std::invalid_argument("moment_rate_check: need at least two paired samples");
  }
  const ComplexMatrix& hm = h.matrix();
  const ComplexMatrix& fm = f.coefficients;
  const Complex inv_ih = 1.0 / Complex(0.0, p.planck_h);

  ScalarAccumulator lhs_acc, rhs_acc, gamma_acc, diff_acc;
  for (std::size_t i = 0; i < states_t.size(); ++i) {
    const ComplexVector& z = states_t[i];
    const ComplexVector& zp = states_t_plus_tau[i];
    const Complex f_now = bilinear_value(f, z);
    const Complex f_next = bilinear_value(f, zp);
    const Complex lhs = (f_next - f_now) / p.tau;

    const ComplexVector fvec = inv_ih * (hm * z);
    // drift: sum_jk F_jk (f_j conj(z_k) + z_j conj(f_k))
    const Complex drift = (fvec.transpose() * fm * z.conjugate()).value() +
                          (z.transpose() * fm * fvec.conjugate()).value();
    // the two -gamma/2 drift pieces and the gamma diffusion piece, kept
    // separate so their exact cancellation is observed numerically
    const Complex gamma_drift = -0.5 * p.gamma * (f_now + f_now);
    const Complex gamma_diffusion = p.gamma * f_now;
    const Complex gamma_term = gamma_drift + gamma_diffusion;

    const Complex rhs = drift + gamma_term;
    lhs_acc.add(lhs);
    rhs_acc.add(rhs);
    gamma_acc.add(gamma_term);
    diff_acc.add(lhs - rhs);
  }

  MomentCheckResult result;
  result.lhs = lhs_acc.mean();
  result.rhs = rhs_acc.mean();
  result.gamma_term = gamma_acc.mean();
  result.discrepancy = std::abs(result.lhs - result.rhs);
  result.paired_se = diff_acc.standard_error();
  return result;
}

namespace {

ComparisonReport compare_elementwise(const ComplexMatrix& delta, const RealMatrix& se,
                                     double k_sigma, double bias) {
  ComparisonReport report;
  report.frobenius_error = delta.norm();
  report.max_element_error = delta.cwiseAbs().maxCoeff();
  report.mean_error = delta.cwiseAbs().mean();
  report.standard_error_scale = std::sqrt(se.array().square().sum());
  report.bias_allowance = bias;
  report.pass = true;
  for (Eigen::Index j = 0; j < delta.rows(); ++j) {
    for (Eigen::Index k = 0; k < delta.cols(); ++k) {
      if (std::abs(delta(j, k)) > k_sigma * se(j, k) + bias) {
        report.pass = false;
      }
    }
  }
  return report;
}

}  // namespace

ComparisonReport compare_to_oracle(const DensityEstimate& est, const ComplexMatrix& rho_ref,
                                   double k_sigma, double c_bias, double tau) {
  if (est.rho.rows() != rho_ref.rows() || est.rho.cols() != rho_ref.cols()) {
    throw std::invalid_argument("compare_to_oracle: dimension mismatch");
  }
  ComparisonReport report = compare_elementwise(est.rho - rho_ref, est.standard_error, k_sigma,
                                                c_bias * tau);
  report.trace_error = std::abs(est.rho.trace() - rho_ref.trace());
  return report;
}

ComparisonReport compare_estimates(const DensityEstimate& a, const DensityEstimate& b,
                                   double k_sigma) {
  if (a.rho.rows() != b.rho.rows() || a.rho.cols() != b.rho.cols()) {
    throw std::invalid_argument("compare_estimates: dimension mismatch");
  }
  const RealMatrix combined =
      (a.standard_error.array().square() + b.standard_error.array().square()).sqrt();
  ComparisonReport report = compare_elementwise(a.rho - b.rho, combined, k_sigma, 0.0);
  report.trace_error = std::abs(a.rho.trace() - b.rho.trace());
  return report;
}

}  // namespace phasemc
