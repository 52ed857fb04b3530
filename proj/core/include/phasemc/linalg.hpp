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

#include <Eigen/Dense>
#include <complex>

namespace phasemc {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Default tolerances; every check that uses one accepts an override.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kOrthonormalTol = 1e-10;
inline constexpr double kReconstructTol = 1e-10;

double norm_sq(const ComplexVector& v);
double frobenius_norm(const ComplexMatrix& m);

// Hermiticity test relative to the largest element magnitude.
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

// Validated Hermitian matrix; construction throws std::invalid_argument on a
// non-square or non-Hermitian input.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix m, double tol = kHermitianTol);

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

// result_j = sum_k m_jk v_k; throws on dimension mismatch
ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v);

struct HermitianEigen {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns match eigenvalues
};

// H = V diag(lambda) V^dagger with orthonormal columns.
HermitianEigen hermitian_eigen(const HermitianOperator& h);

// U = exp(-i H t / planck_h), assembled spectrally; unitary by construction.
ComplexMatrix unitary_propagator(const HermitianOperator& h, double t, double planck_h);

}  // namespace phasemc
