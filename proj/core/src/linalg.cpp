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

#include "phasemc/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace phasemc {

double norm_sq(const ComplexVector& v) { return v.squaredNorm(); }

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  const double bound = tol * std::max(scale, 1.0);
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= bound;
}

HermitianOperator::HermitianOperator(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("HermitianOperator: matrix must be square");
  }
  if (m_.rows() == 0) {
    throw std::invalid_argument("HermitianOperator: dimension must be positive");
  }
  if (!is_hermitian(m_, tol)) {
    throw std::invalid_argument("HermitianOperator: matrix is not Hermitian within tolerance");
  }
}

ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v) {
  if (m.cols() != v.size()) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
  return m * v;
}

HermitianEigen hermitian_eigen(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigen: eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix unitary_propagator(const HermitianOperator& h, double t, double planck_h) {
  if (planck_h <= 0.0) {
    throw std::invalid_argument("unitary_propagator: planck_h must be positive");
  }
  const HermitianEigen eig = hermitian_eigen(h);
  ComplexVector phases(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases[k] = std::exp(Complex(0.0, -eig.eigenvalues[k] * t / planck_h));
  }
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace phasemc
