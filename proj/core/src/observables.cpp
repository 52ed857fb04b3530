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

#include "phasemc/observables.hpp"

#include <stdexcept>

namespace phasemc {

ObservableResult quantum_average_state(const HermitianOperator& a, const ComplexVector& z,
                                       std::string name) {
  if (a.dim() != z.size()) {
    throw std::invalid_argument("quantum_average_state: dimension mismatch");
  }
  const Complex value = (z.adjoint() * a.matrix() * z).value();
  return {value, 0.0, std::move(name)};
}

ObservableResult quantum_average_density(const HermitianOperator& a, const ComplexMatrix& rho,
                                         std::string name) {
  if (a.dim() != rho.rows() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("quantum_average_density: dimension mismatch");
  }
  const Complex value = (a.matrix() * rho).trace();
  return {value, 0.0, std::move(name)};
}

ObservableResult ensemble_observable(std::span<const ComplexVector> states,
                                     const HermitianOperator& a, std::string name) {
  if (states.size() < 2) {
    throw std::invalid_argument("ensemble_observable: need at least two trajectories");
  }
  ScalarAccumulator acc;
  for (const ComplexVector& z : states) {
    acc.add(quantum_average_state(a, z).value);
  }
  return {acc.mean(), acc.standard_error(), std::move(name)};
}

HermitianOperator resolve_observable(const std::string& label, const ModelSpec& model,
                                     double planck_h) {
  const Eigen::Index n = model.basis.size;
  if (label == "energy") return build_hamiltonian(model, planck_h);
  if (label == "identity") return HermitianOperator(ComplexMatrix::Identity(n, n));
  if (label == "position") {
    return model.basis.kind == BasisKind::kOscillatorEigenbasis
               ? position_operator(model.basis, planck_h)
               : site_position_operator(model.basis);
  }
  if (label == "momentum") {
    if (model.basis.kind != BasisKind::kOscillatorEigenbasis) {
      throw std::invalid_argument("observable 'momentum' requires the oscillator eigenbasis");
    }
    return momentum_operator(model.basis, planck_h);
  }
  if (label.rfind("population:", 0) == 0) {
    const long j = std::stol(label.substr(11));
    if (j < 0 || j >= n) {
      throw std::invalid_argument("observable '" + label + "': index out of range");
    }
    ComplexMatrix proj = ComplexMatrix::Zero(n, n);
    proj(j, j) = 1.0;
    return HermitianOperator(std::move(proj));
  }
  throw std::invalid_argument("unknown observable label '" + label + "'");
}

}  // namespace phasemc
