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

#include <span>
#include <string>

#include "phasemc/ensemble.hpp"
#include "phasemc/linalg.hpp"
#include "phasemc/models.hpp"

namespace phasemc {

// The imaginary part of a quantum average of a Hermitian operator is pure
// roundoff; it is reported rather than discarded because a nonzero residue
// is a cheap corruption detector.
struct ObservableResult {
  Complex value;
  double standard_error = 0.0;  // zero unless ensemble-derived
  std::string operator_name;
};

// z^dagger A z
ObservableResult quantum_average_state(const HermitianOperator& a, const ComplexVector& z,
                                       std::string name = {});

// trace(A rho); equals the state form exactly for pure rho = z z^dagger
ObservableResult quantum_average_density(const HermitianOperator& a, const ComplexMatrix& rho,
                                         std::string name = {});

// Mean of z^dagger A z over trajectory final states, with standard error.
// Algebraically identical to trace(A rho_hat) of the same ensemble.
ObservableResult ensemble_observable(std::span<const ComplexVector> states,
                                     const HermitianOperator& a, std::string name = {});

// Resolves an observable label against the model: "energy", "identity",
// "position", "momentum", "population:<j>". Position and momentum use the
// ladder matrix elements in the oscillator eigenbasis and the lattice
// site-index operator in the site basis.
HermitianOperator resolve_observable(const std::string& label, const ModelSpec& model,
                                     double planck_h);

}  // namespace phasemc
