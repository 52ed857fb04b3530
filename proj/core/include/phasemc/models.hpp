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

#include <map>
#include <optional>
#include <string>

#include "phasemc/linalg.hpp"

namespace phasemc {

enum class BasisKind { kSite, kOscillatorEigenbasis };

struct BasisSet {
  BasisKind kind = BasisKind::kSite;
  Eigen::Index size = 0;
  double omega = 1.0;            // oscillator frequency
  double mass = 1.0;             // oscillator mass
  double lattice_spacing = 1.0;  // site-basis position spacing

  void validate() const;  // throws std::invalid_argument
};

enum class ModelName {
  kTwoLevel,
  kTightBindingChain,
  kTightBindingRing,
  kHarmonicOscillatorTruncated,
  kCustomMatrix,
};

ModelName model_name_from_string(const std::string& name);
std::string to_string(ModelName name);

// Hamiltonian catalog entry. `parameters` carries the named reals each model
// needs (two-level: delta, omega; tight-binding: epsilon, hopping); the
// oscillator reads omega/mass from the basis.
struct ModelSpec {
  ModelName name = ModelName::kTwoLevel;
  BasisSet basis;
  std::map<std::string, double> parameters;
  std::optional<ComplexMatrix> custom_entries;
};

// Builds the model Hamiltonian. planck_h enters only the oscillator spectrum
// (the same constant the evolution equations use). Unknown or missing
// parameters and non-Hermitian custom matrices throw std::invalid_argument.
// A 2-site ring is rejected: chain and ring coincide ambiguously there, so
// the minimum ring size is 3.
HermitianOperator build_hamiltonian(const ModelSpec& spec, double planck_h);

// Ladder-operator matrix elements of x and p in the oscillator eigenbasis,
// truncated to basis.size. p = i*d*(a^dagger - a) with d = sqrt(h*m*omega/2),
// the sign fixed so [x,p] = +i*planck_h on the top-left (n-1) block (the
// truncation edge row/column is excluded from that identity).
HermitianOperator position_operator(const BasisSet& basis, double planck_h);
HermitianOperator momentum_operator(const BasisSet& basis, double planck_h);

// Site-basis position: diag(site index * lattice spacing).
HermitianOperator site_position_operator(const BasisSet& basis);

}  // namespace phasemc
