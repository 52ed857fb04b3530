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

#include "phasemc/models.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace phasemc {

namespace {

double require_param(const ModelSpec& spec, const std::string& key) {
  const auto it = spec.parameters.find(key);
  if (it == spec.parameters.end()) {
    throw std::invalid_argument("model '" + to_string(spec.name) + "': missing parameter '" +
                                key + "'");
  }
  return it->second;
}

void reject_unknown_params(const ModelSpec& spec, const std::set<std::string>& known) {
  for (const auto& [key, value] : spec.parameters) {
    if (!known.count(key)) {
      throw std::invalid_argument("model '" + to_string(spec.name) + "': unknown parameter '" +
                                  key + "'");
    }
  }
}

}  // namespace

void BasisSet::validate() const {
  if (size < 1) {
    throw std::invalid_argument("BasisSet: size must be >= 1");
  }
  if (kind == BasisKind::kOscillatorEigenbasis && (omega <= 0.0 || mass <= 0.0)) {
    throw std::invalid_argument("BasisSet: oscillator requires omega > 0 and mass > 0");
  }
}

ModelName model_name_from_string(const std::string& name) {
  if (name == "two-level") return ModelName::kTwoLevel;
  if (name == "tight-binding-chain") return ModelName::kTightBindingChain;
  if (name == "tight-binding-ring") return ModelName::kTightBindingRing;
  if (name == "harmonic-oscillator-truncated") return ModelName::kHarmonicOscillatorTruncated;
  if (name == "custom-matrix") return ModelName::kCustomMatrix;
  throw std::invalid_argument("unknown model name '" + name + "'");
}

std::string to_string(ModelName name) {
  switch (name) {
    case ModelName::kTwoLevel: return "two-level";
    case ModelName::kTightBindingChain: return "tight-binding-chain";
    case ModelName::kTightBindingRing: return "tight-binding-ring";
    case ModelName::kHarmonicOscillatorTruncated: return "harmonic-oscillator-truncated";
    case ModelName::kCustomMatrix: return "custom-matrix";
  }
  throw std::logic_error("unreachable model name");
}

HermitianOperator build_hamiltonian(const ModelSpec& spec, double planck_h) {
  spec.basis.validate();
  const Eigen::Index n = spec.basis.size;

  switch (spec.name) {
    case ModelName::kTwoLevel: {
      reject_unknown_params(spec, {"delta", "omega"});
      if (n != 2) {
        throw std::invalid_argument("two-level model requires basis size 2");
      }
      const double delta = require_param(spec, "delta");
      const double omega = require_param(spec, "omega");
      ComplexMatrix h(2, 2);
      h << delta / 2.0, omega, omega, -delta / 2.0;
      return HermitianOperator(std::move(h));
    }

    case ModelName::kTightBindingChain:
    case ModelName::kTightBindingRing: {
      reject_unknown_params(spec, {"epsilon", "hopping"});
      const bool ring = spec.name == ModelName::kTightBindingRing;
      if (n < 2) {
        throw std::invalid_argument("tight-binding model requires basis size >= 2");
      }
      if (ring && n < 3) {
        throw std::invalid_argument(
            "tight-binding-ring requires size >= 3 (a 2-site ring is degenerate with the chain)");
      }
      const double eps = require_param(spec, "epsilon");
      const double hop = require_param(spec, "hopping");
      ComplexMatrix h = ComplexMatrix::Zero(n, n);
      for (Eigen::Index j = 0; j < n; ++j) h(j, j) = eps;
      for (Eigen::Index j = 0; j + 1 < n; ++j) {
        h(j, j + 1) = -hop;
        h(j + 1, j) = -hop;
      }
      if (ring) {
        h(0, n - 1) = -hop;
        h(n - 1, 0) = -hop;
      }
      return HermitianOperator(std::move(h));
    }

    case ModelName::kHarmonicOscillatorTruncated: {
      reject_unknown_params(spec, {});
      if (spec.basis.kind != BasisKind::kOscillatorEigenbasis) {
        throw std::invalid_argument("harmonic oscillator requires the oscillator eigenbasis");
      }
      ComplexMatrix h = ComplexMatrix::Zero(n, n);
      for (Eigen::Index k = 0; k < n; ++k) {
        h(k, k) = planck_h * spec.basis.omega * (static_cast<double>(k) + 0.5);
      }
      return HermitianOperator(std::move(h));
    }

    case ModelName::kCustomMatrix: {
      reject_unknown_params(spec, {});
      if (!spec.custom_entries) {
        throw std::invalid_argument("custom-matrix model requires explicit entries");
      }
      if (spec.custom_entries->rows() != n || spec.custom_entries->cols() != n) {
        throw std::invalid_argument("custom-matrix entries do not match basis size");
      }
      return HermitianOperator(*spec.custom_entries);  // validates Hermiticity
    }
  }
  throw std::logic_error("unreachable model name");
}

HermitianOperator position_operator(const BasisSet& basis, double planck_h) {
  basis.validate();
  if (basis.kind != BasisKind::kOscillatorEigenbasis) {
    throw std::invalid_argument("position_operator: requires the oscillator eigenbasis");
  }
  const Eigen::Index n = basis.size;
  const double c = std::sqrt(planck_h / (2.0 * basis.mass * basis.omega));
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double elem = c * std::sqrt(static_cast<double>(k + 1));
    x(k, k + 1) = elem;
    x(k + 1, k) = elem;
  }
  return HermitianOperator(std::move(x));
}

HermitianOperator momentum_operator(const BasisSet& basis, double planck_h) {
  basis.validate();
  if (basis.kind != BasisKind::kOscillatorEigenbasis) {
    throw std::invalid_argument("momentum_operator: requires the oscillator eigenbasis");
  }
  const Eigen::Index n = basis.size;
  const double d = std::sqrt(planck_h * basis.mass * basis.omega / 2.0);
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double elem = d * std::sqrt(static_cast<double>(k + 1));
    p(k, k + 1) = Complex(0.0, -elem);  // -i d sqrt(k+1)
    p(k + 1, k) = Complex(0.0, elem);
  }
  return HermitianOperator(std::move(p));
}

HermitianOperator site_position_operator(const BasisSet& basis) {
  basis.validate();
  if (basis.kind != BasisKind::kSite) {
    throw std::invalid_argument("site_position_operator: requires the site basis");
  }
  ComplexMatrix x = ComplexMatrix::Zero(basis.size, basis.size);
  for (Eigen::Index j = 0; j < basis.size; ++j) {
    x(j, j) = basis.lattice_spacing * static_cast<double>(j);
  }
  return HermitianOperator(std::move(x));
}

}  // namespace phasemc
