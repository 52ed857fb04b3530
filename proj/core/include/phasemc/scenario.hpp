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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phasemc/ensemble.hpp"
#include "phasemc/models.hpp"
#include "phasemc/propagator.hpp"

namespace phasemc {

struct OutputOptions {
  std::string directory = "out";
  bool time_resolved = false;  // emit one row per recorded time instead of final only
};

// A complete, validated run description. Scenario documents are JSON; the
// grammar is documented in the repository README and parsing is strict:
// unknown keys are fatal so that a typo in gamma or tau cannot silently
// change the physics.
struct Scenario {
  ModelSpec model;
  InitialEnsemble initial;
  SimulationParams params;
  std::int64_t trajectories = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::string> observables;
  std::vector<double> gamma_sweep;  // empty means {params.gamma}
  std::vector<double> tau_sweep;    // empty means {params.tau}
  OutputOptions output;
  // false when the document omitted record_stride; each sweep cell then
  // records only its initial and final states
  bool record_stride_explicit = false;

  void validate() const;  // throws std::invalid_argument
  std::vector<double> effective_gammas() const;
  std::vector<double> effective_taus() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& file);

// FNV-1a over the canonical (key-sorted) serialization of the semantic
// fields; stable under key reordering in the source document.
std::string scenario_hash(const Scenario& s);

// Canonical JSON of the semantic fields (also what the hash is taken over).
std::string canonical_scenario_json(const Scenario& s);

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trajectories;
  std::optional<double> tau;
  std::optional<double> gamma;
  std::optional<std::string> output_dir;
};

// Command-line overrides; tau/gamma replace both the base parameter and any
// sweep over that axis.
void apply_overrides(Scenario& s, const ScenarioOverrides& overrides);

}  // namespace phasemc
