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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "phasemc/scenario.hpp"

namespace phasemc {

struct RunOptions {
  int threads = 0;  // 0 means hardware concurrency
};

struct CellInfo {
  int index = 0;
  double gamma = 0.0;
  double tau = 0.0;
  std::string file;
};

struct RunManifest {
  std::string scenario_hash;
  std::string engine_version;
  std::string timestamp;
  std::filesystem::path directory;
  std::vector<CellInfo> cells;
  std::string comparison_file;
  bool all_comparisons_pass = false;
};

// Executes every (gamma, tau) sweep cell: N trajectories per cell (blocks may
// run concurrently; aggregation order is fixed by trajectory index), oracle
// references, one CSV per cell, a comparison summary, and manifest.json.
// The numeric output bytes are a pure function of (scenario, overrides);
// the worker count never changes them.
RunManifest run_scenario(const Scenario& s, const RunOptions& options = {});

// Recomputes the comparison reports of a finished run directory from its CSV
// files and embedded scenario, rewrites comparison.csv, and prints the table.
// Returns 0 when every comparison passes, 3 otherwise.
int compare_run_dir(const std::filesystem::path& dir, std::ostream& out);

// Human-readable summary of a run directory, including the pass/fail table.
// Returns 0; I/O problems raise std::runtime_error.
int report_run_dir(const std::filesystem::path& dir, std::ostream& out);

}  // namespace phasemc
