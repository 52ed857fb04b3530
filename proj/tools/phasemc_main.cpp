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

// phasemc CLI: run scenario files, validate them, and inspect finished runs.
//
// Exit codes: 0 ok, 1 validation error, 2 runtime error,
//             3 comparison failure in `compare`.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "phasemc/runner.hpp"
#include "phasemc/scenario.hpp"
#include "phasemc/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trajectories;
  std::optional<double> tau;
  std::optional<double> gamma;
  std::optional<std::string> output;
};

phasemc::Scenario load_with_overrides(const std::string& file, const CliOverrides& cli) {
  phasemc::Scenario s = phasemc::load_scenario(file);
  phasemc::ScenarioOverrides overrides;
  overrides.seed = cli.seed;
  overrides.trajectories = cli.trajectories;
  overrides.tau = cli.tau;
  overrides.gamma = cli.gamma;
  overrides.output_dir = cli.output;
  phasemc::apply_overrides(s, overrides);
  return s;
}

void add_override_flags(CLI::App* cmd, CliOverrides& cli) {
  cmd->add_option("--seed", cli.seed, "Override the master seed");
  cmd->add_option("--trajectories", cli.trajectories, "Override the trajectory count");
  cmd->add_option("--tau", cli.tau, "Override the time step (clears any tau sweep)");
  cmd->add_option("--gamma", cli.gamma, "Override the noise variance (clears any gamma sweep)");
  cmd->add_option("--output", cli.output, "Override the output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phasemc: stochastic state-vector Monte Carlo with oracle cross-checks"};
  app.set_version_flag("--version", phasemc::kEngineVersion);
  app.require_subcommand(1);

  std::string scenario_file;
  std::string run_dir;
  int threads = 0;
  CliOverrides cli;

  CLI::App* run = app.add_subcommand("run", "Execute a scenario file");
  run->add_option("scenario", scenario_file, "Scenario JSON file")->required();
  run->add_option("--threads", threads, "Worker thread count (0 = hardware)");
  add_override_flags(run, cli);

  CLI::App* check = app.add_subcommand("check", "Validate a scenario file without running it");
  check->add_option("scenario", scenario_file, "Scenario JSON file")->required();
  add_override_flags(check, cli);

  CLI::App* compare = app.add_subcommand("compare", "Re-emit comparison reports for a run directory");
  compare->add_option("run_dir", run_dir, "Run output directory")->required();

  CLI::App* report = app.add_subcommand("report", "Print a human-readable run summary");
  report->add_option("run_dir", run_dir, "Run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run->parsed()) {
      const phasemc::Scenario s = load_with_overrides(scenario_file, cli);
      phasemc::RunOptions options;
      options.threads = threads;
      const phasemc::RunManifest manifest = phasemc::run_scenario(s, options);
      std::cout << "run complete: " << manifest.directory.string() << " ("
                << manifest.cells.size() << " cell" << (manifest.cells.size() == 1 ? "" : "s")
                << ", hash " << manifest.scenario_hash << ")\n";
      std::cout << (manifest.all_comparisons_pass ? "comparisons: PASS\n"
                                                  : "comparisons: FAIL (see comparison.csv)\n");
      return kExitOk;
    }
    if (check->parsed()) {
      const phasemc::Scenario s = load_with_overrides(scenario_file, cli);
      std::cout << "ok: " << scenario_file << " (hash " << phasemc::scenario_hash(s) << ")\n";
      return kExitOk;
    }
    if (compare->parsed()) {
      return phasemc::compare_run_dir(run_dir, std::cout);
    }
    if (report->parsed()) {
      return phasemc::report_run_dir(run_dir, std::cout);
    }
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
