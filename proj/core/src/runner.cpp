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

#include "phasemc/runner.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "phasemc/observables.hpp"
#include "phasemc/reference.hpp"
#include "phasemc/version.hpp"

namespace phasemc {

namespace {

using nlohmann::json;

// Trajectories are aggregated in fixed blocks; workers claim whole blocks and
// the reduction walks blocks in index order, so the aggregate arithmetic is
// identical for any worker count.
constexpr std::int64_t kTrajectoryBlock = 256;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

struct CellGrid {
  SimulationParams params;
  std::vector<std::int64_t> record_steps;
  std::vector<double> times;
};

CellGrid make_cell_grid(const Scenario& s, double gamma, double tau) {
  CellGrid grid;
  grid.params = s.params;
  grid.params.gamma = gamma;
  grid.params.tau = tau;
  const std::int64_t steps = grid.params.step_count();
  grid.params.record_stride = s.record_stride_explicit
                                  ? std::min<std::int64_t>(s.params.record_stride, steps)
                                  : steps;
  grid.params.validate();
  grid.record_steps.push_back(0);
  for (std::int64_t k = 1; k <= steps; ++k) {
    if (k % grid.params.record_stride == 0 || k == steps) grid.record_steps.push_back(k);
  }
  grid.times.reserve(grid.record_steps.size());
  for (const std::int64_t k : grid.record_steps) {
    grid.times.push_back(static_cast<double>(k) * grid.params.tau);
  }
  return grid;
}

struct CellStats {
  DensityEstimate density;
  MeanEstimate mean;
  std::vector<ObservableResult> observables;
};

// Everything one sweep cell produces, estimates and oracle references alike.
struct CellData {
  CellGrid grid;
  std::vector<std::size_t> acc_indices;  // recorded indices carrying estimates
  std::vector<CellStats> stats;          // parallel to acc_indices
  std::vector<double> norm_drift;        // per recorded index, cumulative max
  std::vector<ComplexMatrix> liou;       // per recorded index
  std::vector<std::vector<Complex>> obs_ref;              // [recorded index][observable]
  std::vector<ComplexVector> mean_ref;                    // empty if unsupported
  std::vector<CovarianceRecursionResult> rec;             // empty if unsupported
  std::optional<ComplexMatrix> factor_ref_final;          // pure init only
};

struct BlockAccs {
  std::vector<EnsembleAccumulator> ens;             // per accumulated index
  std::vector<std::vector<ScalarAccumulator>> obs;  // [accumulated index][observable]
  std::vector<double> norm_drift;                   // per recorded index
};

BlockAccs make_block_accs(Eigen::Index dim, std::size_t acc_count, std::size_t rec_count,
                          std::size_t obs_count) {
  BlockAccs accs;
  accs.ens.reserve(acc_count);
  for (std::size_t i = 0; i < acc_count; ++i) accs.ens.emplace_back(dim);
  accs.obs.assign(acc_count, std::vector<ScalarAccumulator>(obs_count));
  accs.norm_drift.assign(rec_count, 0.0);
  return accs;
}

CellData run_cell(const Scenario& s, const HermitianOperator& h,
                  const std::vector<HermitianOperator>& obs_ops, const CellGrid& grid,
                  int threads) {
  CellData cell;
  cell.grid = grid;
  const std::size_t rec_count = grid.record_steps.size();
  if (s.output.time_resolved) {
    for (std::size_t i = 0; i < rec_count; ++i) cell.acc_indices.push_back(i);
  } else {
    cell.acc_indices.push_back(rec_count - 1);
  }

  const NoiseSampler sampler(grid.params.noise_dist, grid.params.gamma, s.master_seed);
  const std::int64_t n_traj = s.trajectories;
  const std::int64_t n_blocks = (n_traj + kTrajectoryBlock - 1) / kTrajectoryBlock;

  std::vector<std::optional<BlockAccs>> blocks(static_cast<std::size_t>(n_blocks));
  std::atomic<std::int64_t> next_block{0};
  std::exception_ptr worker_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    try {
      for (;;) {
        const std::int64_t b = next_block.fetch_add(1);
        if (b >= n_blocks) return;
        BlockAccs accs = make_block_accs(h.dim(), cell.acc_indices.size(), rec_count,
                                         obs_ops.size());
        const std::int64_t begin = b * kTrajectoryBlock;
        const std::int64_t end = std::min(begin + kTrajectoryBlock, n_traj);
        for (std::int64_t t = begin; t < end; ++t) {
          const ComplexVector z0 = s.initial.draw(sampler, static_cast<std::uint64_t>(t));
          const Trajectory traj =
              run_trajectory(z0, h, grid.params, sampler, static_cast<std::uint64_t>(t));
          double running = 0.0;
          for (std::size_t r = 0; r < rec_count; ++r) {
            running = std::max(running, std::abs(traj.states[r].norm() - 1.0));
            accs.norm_drift[r] = std::max(accs.norm_drift[r], running);
          }
          for (std::size_t a = 0; a < cell.acc_indices.size(); ++a) {
            const ComplexVector& state = traj.states[cell.acc_indices[a]];
            accs.ens[a].accumulate(state);
            for (std::size_t o = 0; o < obs_ops.size(); ++o) {
              accs.obs[a][o].add(quantum_average_state(obs_ops[o], state).value);
            }
          }
        }
        blocks[static_cast<std::size_t>(b)] = std::move(accs);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!worker_error) worker_error = std::current_exception();
    }
  };

  const int worker_count =
      std::max(1, threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()));
  {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (worker_error) std::rethrow_exception(worker_error);

  // ordered reduction over blocks
  BlockAccs total = make_block_accs(h.dim(), cell.acc_indices.size(), rec_count, obs_ops.size());
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    const BlockAccs& part = *blocks[static_cast<std::size_t>(b)];
    for (std::size_t a = 0; a < cell.acc_indices.size(); ++a) {
      total.ens[a].merge(part.ens[a]);
      for (std::size_t o = 0; o < obs_ops.size(); ++o) total.obs[a][o].merge(part.obs[a][o]);
    }
    for (std::size_t r = 0; r < rec_count; ++r) {
      total.norm_drift[r] = std::max(total.norm_drift[r], part.norm_drift[r]);
    }
  }
  cell.norm_drift = total.norm_drift;

  for (std::size_t a = 0; a < cell.acc_indices.size(); ++a) {
    CellStats stats;
    if (n_traj >= 2) {
      stats.density = estimate_density(total.ens[a]);
      stats.mean = estimate_mean(total.ens[a]);
      for (std::size_t o = 0; o < obs_ops.size(); ++o) {
        stats.observables.push_back(
            {total.obs[a][o].mean(), total.obs[a][o].standard_error(), s.observables[o]});
      }
    } else {
      // single trajectory: exact outer product, no standard errors
      const ComplexVector z0 = s.initial.draw(sampler, 0);
      const Trajectory traj = run_trajectory(z0, h, grid.params, sampler, 0);
      const ComplexVector& state = traj.states[cell.acc_indices[a]];
      stats.density.rho = state * state.adjoint();
      stats.density.standard_error = RealMatrix::Constant(h.dim(), h.dim(), kNaN);
      stats.density.trace = stats.density.rho.trace().real();
      stats.density.count = 1;
      stats.mean.mean = state;
      stats.mean.standard_error = RealVector::Constant(h.dim(), kNaN);
      stats.mean.count = 1;
      for (std::size_t o = 0; o < obs_ops.size(); ++o) {
        stats.observables.push_back(
            {quantum_average_state(obs_ops[o], state).value, kNaN, s.observables[o]});
      }
    }
    cell.stats.push_back(std::move(stats));
  }

  // oracle references on the recorded grid
  const HermitianEigen eig = hermitian_eigen(h);
  const ComplexMatrix rho0 = s.initial.initial_density();
  cell.liou.reserve(rec_count);
  cell.obs_ref.reserve(rec_count);
  for (std::size_t r = 0; r < rec_count; ++r) {
    ComplexVector phases(eig.eigenvalues.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
      phases[k] = std::exp(Complex(0.0, -eig.eigenvalues[k] * grid.times[r] / grid.params.planck_h));
    }
    const ComplexMatrix u = eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
    cell.liou.push_back(u * rho0 * u.adjoint());
    std::vector<Complex> refs;
    refs.reserve(obs_ops.size());
    for (const auto& op : obs_ops) {
      refs.push_back(quantum_average_density(op, cell.liou.back()).value);
    }
    cell.obs_ref.push_back(std::move(refs));
  }

  const bool moment_map_ok = grid.params.scheme == Scheme::kExactPhase && !grid.params.renormalize;
  if (moment_map_ok && grid.params.noise_dist == NoiseDist::kGaussian) {
    cell.mean_ref = exact_mean_recursion_path(s.initial.initial_mean(), h, grid.params,
                                              grid.record_steps);
  }
  if (moment_map_ok) {
    cell.rec = exact_covariance_recursion_path(rho0, h, grid.params, grid.record_steps);
  }
  if (s.initial.kind == InitialEnsemble::Kind::kDeterministic) {
    const ComplexVector psi =
        schrodinger_evolve(s.initial.base_state, h, grid.times.back(), grid.params.planck_h);
    cell.factor_ref_final = psi * psi.adjoint();
  }
  return cell;
}

// ---- CSV emission ----------------------------------------------------------

std::vector<std::string> cell_columns(Eigen::Index n, const std::vector<std::string>& obs) {
  std::vector<std::string> cols = {"time", "norm_drift", "trace", "rec_trace"};
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::string sj = std::to_string(j);
    for (const char* stem : {"mean_re_", "mean_im_", "mean_se_", "meanref_re_", "meanref_im_"}) {
      cols.push_back(stem + sj);
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::string jk = std::to_string(j) + "_" + std::to_string(k);
      for (const char* stem :
           {"rho_re_", "rho_im_", "rho_se_", "liou_re_", "liou_im_", "rec_re_", "rec_im_"}) {
        cols.push_back(stem + jk);
      }
    }
  }
  for (const auto& label : obs) {
    for (const char* stem : {"_re", "_im", "_se"}) cols.push_back("obs_" + label + stem);
    for (const char* stem : {"_re", "_im"}) cols.push_back("obsref_" + label + stem);
  }
  return cols;
}

void write_cell_csv(const std::filesystem::path& path, const Scenario& s, const CellData& cell,
                    const std::string& hash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const Eigen::Index n = cell.stats.front().density.rho.rows();

  out << "# phasemc cell result\n";
  out << "# engine_version: " << kEngineVersion << "\n";
  out << "# scenario_hash: " << hash << "\n";
  out << "# gamma: " << fmt(cell.grid.params.gamma) << " tau: " << fmt(cell.grid.params.tau)
      << " t_max: " << fmt(cell.grid.params.t_max) << " trajectories: " << s.trajectories
      << " master_seed: " << s.master_seed << " dim: " << n << "\n";
  out << "# scheme: " << to_string(cell.grid.params.scheme)
      << " noise: " << to_string(cell.grid.params.noise_dist)
      << " renormalize: " << (cell.grid.params.renormalize ? 1 : 0) << "\n";

  const auto cols = cell_columns(n, s.observables);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << "\n";

  for (std::size_t a = 0; a < cell.acc_indices.size(); ++a) {
    const std::size_t r = cell.acc_indices[a];
    const CellStats& stats = cell.stats[a];
    std::vector<double> row;
    row.push_back(cell.grid.times[r]);
    row.push_back(cell.norm_drift[r]);
    row.push_back(stats.density.trace);
    row.push_back(cell.rec.empty() ? kNaN : cell.rec[r].trace);
    for (Eigen::Index j = 0; j < n; ++j) {
      row.push_back(stats.mean.mean[j].real());
      row.push_back(stats.mean.mean[j].imag());
      row.push_back(stats.mean.standard_error[j]);
      row.push_back(cell.mean_ref.empty() ? kNaN : cell.mean_ref[r][j].real());
      row.push_back(cell.mean_ref.empty() ? kNaN : cell.mean_ref[r][j].imag());
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        row.push_back(stats.density.rho(j, k).real());
        row.push_back(stats.density.rho(j, k).imag());
        row.push_back(stats.density.standard_error(j, k));
        row.push_back(cell.liou[r](j, k).real());
        row.push_back(cell.liou[r](j, k).imag());
        row.push_back(cell.rec.empty() ? kNaN : cell.rec[r].matrix(j, k).real());
        row.push_back(cell.rec.empty() ? kNaN : cell.rec[r].matrix(j, k).imag());
      }
    }
    for (std::size_t o = 0; o < s.observables.size(); ++o) {
      row.push_back(stats.observables[o].value.real());
      row.push_back(stats.observables[o].value.imag());
      row.push_back(stats.observables[o].standard_error);
      row.push_back(cell.obs_ref[r][o].real());
      row.push_back(cell.obs_ref[r][o].imag());
    }
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt(row[c]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

// ---- comparisons ------------------------------------------------------------

// Final-time view of a cell, as needed by the comparison reports. Built
// directly after a run, or reconstructed from a cell CSV by `compare`.
struct CellFinal {
  int index = 0;
  double gamma = 0.0;
  double tau = 0.0;
  DensityEstimate density;
  MeanEstimate mean;
  ComplexMatrix liou;
  std::optional<ComplexMatrix> rec;
  std::optional<ComplexVector> mean_ref;
  std::optional<ComplexMatrix> factor_ref;
};

struct ComparisonRow {
  std::string kind;
  int cell_a = -1;
  double gamma_a = 0.0, tau_a = 0.0;
  int cell_b = -1;
  double gamma_b = 0.0, tau_b = 0.0;
  ComparisonReport report;
};

ComparisonReport compare_mean_to_ref(const MeanEstimate& est, const ComplexVector& ref,
                                     double k_sigma = 4.0) {
  ComparisonReport report;
  const ComplexVector delta = est.mean - ref;
  report.frobenius_error = delta.norm();
  report.max_element_error = delta.cwiseAbs().maxCoeff();
  report.mean_error = delta.cwiseAbs().mean();
  report.trace_error = 0.0;
  report.standard_error_scale = std::sqrt(est.standard_error.array().square().sum());
  report.bias_allowance = 0.0;
  report.pass = true;
  for (Eigen::Index j = 0; j < delta.size(); ++j) {
    if (std::abs(delta[j]) > k_sigma * est.standard_error[j]) report.pass = false;
  }
  return report;
}

std::vector<ComparisonRow> compute_comparisons(const std::vector<CellFinal>& cells) {
  std::vector<ComparisonRow> rows;
  for (const CellFinal& cell : cells) {
    if (cell.density.count < 2) continue;  // no standard errors to compare against
    ComparisonRow base;
    base.cell_a = cell.index;
    base.gamma_a = cell.gamma;
    base.tau_a = cell.tau;

    ComparisonRow liou = base;
    liou.kind = "liouville";
    liou.report = compare_to_oracle(cell.density, cell.liou, 4.0, 1.0, cell.tau);
    rows.push_back(liou);

    if (cell.rec) {
      ComparisonRow rec = base;
      rec.kind = "recursion";
      rec.report = compare_to_oracle(cell.density, *cell.rec, 4.0, 0.0, 0.0);
      rows.push_back(rec);
    }
    if (cell.factor_ref) {
      ComparisonRow fact = base;
      fact.kind = "factorization";
      fact.report = compare_to_oracle(cell.density, *cell.factor_ref, 4.0, 1.0, cell.tau);
      rows.push_back(fact);
    }
    if (cell.mean_ref) {
      ComparisonRow mean = base;
      mean.kind = "mean";
      mean.report = compare_mean_to_ref(cell.mean, *cell.mean_ref);
      rows.push_back(mean);
    }
  }
  // gamma invariance: cells sharing tau, pairwise, common random numbers
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if (cells[i].tau != cells[j].tau) continue;
      if (cells[i].gamma == cells[j].gamma) continue;
      if (cells[i].density.count < 2 || cells[j].density.count < 2) continue;
      ComparisonRow row;
      row.kind = "gamma-invariance";
      row.cell_a = cells[i].index;
      row.gamma_a = cells[i].gamma;
      row.tau_a = cells[i].tau;
      row.cell_b = cells[j].index;
      row.gamma_b = cells[j].gamma;
      row.tau_b = cells[j].tau;
      row.report = compare_estimates(cells[i].density, cells[j].density, 4.0);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_comparison_csv(const std::filesystem::path& path,
                          const std::vector<ComparisonRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "kind,cell_a,gamma_a,tau_a,cell_b,gamma_b,tau_b,frobenius_error,max_element_error,"
         "trace_error,mean_error,standard_error_scale,bias_allowance,pass\n";
  for (const ComparisonRow& row : rows) {
    out << row.kind << "," << row.cell_a << "," << fmt(row.gamma_a) << "," << fmt(row.tau_a)
        << "," << row.cell_b << "," << fmt(row.gamma_b) << "," << fmt(row.tau_b) << ","
        << fmt(row.report.frobenius_error) << "," << fmt(row.report.max_element_error) << ","
        << fmt(row.report.trace_error) << "," << fmt(row.report.mean_error) << ","
        << fmt(row.report.standard_error_scale) << "," << fmt(row.report.bias_allowance) << ","
        << (row.report.pass ? 1 : 0) << "\n";
  }
  if (!out) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

void print_comparisons(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  for (const ComparisonRow& row : rows) {
    out << (row.report.pass ? "[PASS] " : "[FAIL] ") << row.kind << " cell " << row.cell_a
        << " (gamma=" << row.gamma_a << ", tau=" << row.tau_a << ")";
    if (row.cell_b >= 0) out << " vs cell " << row.cell_b << " (gamma=" << row.gamma_b << ")";
    out << ": max_elem=" << row.report.max_element_error
        << " frob=" << row.report.frobenius_error << " se_scale=" << row.report.standard_error_scale
        << " bias_allowance=" << row.report.bias_allowance << "\n";
  }
}

CellFinal cell_final_from_data(int index, const CellData& cell) {
  CellFinal fin;
  fin.index = index;
  fin.gamma = cell.grid.params.gamma;
  fin.tau = cell.grid.params.tau;
  fin.density = cell.stats.back().density;
  fin.mean = cell.stats.back().mean;
  fin.liou = cell.liou.back();
  if (!cell.rec.empty()) fin.rec = cell.rec.back().matrix;
  if (!cell.mean_ref.empty()) fin.mean_ref = cell.mean_ref.back();
  fin.factor_ref = cell.factor_ref_final;
  return fin;
}

// ---- reading a finished run back ---------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (table.header.empty()) {
      table.header = fields;
    } else {
      std::vector<double> row;
      row.reserve(fields.size());
      for (const auto& f : fields) row.push_back(std::strtod(f.c_str(), nullptr));
      table.rows.push_back(std::move(row));
    }
  }
  if (table.header.empty() || table.rows.empty()) {
    throw std::runtime_error("'" + path.string() + "' contains no data rows");
  }
  return table;
}

std::map<std::string, std::size_t> header_index(const CsvTable& table) {
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < table.header.size(); ++c) index[table.header[c]] = c;
  return index;
}

json load_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) {
    throw std::runtime_error("'" + (dir / "manifest.json").string() +
                             "' not found; not a finished run directory");
  }
  json manifest;
  in >> manifest;
  return manifest;
}

CellFinal cell_final_from_csv(const Scenario& s, int index, double gamma, double tau,
                              const std::filesystem::path& file) {
  const CsvTable table = read_csv(file);
  const auto idx = header_index(table);
  const std::vector<double>& row = table.rows.back();  // final time
  const auto value = [&](const std::string& name) -> double {
    const auto it = idx.find(name);
    if (it == idx.end()) throw std::runtime_error("column '" + name + "' missing in " + file.string());
    return row[it->second];
  };

  const HermitianOperator h = build_hamiltonian(s.model, s.params.planck_h);
  const Eigen::Index n = h.dim();

  CellFinal fin;
  fin.index = index;
  fin.gamma = gamma;
  fin.tau = tau;
  fin.density.rho = ComplexMatrix(n, n);
  fin.density.standard_error = RealMatrix(n, n);
  fin.density.count = s.trajectories;
  fin.mean.mean = ComplexVector(n);
  fin.mean.standard_error = RealVector(n);
  fin.mean.count = s.trajectories;
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::string sj = std::to_string(j);
    fin.mean.mean[j] = Complex(value("mean_re_" + sj), value("mean_im_" + sj));
    fin.mean.standard_error[j] = value("mean_se_" + sj);
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::string jk = std::to_string(j) + "_" + std::to_string(k);
      fin.density.rho(j, k) = Complex(value("rho_re_" + jk), value("rho_im_" + jk));
      fin.density.standard_error(j, k) = value("rho_se_" + jk);
    }
  }
  fin.density.trace = value("trace");

  // oracle references recomputed from the embedded scenario
  const CellGrid grid = make_cell_grid(s, gamma, tau);
  const ComplexMatrix rho0 = s.initial.initial_density();
  const ComplexMatrix u = unitary_propagator(h, grid.times.back(), grid.params.planck_h);
  fin.liou = u * rho0 * u.adjoint();
  const bool moment_map_ok = grid.params.scheme == Scheme::kExactPhase && !grid.params.renormalize;
  if (moment_map_ok) {
    fin.rec = exact_covariance_recursion(rho0, h, grid.params, grid.record_steps.back()).matrix;
  }
  if (moment_map_ok && grid.params.noise_dist == NoiseDist::kGaussian) {
    fin.mean_ref = exact_mean_recursion(s.initial.initial_mean(), h, grid.params,
                                        grid.record_steps.back());
  }
  if (s.initial.kind == InitialEnsemble::Kind::kDeterministic) {
    const ComplexVector psi =
        schrodinger_evolve(s.initial.base_state, h, grid.times.back(), grid.params.planck_h);
    fin.factor_ref = psi * psi.adjoint();
  }
  return fin;
}

}  // namespace

RunManifest run_scenario(const Scenario& s, const RunOptions& options) {
  s.validate();
  const std::string hash = scenario_hash(s);
  const std::filesystem::path dir(s.output.directory);
  std::filesystem::create_directories(dir);

  std::vector<std::filesystem::path> written;
  try {
    const HermitianOperator h = build_hamiltonian(s.model, s.params.planck_h);
    std::vector<HermitianOperator> obs_ops;
    obs_ops.reserve(s.observables.size());
    for (const auto& label : s.observables) {
      obs_ops.push_back(resolve_observable(label, s.model, s.params.planck_h));
    }

    RunManifest manifest;
    manifest.scenario_hash = hash;
    manifest.engine_version = kEngineVersion;
    manifest.timestamp = iso8601_utc_now();
    manifest.directory = dir;

    std::vector<CellFinal> finals;
    int cell_index = 0;
    for (const double tau : s.effective_taus()) {
      for (const double gamma : s.effective_gammas()) {
        const CellGrid grid = make_cell_grid(s, gamma, tau);
        const CellData cell = run_cell(s, h, obs_ops, grid, options.threads);
        const std::string file = "cell_" + std::to_string(cell_index) + ".csv";
        write_cell_csv(dir / file, s, cell, hash);
        written.push_back(dir / file);
        manifest.cells.push_back({cell_index, gamma, tau, file});
        finals.push_back(cell_final_from_data(cell_index, cell));
        ++cell_index;
      }
    }

    const std::vector<ComparisonRow> rows = compute_comparisons(finals);
    manifest.comparison_file = "comparison.csv";
    write_comparison_csv(dir / manifest.comparison_file, rows);
    written.push_back(dir / manifest.comparison_file);
    manifest.all_comparisons_pass = true;
    for (const auto& row : rows) manifest.all_comparisons_pass &= row.report.pass;

    json doc;
    doc["engine_version"] = manifest.engine_version;
    doc["scenario_hash"] = manifest.scenario_hash;
    doc["timestamp"] = manifest.timestamp;
    doc["scenario"] = json::parse(canonical_scenario_json(s));
    doc["comparison_file"] = manifest.comparison_file;
    doc["all_comparisons_pass"] = manifest.all_comparisons_pass;
    json cells = json::array();
    for (const auto& cell : manifest.cells) {
      cells.push_back({{"index", cell.index},
                       {"gamma", cell.gamma},
                       {"tau", cell.tau},
                       {"file", cell.file}});
    }
    doc["cells"] = cells;
    {
      std::ofstream out(dir / "manifest.json");
      if (!out) throw std::runtime_error("cannot open manifest.json for writing");
      out << doc.dump(2) << "\n";
      if (!out) throw std::runtime_error("failed while writing manifest.json");
    }
    return manifest;
  } catch (...) {
    // a run directory without manifest.json is invalid; drop partial outputs
    for (const auto& file : written) {
      std::error_code ec;
      std::filesystem::remove(file, ec);
    }
    throw;
  }
}

int compare_run_dir(const std::filesystem::path& dir, std::ostream& out) {
  const json manifest = load_manifest(dir);
  const Scenario s = parse_scenario(manifest.at("scenario").dump());

  std::vector<CellFinal> finals;
  for (const auto& cell : manifest.at("cells")) {
    finals.push_back(cell_final_from_csv(s, cell.at("index").get<int>(),
                                         cell.at("gamma").get<double>(),
                                         cell.at("tau").get<double>(),
                                         dir / cell.at("file").get<std::string>()));
  }
  const std::vector<ComparisonRow> rows = compute_comparisons(finals);
  write_comparison_csv(dir / manifest.at("comparison_file").get<std::string>(), rows);
  print_comparisons(out, rows);
  bool all_pass = true;
  for (const auto& row : rows) all_pass &= row.report.pass;
  out << (all_pass ? "all comparisons pass\n" : "comparison failures present\n");
  return all_pass ? 0 : 3;
}

int report_run_dir(const std::filesystem::path& dir, std::ostream& out) {
  const json manifest = load_manifest(dir);
  const Scenario s = parse_scenario(manifest.at("scenario").dump());

  out << "run " << dir.string() << "\n";
  out << "  scenario_hash: " << manifest.at("scenario_hash").get<std::string>() << "\n";
  out << "  engine_version: " << manifest.at("engine_version").get<std::string>() << "\n";
  out << "  trajectories: " << s.trajectories << "  master_seed: " << s.master_seed << "\n";

  out << "cells:\n";
  for (const auto& cell : manifest.at("cells")) {
    const CsvTable table = read_csv(dir / cell.at("file").get<std::string>());
    const auto idx = header_index(table);
    const auto& row = table.rows.back();
    out << "  cell " << cell.at("index").get<int>() << ": gamma=" << cell.at("gamma").get<double>()
        << " tau=" << cell.at("tau").get<double>() << " norm_drift=" << row[idx.at("norm_drift")]
        << " trace=" << row[idx.at("trace")]
        << " trace_err=" << std::abs(row[idx.at("trace")] - 1.0) << "\n";
  }

  out << "comparisons:\n";
  std::ifstream comp(dir / manifest.at("comparison_file").get<std::string>());
  if (!comp) throw std::runtime_error("comparison summary missing");
  std::string line;
  std::getline(comp, line);  // header
  bool all_pass = true;
  while (std::getline(comp, line)) {
    if (line.empty()) continue;
    const bool pass = line.size() >= 2 && line[line.size() - 1] == '1';
    all_pass &= pass;
    out << "  " << (pass ? "[PASS] " : "[FAIL] ") << line << "\n";
  }
  out << (all_pass ? "result: PASS\n" : "result: FAIL\n");
  return 0;
}

}  // namespace phasemc
