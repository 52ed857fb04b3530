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

#include "phasemc/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "phasemc/observables.hpp"

namespace phasemc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("scenario: " + path + ": " + what);
}

void require_keys(const json& node, const std::string& path, const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!node.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : node.items()) {
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
  }
  for (const auto& key : required) {
    if (!node.contains(key)) fail(path + "." + key, "missing required key");
  }
}

double get_number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

std::string get_string(const json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected a string");
  return node.get<std::string>();
}

bool get_bool(const json& node, const std::string& path) {
  if (!node.is_boolean()) fail(path, "expected a boolean");
  return node.get<bool>();
}

std::vector<double> get_number_array(const json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(get_number(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ComplexMatrix parse_custom_matrix(const json& model, const std::string& path) {
  const auto re = model.at("matrix_re");
  if (!re.is_array() || re.empty()) fail(path + ".matrix_re", "expected a non-empty 2d array");
  const auto n = static_cast<Eigen::Index>(re.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  auto fill = [&](const json& rows, const std::string& p, bool imag) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
      fail(p, "expected " + std::to_string(n) + " rows");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& row = rows[static_cast<std::size_t>(j)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        fail(p + "[" + std::to_string(j) + "]", "expected " + std::to_string(n) + " columns");
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        const double v = get_number(row[static_cast<std::size_t>(k)],
                                    p + "[" + std::to_string(j) + "][" + std::to_string(k) + "]");
        if (imag) {
          m(j, k) += Complex(0.0, v);
        } else {
          m(j, k) += Complex(v, 0.0);
        }
      }
    }
  };
  fill(re, path + ".matrix_re", false);
  if (model.contains("matrix_im")) fill(model.at("matrix_im"), path + ".matrix_im", true);
  return m;
}

ModelSpec parse_model(const json& node) {
  require_keys(node, "model",
               {"name", "basis", "parameters", "matrix_re", "matrix_im"}, {"name"});
  ModelSpec spec;
  spec.name = model_name_from_string(get_string(node.at("name"), "model.name"));

  // the basis kind follows from the model; only its numbers are configurable
  spec.basis.kind = spec.name == ModelName::kHarmonicOscillatorTruncated
                        ? BasisKind::kOscillatorEigenbasis
                        : BasisKind::kSite;
  if (node.contains("basis")) {
    const auto& basis = node.at("basis");
    require_keys(basis, "model.basis", {"size", "omega", "mass", "lattice_spacing"}, {});
    if (basis.contains("size")) {
      const double size = get_number(basis.at("size"), "model.basis.size");
      spec.basis.size = static_cast<Eigen::Index>(size);
      if (static_cast<double>(spec.basis.size) != size) fail("model.basis.size", "not an integer");
    }
    if (basis.contains("omega")) spec.basis.omega = get_number(basis.at("omega"), "model.basis.omega");
    if (basis.contains("mass")) spec.basis.mass = get_number(basis.at("mass"), "model.basis.mass");
    if (basis.contains("lattice_spacing")) {
      spec.basis.lattice_spacing =
          get_number(basis.at("lattice_spacing"), "model.basis.lattice_spacing");
    }
  }

  if (node.contains("parameters")) {
    const auto& params = node.at("parameters");
    if (!params.is_object()) fail("model.parameters", "expected an object");
    for (const auto& [key, value] : params.items()) {
      spec.parameters[key] = get_number(value, "model.parameters." + key);
    }
  }

  if (spec.name == ModelName::kCustomMatrix) {
    if (!node.contains("matrix_re")) fail("model.matrix_re", "missing required key");
    spec.custom_entries = parse_custom_matrix(node, "model");
    spec.basis.size = spec.custom_entries->rows();
  } else if (node.contains("matrix_re") || node.contains("matrix_im")) {
    fail("model.matrix_re", "only valid for the custom-matrix model");
  }

  if (spec.name == ModelName::kTwoLevel && spec.basis.size == 0) spec.basis.size = 2;
  if (spec.basis.size == 0) fail("model.basis.size", "missing required key");
  return spec;
}

InitialEnsemble parse_initial(const json& node, Eigen::Index dim) {
  require_keys(node, "initial", {"kind", "state_re", "state_im", "weights"}, {"kind"});
  InitialEnsemble initial;
  const std::string kind = get_string(node.at("kind"), "initial.kind");
  if (kind == "deterministic") {
    initial.kind = InitialEnsemble::Kind::kDeterministic;
    if (!node.contains("state_re")) fail("initial.state_re", "missing required key");
    const auto re = get_number_array(node.at("state_re"), "initial.state_re");
    std::vector<double> im(re.size(), 0.0);
    if (node.contains("state_im")) {
      im = get_number_array(node.at("state_im"), "initial.state_im");
      if (im.size() != re.size()) fail("initial.state_im", "length differs from state_re");
    }
    initial.base_state = ComplexVector(static_cast<Eigen::Index>(re.size()));
    for (std::size_t j = 0; j < re.size(); ++j) {
      initial.base_state[static_cast<Eigen::Index>(j)] = Complex(re[j], im[j]);
    }
  } else if (kind == "basis-mixture") {
    initial.kind = InitialEnsemble::Kind::kBasisMixture;
    if (!node.contains("weights")) fail("initial.weights", "missing required key");
    const auto w = get_number_array(node.at("weights"), "initial.weights");
    initial.weights = RealVector(static_cast<Eigen::Index>(w.size()));
    for (std::size_t j = 0; j < w.size(); ++j) {
      initial.weights[static_cast<Eigen::Index>(j)] = w[j];
    }
  } else {
    fail("initial.kind", "must be 'deterministic' or 'basis-mixture'");
  }
  initial.validate(dim);
  return initial;
}

SimulationParams parse_params(const json& node, bool& stride_explicit) {
  require_keys(node, "params",
               {"tau", "gamma", "planck_h", "t_max", "scheme", "renormalize", "noise",
                "record_stride"},
               {"tau", "gamma", "t_max"});
  SimulationParams p;
  p.tau = get_number(node.at("tau"), "params.tau");
  p.gamma = get_number(node.at("gamma"), "params.gamma");
  p.t_max = get_number(node.at("t_max"), "params.t_max");
  if (node.contains("planck_h")) p.planck_h = get_number(node.at("planck_h"), "params.planck_h");
  if (node.contains("scheme")) {
    p.scheme = scheme_from_string(get_string(node.at("scheme"), "params.scheme"));
  }
  if (node.contains("renormalize")) {
    p.renormalize = get_bool(node.at("renormalize"), "params.renormalize");
  }
  if (node.contains("noise")) {
    p.noise_dist = noise_dist_from_string(get_string(node.at("noise"), "params.noise"));
  }
  if (node.contains("record_stride")) {
    const double stride = get_number(node.at("record_stride"), "params.record_stride");
    p.record_stride = static_cast<std::int64_t>(stride);
    if (static_cast<double>(p.record_stride) != stride) {
      fail("params.record_stride", "not an integer");
    }
    stride_explicit = true;
  } else {
    p.record_stride = p.step_count();  // record only t=0 and the final state
    stride_explicit = false;
  }
  p.validate();
  return p;
}

json scenario_to_json(const Scenario& s) {
  json doc;
  json model;
  model["name"] = to_string(s.model.name);
  model["basis"] = {{"size", static_cast<std::int64_t>(s.model.basis.size)},
                    {"omega", s.model.basis.omega},
                    {"mass", s.model.basis.mass},
                    {"lattice_spacing", s.model.basis.lattice_spacing}};
  if (!s.model.parameters.empty()) {
    json params;
    for (const auto& [key, value] : s.model.parameters) params[key] = value;
    model["parameters"] = params;
  }
  if (s.model.custom_entries) {
    const auto& m = *s.model.custom_entries;
    json re = json::array(), im = json::array();
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
      json re_row = json::array(), im_row = json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        re_row.push_back(m(j, k).real());
        im_row.push_back(m(j, k).imag());
      }
      re.push_back(re_row);
      im.push_back(im_row);
    }
    model["matrix_re"] = re;
    model["matrix_im"] = im;
  }
  doc["model"] = model;

  json initial;
  if (s.initial.kind == InitialEnsemble::Kind::kDeterministic) {
    initial["kind"] = "deterministic";
    json re = json::array(), im = json::array();
    for (Eigen::Index j = 0; j < s.initial.base_state.size(); ++j) {
      re.push_back(s.initial.base_state[j].real());
      im.push_back(s.initial.base_state[j].imag());
    }
    initial["state_re"] = re;
    initial["state_im"] = im;
  } else {
    initial["kind"] = "basis-mixture";
    json w = json::array();
    for (Eigen::Index j = 0; j < s.initial.weights.size(); ++j) {
      w.push_back(s.initial.weights[j]);
    }
    initial["weights"] = w;
  }
  doc["initial"] = initial;

  doc["params"] = {{"tau", s.params.tau},
                   {"gamma", s.params.gamma},
                   {"planck_h", s.params.planck_h},
                   {"t_max", s.params.t_max},
                   {"scheme", to_string(s.params.scheme)},
                   {"renormalize", s.params.renormalize},
                   {"noise", to_string(s.params.noise_dist)}};
  if (s.record_stride_explicit) doc["params"]["record_stride"] = s.params.record_stride;
  doc["trajectories"] = s.trajectories;
  doc["master_seed"] = s.master_seed;
  doc["observables"] = s.observables;
  if (!s.gamma_sweep.empty() || !s.tau_sweep.empty()) {
    json sweeps;
    if (!s.gamma_sweep.empty()) sweeps["gamma"] = s.gamma_sweep;
    if (!s.tau_sweep.empty()) sweeps["tau"] = s.tau_sweep;
    doc["sweeps"] = sweeps;
  }
  // the output directory is a deployment detail, not a semantic field; the
  // hash must not move when the same scenario is written somewhere else
  doc["output"] = {{"time_resolved", s.output.time_resolved}};
  return doc;
}

}  // namespace

void Scenario::validate() const {
  model.basis.validate();
  const HermitianOperator h = build_hamiltonian(model, params.planck_h);  // full model check
  initial.validate(h.dim());
  params.validate();
  if (trajectories < 1) throw std::invalid_argument("scenario: trajectories must be >= 1");
  for (const auto& label : observables) {
    (void)resolve_observable(label, model, params.planck_h);
  }
  for (const double g : gamma_sweep) {
    if (g < 0.0) throw std::invalid_argument("scenario: sweep gamma values must be >= 0");
  }
  for (const double t : tau_sweep) {
    SimulationParams cell = params;
    cell.tau = t;
    cell.record_stride = record_stride_explicit
                             ? std::min<std::int64_t>(params.record_stride, cell.step_count())
                             : cell.step_count();
    cell.validate();
  }
  if (output.directory.empty()) throw std::invalid_argument("scenario: output directory empty");
}

std::vector<double> Scenario::effective_gammas() const {
  return gamma_sweep.empty() ? std::vector<double>{params.gamma} : gamma_sweep;
}

std::vector<double> Scenario::effective_taus() const {
  return tau_sweep.empty() ? std::vector<double>{params.tau} : tau_sweep;
}

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("scenario: invalid JSON: ") + err.what());
  }
  require_keys(doc, "scenario",
               {"model", "initial", "params", "trajectories", "master_seed", "observables",
                "sweeps", "output"},
               {"model", "initial", "params", "trajectories", "master_seed"});

  Scenario s;
  s.model = parse_model(doc.at("model"));
  s.params = parse_params(doc.at("params"), s.record_stride_explicit);
  s.initial = parse_initial(doc.at("initial"), s.model.basis.size);

  const double trajectories = get_number(doc.at("trajectories"), "trajectories");
  s.trajectories = static_cast<std::int64_t>(trajectories);
  if (static_cast<double>(s.trajectories) != trajectories || s.trajectories < 1) {
    fail("trajectories", "must be a positive integer");
  }
  if (!doc.at("master_seed").is_number_unsigned() && !doc.at("master_seed").is_number_integer()) {
    fail("master_seed", "must be an integer");
  }
  s.master_seed = doc.at("master_seed").get<std::uint64_t>();

  if (doc.contains("observables")) {
    const auto& obs = doc.at("observables");
    if (!obs.is_array()) fail("observables", "expected an array of labels");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      s.observables.push_back(get_string(obs[i], "observables[" + std::to_string(i) + "]"));
    }
  }

  if (doc.contains("sweeps")) {
    const auto& sweeps = doc.at("sweeps");
    require_keys(sweeps, "sweeps", {"gamma", "tau"}, {});
    if (sweeps.contains("gamma")) s.gamma_sweep = get_number_array(sweeps.at("gamma"), "sweeps.gamma");
    if (sweeps.contains("tau")) s.tau_sweep = get_number_array(sweeps.at("tau"), "sweeps.tau");
  }

  if (doc.contains("output")) {
    const auto& output = doc.at("output");
    require_keys(output, "output", {"directory", "time_resolved"}, {});
    if (output.contains("directory")) {
      s.output.directory = get_string(output.at("directory"), "output.directory");
    }
    if (output.contains("time_resolved")) {
      s.output.time_resolved = get_bool(output.at("time_resolved"), "output.time_resolved");
    }
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("scenario: cannot open '" + file.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string canonical_scenario_json(const Scenario& s) {
  // nlohmann objects are key-sorted, so this dump is canonical
  return scenario_to_json(s).dump();
}

std::string scenario_hash(const Scenario& s) {
  const std::string canonical = canonical_scenario_json(s);
  std::uint64_t hash = 0xcbf29ce484222325ull;  // FNV-1a 64
  for (const unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

void apply_overrides(Scenario& s, const ScenarioOverrides& overrides) {
  if (overrides.seed) s.master_seed = *overrides.seed;
  if (overrides.trajectories) s.trajectories = *overrides.trajectories;
  if (overrides.tau) {
    s.params.tau = *overrides.tau;
    s.tau_sweep.clear();
  }
  if (overrides.gamma) {
    s.params.gamma = *overrides.gamma;
    s.gamma_sweep.clear();
  }
  if (overrides.output_dir) s.output.directory = *overrides.output_dir;
  s.validate();
}

}  // namespace phasemc
