// Copyright 2026 The dsindy Authors
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

#include "dsindy/experiment.hpp"

#include <cmath>
#include <set>

#include "dsindy/errors.hpp"
#include "dsindy/io.hpp"
#include "dsindy/random.hpp"

namespace dsindy {

using nlohmann::json;

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::VdpParam: return "vdp-param";
    case ExperimentKind::VdpStructure: return "vdp-structure";
    case ExperimentKind::PendulumEnergy: return "pendulum-energy";
    case ExperimentKind::PendulumSwingUp: return "pendulum-swingup";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::VdpParam, ExperimentKind::VdpStructure, ExperimentKind::PendulumEnergy,
                 ExperimentKind::PendulumSwingUp})
    if (to_string(k) == s) return k;
  throw ConfigError("experiment", "unknown experiment '" + s + "'");
}

namespace {

bool is_vdp(const ExperimentConfig& c) {
  return c.experiment == ExperimentKind::VdpParam || c.experiment == ExperimentKind::VdpStructure;
}

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

void check_keys(const json& obj, const std::string& path, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(join(path, it.key()), "unknown key");
}

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& obj, const std::string& path, const std::string& key, double def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number()) throw ConfigError(join(path, key), "expected a number");
  const double d = v->get<double>();
  if (!std::isfinite(d)) throw ConfigError(join(path, key), "must be finite");
  return d;
}

double positive(const json& obj, const std::string& path, const std::string& key, double def) {
  const double d = number(obj, path, key, def);
  if (!(d > 0.0)) throw ConfigError(join(path, key), "must be > 0");
  return d;
}

double non_negative(const json& obj, const std::string& path, const std::string& key, double def) {
  const double d = number(obj, path, key, def);
  if (!(d >= 0.0)) throw ConfigError(join(path, key), "must be >= 0");
  return d;
}

long long integer(const json& obj, const std::string& path, const std::string& key, long long def, long long min) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  const long long i = v->get<long long>();
  if (i < min) throw ConfigError(join(path, key), "must be >= " + std::to_string(min));
  return i;
}

std::uint64_t seed_value(const json& obj, const std::string& path, const std::string& key, std::uint64_t def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<long long>() >= 0) return static_cast<std::uint64_t>(v->get<long long>());
  throw ConfigError(join(path, key), "expected a non-negative integer");
}

bool boolean(const json& obj, const std::string& path, const std::string& key, bool def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::string text(const json& obj, const std::string& path, const std::string& key, const std::string& def) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_string()) throw ConfigError(join(path, key), "expected a string");
  return v->get<std::string>();
}

Vec vector(const json& v, const std::string& path, Index size) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  if (static_cast<Index>(v.size()) != size)
    throw ConfigError(path, "expected " + std::to_string(size) + " entries, found " + std::to_string(v.size()));
  Vec out(size);
  for (Index i = 0; i < size; ++i) {
    const json& e = v[static_cast<std::size_t>(i)];
    if (!e.is_number() || !std::isfinite(e.get<double>())) throw ConfigError(path, "entries must be finite numbers");
    out[i] = e.get<double>();
  }
  return out;
}

std::vector<double> to_vector(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Index state_dim(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::VdpParam:
    case ExperimentKind::VdpStructure: return 2;
    default: return 6;
  }
}

FitConfig fit_defaults(ExperimentKind k) {
  if (k == ExperimentKind::PendulumSwingUp) return swing_up_fit_defaults();
  FitConfig f;
  f.solver.lambda = k == ExperimentKind::PendulumEnergy ? 1e-5 : 0.05;
  return f;
}

json library_defaults(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::VdpParam:
    case ExperimentKind::VdpStructure:
      return {{"state_dim", 2}, {"polynomial", {{"max_degree", 2}, {"include_constant", true}}}};
    case ExperimentKind::PendulumEnergy: return {{"preset", "energy"}, {"mixed_products", false}};
    case ExperimentKind::PendulumSwingUp: return {{"preset", "swing-up"}};
  }
  return {};
}

CandidateLibrary build_library(const json& spec) {
  try {
    if (spec.is_object() && spec.contains("preset")) {
      check_keys(spec, "library", {"preset", "mixed_products"});
      const std::string p = text(spec, "library", "preset", "");
      if (p == "energy") return default_energy_library(boolean(spec, "library", "mixed_products", false));
      if (p == "swing-up") return default_control_library();
      throw ConfigError("library.preset", "unknown library preset '" + p + "'");
    }
    return library_from_recipe(spec);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("library", e.what());
  }
}

void check_library(const CandidateLibrary& lib, ExperimentKind k) {
  const Index n = k == ExperimentKind::PendulumEnergy ? 4 : state_dim(k);
  const Index r = k == ExperimentKind::PendulumSwingUp ? 1 : 0;
  if (lib.state_dim() != n)
    throw ConfigError("library", "state dimension " + std::to_string(lib.state_dim()) + " does not match " +
                                     std::to_string(n));
  if (lib.control_dim() != r)
    throw ConfigError("library", "control dimension " + std::to_string(lib.control_dim()) + " does not match " +
                                     std::to_string(r));
}

json derivative_json(const DerivativeOptions& d) {
  return {{"smooth", d.smooth},           {"smooth_window", d.smooth_window}, {"smooth_order", d.smooth_order},
          {"method", to_string(d.method)}, {"window", d.window},               {"poly_order", d.poly_order}};
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j) {
  check_keys(j, "", {"experiment", "name", "system", "noise", "library", "solver", "derivative", "integration",
                     "validation", "io", "swingup"});
  if (!j.contains("experiment")) throw ConfigError("experiment", "missing");
  ExperimentConfig c;
  c.experiment = experiment_kind_from_string(text(j, "", "experiment", ""));
  c.name = text(j, "", "name", to_string(c.experiment));
  const Index n = state_dim(c.experiment);

  // system
  if (const json* s = find(j, "system")) {
    if (is_vdp(c)) {
      check_keys(*s, "system", {"alpha", "alpha_nominal"});
      c.alpha = number(*s, "system", "alpha", c.alpha);
      c.alpha_nominal = number(*s, "system", "alpha_nominal", c.alpha_nominal);
    } else {
      check_keys(*s, "system", {"params", "friction"});
      if (const json* p = find(*s, "params")) {
        try {
          c.pendulum = pendulum_params_from_json(*p);
          c.pendulum.validate();
        } catch (const std::exception& e) {
          throw ConfigError("system.params", e.what());
        }
      }
      c.friction = boolean(*s, "system", "friction", c.experiment == ExperimentKind::PendulumEnergy);
    }
  } else {
    c.friction = c.experiment == ExperimentKind::PendulumEnergy;
  }

  if (const json* s = find(j, "noise")) {
    check_keys(*s, "noise", {"seed", "sigma"});
    c.noise.seed = seed_value(*s, "noise", "seed", c.noise.seed);
    c.noise.sigma = non_negative(*s, "noise", "sigma", c.noise.sigma);
  }

  c.library_spec = j.contains("library") ? j.at("library") : library_defaults(c.experiment);
  c.library = build_library(c.library_spec);
  check_library(c.library, c.experiment);

  c.fit = fit_defaults(c.experiment);
  if (const json* s = find(j, "solver")) {
    check_keys(*s, "solver", {"lambda", "max_iters", "normalize", "min_rows_per_term", "residual_ceiling"});
    c.fit.solver.lambda = non_negative(*s, "solver", "lambda", c.fit.solver.lambda);
    c.fit.solver.max_iters = static_cast<int>(integer(*s, "solver", "max_iters", c.fit.solver.max_iters, 1));
    c.fit.solver.normalize = boolean(*s, "solver", "normalize", c.fit.solver.normalize);
    c.fit.min_rows_per_term = integer(*s, "solver", "min_rows_per_term", c.fit.min_rows_per_term, 1);
    if (find(*s, "residual_ceiling")) c.fit.residual_ceiling = positive(*s, "solver", "residual_ceiling", 0.0);
  }
  if (const json* s = find(j, "derivative")) {
    check_keys(*s, "derivative", {"smooth", "smooth_window", "smooth_order", "method", "window", "poly_order"});
    auto& d = c.fit.derivative;
    d.smooth = boolean(*s, "derivative", "smooth", d.smooth);
    d.smooth_window = static_cast<int>(integer(*s, "derivative", "smooth_window", d.smooth_window, 1));
    d.smooth_order = static_cast<int>(integer(*s, "derivative", "smooth_order", d.smooth_order, 1));
    try {
      d.method = diff_method_from_string(text(*s, "derivative", "method", to_string(d.method)));
    } catch (const ParameterError& e) {
      throw ConfigError("derivative.method", e.what());
    }
    d.window = static_cast<int>(integer(*s, "derivative", "window", d.window, 0));
    d.poly_order = static_cast<int>(integer(*s, "derivative", "poly_order", d.poly_order, 0));
    if (d.smooth && (d.smooth_window % 2 == 0 || d.smooth_window <= d.smooth_order))
      throw ConfigError("derivative.smooth_window", "must be odd and larger than smooth_order");
  }

  // integration
  const json integ = j.contains("integration") ? j.at("integration") : json::object();
  check_keys(integ, "integration", {"dt", "t_span", "x0"});
  switch (c.experiment) {
    case ExperimentKind::VdpParam:
    case ExperimentKind::VdpStructure:
      c.integration = {0.01, 25.0, (Vec(2) << 0.5, 0.0).finished()};
      break;
    case ExperimentKind::PendulumEnergy:
      c.integration = {0.001, 20.0, (Vec(6) << M_PI / 4, M_PI / 2, 0, 0, 0, 0).finished()};
      break;
    case ExperimentKind::PendulumSwingUp:
      c.integration = {0.001, 2.7, pendulum_hanging().to_vector()};
      break;
  }
  c.integration.dt = positive(integ, "integration", "dt", c.integration.dt);
  c.integration.t_span = positive(integ, "integration", "t_span", c.integration.t_span);
  if (const json* x = find(integ, "x0")) c.integration.x0 = vector(*x, "integration.x0", n);
  if (c.integration.t_span < c.integration.dt) throw ConfigError("integration.t_span", "must be at least one step");

  if (const json* v = find(j, "validation")) {
    check_keys(*v, "validation", {"x0", "phi1"});
    if (const json* x = find(*v, "x0")) c.validation_x0 = vector(*x, "validation.x0", n);
    if (find(*v, "phi1")) {
      if (c.experiment != ExperimentKind::PendulumEnergy)
        throw ConfigError("validation.phi1", "only used by the pendulum-energy experiment");
      if (c.validation_x0) throw ConfigError("validation", "give either x0 or phi1");
      c.validation_phi1 = number(*v, "validation", "phi1", 0.0);
    }
  }
  if (is_vdp(c) && !c.validation_x0) c.validation_x0 = (Vec(2) << -0.2, -0.3).finished();

  if (const json* io = find(j, "io")) {
    check_keys(*io, "io", {"input", "output_dir"});
    c.input = text(*io, "io", "input", "");
    c.output_dir = text(*io, "io", "output_dir", c.output_dir);
  }

  // swing-up settings
  c.swingup.params = c.pendulum;
  c.swingup.problem = pendulum_swing_up_problem(pendulum_model(c.pendulum, false));
  if (const json* s = find(j, "swingup")) {
    if (c.experiment != ExperimentKind::PendulumSwingUp)
      throw ConfigError("swingup", "only used by the pendulum-swingup experiment");
    check_keys(*s, "swingup", {"inject_mismatch", "derivatives", "success_threshold", "failure_threshold",
                               "horizon", "dt", "control_dt", "u_max", "R", "optimizer"});
    auto& sc = c.swingup;
    sc.inject_mismatch = boolean(*s, "swingup", "inject_mismatch", sc.inject_mismatch);
    const std::string src = text(*s, "swingup", "derivatives", "recorded");
    if (src == "recorded") sc.derivatives = DerivativeSource::Recorded;
    else if (src == "numerical") sc.derivatives = DerivativeSource::Numerical;
    else throw ConfigError("swingup.derivatives", "expected 'recorded' or 'numerical'");
    sc.success_threshold = positive(*s, "swingup", "success_threshold", sc.success_threshold);
    sc.failure_threshold = positive(*s, "swingup", "failure_threshold", sc.failure_threshold);
    sc.problem.horizon = positive(*s, "swingup", "horizon", sc.problem.horizon);
    sc.problem.dt = positive(*s, "swingup", "dt", sc.problem.dt);
    sc.problem.control_dt = positive(*s, "swingup", "control_dt", sc.problem.control_dt);
    sc.problem.u_max = positive(*s, "swingup", "u_max", sc.problem.u_max);
    sc.problem.u_min = -sc.problem.u_max;
    sc.problem.R = positive(*s, "swingup", "R", sc.problem.R);
    if (const json* o = find(*s, "optimizer")) {
      check_keys(*o, "swingup.optimizer", {"max_iters", "restarts", "seed", "guess_amplitude", "guess_growth",
                                           "guess_frequency", "tolerance", "terminal_tolerance", "parallel"});
      auto& oc = sc.optimizer;
      const std::string p = "swingup.optimizer";
      oc.max_iters = static_cast<int>(integer(*o, p, "max_iters", oc.max_iters, 0));
      oc.restarts = static_cast<int>(integer(*o, p, "restarts", oc.restarts, 1));
      oc.seed = seed_value(*o, p, "seed", oc.seed);
      oc.guess_amplitude = non_negative(*o, p, "guess_amplitude", oc.guess_amplitude);
      oc.guess_growth = non_negative(*o, p, "guess_growth", oc.guess_growth);
      oc.guess_frequency = non_negative(*o, p, "guess_frequency", oc.guess_frequency);
      oc.tolerance = positive(*o, p, "tolerance", oc.tolerance);
      oc.terminal_tolerance = positive(*o, p, "terminal_tolerance", oc.terminal_tolerance);
      oc.parallel = boolean(*o, p, "parallel", oc.parallel);
    }
    try {
      sc.problem.validate();
    } catch (const std::exception& e) {
      throw ConfigError("swingup", e.what());
    }
  }
  if (c.experiment == ExperimentKind::PendulumSwingUp) {
    c.integration.dt = c.swingup.problem.dt;
    c.integration.t_span = c.swingup.problem.horizon;
    c.integration.x0 = c.swingup.problem.initial;
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  const std::string raw = read_text(path);
  json j;
  try {
    j = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path + ": invalid JSON: " + e.what());
  }
  return experiment_config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["name"] = c.name;
  if (is_vdp(c))
    j["system"] = {{"alpha", c.alpha}, {"alpha_nominal", c.alpha_nominal}};
  else
    j["system"] = {{"params", to_json(c.pendulum)}, {"friction", c.friction}};
  j["noise"] = {{"seed", c.noise.seed}, {"sigma", c.noise.sigma}};
  j["library"] = c.library_spec;
  j["solver"] = {{"lambda", c.fit.solver.lambda},
                 {"max_iters", c.fit.solver.max_iters},
                 {"normalize", c.fit.solver.normalize},
                 {"min_rows_per_term", c.fit.min_rows_per_term}};
  if (std::isfinite(c.fit.residual_ceiling)) j["solver"]["residual_ceiling"] = c.fit.residual_ceiling;
  j["derivative"] = derivative_json(c.fit.derivative);
  if (c.experiment != ExperimentKind::PendulumSwingUp)
    j["integration"] = {{"dt", c.integration.dt}, {"t_span", c.integration.t_span}, {"x0", to_vector(c.integration.x0)}};
  if (c.validation_x0) j["validation"] = {{"x0", to_vector(*c.validation_x0)}};
  if (c.validation_phi1) j["validation"] = {{"phi1", *c.validation_phi1}};
  j["io"] = {{"input", c.input.empty() ? json(nullptr) : json(c.input)}, {"output_dir", c.output_dir}};
  if (c.experiment == ExperimentKind::PendulumSwingUp) {
    const auto& sc = c.swingup;
    const auto& oc = sc.optimizer;
    j["swingup"] = {{"inject_mismatch", sc.inject_mismatch},
                    {"derivatives", sc.derivatives == DerivativeSource::Recorded ? "recorded" : "numerical"},
                    {"success_threshold", sc.success_threshold},
                    {"failure_threshold", sc.failure_threshold},
                    {"horizon", sc.problem.horizon},
                    {"dt", sc.problem.dt},
                    {"control_dt", sc.problem.control_dt},
                    {"u_max", sc.problem.u_max},
                    {"R", sc.problem.R},
                    {"optimizer",
                     {{"max_iters", oc.max_iters},
                      {"restarts", oc.restarts},
                      {"seed", oc.seed},
                      {"guess_amplitude", oc.guess_amplitude},
                      {"guess_growth", oc.guess_growth},
                      {"guess_frequency", oc.guess_frequency},
                      {"tolerance", oc.tolerance},
                      {"terminal_tolerance", oc.terminal_tolerance},
                      {"parallel", oc.parallel}}}};
  }
  return j;
}

DynamicsModel truth_model(const ExperimentConfig& c) {
  switch (c.experiment) {
    case ExperimentKind::VdpParam:
    case ExperimentKind::VdpStructure: return vdp_model(c.alpha);
    case ExperimentKind::PendulumEnergy: return pendulum_model(c.pendulum, c.friction);
    case ExperimentKind::PendulumSwingUp: return pendulum_model(c.pendulum, false);
  }
  throw ConfigError("experiment", "no model");
}

DynamicsModel nominal_model(const ExperimentConfig& c) {
  switch (c.experiment) {
    case ExperimentKind::VdpParam: return vdp_model(c.alpha_nominal);
    case ExperimentKind::VdpStructure: return vdp_inadequate_model(c.alpha);
    case ExperimentKind::PendulumEnergy: return pendulum_model(c.pendulum, false);
    case ExperimentKind::PendulumSwingUp:
      return c.swingup.inject_mismatch ? pendulum_flawed_model(c.pendulum) : pendulum_model(c.pendulum, false);
  }
  throw ConfigError("experiment", "no model");
}

TimeSeries simulate_measurements(const ExperimentConfig& c, const Vec& x0, std::uint64_t seed) {
  if (c.experiment == ExperimentKind::PendulumSwingUp)
    throw ConfigError("experiment", "pendulum-swingup data come from the swingup command");
  const TimeSeries clean = integrate_rk4(truth_model(c), x0, c.integration.t_span, c.integration.dt);
  Mat measured = c.experiment == ExperimentKind::PendulumEnergy ? Mat(clean.states().leftCols(2)) : clean.states();
  return TimeSeries(clean.t0(), clean.dt(), add_gaussian_noise(measured, c.noise.sigma, seed));
}

TimeSeries simulate_measurements(const ExperimentConfig& c, std::uint64_t seed) {
  return simulate_measurements(c, c.integration.x0, seed);
}

DiscrepancyModel fit_vdp(const ExperimentConfig& c, const TimeSeries& data) {
  if (!is_vdp(c)) throw ConfigError("experiment", "not a Van der Pol experiment");
  if (data.state_dim() != 2) throw ShapeError("fit: Van der Pol data need 2 state columns");
  return fit_discrepancy(data, nominal_model(c), c.library, c.fit);
}

double trajectory_rmse(const TimeSeries& a, const TimeSeries& b) {
  if (a.rows() != b.rows() || a.state_dim() != b.state_dim()) throw ShapeError("rmse: trajectories differ in shape");
  return std::sqrt((a.states() - b.states()).squaredNorm() / static_cast<double>(a.states().size()));
}

VdpValidation validate_vdp(const ExperimentConfig& c, const DiscrepancyModel& model) {
  if (!is_vdp(c)) throw ConfigError("experiment", "not a Van der Pol experiment");
  const Vec x0 = c.validation_x0.value_or(c.integration.x0);
  const double T = c.integration.t_span, dt = c.integration.dt;
  const DynamicsModel nominal = nominal_model(c);
  TimeSeries truth = integrate_rk4(truth_model(c), x0, T, dt);
  TimeSeries nom = integrate_rk4(nominal, x0, T, dt);
  TimeSeries hyb = integrate_rk4(HybridModel(nominal, model).as_dynamics(), x0, T, dt);
  const double e_nom = trajectory_rmse(truth, nom), e_hyb = trajectory_rmse(truth, hyb);
  return VdpValidation{x0, std::move(truth), std::move(nom), std::move(hyb), e_nom, e_hyb};
}

EnergyRun fit_energy(const ExperimentConfig& c, const TimeSeries& angles) {
  if (c.experiment != ExperimentKind::PendulumEnergy) throw ConfigError("experiment", "not the energy experiment");
  TimeSeries arms = arm_coordinates_from_angles(angles, c.fit.derivative);
  EnergySeries es = compute_energy_series(arms, c.pendulum);
  EnergyFit fit = fit_energy_discrepancy(es, arms, c.library, c.fit);
  return EnergyRun{std::move(arms), std::move(es), std::move(fit)};
}

Vec energy_validation_start(const ExperimentConfig& c, double energy_level) {
  if (c.validation_phi1) return equal_energy_rest_state(*c.validation_phi1, energy_level, c.pendulum);
  if (c.validation_x0) return *c.validation_x0;
  throw ConfigError("validation", "the energy experiment needs validation.x0 or validation.phi1");
}

EnergyRun validate_energy(const ExperimentConfig& c, const DiscrepancyModel& model, double energy_level,
                          std::uint64_t seed) {
  const TimeSeries angles = simulate_measurements(c, energy_validation_start(c, energy_level), seed);
  TimeSeries arms = arm_coordinates_from_angles(angles, c.fit.derivative);
  EnergySeries es = compute_energy_series(arms, c.pendulum);
  EnergyFit fit = evaluate_energy_model(model, es, arms);
  return EnergyRun{std::move(arms), std::move(es), std::move(fit)};
}

SwingUpExperimentConfig swing_up_config(const ExperimentConfig& c) {
  SwingUpExperimentConfig sc = c.swingup;
  sc.params = c.pendulum;
  sc.library = c.library;
  sc.fit = c.fit;
  return sc;
}

std::vector<SweepRow> lambda_sweep(const ExperimentConfig& c, const TimeSeries& data,
                                   const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw ParameterError("lambda sweep: empty lambda list");
  std::vector<SweepRow> rows;
  for (double l : lambdas) {
    ExperimentConfig ci = c;
    ci.fit.solver.lambda = l;
    if (c.experiment == ExperimentKind::PendulumEnergy)
      rows.push_back({l, fit_energy(ci, data).fit.model});
    else
      rows.push_back({l, fit_vdp(ci, data)});
  }
  return rows;
}

std::vector<SweepRow> lambda_sweep(const ExperimentConfig& c, const SwingUpRecording& rec,
                                   const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw ParameterError("lambda sweep: empty lambda list");
  std::vector<SweepRow> rows;
  for (double l : lambdas) {
    SwingUpExperimentConfig sc = swing_up_config(c);
    sc.fit.solver.lambda = l;
    rows.push_back({l, fit_swing_up_discrepancy(sc, rec)});
  }
  return rows;
}

}  // namespace dsindy
