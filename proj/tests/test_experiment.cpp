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

#include <doctest.h>

#include <cmath>
#include <string>

#include "dsindy/errors.hpp"
#include "dsindy/experiment.hpp"

using namespace dsindy;
using nlohmann::json;

namespace {

std::string preset(const std::string& name) { return std::string(DSINDY_PRESETS) + "/" + name + ".json"; }

json vdp_doc() {
  return json::parse(R"({
    "experiment": "vdp-param",
    "system": {"alpha": 0.5, "alpha_nominal": 0.1},
    "noise": {"seed": 42, "sigma": 0.01},
    "library": {"state_dim": 2, "polynomial": {"max_degree": 2, "include_constant": true}},
    "solver": {"lambda": 0.05},
    "integration": {"dt": 0.01, "t_span": 25, "x0": [0.5, 0.0]}
  })");
}

// field named by the ConfigError thrown for `doc`
std::string failing_field(const json& doc) {
  try {
    experiment_config_from_json(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("experiment names") {
  for (auto k : {ExperimentKind::VdpParam, ExperimentKind::VdpStructure, ExperimentKind::PendulumEnergy,
                 ExperimentKind::PendulumSwingUp})
    CHECK(experiment_kind_from_string(to_string(k)) == k);
  CHECK(to_string(ExperimentKind::PendulumSwingUp) == "pendulum-swingup");
  CHECK_THROWS_AS(experiment_kind_from_string("vdp"), ConfigError);
}

TEST_CASE("every preset loads") {
  for (const char* name :
       {"vdp-param", "vdp-structure", "pendulum-energy", "pendulum-swingup", "pendulum-swingup-matched"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_experiment_config(preset(name)));
  }
  const ExperimentConfig v = load_experiment_config(preset("vdp-param"));
  CHECK(v.experiment == ExperimentKind::VdpParam);
  CHECK(v.alpha == 0.5);
  CHECK(v.alpha_nominal == 0.1);
  CHECK(v.noise.sigma == 0.01);
  CHECK(v.library.size() == 9);
  CHECK(v.fit.solver.lambda == 0.05);
  CHECK(v.integration.x0 == (Vec(2) << 0.5, 0.0).finished());
  const ExperimentConfig s = load_experiment_config(preset("vdp-structure"));
  CHECK(s.experiment == ExperimentKind::VdpStructure);
  // structural case: true damping, missing restoring term
  CHECK(nominal_model(s)((Vec(2) << 1.0, 5.0).finished()) == (Vec(2) << 5.0, 0.0).finished());
  CHECK(nominal_model(v)((Vec(2) << 1.0, 1.0).finished()) == (Vec(2) << 1.0, -1.0).finished());
  const ExperimentConfig e = load_experiment_config(preset("pendulum-energy"));
  CHECK(e.experiment == ExperimentKind::PendulumEnergy);
  CHECK(e.friction);
  CHECK(e.library.state_dim() == 4);
  REQUIRE(e.validation_phi1.has_value());
  CHECK(*e.validation_phi1 == doctest::Approx(M_PI / 3));
  const ExperimentConfig w = load_experiment_config(preset("pendulum-swingup"));
  CHECK(w.swingup.inject_mismatch);
  CHECK(w.swingup.derivatives == DerivativeSource::Recorded);
  CHECK_FALSE(load_experiment_config(preset("pendulum-swingup-matched")).swingup.inject_mismatch);
}

TEST_CASE("config errors name the field") {
  json d = vdp_doc();
  d["integration"]["t_span"] = 0;
  CHECK(failing_field(d) == "integration.t_span");
  d = vdp_doc();
  d["integration"]["dt"] = -0.1;
  CHECK(failing_field(d) == "integration.dt");
  d = vdp_doc();
  d["noise"]["sigma"] = -1;
  CHECK(failing_field(d) == "noise.sigma");
  d = vdp_doc();
  d["solver"]["lambda"] = "big";
  CHECK(failing_field(d) == "solver.lambda");
  d = vdp_doc();
  d["integration"]["x0"] = {1.0, 2.0, 3.0};
  CHECK(failing_field(d) == "integration.x0");
  d = vdp_doc();
  d["bogus"] = 1;
  CHECK(failing_field(d) == "bogus");
  d = vdp_doc();
  d["experiment"] = "nothing";
  CHECK(failing_field(d) == "experiment");
  d = vdp_doc();
  d.erase("experiment");
  CHECK(failing_field(d) == "experiment");
  d = vdp_doc();
  d["derivative"] = {{"smooth_window", 4}};
  CHECK(failing_field(d).rfind("derivative", 0) == 0);
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("defaults fill omitted sections") {
  const ExperimentConfig c = experiment_config_from_json({{"experiment", "vdp-structure"}});
  CHECK(c.integration.dt == 0.01);
  CHECK(c.integration.t_span == 25.0);
  CHECK(c.fit.solver.lambda == 0.05);
  CHECK(c.library.names().front() == "1");
  REQUIRE(c.validation_x0.has_value());
  CHECK(*c.validation_x0 == (Vec(2) << -0.2, -0.3).finished());
  const ExperimentConfig e = experiment_config_from_json({{"experiment", "pendulum-energy"}});
  CHECK(e.integration.dt == 0.001);
  CHECK(e.fit.solver.lambda == 1e-5);
  CHECK(e.integration.x0.size() == 6);
}

TEST_CASE("config survives a json round trip") {
  for (const char* name : {"vdp-param", "pendulum-energy", "pendulum-swingup"}) {
    CAPTURE(name);
    const ExperimentConfig a = load_experiment_config(preset(name));
    const json ja = to_json(a);
    const ExperimentConfig b = experiment_config_from_json(json::parse(ja.dump()));
    CHECK(to_json(b) == ja);
    CHECK(b.library.names() == a.library.names());
    CHECK(b.fit.solver.lambda == a.fit.solver.lambda);
  }
}

TEST_CASE("measurements are reproducible per seed") {
  ExperimentConfig c = experiment_config_from_json(vdp_doc());
  c.integration.t_span = 5.0;
  const TimeSeries a = simulate_measurements(c, 42);
  const TimeSeries b = simulate_measurements(c, 42);
  const TimeSeries other = simulate_measurements(c, 43);
  CHECK(a.states() == b.states());
  CHECK(a.states() != other.states());
  CHECK(a.rows() == 501);

  // noise is what was asked for: residual against the clean run
  c.noise.sigma = 0.0;
  const TimeSeries clean = simulate_measurements(c, 42);
  const Mat e = a.states() - clean.states();
  const double sd = std::sqrt(e.squaredNorm() / static_cast<double>(e.size()));
  CHECK(sd == doctest::Approx(0.01).epsilon(0.1));
  CHECK(std::abs(e.mean()) <= 4.0 * 0.01 / std::sqrt(static_cast<double>(e.size())));
}

TEST_CASE("energy measurements are the two angles") {
  ExperimentConfig c = load_experiment_config(preset("pendulum-energy"));
  c.integration.t_span = 1.0;
  const TimeSeries m = simulate_measurements(c, 1);
  CHECK(m.state_dim() == 2);
  CHECK(m.rows() == 1001);
  ExperimentConfig w = load_experiment_config(preset("pendulum-swingup"));
  CHECK_THROWS_AS(simulate_measurements(w, 1), ConfigError);
}

TEST_CASE("trajectory rmse") {
  const TimeSeries a(0, 1, (Mat(2, 2) << 0, 0, 0, 0).finished());
  const TimeSeries b(0, 1, (Mat(2, 2) << 1, 1, 1, 1).finished());
  CHECK(trajectory_rmse(a, b) == 1.0);
  const TimeSeries c(0, 1, (Mat(2, 2) << 2, 0, 0, 0).finished());
  CHECK(trajectory_rmse(a, c) == 1.0);
  CHECK_THROWS_AS(trajectory_rmse(a, TimeSeries(0, 1, Mat::Zero(3, 2))), ShapeError);
}

TEST_CASE("vdp fit and validation on a short run") {
  ExperimentConfig c = experiment_config_from_json(vdp_doc());
  const TimeSeries data = simulate_measurements(c, c.noise.seed);
  const DiscrepancyModel m = fit_vdp(c, data);
  const VdpValidation v = validate_vdp(c, m);
  CHECK(v.rmse_hybrid < v.rmse_nominal);
  CHECK(v.truth.rows() == v.hybrid.rows());
  const auto sweep = lambda_sweep(c, data, {0.025, 0.05});
  REQUIRE(sweep.size() == 2);
  CHECK(sweep[1].model.coefficients.xi == m.coefficients.xi);
  CHECK_THROWS_AS(lambda_sweep(c, data, {-1.0}), ParameterError);
}
