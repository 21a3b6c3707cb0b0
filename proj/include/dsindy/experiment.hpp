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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsindy/control.hpp"
#include "dsindy/energy.hpp"
#include "dsindy/sindy.hpp"
#include "dsindy/systems.hpp"

namespace dsindy {

enum class ExperimentKind { VdpParam, VdpStructure, PendulumEnergy, PendulumSwingUp };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct NoiseConfig {
  std::uint64_t seed = 42;
  double sigma = 0.0;
};

struct IntegrationConfig {
  double dt = 0.01;
  double t_span = 25.0;
  Vec x0;
};

/// One experiment run, fully determined by this document and the seed.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::VdpParam;
  std::string name;

  double alpha = 0.5;          ///< true Van der Pol damping
  double alpha_nominal = 0.1;  ///< damping assumed by the nominal model
  PendulumParams pendulum;
  bool friction = true;

  NoiseConfig noise;
  nlohmann::json library_spec;
  CandidateLibrary library{2, 0};
  FitConfig fit;
  IntegrationConfig integration;

  /// Held-out start. For the energy experiment `validation_phi1` instead asks
  /// for a rest state on the training energy level.
  std::optional<Vec> validation_x0;
  std::optional<double> validation_phi1;

  std::string input;
  std::string output_dir = ".";

  SwingUpExperimentConfig swingup;
};

/// Field-level validation; throws ConfigError naming the dotted key.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& c);

DynamicsModel truth_model(const ExperimentConfig& c);
DynamicsModel nominal_model(const ExperimentConfig& c);

/// Noisy measurements: Van der Pol states, or the two pendulum angles for the
/// energy experiment.
TimeSeries simulate_measurements(const ExperimentConfig& c, std::uint64_t seed);
TimeSeries simulate_measurements(const ExperimentConfig& c, const Vec& x0, std::uint64_t seed);

/// Van der Pol discrepancy fit on measured states.
DiscrepancyModel fit_vdp(const ExperimentConfig& c, const TimeSeries& data);

double trajectory_rmse(const TimeSeries& a, const TimeSeries& b);

struct VdpValidation {
  Vec x0;
  TimeSeries truth, nominal, hybrid;
  double rmse_nominal = 0.0;
  double rmse_hybrid = 0.0;
};

/// Clean truth, nominal, and hybrid simulations from the validation start.
VdpValidation validate_vdp(const ExperimentConfig& c, const DiscrepancyModel& model);

struct EnergyRun {
  TimeSeries arms;
  EnergySeries energy;
  EnergyFit fit;
};

EnergyRun fit_energy(const ExperimentConfig& c, const TimeSeries& angles);
/// Applies `model` to held-out angles; `energy_level` fixes the start when
/// `validation_phi1` is set.
EnergyRun validate_energy(const ExperimentConfig& c, const DiscrepancyModel& model, double energy_level,
                          std::uint64_t seed);
Vec energy_validation_start(const ExperimentConfig& c, double energy_level);

/// Swing-up settings with the experiment's library and solver options applied.
SwingUpExperimentConfig swing_up_config(const ExperimentConfig& c);

struct SweepRow {
  double lambda = 0.0;
  DiscrepancyModel model;
};

/// Refits the same data once per lambda.
std::vector<SweepRow> lambda_sweep(const ExperimentConfig& c, const TimeSeries& data,
                                   const std::vector<double>& lambdas);
std::vector<SweepRow> lambda_sweep(const ExperimentConfig& c, const SwingUpRecording& rec,
                                   const std::vector<double>& lambdas);

}  // namespace dsindy
