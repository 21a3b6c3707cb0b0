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

#include <nlohmann/json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dsindy/numerics.hpp"
#include "dsindy/sindy.hpp"
#include "dsindy/systems.hpp"

namespace dsindy {

/// Open-loop swing-up of the cart pendulum over a fixed horizon.
///
/// The cost of an input sequence u_0..u_{K-1} (held for control_dt each) is
///
///   sum_k (x(t_k) - x*)' Q (x(t_k) - x*) control_dt + sum_k R u_k^2 control_dt
///     + (x(T) - x*)' Q_T (x(T) - x*)
///
/// with t_k = k control_dt and states from an RK4 rollout at step dt.
struct SwingUpProblem {
  DynamicsModel model;
  double horizon = 2.7;
  double dt = 0.001;
  double control_dt = 0.01;
  Vec initial;
  Vec target;
  Vec Q;
  double R = 1.0;
  Vec terminal_weights;
  double u_min = -30.0;
  double u_max = 30.0;

  void validate() const;
  Index control_steps() const;
  Index substeps() const;  ///< rollout steps per control interval
};

/// Problem with the pendulum defaults: hanging start, upright target,
/// Q = diag(10, 10, 20, 1, 1, 0.1), R = 1, T = 2.7 s.
SwingUpProblem pendulum_swing_up_problem(DynamicsModel model);

struct OptimizerConfig {
  int max_iters = 80;
  int restarts = 5;
  std::uint64_t seed = 7;
  /// Initial guess a(t) sin(omega t + phase) with a(t) growing linearly from
  /// amplitude to amplitude * (1 + growth * t).
  double guess_amplitude = 3.0;
  double guess_growth = 0.5;
  double guess_frequency = 5.0;  ///< rad/s, near the slow hanging mode
  double tolerance = 1e-4;       ///< relative cost decrease that ends a run
  double success_cost = std::numeric_limits<double>::infinity();
  /// Largest acceptable weighted terminal error of the predicted rollout.
  double terminal_tolerance = 0.05;
  bool parallel = false;
  std::optional<Vec> warm_start;
};

struct ControlTrajectory {
  ControlSignal u;
  TimeSeries predicted;
  double cost = 0.0;
  bool converged = false;
  int iterations = 0;
  int restart = 0;
  std::vector<double> cost_history;  ///< cost after every accepted iteration
  std::string status;
};

/// Cost of a rollout sampled at dt under the problem's weights.
double trajectory_cost(const SwingUpProblem& prob, const ControlSignal& u, const TimeSeries& rollout);

/// sqrt(sum_i w_i d_i^2) with w = Q scaled so the angle weights are 1 and
/// angle differences wrapped to (-pi, pi].
double final_state_error(const Vec& Q, const Vec& x, const Vec& target);

/// Levenberg-Marquardt single shooting from multiple starts; the best
/// trajectory is returned, with `converged` false when it misses the success
/// thresholds.
ControlTrajectory optimize_swing_up(const SwingUpProblem& prob, const OptimizerConfig& cfg);

/// Open-loop rollout of `plant` under the trajectory's inputs from its
/// initial state on its time grid.
TimeSeries playback(const ControlTrajectory& traj, const DynamicsModel& plant);

/// Library over the pendulum state with one control: constant, linear state
/// terms, first-order Fourier terms in both angles, u, and every state term
/// times u.
CandidateLibrary default_control_library();

enum class DerivativeSource { Recorded, Numerical };

/// lambda = 0.01 with normalized columns.
FitConfig swing_up_fit_defaults();

struct SwingUpExperimentConfig {
  PendulumParams params;
  bool inject_mismatch = true;
  OptimizerConfig optimizer;
  CandidateLibrary library = default_control_library();
  FitConfig fit = swing_up_fit_defaults();
  DerivativeSource derivatives = DerivativeSource::Recorded;
  double success_threshold = 0.1;
  double failure_threshold = 0.5;
  /// Problem settings; model, initial and target are filled in per stage.
  SwingUpProblem problem = pendulum_swing_up_problem(pendulum_model(PendulumParams{}, false));
};

/// Error from one stage of the discrepancy experiment.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct SwingUpReport {
  ControlTrajectory nominal_plan;
  TimeSeries nominal_playback;
  double nominal_final_error = 0.0;
  DiscrepancyModel discrepancy;
  ControlTrajectory hybrid_plan;
  TimeSeries hybrid_playback;
  double hybrid_final_error = 0.0;
  double success_threshold = 0.1;
  double failure_threshold = 0.5;
  Vec Q;
  Vec target;

  bool nominal_swing_up() const { return nominal_final_error <= success_threshold; }
  bool hybrid_swing_up() const { return hybrid_final_error <= success_threshold; }
};

/// Nominal plan played on the plant, with the plant's own derivative at each
/// logged sample.
struct SwingUpRecording {
  DynamicsModel plant;
  DynamicsModel nominal;
  ControlTrajectory plan;
  TimeSeries run;
  Mat xdot;
};

SwingUpRecording record_nominal_swing_up(const SwingUpExperimentConfig& cfg);
DiscrepancyModel fit_swing_up_discrepancy(const SwingUpExperimentConfig& cfg, const SwingUpRecording& rec);

/// Plan on the nominal model, play on the true plant, fit the discrepancy from
/// the recorded response, re-plan on the hybrid model and play again.
SwingUpReport closed_loop_discrepancy_experiment(const SwingUpExperimentConfig& cfg);
/// Same, continuing from an existing nominal recording.
SwingUpReport closed_loop_discrepancy_experiment(const SwingUpExperimentConfig& cfg, SwingUpRecording rec);

nlohmann::json to_json(const SwingUpReport& r);

}  // namespace dsindy
