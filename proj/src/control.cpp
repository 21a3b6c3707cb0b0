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

#include "dsindy/control.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "dsindy/errors.hpp"

namespace dsindy {

void SwingUpProblem::validate() const {
  if (!model.field) throw ParameterError("swing-up: model has no vector field");
  if (model.control_dim != 1) throw ParameterError("swing-up: model must have one control input");
  const Index n = model.state_dim;
  if (initial.size() != n || target.size() != n) throw ShapeError("swing-up: initial/target dimension mismatch");
  if (Q.size() != n || terminal_weights.size() != n) throw ShapeError("swing-up: weight dimension mismatch");
  if ((Q.array() < 0.0).any() || (terminal_weights.array() < 0.0).any())
    throw ParameterError("swing-up: state weights must be >= 0");
  if (!(R > 0.0)) throw ParameterError("swing-up: R must be positive");
  if (!(horizon > 0.0) || !(dt > 0.0) || !(control_dt > 0.0))
    throw ParameterError("swing-up: horizon, dt and control_dt must be positive");
  if (!(u_min < u_max)) throw ParameterError("swing-up: u_min must be below u_max");
  const double ratio = control_dt / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-6 || std::round(ratio) < 1.0)
    throw ParameterError("swing-up: control_dt must be an integer multiple of dt");
  const double steps = horizon / control_dt;
  if (std::abs(steps - std::round(steps)) > 1e-6 || std::round(steps) < 1.0)
    throw ParameterError("swing-up: horizon must be an integer multiple of control_dt");
}

Index SwingUpProblem::control_steps() const { return static_cast<Index>(std::llround(horizon / control_dt)); }
Index SwingUpProblem::substeps() const { return static_cast<Index>(std::llround(control_dt / dt)); }

SwingUpProblem pendulum_swing_up_problem(DynamicsModel model) {
  SwingUpProblem p;
  p.model = std::move(model);
  p.initial = pendulum_hanging().to_vector();
  p.target = pendulum_upright().to_vector();
  p.Q = Vec(6);
  p.Q << 10.0, 10.0, 20.0, 1.0, 1.0, 0.1;
  p.terminal_weights = 1e4 * p.Q;
  return p;
}

namespace {

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

struct Knots {
  Mat states;  ///< (K+1) x n, row k at t = k control_dt
  bool ok = true;
};

Knots rollout_knots(const SwingUpProblem& prob, const Vec& u) {
  const Index K = prob.control_steps();
  const Index h = prob.substeps();
  Knots out{Mat(K + 1, prob.model.state_dim), true};
  Vec x = prob.initial;
  Vec uk(1);
  for (Index k = 0; k < K; ++k) {
    out.states.row(k) = x.transpose();
    uk[0] = u[k];
    for (Index j = 0; j < h; ++j) x = rk4_step(prob.model, x, uk, prob.dt);
    if (!x.allFinite()) {
      out.ok = false;
      return out;
    }
  }
  out.states.row(K) = x.transpose();
  return out;
}

double cost_from_knots(const SwingUpProblem& prob, const Mat& knots, const Vec& u) {
  const Index K = prob.control_steps();
  double c = 0.0;
  for (Index k = 0; k < K; ++k) {
    const Vec d = knots.row(k).transpose() - prob.target;
    c += d.cwiseProduct(prob.Q).dot(d) * prob.control_dt;
    c += prob.R * u[k] * u[k] * prob.control_dt;
  }
  const Vec d = knots.row(K).transpose() - prob.target;
  c += d.cwiseProduct(prob.terminal_weights).dot(d);
  return c;
}

double evaluate_cost(const SwingUpProblem& prob, const Vec& u) {
  const Knots kn = rollout_knots(prob, u);
  if (!kn.ok) return std::numeric_limits<double>::infinity();
  const double c = cost_from_knots(prob, kn.states, u);
  return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
}

// Gauss-Newton system H = J'J, g = J'r for the residual form of the cost,
// with state sensitivities propagated through the discrete RK4 map.
struct Normal {
  Mat H;
  Vec g;
  bool ok = true;
};

Normal gauss_newton_system(const SwingUpProblem& prob, const Vec& u) {
  const Index K = prob.control_steps();
  const Index h = prob.substeps();
  const Index n = prob.model.state_dim;
  const double dt = prob.dt;
  Normal out{Mat::Zero(K, K), Vec::Zero(K), true};

  Vec x = prob.initial;
  Mat S = Mat::Zero(n, K);
  Vec uk(1);
  const Vec wq = prob.Q * prob.control_dt;

  auto accumulate = [&](const Vec& w, Index cols) {
    const Vec d = x - prob.target;
    const auto Sb = S.leftCols(cols);
    out.H.topLeftCorner(cols, cols).noalias() += Sb.transpose() * w.asDiagonal() * Sb;
    out.g.head(cols).noalias() += Sb.transpose() * w.cwiseProduct(d);
  };

  for (Index k = 0; k < K; ++k) {
    accumulate(wq, k);
    uk[0] = u[k];
    const Index cols = k + 1;
    for (Index j = 0; j < h; ++j) {
      auto Sb = S.leftCols(cols);
      const Linearization L1 = linearize(prob.model, x, uk);
      const Vec k1 = prob.model.field(x, uk);
      Mat K1 = L1.A * Sb;
      K1.col(k) += L1.B.col(0);

      const Vec x2 = x + 0.5 * dt * k1;
      const Linearization L2 = linearize(prob.model, x2, uk);
      const Vec k2 = prob.model.field(x2, uk);
      Mat K2 = L2.A * (Sb + 0.5 * dt * K1);
      K2.col(k) += L2.B.col(0);

      const Vec x3 = x + 0.5 * dt * k2;
      const Linearization L3 = linearize(prob.model, x3, uk);
      const Vec k3 = prob.model.field(x3, uk);
      Mat K3 = L3.A * (Sb + 0.5 * dt * K2);
      K3.col(k) += L3.B.col(0);

      const Vec x4 = x + dt * k3;
      const Linearization L4 = linearize(prob.model, x4, uk);
      const Vec k4 = prob.model.field(x4, uk);
      Mat K4 = L4.A * (Sb + dt * K3);
      K4.col(k) += L4.B.col(0);

      x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      Sb += (dt / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
    }
    if (!x.allFinite() || !S.allFinite()) {
      out.ok = false;
      return out;
    }
  }
  accumulate(prob.terminal_weights, K);
  for (Index k = 0; k < K; ++k) {
    out.H(k, k) += prob.R * prob.control_dt;
    out.g[k] += prob.R * prob.control_dt * u[k];
  }
  return out;
}

struct RunResult {
  Vec u;
  double cost = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::vector<double> history;
};

RunResult levenberg_marquardt(const SwingUpProblem& prob, const OptimizerConfig& cfg, Vec u) {
  const Index K = u.size();
  u = u.cwiseMax(prob.u_min).cwiseMin(prob.u_max);
  RunResult res{u, evaluate_cost(prob, u), 0, {}};
  res.history.push_back(res.cost);
  if (!std::isfinite(res.cost)) return res;

  double mu = 1e-3;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Normal sys = gauss_newton_system(prob, res.u);
    if (!sys.ok) break;
    bool accepted = false;
    double decrease = 0.0;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      Mat A = sys.H;
      A.diagonal() += mu * (sys.H.diagonal().array() + 1e-9).matrix();
      const Vec step = A.llt().solve(-sys.g);
      if (!step.allFinite()) {
        mu *= 10.0;
        continue;
      }
      const Vec trial = (res.u + step).cwiseMax(prob.u_min).cwiseMin(prob.u_max);
      const double c = evaluate_cost(prob, trial);
      if (c < res.cost) {
        decrease = (res.cost - c) / res.cost;
        res.u = trial;
        res.cost = c;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
    res.iterations = it + 1;
    res.history.push_back(res.cost);
    if (decrease < cfg.tolerance) break;
  }
  (void)K;
  return res;
}

Vec initial_guess(const SwingUpProblem& prob, const OptimizerConfig& cfg, double phase) {
  const Index K = prob.control_steps();
  Vec u(K);
  for (Index k = 0; k < K; ++k) {
    const double t = static_cast<double>(k) * prob.control_dt;
    const double a = cfg.guess_amplitude * (1.0 + cfg.guess_growth * t);
    u[k] = a * std::sin(cfg.guess_frequency * t + phase);
  }
  return u;
}

// Phases for the restarts: 0 for the first, then uniform on [0, 2 pi) from a
// 64-bit Mersenne twister using the top 53 bits of each draw.
std::vector<double> restart_phases(int restarts, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> phases{0.0};
  for (int r = 1; r < restarts; ++r)
    phases.push_back(2.0 * M_PI * static_cast<double>(gen() >> 11) * 0x1.0p-53);
  return phases;
}

}  // namespace

double trajectory_cost(const SwingUpProblem& prob, const ControlSignal& u, const TimeSeries& rollout) {
  const Index K = prob.control_steps();
  const Index h = prob.substeps();
  if (rollout.rows() != K * h + 1) throw ShapeError("trajectory cost: rollout length does not match the horizon");
  if (u.steps() < K) throw ShapeError("trajectory cost: too few control steps");
  Mat knots(K + 1, rollout.state_dim());
  for (Index k = 0; k <= K; ++k) knots.row(k) = rollout.states().row(k * h);
  return cost_from_knots(prob, knots, u.values().col(0).head(K));
}

double final_state_error(const Vec& Q, const Vec& x, const Vec& target) {
  if (Q.size() != x.size() || x.size() != target.size()) throw ShapeError("final error: dimension mismatch");
  const double angle_weight = std::max(Q[0], Q.size() > 1 ? Q[1] : Q[0]);
  double acc = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    double d = x[i] - target[i];
    if (i < 2) d = wrap_angle(d);
    acc += Q[i] / angle_weight * d * d;
  }
  return std::sqrt(acc);
}

ControlTrajectory optimize_swing_up(const SwingUpProblem& prob, const OptimizerConfig& cfg) {
  prob.validate();
  if (cfg.restarts < 1) throw ParameterError("optimizer: restarts must be >= 1");
  if (cfg.max_iters < 0) throw ParameterError("optimizer: max_iters must be >= 0");
  const Index K = prob.control_steps();

  std::vector<Vec> starts;
  const auto phases = restart_phases(cfg.restarts, cfg.seed);
  for (int r = 0; r < cfg.restarts; ++r) {
    if (r == 0 && cfg.warm_start) {
      if (cfg.warm_start->size() != K) throw ShapeError("optimizer: warm start length mismatch");
      starts.push_back(*cfg.warm_start);
    } else {
      starts.push_back(initial_guess(prob, cfg, phases[static_cast<std::size_t>(r)]));
    }
  }

  std::vector<RunResult> runs(starts.size());
  if (cfg.parallel && starts.size() > 1) {
    std::vector<std::future<RunResult>> jobs;
    for (const auto& s : starts)
      jobs.push_back(std::async(std::launch::async, [&prob, &cfg, s] { return levenberg_marquardt(prob, cfg, s); }));
    for (std::size_t i = 0; i < jobs.size(); ++i) runs[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) runs[i] = levenberg_marquardt(prob, cfg, starts[i]);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].cost < runs[best].cost) best = i;
  const RunResult& r = runs[best];

  ControlSignal signal(0.0, prob.control_dt, Mat(r.u));
  TimeSeries predicted = [&] {
    try {
      return integrate_rk4(prob.model, prob.initial, signal, prob.horizon, prob.dt);
    } catch (const IntegrationDiverged&) {
      // Every start diverged; report the unforced rollout.
      return integrate_rk4(prob.model, prob.initial, ControlSignal(0.0, prob.control_dt, Mat::Zero(K, 1)),
                           prob.horizon, prob.dt);
    }
  }();
  const double cost = std::isfinite(r.cost) ? trajectory_cost(prob, signal, predicted) : r.cost;
  const double terminal = final_state_error(prob.Q, predicted.states().bottomRows(1).transpose(), prob.target);
  const bool ok = std::isfinite(cost) && cost <= cfg.success_cost && terminal <= cfg.terminal_tolerance;

  std::string status = ok ? "converged" : "convergence-failure";
  status += " (restart " + std::to_string(best) + ", terminal error " + std::to_string(terminal) + ")";
  return ControlTrajectory{std::move(signal), std::move(predicted), cost, ok, r.iterations, static_cast<int>(best),
                           r.history, status};
}

TimeSeries playback(const ControlTrajectory& traj, const DynamicsModel& plant) {
  if (plant.control_dim != traj.u.dim()) throw ShapeError("playback: control dimension mismatch");
  if (plant.state_dim != traj.predicted.state_dim()) throw ShapeError("playback: state dimension mismatch");
  return integrate_rk4(plant, traj.predicted.states().row(0).transpose(), traj.u, traj.predicted.duration(),
                       traj.predicted.dt());
}

CandidateLibrary default_control_library() {
  const CandidateLibrary base = merge_libraries(build_polynomial_library(6, 1, true),
                                                build_fourier_library(6, 1, {0, 1}));
  return with_control_products(base, 1, 1);
}

FitConfig swing_up_fit_defaults() {
  FitConfig f;
  f.solver.lambda = 0.01;
  f.derivative.smooth = false;
  return f;
}

namespace {

template <class Fn>
auto in_stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

SwingUpRecording record_nominal_swing_up(const SwingUpExperimentConfig& cfg) {
  const DynamicsModel plant = pendulum_model(cfg.params, false);
  const DynamicsModel nominal = cfg.inject_mismatch ? pendulum_flawed_model(cfg.params) : plant;
  SwingUpProblem prob = cfg.problem;
  prob.model = nominal;
  ControlTrajectory plan = in_stage("plan-nominal", [&] { return optimize_swing_up(prob, cfg.optimizer); });
  TimeSeries run = in_stage("playback-nominal", [&] { return playback(plan, plant); });
  // what a sensor on the plant would log alongside (x, u)
  Mat xdot(run.rows(), run.state_dim());
  for (Index i = 0; i < run.rows(); ++i)
    xdot.row(i) = plant(run.states().row(i).transpose(), run.controls()->row(i).transpose()).transpose();
  return SwingUpRecording{plant, nominal, std::move(plan), std::move(run), std::move(xdot)};
}

DiscrepancyModel fit_swing_up_discrepancy(const SwingUpExperimentConfig& cfg, const SwingUpRecording& rec) {
  return in_stage("fit", [&] {
    if (cfg.derivatives == DerivativeSource::Recorded) {
      DerivativeEstimate xdot{rec.xdot, DiffMethod::CentralDifference, BoundaryPolicy{}};
      return fit_discrepancy(rec.run, xdot, rec.nominal, cfg.library, cfg.fit);
    }
    return fit_discrepancy(rec.run, rec.nominal, cfg.library, cfg.fit);
  });
}

SwingUpReport closed_loop_discrepancy_experiment(const SwingUpExperimentConfig& cfg) {
  return closed_loop_discrepancy_experiment(cfg, record_nominal_swing_up(cfg));
}

SwingUpReport closed_loop_discrepancy_experiment(const SwingUpExperimentConfig& cfg, SwingUpRecording rec) {
  DiscrepancyModel disc = fit_swing_up_discrepancy(cfg, rec);

  SwingUpProblem prob = cfg.problem;
  prob.model = HybridModel(rec.nominal, disc).as_dynamics();
  ControlTrajectory hybrid_plan = in_stage("plan-hybrid", [&] { return optimize_swing_up(prob, cfg.optimizer); });
  TimeSeries hybrid_run = in_stage("playback-hybrid", [&] { return playback(hybrid_plan, rec.plant); });

  const double e_nom = final_state_error(prob.Q, rec.run.states().bottomRows(1).transpose(), prob.target);
  const double e_hyb = final_state_error(prob.Q, hybrid_run.states().bottomRows(1).transpose(), prob.target);
  return SwingUpReport{std::move(rec.plan), std::move(rec.run), e_nom,
                       std::move(disc),     std::move(hybrid_plan), std::move(hybrid_run),
                       e_hyb,               cfg.success_threshold,  cfg.failure_threshold,
                       prob.Q,              prob.target};
}

namespace {

nlohmann::json plan_json(const ControlTrajectory& t, const Vec& Q, const Vec& target) {
  return {{"cost", t.cost},
          {"converged", t.converged},
          {"iterations", t.iterations},
          {"restart", t.restart},
          {"status", t.status},
          {"predicted_final_error", final_state_error(Q, t.predicted.states().bottomRows(1).transpose(), target)}};
}

}  // namespace

nlohmann::json to_json(const SwingUpReport& r) {
  const Vec& Q = r.Q;
  const Vec& target = r.target;
  auto final_state = [](const TimeSeries& ts) {
    const Vec x = ts.states().bottomRows(1).transpose();
    return std::vector<double>(x.data(), x.data() + x.size());
  };
  return {{"nominal",
           {{"plan", plan_json(r.nominal_plan, Q, target)},
            {"final_state", final_state(r.nominal_playback)},
            {"final_error", r.nominal_final_error},
            {"swing_up", r.nominal_swing_up()},
            {"failed", r.nominal_final_error > r.failure_threshold}}},
          {"hybrid",
           {{"plan", plan_json(r.hybrid_plan, Q, target)},
            {"final_state", final_state(r.hybrid_playback)},
            {"final_error", r.hybrid_final_error},
            {"swing_up", r.hybrid_swing_up()}}},
          {"success_threshold", r.success_threshold},
          {"failure_threshold", r.failure_threshold},
          {"discrepancy", to_json(r.discrepancy)}};
}

}  // namespace dsindy
