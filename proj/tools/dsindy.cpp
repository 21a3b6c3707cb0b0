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

// Command-line front end: simulate, fit, validate, swingup, lambda-sweep.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dsindy/errors.hpp"
#include "dsindy/experiment.hpp"
#include "dsindy/io.hpp"

namespace fs = std::filesystem;
using namespace dsindy;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kData = 3, kConvergence = 4 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string data;
  std::string model;
  std::vector<double> lambdas;
};

/// Thrown after outputs are written when an optimizer did not meet its target.
struct ConvergenceFailure : Error {
  using Error::Error;
};

ExperimentConfig load(const Options& o) {
  ExperimentConfig c = load_experiment_config(o.config);
  if (o.seed) {
    c.noise.seed = *o.seed;
    c.swingup.optimizer.seed = *o.seed;
  }
  if (!o.out.empty()) c.output_dir = o.out;
  return c;
}

fs::path out_dir(const ExperimentConfig& c) {
  fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError(dir.string(), "cannot create output directory");
  return dir;
}

void write_json(const fs::path& p, const json& j) { write_text(p.string(), j.dump(2) + "\n"); }

// Measured data: --data, then io.input, then a fresh simulation.
TimeSeries measurements(const ExperimentConfig& c, const Options& o) {
  const std::string path = !o.data.empty() ? o.data : c.input;
  if (path.empty()) return simulate_measurements(c, c.noise.seed);
  // Van der Pol states or the two measured pendulum angles
  TimeSeries ts = read_trajectory_csv(path).series;
  if (ts.state_dim() != 2)
    throw ShapeError(path + ": expected 2 state columns, found " + std::to_string(ts.state_dim()));
  return ts;
}

void reject_swingup(const ExperimentConfig& c, const std::string& verb) {
  if (c.experiment == ExperimentKind::PendulumSwingUp)
    throw ConfigError("experiment", "'" + verb + "' does not apply to pendulum-swingup; use 'swingup'");
}

void write_energy_csv(const fs::path& p, const EnergyRun& run) {
  const EnergySeries& es = run.energy;
  Mat m(es.t.size(), 6);
  m.col(0) = es.t;
  m.col(1) = es.H_m;
  m.col(2).setConstant(es.E0);
  m.col(3) = es.deltaH;
  m.col(4) = run.fit.fitted;
  m.col(5) = run.fit.error_pct;
  write_csv(p.string(), {"t", "H_m", "E0", "deltaH", "deltaH_fit", "error_pct"}, m);
}

json energy_metrics(const EnergyRun& run) {
  return {{"E0", run.energy.E0},
          {"max_abs_deltaH", run.energy.deltaH.cwiseAbs().maxCoeff()},
          {"max_abs_error_pct", run.fit.error_pct.cwiseAbs().maxCoeff()}};
}

int cmd_simulate(const Options& o) {
  const ExperimentConfig c = load(o);
  reject_swingup(c, "simulate");
  const TimeSeries ts = simulate_measurements(c, c.noise.seed);
  const fs::path dir = out_dir(c);
  write_trajectory_csv((dir / "data.csv").string(), ts);
  std::cout << "wrote " << (dir / "data.csv").string() << " (" << ts.rows() << " rows)\n";
  return kOk;
}

int cmd_fit(const Options& o) {
  const ExperimentConfig c = load(o);
  reject_swingup(c, "fit");
  const TimeSeries data = measurements(c, o);
  const fs::path dir = out_dir(c);
  std::optional<DiscrepancyModel> fitted;

  // per-sample residual of the regression
  if (c.experiment == ExperimentKind::PendulumEnergy) {
    const EnergyRun run = fit_energy(c, data);
    write_energy_csv(dir / "energy.csv", run);
    write_json(dir / "energy_metrics.json", energy_metrics(run));
    Mat m(data.rows(), 2);
    m.col(0) = run.energy.t;
    m.col(1) = run.energy.deltaH - run.fit.fitted;
    write_csv((dir / "residuals.csv").string(), {"t", "r1"}, m);
    fitted = run.fit.model;
  } else {
    fitted = fit_vdp(c, data);
    const SmoothedDerivative d = estimate_derivative(data, c.fit.derivative);
    const Mat targets = assemble_discrepancy_targets(d.states, d.xdot, nominal_model(c));
    const Mat res = targets - fitted->predict(d.states.states());
    Mat m(data.rows(), 1 + res.cols());
    m.col(0) = data.times();
    m.rightCols(res.cols()) = res;
    std::vector<std::string> h{"t"};
    for (Index k = 1; k <= res.cols(); ++k) h.push_back("r" + std::to_string(k));
    write_csv((dir / "residuals.csv").string(), h, m);
  }
  const DiscrepancyModel& model = *fitted;
  json report = to_json(model);
  report["experiment"] = to_string(c.experiment);
  report["rows"] = data.rows();
  write_json(dir / "model.json", report);

  for (Index k = 0; k < model.coefficients.outputs(); ++k) {
    std::cout << model.output_names[static_cast<std::size_t>(k)] << ":";
    for (const auto& t : model.coefficients.active_terms(k))
      std::cout << " " << t << "=" << format_double(model.coefficients.xi(model.library.index_of(t), k));
    std::cout << "\n";
  }
  for (const auto& w : model.coefficients.warnings) std::cerr << "warning: " << w << "\n";
  return kOk;
}

int cmd_validate(const Options& o) {
  const ExperimentConfig c = load(o);
  reject_swingup(c, "validate");
  if (o.model.empty()) throw ConfigError("--model", "a fitted model file is required");
  json mj;
  try {
    mj = json::parse(read_text(o.model));
  } catch (const json::exception& e) {
    throw DataError(o.model + ": " + e.what());
  }
  const DiscrepancyModel model = discrepancy_from_json(mj);
  const fs::path dir = out_dir(c);

  if (c.experiment == ExperimentKind::PendulumEnergy) {
    const TimeSeries train = measurements(c, o);
    const double level = compute_energy_series(arm_coordinates_from_angles(train, c.fit.derivative), c.pendulum).E0;
    const EnergyRun run = validate_energy(c, model, level, c.noise.seed + 1);
    write_energy_csv(dir / "validation_energy.csv", run);
    json m = energy_metrics(run);
    const Vec x0 = energy_validation_start(c, level);
    m["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
    write_json(dir / "validation_metrics.json", m);
    std::cout << "validation max |error| " << format_double(m["max_abs_error_pct"].get<double>()) << " %\n";
    return kOk;
  }

  const VdpValidation v = validate_vdp(c, model);
  write_trajectory_csv((dir / "truth.csv").string(), v.truth);
  write_trajectory_csv((dir / "nominal.csv").string(), v.nominal);
  write_trajectory_csv((dir / "hybrid.csv").string(), v.hybrid);
  write_text((dir / "validation_metrics.csv").string(),
             "trajectory,rmse\nnominal," + format_double(v.rmse_nominal) + "\nhybrid," +
                 format_double(v.rmse_hybrid) + "\n");
  write_json(dir / "validation_metrics.json",
             {{"x0", std::vector<double>(v.x0.data(), v.x0.data() + v.x0.size())},
              {"rmse_nominal", v.rmse_nominal},
              {"rmse_hybrid", v.rmse_hybrid},
              {"ratio", v.rmse_hybrid / v.rmse_nominal}});
  std::cout << "rmse nominal " << format_double(v.rmse_nominal) << "  hybrid " << format_double(v.rmse_hybrid)
            << "\n";
  return kOk;
}

int cmd_swingup(const Options& o) {
  const ExperimentConfig c = load(o);
  if (c.experiment != ExperimentKind::PendulumSwingUp)
    throw ConfigError("experiment", "'swingup' needs a pendulum-swingup config");
  const SwingUpReport r = closed_loop_discrepancy_experiment(swing_up_config(c));
  const fs::path dir = out_dir(c);
  json report = to_json(r);
  report["experiment"] = to_string(c.experiment);
  report["inject_mismatch"] = c.swingup.inject_mismatch;
  write_json(dir / "report.json", report);
  write_trajectory_csv((dir / "nominal_trajectory.csv").string(), r.nominal_playback);
  write_trajectory_csv((dir / "hybrid_trajectory.csv").string(), r.hybrid_playback);
  std::cout << "nominal plan on plant: final error " << format_double(r.nominal_final_error)
            << (r.nominal_swing_up() ? " (swing-up)" : " (failed)") << "\n"
            << "hybrid plan on plant:  final error " << format_double(r.hybrid_final_error)
            << (r.hybrid_swing_up() ? " (swing-up)" : " (failed)") << "\n";
  if (!r.nominal_plan.converged || !r.hybrid_plan.converged)
    throw ConvergenceFailure("optimizer: " + (r.nominal_plan.converged ? r.hybrid_plan.status : r.nominal_plan.status));
  return kOk;
}

int cmd_lambda_sweep(const Options& o) {
  const ExperimentConfig c = load(o);
  std::vector<double> lambdas = o.lambdas;
  if (lambdas.empty()) {
    const double l = c.fit.solver.lambda;
    lambdas = {0.5 * l, l, 1.5 * l};
  }
  std::vector<SweepRow> rows;
  if (c.experiment == ExperimentKind::PendulumSwingUp) {
    rows = lambda_sweep(c, record_nominal_swing_up(swing_up_config(c)), lambdas);
  } else {
    rows = lambda_sweep(c, measurements(c, o), lambdas);
  }
  const fs::path dir = out_dir(c);

  std::ostringstream csv;
  csv << "lambda,output,active_count,active_terms,coefficients,residual_rmse\n";
  json all = json::array();
  for (const auto& row : rows) {
    const auto& m = row.model;
    for (Index k = 0; k < m.coefficients.outputs(); ++k) {
      const auto terms = m.coefficients.active_terms(k);
      std::string names, coefs;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        names += (i ? ";" : "") + terms[i];
        coefs += (i ? ";" : "") + format_double(m.coefficients.xi(m.library.index_of(terms[i]), k));
      }
      csv << format_double(row.lambda) << "," << m.output_names[static_cast<std::size_t>(k)] << "," << terms.size()
          << "," << names << "," << coefs << "," << format_double(m.diagnostics.residual_rmse[k]) << "\n";
    }
    all.push_back({{"lambda", row.lambda}, {"model", to_json(m)}});
  }
  write_text((dir / "sweep.csv").string(), csv.str());
  write_json(dir / "sweep.json", all);
  std::cout << csv.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse discrepancy models between nominal physics and trajectory data"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "overrides the noise and optimizer seeds");
    sub->add_option("--out", o.out, "output directory (default io.output_dir)");
  };
  auto* simulate = app.add_subcommand("simulate", "write noisy measurements of the true system");
  common(simulate);
  auto* fit = app.add_subcommand("fit", "fit a discrepancy model");
  common(fit);
  fit->add_option("--data", o.data, "measurement CSV (default io.input, else simulate)");
  auto* validate = app.add_subcommand("validate", "compare truth, nominal and hybrid on a held-out start");
  common(validate);
  validate->add_option("--model", o.model, "model JSON written by fit")->required();
  validate->add_option("--data", o.data, "training measurement CSV (energy level reference)");
  auto* swingup = app.add_subcommand("swingup", "closed-loop swing-up discrepancy experiment");
  common(swingup);
  auto* sweep = app.add_subcommand("lambda-sweep", "refit over a list of thresholds");
  common(sweep);
  sweep->add_option("--data", o.data, "measurement CSV");
  sweep->add_option("--lambdas", o.lambdas, "thresholds (default 0.5x, 1x, 1.5x the config value)")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate) return cmd_simulate(o);
    if (*fit) return cmd_fit(o);
    if (*validate) return cmd_validate(o);
    if (*swingup) return cmd_swingup(o);
    if (*sweep) return cmd_lambda_sweep(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ConvergenceFailure& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kConvergence;
  } catch (const StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kData;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const ShapeError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
