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

#include "dsindy/energy.hpp"

#include <cmath>

#include "dsindy/errors.hpp"

namespace dsindy {

TimeSeries arm_coordinates(const TimeSeries& pendulum) {
  if (pendulum.state_dim() != 6) throw ShapeError("arm coordinates: expected a 6-column pendulum trajectory");
  Mat arms(pendulum.rows(), 4);
  arms.col(0) = pendulum.states().col(0);
  arms.col(1) = pendulum.states().col(1);
  arms.col(2) = pendulum.states().col(3);
  arms.col(3) = pendulum.states().col(4);
  return TimeSeries(pendulum.t0(), pendulum.dt(), std::move(arms));
}

TimeSeries arm_coordinates_from_angles(const TimeSeries& angles, const DerivativeOptions& opts) {
  if (angles.state_dim() != 2) throw ShapeError("arm coordinates: expected 2 angle columns");
  const SmoothedDerivative d = estimate_derivative(angles, opts);
  Mat arms(angles.rows(), 4);
  arms.leftCols(2) = d.states.states();
  arms.rightCols(2) = d.xdot.values;
  return TimeSeries(angles.t0(), angles.dt(), std::move(arms));
}

EnergySeries compute_energy_series(const TimeSeries& arms, const PendulumParams& p) {
  if (arms.state_dim() != 4) throw ShapeError("energy: expected columns (phi1, phi2, dphi1, dphi2)");
  p.validate();
  const Mat& q = arms.states();
  EnergySeries es;
  es.t = arms.times();
  es.H_m.resize(arms.rows());
  for (Index i = 0; i < arms.rows(); ++i)
    es.H_m[i] = kinetic_potential(q(i, 0), q(i, 1), q(i, 2), q(i, 3), p).total();
  es.E0 = es.H_m[0];
  es.deltaH = Vec::Constant(es.H_m.size(), es.E0) - es.H_m;
  return es;
}

CandidateLibrary default_energy_library(bool mixed_products) {
  CandidateLibrary lib = merge_libraries(build_polynomial_library(4, 3, true, {2, 3}), build_fourier_library(4, 3, {0, 1}));
  if (!mixed_products) return lib;
  const CandidateLibrary quad = filter_library(build_polynomial_library(4, 2, false, {2, 3}), {"x3^2", "x3*x4", "x4^2"});
  const CandidateLibrary pairs = product_library(build_fourier_library(4, 1, {0}), build_fourier_library(4, 1, {1}));
  return merge_libraries(lib, product_library(quad, pairs));
}

Vec equal_energy_rest_state(double phi1, double energy, const PendulumParams& p) {
  p.validate();
  auto gap = [&](double phi2) { return kinetic_potential(phi1, phi2, 0.0, 0.0, p).total() - energy; };
  double lo = 0.0, hi = M_PI;
  if (gap(lo) * gap(hi) > 0.0) throw ParameterError("energy: no rest state with that energy for the given phi1");
  for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (gap(lo) * gap(mid) <= 0.0) hi = mid; else lo = mid;
  }
  Vec x = Vec::Zero(6);
  x[0] = phi1;
  x[1] = std::abs(gap(lo)) <= std::abs(gap(hi)) ? lo : hi;
  return x;
}

Vec error_percentage(const Vec& reference, const Vec& estimate) {
  if (reference.size() != estimate.size()) throw ShapeError("error percentage: length mismatch");
  const double peak = reference.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) return Vec::Zero(reference.size());
  return (reference - estimate) / peak * 100.0;
}

EnergyFit evaluate_energy_model(const DiscrepancyModel& model, const EnergySeries& es, const TimeSeries& arms) {
  if (arms.rows() != es.deltaH.size()) throw ShapeError("energy fit: sample counts differ");
  if (model.coefficients.outputs() != 1) throw ShapeError("energy fit: model must have a single output");
  EnergyFit fit{model, model.predict(arms.states()).col(0), {}};
  fit.error_pct = error_percentage(es.deltaH, fit.fitted);
  return fit;
}

EnergyFit fit_energy_discrepancy(const EnergySeries& es, const TimeSeries& arms, const CandidateLibrary& lib,
                                 const FitConfig& cfg) {
  if (lib.state_dim() != 4 || lib.control_dim() != 0)
    throw ShapeError("energy fit: library must be over (phi1, phi2, dphi1, dphi2)");
  if (arms.rows() != es.deltaH.size()) throw ShapeError("energy fit: sample counts differ");
  DiscrepancyModel model = fit_library(arms.states(), nullptr, es.deltaH, lib, cfg, {"deltaH"});
  return evaluate_energy_model(model, es, arms);
}

}  // namespace dsindy
