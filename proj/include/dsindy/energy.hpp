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

#include "dsindy/library.hpp"
#include "dsindy/numerics.hpp"
#include "dsindy/sindy.hpp"
#include "dsindy/systems.hpp"

namespace dsindy {

/// Conservative energy along a trajectory and the energy lost since t0.
struct EnergySeries {
  Vec t;
  Vec H_m;
  double E0 = 0.0;
  Vec deltaH;  ///< E0 - H_m, zero at the first sample
};

/// Arm coordinates (phi1, phi2, dphi1, dphi2) from a 6-column pendulum trajectory.
TimeSeries arm_coordinates(const TimeSeries& pendulum);

/// Arm coordinates from measured angles (phi1, phi2): optional smoothing, then
/// numerical differentiation for the velocities.
TimeSeries arm_coordinates_from_angles(const TimeSeries& angles, const DerivativeOptions& opts);

/// H_m = T + V per row of a 4-column (phi1, phi2, dphi1, dphi2) series.
EnergySeries compute_energy_series(const TimeSeries& arms, const PendulumParams& p);

/// Polynomials up to per-variable degree 3 in (dphi1, dphi2) with a constant,
/// Fourier terms of order 1..3 in (phi1, phi2). With `mixed_products`, the
/// degree-2 velocity monomials times products of first-order trig terms of
/// the two angles are appended.
CandidateLibrary default_energy_library(bool mixed_products);

struct EnergyFit {
  DiscrepancyModel model;
  Vec fitted;     ///< deltaH predicted by the model
  Vec error_pct;  ///< (deltaH - fitted) / max|deltaH| * 100
};

/// Single-target regression of deltaH on the library evaluated at the arm
/// coordinates.
EnergyFit fit_energy_discrepancy(const EnergySeries& es, const TimeSeries& arms, const CandidateLibrary& lib,
                                 const FitConfig& cfg);

/// Applies a fitted deltaH model to another trajectory.
EnergyFit evaluate_energy_model(const DiscrepancyModel& model, const EnergySeries& es, const TimeSeries& arms);

/// Arms at rest with the given phi1 and phi2 in [0, pi] chosen by bisection so
/// that H_m equals `energy`. Throws ParameterError when no such phi2 exists.
Vec equal_energy_rest_state(double phi1, double energy, const PendulumParams& p);

/// (reference - estimate) / max|reference| * 100, elementwise.
Vec error_percentage(const Vec& reference, const Vec& estimate);

}  // namespace dsindy
