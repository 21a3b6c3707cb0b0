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

#include <string>

#include "dsindy/numerics.hpp"

namespace dsindy {

// ---------------------------------------------------------------------------
// Van der Pol oscillator
// ---------------------------------------------------------------------------

struct VanDerPolParams {
  double alpha = 0.5;
};

/// (x2, alpha (1 - x1^2) x2 - x1)
Eigen::Vector2d vdp_rhs(const Eigen::Vector2d& x, double alpha);
/// Same field without the restoring -x1 term.
Eigen::Vector2d vdp_inadequate_rhs(const Eigen::Vector2d& x, double alpha);

DynamicsModel vdp_model(double alpha);
DynamicsModel vdp_inadequate_model(double alpha);

// ---------------------------------------------------------------------------
// Double pendulum on an acceleration-driven cart
// ---------------------------------------------------------------------------

/// Angles are absolute and measured from the upright vertical. Centers of mass
/// sit at distance a_i along each arm; inertias are about the centers of mass.
struct PendulumParams {
  double m1 = 0.2704;
  double m2 = 0.2056;
  double a1 = 0.1910;
  double a2 = 0.1621;
  double I1 = 0.003;
  double I2 = 0.0011;
  double l1 = 0.2667;
  double l2 = 0.2667;
  double k1 = 7.24e-4;  ///< N m s/rad, arm 1 to cart
  double k2 = 1.65e-4;  ///< N m s/rad, arm 2 to arm 1
  double g = 9.818;

  /// Throws ParameterError naming the first invalid field.
  void validate() const;
};

/// Identified parameters of the laboratory rig.
PendulumParams rig_params();
PendulumParams pendulum_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PendulumParams& p);

/// State [phi1, phi2, s, dphi1, dphi2, ds].
struct PendulumState {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double s = 0.0;
  double dphi1 = 0.0;
  double dphi2 = 0.0;
  double ds = 0.0;

  static PendulumState from_vector(const Vec& x);
  Vec to_vector() const;

  /// Center-of-mass positions relative to the cart pivot.
  double x1(const PendulumParams& p) const;
  double y1(const PendulumParams& p) const;
  double x2(const PendulumParams& p) const;
  double y2(const PendulumParams& p) const;
};

PendulumState pendulum_upright();
PendulumState pendulum_hanging();

/// [dphi1, dphi2, ds, ddphi1, ddphi2, u] with u the cart acceleration. With
/// friction, arm torques -k1 dphi1 - k2 (dphi1 - dphi2) and k2 (dphi1 - dphi2)
/// act on the two arms.
Vec pendulum_rhs(const Vec& x, double u, const PendulumParams& p, bool friction);

/// Frictionless field with sin(phi1) added to the first component and input
/// gain 0.95 on the cart acceleration.
Vec pendulum_flawed_rhs(const Vec& x, double u, const PendulumParams& p);

DynamicsModel pendulum_model(const PendulumParams& p, bool friction);
DynamicsModel pendulum_flawed_model(const PendulumParams& p);

struct Energy {
  double kinetic = 0.0;
  double potential = 0.0;
  double total() const noexcept { return kinetic + potential; }
};

/// Arm energies with the cart locked (cart velocity ignored).
Energy kinetic_potential(const PendulumState& x, const PendulumParams& p);
/// Same from (phi1, phi2, dphi1, dphi2).
Energy kinetic_potential(double phi1, double phi2, double dphi1, double dphi2, const PendulumParams& p);

}  // namespace dsindy
