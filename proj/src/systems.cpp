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

#include "dsindy/systems.hpp"

#include <cmath>

#include "dsindy/errors.hpp"

namespace dsindy {

Eigen::Vector2d vdp_rhs(const Eigen::Vector2d& x, double alpha) {
  return {x[1], alpha * (1.0 - x[0] * x[0]) * x[1] - x[0]};
}

Eigen::Vector2d vdp_inadequate_rhs(const Eigen::Vector2d& x, double alpha) {
  return {x[1], alpha * (1.0 - x[0] * x[0]) * x[1]};
}

DynamicsModel vdp_model(double alpha) {
  return {"van-der-pol(alpha=" + std::to_string(alpha) + ")", 2, 0,
          [alpha](const Vec& x, const Vec&) -> Vec { return vdp_rhs(x, alpha); }};
}

DynamicsModel vdp_inadequate_model(double alpha) {
  return {"van-der-pol-inadequate(alpha=" + std::to_string(alpha) + ")", 2, 0,
          [alpha](const Vec& x, const Vec&) -> Vec { return vdp_inadequate_rhs(x, alpha); }};
}

void PendulumParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string("pendulum: ") + name + " must be positive");
  };
  positive(m1, "m1");
  positive(m2, "m2");
  positive(a1, "a1");
  positive(a2, "a2");
  positive(I1, "I1");
  positive(I2, "I2");
  positive(l1, "l1");
  positive(l2, "l2");
  positive(g, "g");
  if (!(k1 >= 0.0) || !std::isfinite(k1)) throw ParameterError("pendulum: k1 must be >= 0");
  if (!(k2 >= 0.0) || !std::isfinite(k2)) throw ParameterError("pendulum: k2 must be >= 0");
  if (a1 > l1) throw ParameterError("pendulum: a1 must not exceed l1");
  if (a2 > l2) throw ParameterError("pendulum: a2 must not exceed l2");
}

PendulumParams rig_params() { return PendulumParams{}; }

PendulumParams pendulum_params_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "paper-table1") return rig_params();
    throw ParameterError("pendulum: unknown preset '" + j.get<std::string>() + "'");
  }
  PendulumParams p = j.contains("preset") ? pendulum_params_from_json(j.at("preset")) : PendulumParams{};
  p.m1 = j.value("m1", p.m1);
  p.m2 = j.value("m2", p.m2);
  p.a1 = j.value("a1", p.a1);
  p.a2 = j.value("a2", p.a2);
  p.I1 = j.value("I1", p.I1);
  p.I2 = j.value("I2", p.I2);
  p.l1 = j.value("l1", p.l1);
  p.l2 = j.value("l2", p.l2);
  p.k1 = j.value("k1", p.k1);
  p.k2 = j.value("k2", p.k2);
  p.g = j.value("g", p.g);
  p.validate();
  return p;
}

nlohmann::json to_json(const PendulumParams& p) {
  return {{"m1", p.m1}, {"m2", p.m2}, {"a1", p.a1}, {"a2", p.a2}, {"I1", p.I1}, {"I2", p.I2},
          {"l1", p.l1}, {"l2", p.l2}, {"k1", p.k1}, {"k2", p.k2}, {"g", p.g}};
}

PendulumState PendulumState::from_vector(const Vec& x) {
  if (x.size() != 6) throw ShapeError("pendulum state needs 6 entries");
  return {x[0], x[1], x[2], x[3], x[4], x[5]};
}

Vec PendulumState::to_vector() const {
  Vec v(6);
  v << phi1, phi2, s, dphi1, dphi2, ds;
  return v;
}

double PendulumState::x1(const PendulumParams& p) const { return p.a1 * std::sin(phi1); }
double PendulumState::y1(const PendulumParams& p) const { return p.a1 * std::cos(phi1); }
double PendulumState::x2(const PendulumParams& p) const { return p.l1 * std::sin(phi1) + p.a2 * std::sin(phi2); }
double PendulumState::y2(const PendulumParams& p) const { return p.l1 * std::cos(phi1) + p.a2 * std::cos(phi2); }

PendulumState pendulum_upright() { return {}; }
PendulumState pendulum_hanging() { return {M_PI, M_PI, 0.0, 0.0, 0.0, 0.0}; }

Vec pendulum_rhs(const Vec& x, double u, const PendulumParams& p, bool friction) {
  const double phi1 = x[0], phi2 = x[1], w1 = x[3], w2 = x[4];
  const double c12 = std::cos(phi1 - phi2);
  const double s12 = std::sin(phi1 - phi2);
  const double coupling = p.m2 * p.l1 * p.a2;
  const double h1 = p.m1 * p.a1 + p.m2 * p.l1;
  const double h2 = p.m2 * p.a2;

  // Lagrange equations in (phi1, phi2) with the cart acceleration as input:
  //   M(q) qdd = g h sin(phi) - h cos(phi) u - coriolis + Q
  const double M11 = p.m1 * p.a1 * p.a1 + p.m2 * p.l1 * p.l1 + p.I1;
  const double M12 = coupling * c12;
  const double M22 = p.m2 * p.a2 * p.a2 + p.I2;

  double r1 = p.g * h1 * std::sin(phi1) - h1 * std::cos(phi1) * u - coupling * s12 * w2 * w2;
  double r2 = p.g * h2 * std::sin(phi2) - h2 * std::cos(phi2) * u + coupling * s12 * w1 * w1;
  if (friction) {
    const double t1 = p.k1 * w1;
    const double t2 = p.k2 * (w1 - w2);
    r1 += -t1 - t2;
    r2 += t2;
  }
  const double det = M11 * M22 - M12 * M12;
  if (!(std::abs(det) > 0.0) || !std::isfinite(det))
    throw Error("pendulum: singular mass matrix (invalid parameters)");
  Vec dx(6);
  dx << w1, w2, x[5], (M22 * r1 - M12 * r2) / det, (M11 * r2 - M12 * r1) / det, u;
  return dx;
}

Vec pendulum_flawed_rhs(const Vec& x, double u, const PendulumParams& p) {
  Vec dx = pendulum_rhs(x, u, p, false);
  dx[0] += std::sin(x[0]);
  dx[5] = 0.95 * u;
  return dx;
}

DynamicsModel pendulum_model(const PendulumParams& p, bool friction) {
  p.validate();
  return {friction ? "double-pendulum(friction)" : "double-pendulum", 6, 1,
          [p, friction](const Vec& x, const Vec& u) { return pendulum_rhs(x, u[0], p, friction); }};
}

DynamicsModel pendulum_flawed_model(const PendulumParams& p) {
  p.validate();
  return {"double-pendulum-flawed", 6, 1, [p](const Vec& x, const Vec& u) { return pendulum_flawed_rhs(x, u[0], p); }};
}

Energy kinetic_potential(double phi1, double phi2, double dphi1, double dphi2, const PendulumParams& p) {
  const double vx1 = p.a1 * std::cos(phi1) * dphi1;
  const double vy1 = -p.a1 * std::sin(phi1) * dphi1;
  const double vx2 = p.l1 * std::cos(phi1) * dphi1 + p.a2 * std::cos(phi2) * dphi2;
  const double vy2 = -p.l1 * std::sin(phi1) * dphi1 - p.a2 * std::sin(phi2) * dphi2;
  Energy e;
  e.kinetic = 0.5 * (p.m1 * (vx1 * vx1 + vy1 * vy1) + p.m2 * (vx2 * vx2 + vy2 * vy2)) +
              0.5 * (p.I1 * dphi1 * dphi1 + p.I2 * dphi2 * dphi2);
  const double y1 = p.a1 * std::cos(phi1);
  const double y2 = p.l1 * std::cos(phi1) + p.a2 * std::cos(phi2);
  e.potential = (p.m1 * y1 + p.m2 * y2) * p.g;
  return e;
}

Energy kinetic_potential(const PendulumState& x, const PendulumParams& p) {
  return kinetic_potential(x.phi1, x.phi2, x.dphi1, x.dphi2, p);
}

}  // namespace dsindy
