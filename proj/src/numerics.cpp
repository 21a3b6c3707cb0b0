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

#include "dsindy/numerics.hpp"

#include <cmath>
#include <utility>

#include "dsindy/errors.hpp"

namespace dsindy {

bool all_finite(const Mat& m) { return m.allFinite(); }

TimeSeries::TimeSeries(double t0, double dt, Mat states, std::optional<Mat> controls)
    : t0_(t0), dt_(dt), states_(std::move(states)), controls_(std::move(controls)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ParameterError("time series: dt must be positive");
  if (!std::isfinite(t0_)) throw ParameterError("time series: t0 must be finite");
  if (states_.rows() < 2) throw InsufficientDataError("time series: need at least 2 samples");
  if (!states_.allFinite()) throw DataError("time series: non-finite state value");
  if (controls_) {
    if (controls_->rows() != states_.rows())
      throw ShapeError("time series: control rows (" + std::to_string(controls_->rows()) +
                       ") differ from state rows (" + std::to_string(states_.rows()) + ")");
    if (!controls_->allFinite()) throw DataError("time series: non-finite control value");
  }
}

Vec TimeSeries::times() const {
  Vec t(rows());
  for (Index i = 0; i < rows(); ++i) t[i] = time(i);
  return t;
}

TimeSeries TimeSeries::with_states(Mat states) const {
  if (states.rows() != rows()) throw ShapeError("time series: row count changed");
  return TimeSeries(t0_, dt_, std::move(states), controls_);
}

ControlSignal::ControlSignal(double t0, double dt, Mat values)
    : t0_(t0), dt_(dt), values_(std::move(values)) {
  if (!(dt_ > 0.0)) throw ParameterError("control signal: dt must be positive");
  if (values_.rows() < 1) throw ParameterError("control signal: empty");
  if (!values_.allFinite()) throw DataError("control signal: non-finite value");
}

Vec ControlSignal::at(double t) const {
  // The small bias keeps t = t0 + k*dt on interval k despite rounding.
  const double k = std::floor((t - t0_) / dt_ + 1e-9);
  Index idx = k < 0.0 ? 0 : static_cast<Index>(k);
  if (idx >= values_.rows()) idx = values_.rows() - 1;
  return values_.row(idx).transpose();
}

Vec DynamicsModel::operator()(const Vec& x, const Vec& u) const {
  if (x.size() != state_dim)
    throw ShapeError(name + ": state has " + std::to_string(x.size()) + " entries, expected " +
                     std::to_string(state_dim));
  if (u.size() != control_dim)
    throw ShapeError(name + ": control has " + std::to_string(u.size()) + " entries, expected " +
                     std::to_string(control_dim));
  return field(x, u);
}

Linearization linearize(const DynamicsModel& model, const Vec& x, const Vec& u, double step) {
  const Index n = model.state_dim;
  const Index r = model.control_dim;
  Linearization lin{Mat(n, n), Mat(n, r)};
  Vec xp = x;
  for (Index j = 0; j < n; ++j) {
    const double h = step * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    const Vec fp = model.field(xp, u);
    xp[j] = x[j] - h;
    const Vec fm = model.field(xp, u);
    xp[j] = x[j];
    lin.A.col(j) = (fp - fm) / (2.0 * h);
  }
  Vec up = u;
  for (Index j = 0; j < r; ++j) {
    const double h = step * std::max(1.0, std::abs(u[j]));
    up[j] = u[j] + h;
    const Vec fp = model.field(x, up);
    up[j] = u[j] - h;
    const Vec fm = model.field(x, up);
    up[j] = u[j];
    lin.B.col(j) = (fp - fm) / (2.0 * h);
  }
  return lin;
}

Vec rk4_step(const DynamicsModel& model, const Vec& x, const Vec& u, double dt) {
  const Vec k1 = model.field(x, u);
  const Vec k2 = model.field(x + 0.5 * dt * k1, u);
  const Vec k3 = model.field(x + 0.5 * dt * k2, u);
  const Vec k4 = model.field(x + dt * k3, u);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Index sample_count(double t_span, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!std::isfinite(t_span) || t_span < dt * (1.0 - 1e-9))
    throw ParameterError("t_span must be at least dt");
  return static_cast<Index>(std::floor(t_span / dt + 1e-9)) + 1;
}

namespace {

TimeSeries integrate_impl(const DynamicsModel& model, const Vec& x0, const ControlSignal* controls,
                          double t_span, double dt, double t0) {
  if (x0.size() != model.state_dim)
    throw ShapeError(model.name + ": initial state has " + std::to_string(x0.size()) +
                     " entries, expected " + std::to_string(model.state_dim));
  if (controls && controls->dim() != model.control_dim)
    throw ShapeError(model.name + ": control signal dimension mismatch");
  const Index m = sample_count(t_span, dt);
  const Index r = model.control_dim;

  Mat states(m, model.state_dim);
  std::optional<Mat> inputs;
  if (r > 0) inputs = Mat::Zero(m, r);

  Vec x = x0;
  Vec u = Vec::Zero(r);
  states.row(0) = x.transpose();
  for (Index k = 0; k + 1 < m; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    if (controls) u = controls->at(t);
    if (inputs) inputs->row(k) = u.transpose();
    x = rk4_step(model, x, u, dt);
    if (!x.allFinite()) throw IntegrationDiverged(static_cast<std::size_t>(k + 1));
    states.row(k + 1) = x.transpose();
  }
  if (inputs && controls) inputs->row(m - 1) = controls->at(t0 + static_cast<double>(m - 1) * dt).transpose();
  return TimeSeries(t0, dt, std::move(states), std::move(inputs));
}

}  // namespace

TimeSeries integrate_rk4(const DynamicsModel& model, const Vec& x0, double t_span, double dt,
                         double t0) {
  return integrate_impl(model, x0, nullptr, t_span, dt, t0);
}

TimeSeries integrate_rk4(const DynamicsModel& model, const Vec& x0, const ControlSignal& controls,
                         double t_span, double dt) {
  return integrate_impl(model, x0, &controls, t_span, dt, controls.t0());
}

std::string to_string(DiffMethod m) {
  return m == DiffMethod::CentralDifference ? "central-difference" : "savitzky-golay";
}

DiffMethod diff_method_from_string(const std::string& s) {
  if (s == "central-difference" || s == "central") return DiffMethod::CentralDifference;
  if (s == "savitzky-golay" || s == "sg") return DiffMethod::SavitzkyGolay;
  throw ParameterError("unknown differentiation method '" + s + "'");
}

namespace {

void check_sg(int window, int poly_order) {
  if (poly_order < 1) throw ParameterError("savitzky-golay: poly_order must be at least 1");
  if (window < 1 || window % 2 == 0) throw ParameterError("savitzky-golay: window must be odd");
  if (window <= poly_order)
    throw ParameterError("savitzky-golay: window must exceed poly_order");
}

// Rows of the least-squares projector for a degree-`order` polynomial on the
// sample offsets -half..half, in coordinates scaled by 1/half.
Mat sg_projector(int window, int order) {
  const int half = window / 2;
  const double scale = half > 0 ? static_cast<double>(half) : 1.0;
  Mat V(window, order + 1);
  for (int i = 0; i < window; ++i) {
    const double tau = static_cast<double>(i - half) / scale;
    double p = 1.0;
    for (int k = 0; k <= order; ++k) {
      V(i, k) = p;
      p *= tau;
    }
  }
  return V.colPivHouseholderQr().solve(Mat::Identity(window, window));
}

// Weights over the window that evaluate the fit (or its derivative) at `offset`
// samples from the window center.
Vec sg_weights(const Mat& projector, int offset, int half, int deriv, double dt) {
  const double scale = half > 0 ? static_cast<double>(half) : 1.0;
  const double tau = static_cast<double>(offset) / scale;
  const Index order = projector.rows() - 1;
  Vec w = Vec::Zero(projector.cols());
  if (deriv == 0) {
    double p = 1.0;
    for (Index k = 0; k <= order; ++k) {
      w += p * projector.row(k).transpose();
      p *= tau;
    }
  } else {
    double p = 1.0;
    for (Index k = 1; k <= order; ++k) {
      w += static_cast<double>(k) * p * projector.row(k).transpose();
      p *= tau;
    }
    w /= scale * dt;
  }
  return w;
}

}  // namespace

Mat savitzky_golay_filter(const Mat& y, int window, int poly_order, int deriv, double dt) {
  check_sg(window, poly_order);
  const Index m = y.rows();
  if (window > m) throw InsufficientDataError("savitzky-golay: window exceeds sample count");
  const int half = window / 2;
  const Mat P = sg_projector(window, poly_order);

  Mat out(m, y.cols());
  const Vec center = sg_weights(P, 0, half, deriv, dt);
  for (Index i = half; i < m - half; ++i)
    out.row(i) = center.transpose() * y.middleRows(i - half, window);

  const Index edge = std::min<Index>(half, m);
  for (Index i = 0; i < edge; ++i) {
    const Vec w = sg_weights(P, static_cast<int>(i) - half, half, deriv, dt);
    out.row(i) = w.transpose() * y.topRows(window);
  }
  for (Index i = std::max<Index>(m - half, edge); i < m; ++i) {
    const int offset = static_cast<int>(i - (m - window)) - half;
    const Vec w = sg_weights(P, offset, half, deriv, dt);
    out.row(i) = w.transpose() * y.bottomRows(window);
  }
  return out;
}

TimeSeries smooth_savitzky_golay(const TimeSeries& ts, int window, int poly_order) {
  check_sg(window, poly_order);
  if (window > ts.rows()) throw ParameterError("savitzky-golay: window exceeds sample count");
  return ts.with_states(savitzky_golay_filter(ts.states(), window, poly_order, 0, ts.dt()));
}

DerivativeEstimate differentiate(const TimeSeries& ts, DiffMethod method, int window,
                                 int poly_order) {
  const Mat& y = ts.states();
  const Index m = y.rows();
  const double dt = ts.dt();
  if (method == DiffMethod::SavitzkyGolay) {
    check_sg(window, poly_order);
    if (window >= m) throw InsufficientDataError("differentiate: window must be smaller than sample count");
    return {savitzky_golay_filter(y, window, poly_order, 1, dt), method, BoundaryPolicy::PolynomialFit};
  }
  if (m < 3) throw InsufficientDataError("differentiate: central differences need 3 samples");
  Mat d(m, y.cols());
  d.middleRows(1, m - 2) = (y.bottomRows(m - 2) - y.topRows(m - 2)) / (2.0 * dt);
  d.row(0) = (-3.0 * y.row(0) + 4.0 * y.row(1) - y.row(2)) / (2.0 * dt);
  d.row(m - 1) = (3.0 * y.row(m - 1) - 4.0 * y.row(m - 2) + y.row(m - 3)) / (2.0 * dt);
  return {std::move(d), method, BoundaryPolicy::OneSidedSecondOrder};
}

SmoothedDerivative estimate_derivative(const TimeSeries& ts, const DerivativeOptions& opts) {
  TimeSeries states = opts.smooth ? smooth_savitzky_golay(ts, opts.smooth_window, opts.smooth_order) : ts;
  DerivativeEstimate d = differentiate(states, opts.method, opts.window, opts.poly_order);
  return {std::move(states), std::move(d)};
}

LeastSquaresResult solve_least_squares(const Mat& A, const Mat& b) {
  if (A.rows() != b.rows())
    throw ShapeError("least squares: A has " + std::to_string(A.rows()) + " rows, b has " +
                     std::to_string(b.rows()));
  if (!A.allFinite() || !b.allFinite()) throw DataError("least squares: non-finite input");
  if (A.cols() == 0) return {Mat(0, b.cols()), 0, false};
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  LeastSquaresResult res;
  res.solution = cod.solve(b);
  res.rank = cod.rank();
  res.rank_deficient = res.rank < A.cols();
  return res;
}

}  // namespace dsindy
