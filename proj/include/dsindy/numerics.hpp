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

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

namespace dsindy {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Uniformly sampled trajectory: row i holds the state at t0 + i*dt.
///
/// Controls, when present, have one row per state row; row i is the input
/// applied from sample i onward (zero-order hold).
class TimeSeries {
 public:
  TimeSeries(double t0, double dt, Mat states, std::optional<Mat> controls = std::nullopt);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  Index rows() const noexcept { return states_.rows(); }
  Index state_dim() const noexcept { return states_.cols(); }
  Index control_dim() const noexcept { return controls_ ? controls_->cols() : 0; }
  bool has_controls() const noexcept { return controls_.has_value(); }

  const Mat& states() const noexcept { return states_; }
  const std::optional<Mat>& controls() const noexcept { return controls_; }

  double time(Index i) const noexcept { return t0_ + static_cast<double>(i) * dt_; }
  Vec times() const;
  double duration() const noexcept { return static_cast<double>(rows() - 1) * dt_; }

  /// Same sampling grid, new state matrix; controls are kept.
  TimeSeries with_states(Mat states) const;

 private:
  double t0_;
  double dt_;
  Mat states_;
  std::optional<Mat> controls_;
};

/// Piecewise-constant input sequence; row k is held on [t0 + k*dt, t0 + (k+1)*dt).
class ControlSignal {
 public:
  ControlSignal(double t0, double dt, Mat values);

  /// Value held at time t. Times past the last interval return the last row;
  /// times before t0 return the first.
  Vec at(double t) const;

  Index steps() const noexcept { return values_.rows(); }
  Index dim() const noexcept { return values_.cols(); }
  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  const Mat& values() const noexcept { return values_; }

 private:
  double t0_;
  double dt_;
  Mat values_;
};

/// Evaluable vector field xdot = f(x, u). Uncontrolled models take an empty u.
struct DynamicsModel {
  using Field = std::function<Vec(const Vec& x, const Vec& u)>;

  std::string name;
  Index state_dim = 0;
  Index control_dim = 0;
  Field field;

  Vec operator()(const Vec& x, const Vec& u) const;
  Vec operator()(const Vec& x) const { return (*this)(x, Vec::Zero(control_dim)); }
};

/// Jacobians of a model at (x, u) by central differences.
struct Linearization {
  Mat A;  ///< df/dx, n x n
  Mat B;  ///< df/du, n x r
};
Linearization linearize(const DynamicsModel& model, const Vec& x, const Vec& u, double step = 1e-6);

/// One classical Runge-Kutta step with u held constant.
Vec rk4_step(const DynamicsModel& model, const Vec& x, const Vec& u, double dt);

/// Number of samples on [0, t_span] at spacing dt, endpoints included.
Index sample_count(double t_span, double dt);

/// Fixed-step RK4 from x0 over t_span. Controls are sampled zero-order-hold at
/// the start of each step; a controlled model integrated without a signal
/// sees u = 0.
TimeSeries integrate_rk4(const DynamicsModel& model, const Vec& x0, double t_span, double dt,
                         double t0 = 0.0);
TimeSeries integrate_rk4(const DynamicsModel& model, const Vec& x0, const ControlSignal& controls,
                         double t_span, double dt);

enum class DiffMethod { CentralDifference, SavitzkyGolay };
enum class BoundaryPolicy { OneSidedSecondOrder, PolynomialFit };

std::string to_string(DiffMethod m);
DiffMethod diff_method_from_string(const std::string& s);

struct DerivativeEstimate {
  Mat values;
  DiffMethod method = DiffMethod::CentralDifference;
  BoundaryPolicy boundary = BoundaryPolicy::OneSidedSecondOrder;
};

/// Time derivative of every state column. `window`/`poly_order` are used by
/// the Savitzky-Golay method only.
DerivativeEstimate differentiate(const TimeSeries& ts, DiffMethod method, int window = 0,
                                 int poly_order = 0);

/// Local polynomial smoothing. Interior points take the value of the centered
/// fit; the first and last window/2 points use the fit over the end window.
TimeSeries smooth_savitzky_golay(const TimeSeries& ts, int window, int poly_order);

/// Column-wise Savitzky-Golay filter on a raw matrix. `deriv` is 0 (value) or
/// 1 (first derivative, scaled by 1/dt).
Mat savitzky_golay_filter(const Mat& y, int window, int poly_order, int deriv, double dt);

/// Smoothing followed by differentiation.
struct DerivativeOptions {
  bool smooth = true;
  int smooth_window = 51;
  int smooth_order = 3;
  DiffMethod method = DiffMethod::CentralDifference;
  int window = 0;
  int poly_order = 0;
};

struct SmoothedDerivative {
  TimeSeries states;  ///< smoothed (or original) states the derivative refers to
  DerivativeEstimate xdot;
};
SmoothedDerivative estimate_derivative(const TimeSeries& ts, const DerivativeOptions& opts);

struct LeastSquaresResult {
  Mat solution;  ///< p x n
  Index rank = 0;
  bool rank_deficient = false;
};

/// Column-wise minimizer of ||A Z - b|| by complete orthogonal decomposition.
/// Rank-deficient A yields the minimum-norm solution and sets the flag.
LeastSquaresResult solve_least_squares(const Mat& A, const Mat& b);

bool all_finite(const Mat& m);

}  // namespace dsindy
