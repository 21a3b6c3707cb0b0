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

#include <doctest.h>

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "dsindy/errors.hpp"
#include "dsindy/numerics.hpp"
#include "dsindy/random.hpp"
#include "dsindy/systems.hpp"

using namespace dsindy;

namespace {

DynamicsModel decay() {
  return {"decay", 1, 0, [](const Vec& x, const Vec&) { return Vec(-x); }};
}

TimeSeries sampled(double dt, Index m, double (*f)(double)) {
  Mat y(m, 1);
  for (Index i = 0; i < m; ++i) y(i, 0) = f(static_cast<double>(i) * dt);
  return TimeSeries(0.0, dt, y);
}

}  // namespace

TEST_CASE("time series rejects bad construction") {
  Mat two = Mat::Zero(2, 1);
  CHECK_THROWS_AS(TimeSeries(0.0, 0.0, two), ParameterError);
  CHECK_THROWS_AS(TimeSeries(0.0, -1.0, two), ParameterError);
  CHECK_THROWS_AS(TimeSeries(0.0, 0.1, Mat::Zero(1, 1)), InsufficientDataError);
  Mat bad = two;
  bad(1, 0) = std::nan("");
  CHECK_THROWS_AS(TimeSeries(0.0, 0.1, bad), DataError);
  CHECK_THROWS_AS(TimeSeries(0.0, 0.1, two, Mat::Zero(3, 1)), ShapeError);
  TimeSeries ok(1.0, 0.5, Mat::Zero(3, 2), Mat::Zero(3, 1));
  CHECK(ok.time(2) == 2.0);
  CHECK(ok.control_dim() == 1);
  CHECK(ok.duration() == 1.0);
}

TEST_CASE("rk4 exponential decay") {
  const TimeSeries ts = integrate_rk4(decay(), Vec::Ones(1), 1.0, 0.01);
  CHECK(ts.rows() == 101);
  CHECK(std::abs(ts.states()(100, 0) - std::exp(-1.0)) <= 1e-8);
}

TEST_CASE("rk4 single step contract") {
  const TimeSeries ts = integrate_rk4(vdp_model(0.5), (Vec(2) << 0.5, 0.0).finished(), 0.01, 0.01);
  REQUIRE(ts.rows() == 2);
  CHECK(ts.states()(0, 0) == 0.5);
  CHECK(ts.states()(0, 1) == 0.0);
}

TEST_CASE("sample count tolerates float division") {
  CHECK(sample_count(25.0, 0.01) == 2501);
  CHECK(sample_count(20.0, 0.001) == 20001);
  CHECK(sample_count(2.7, 0.001) == 2701);
  CHECK(sample_count(1.0, 0.3) == 4);
}

TEST_CASE("rk4 global error is fourth order") {
  auto err = [](double dt) {
    const TimeSeries ts = integrate_rk4(decay(), Vec::Ones(1), 1.0, dt);
    return std::abs(ts.states()(ts.rows() - 1, 0) - std::exp(-1.0));
  };
  const double e1 = err(0.1), e2 = err(0.05), e3 = err(0.025);
  CHECK(e1 / e2 >= 12.0);
  CHECK(e2 / e3 >= 12.0);
  // observed order close to 4
  CHECK(std::log2(e2 / e3) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("rk4 van der pol matches an adaptive integrator") {
  using State = std::vector<double>;
  namespace odeint = boost::numeric::odeint;
  const double alpha = 0.5;
  auto rhs = [alpha](const State& x, State& dx, double) {
    dx[0] = x[1];
    dx[1] = alpha * (1.0 - x[0] * x[0]) * x[1] - x[0];
  };
  const TimeSeries ts = integrate_rk4(vdp_model(alpha), (Vec(2) << 0.5, 0.0).finished(), 25.0, 0.01);

  State x{0.5, 0.0};
  std::vector<double> times(static_cast<std::size_t>(ts.rows()));
  for (Index i = 0; i < ts.rows(); ++i) times[static_cast<std::size_t>(i)] = ts.time(i);
  double max_err = 0.0;
  Index row = 0;
  auto observer = [&](const State& s, double) {
    max_err = std::max({max_err, std::abs(s[0] - ts.states()(row, 0)), std::abs(s[1] - ts.states()(row, 1))});
    ++row;
  };
  auto stepper = odeint::make_dense_output(1e-10, 1e-10, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), 0.01, observer);
  CHECK(row == ts.rows());
  CHECK(max_err <= 1e-4);
}

TEST_CASE("zero-order hold control") {
  // xdot = u integrates a staircase exactly
  DynamicsModel integrator{"integrator", 1, 1, [](const Vec&, const Vec& u) { return Vec(u); }};
  Mat u(4, 1);
  u << 1.0, -2.0, 0.5, 3.0;
  const TimeSeries ts = integrate_rk4(integrator, Vec::Zero(1), ControlSignal(0.0, 0.1, u), 0.4, 0.01);
  REQUIRE(ts.rows() == 41);
  CHECK(ts.states()(10, 0) == doctest::Approx(0.1));
  CHECK(ts.states()(20, 0) == doctest::Approx(-0.1));
  CHECK(ts.states()(40, 0) == doctest::Approx(0.25));
  REQUIRE(ts.has_controls());
  CHECK((*ts.controls())(15, 0) == -2.0);

  ControlSignal sig(0.0, 0.1, u);
  CHECK(sig.at(-1.0)[0] == 1.0);
  CHECK(sig.at(0.1)[0] == -2.0);
  CHECK(sig.at(99.0)[0] == 3.0);
}

TEST_CASE("integration divergence carries the step") {
  DynamicsModel blowup{"blowup", 1, 0, [](const Vec& x, const Vec&) { return Vec(x.array().square() * x.array()); }};
  try {
    integrate_rk4(blowup, Vec::Constant(1, 10.0), 10.0, 0.1);
    FAIL("expected divergence");
  } catch (const IntegrationDiverged& e) {
    CHECK(e.step() >= 1);
    CHECK(e.step() <= 100);
  }
}

TEST_CASE("integration preconditions") {
  CHECK_THROWS_AS(integrate_rk4(decay(), Vec::Ones(1), 1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(integrate_rk4(decay(), Vec::Ones(1), 0.001, 0.01), ParameterError);
  CHECK_THROWS_AS(integrate_rk4(decay(), Vec::Ones(2), 1.0, 0.1), ShapeError);
}

TEST_CASE("linearize matches analytic jacobian") {
  const Vec x = (Vec(2) << 0.7, -0.3).finished();
  const Linearization lin = linearize(vdp_model(0.5), x, Vec(0));
  Mat A(2, 2);
  A << 0.0, 1.0, 0.5 * (-2.0 * x[0]) * x[1] - 1.0, 0.5 * (1.0 - x[0] * x[0]);
  CHECK((lin.A - A).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(lin.B.cols() == 0);
}

TEST_CASE("central differences are exact on quadratics") {
  const TimeSeries ts = sampled(0.1, 30, [](double t) { return t * t; });
  const DerivativeEstimate d = differentiate(ts, DiffMethod::CentralDifference);
  for (Index i = 0; i < ts.rows(); ++i) CHECK(std::abs(d.values(i, 0) - 2.0 * ts.time(i)) <= 1e-12);
  CHECK(d.method == DiffMethod::CentralDifference);
}

TEST_CASE("constant series has zero derivative") {
  const TimeSeries ts(0.0, 0.2, Mat::Constant(20, 3, 4.5));
  CHECK(differentiate(ts, DiffMethod::CentralDifference).values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(differentiate(ts, DiffMethod::SavitzkyGolay, 7, 2).values.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("central difference of sine") {
  const TimeSeries ts = sampled(0.001, 6284, [](double t) { return std::sin(t); });
  const DerivativeEstimate d = differentiate(ts, DiffMethod::CentralDifference);
  double worst = 0.0;
  for (Index i = 1; i + 1 < ts.rows(); ++i) worst = std::max(worst, std::abs(d.values(i, 0) - std::cos(ts.time(i))));
  CHECK(worst <= 1e-5);
}

TEST_CASE("differentiate then integrate recovers the series") {
  const double dt = 0.01;
  const TimeSeries ts = sampled(dt, 500, [](double t) { return std::sin(2.0 * t) + 0.3 * t * t; });
  const Mat d = differentiate(ts, DiffMethod::CentralDifference).values;
  double acc = ts.states()(0, 0), worst = 0.0;
  for (Index i = 1; i < ts.rows(); ++i) {
    acc += 0.5 * dt * (d(i - 1, 0) + d(i, 0));
    worst = std::max(worst, std::abs(acc - ts.states()(i, 0)));
  }
  CHECK(worst <= 10.0 * dt * dt);
}

TEST_CASE("differentiation preconditions") {
  const TimeSeries ts(0.0, 0.1, Mat::Zero(9, 1));
  CHECK_THROWS_AS(differentiate(ts, DiffMethod::SavitzkyGolay, 9, 2), InsufficientDataError);
  CHECK_THROWS_AS(differentiate(TimeSeries(0.0, 0.1, Mat::Zero(2, 1)), DiffMethod::CentralDifference),
                  InsufficientDataError);
  CHECK_THROWS_AS(differentiate(ts, DiffMethod::SavitzkyGolay, 4, 2), ParameterError);
  CHECK(diff_method_from_string(to_string(DiffMethod::SavitzkyGolay)) == DiffMethod::SavitzkyGolay);
  CHECK_THROWS_AS(diff_method_from_string("spline"), ParameterError);
}

TEST_CASE("savitzky-golay reproduces polynomials up to its order") {
  auto cubic = [](double t) { return 1.0 - 2.0 * t + 0.5 * t * t - 0.25 * t * t * t; };
  const TimeSeries ts = sampled(0.05, 80, +cubic);
  const TimeSeries sm = smooth_savitzky_golay(ts, 11, 3);
  CHECK((sm.states() - ts.states()).cwiseAbs().maxCoeff() <= 1e-10);
  // idempotent
  const TimeSeries twice = smooth_savitzky_golay(sm, 11, 3);
  CHECK((twice.states() - sm.states()).cwiseAbs().maxCoeff() <= 1e-10);

  // derivative of the fit, endpoints included
  const DerivativeEstimate d = differentiate(ts, DiffMethod::SavitzkyGolay, 11, 3);
  for (Index i = 0; i < ts.rows(); ++i) {
    const double t = ts.time(i);
    CHECK(std::abs(d.values(i, 0) - (-2.0 + t - 0.75 * t * t)) <= 1e-9);
  }
}

TEST_CASE("savitzky-golay parameter checks") {
  const TimeSeries ts(0.0, 0.1, Mat::Zero(20, 1));
  CHECK_THROWS_AS(smooth_savitzky_golay(ts, 1, 1), ParameterError);
  CHECK_THROWS_AS(smooth_savitzky_golay(ts, 1, 0), ParameterError);
  CHECK_THROWS_AS(smooth_savitzky_golay(ts, 6, 3), ParameterError);
  CHECK_THROWS_AS(smooth_savitzky_golay(ts, 5, 5), ParameterError);
  CHECK_THROWS_AS(smooth_savitzky_golay(ts, 21, 3), ParameterError);
  CHECK_NOTHROW(smooth_savitzky_golay(ts, 19, 3));
}

TEST_CASE("savitzky-golay reduces noise") {
  const Index m = 6284;
  const TimeSeries clean = sampled(0.001, m, [](double t) { return std::sin(t); });
  const Mat noisy = add_gaussian_noise(clean.states(), 0.01, 11);
  const TimeSeries sm = smooth_savitzky_golay(TimeSeries(0.0, 0.001, noisy), 51, 3);
  const double in_rmse = std::sqrt((noisy - clean.states()).squaredNorm() / m);
  const double out_rmse = std::sqrt((sm.states() - clean.states()).squaredNorm() / m);
  CHECK(out_rmse < in_rmse);
  CHECK(out_rmse < 0.5 * in_rmse);
}

TEST_CASE("estimate_derivative smooths first") {
  const TimeSeries ts = sampled(0.01, 300, [](double t) { return t * t * t; });
  DerivativeOptions o;
  o.smooth_window = 21;
  const SmoothedDerivative d = estimate_derivative(ts, o);
  CHECK((d.states.states() - ts.states()).cwiseAbs().maxCoeff() <= 1e-10);
  o.smooth = false;
  const SmoothedDerivative raw = estimate_derivative(ts, o);
  CHECK(raw.states.states() == ts.states());
}

TEST_CASE("least squares basic cases") {
  Mat b(3, 2);
  b << 1, 2, 3, 4, 5, 6;
  const LeastSquaresResult id = solve_least_squares(Mat::Identity(3, 3), b);
  CHECK((id.solution - b).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_FALSE(id.rank_deficient);

  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  Mat A(40, 4);
  for (Index i = 0; i < A.size(); ++i) A.data()[i] = n01(gen);
  Mat Z(4, 1);
  Z << 0.4, -0.4, 1.5, 0.0;
  CHECK((solve_least_squares(A, A * Z).solution - Z).cwiseAbs().maxCoeff() <= 1e-10);

  CHECK_THROWS_AS(solve_least_squares(A, Mat::Zero(39, 1)), ShapeError);
  Mat bad = A;
  bad(0, 0) = INFINITY;
  CHECK_THROWS_AS(solve_least_squares(bad, A * Z), DataError);
}

TEST_CASE("least squares agrees with a pseudoinverse oracle") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n01;
  Mat A(100, 7), b(100, 2);
  for (Index i = 0; i < A.size(); ++i) A.data()[i] = n01(gen);
  for (Index i = 0; i < b.size(); ++i) b.data()[i] = n01(gen);
  const LeastSquaresResult r = solve_least_squares(A, b);

  // pseudoinverse from the singular value decomposition
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec s = svd.singularValues();
  const Mat pinv = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  const Mat Z = pinv * b;
  CHECK(((A * r.solution - b) - (A * Z - b)).cwiseAbs().maxCoeff() <= 1e-8);

  // residual orthogonal to the column space
  const double bound = 1e-8 * A.norm() * b.norm();
  CHECK((A.transpose() * (A * r.solution - b)).cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("rank-deficient least squares returns the minimum-norm solution") {
  Mat A(6, 3);
  A << 1, 2, 3, 2, 4, 1, 3, 6, 0, 4, 8, 2, 5, 10, 7, 6, 12, 1;  // column 2 = 2 * column 1
  Vec b(6);
  b << 1, 0, 2, 1, 3, 0;
  const LeastSquaresResult r = solve_least_squares(A, b);
  CHECK(r.rank_deficient);
  CHECK(r.rank == 2);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Vec oracle = svd.solve(b);
  CHECK((r.solution - oracle).cwiseAbs().maxCoeff() <= 1e-10);
}
