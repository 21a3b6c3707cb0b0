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

#include <algorithm>
#include <cmath>
#include <random>

#include "dsindy/errors.hpp"
#include "dsindy/library.hpp"

using namespace dsindy;

namespace {

// Independent per-element evaluation, written from the term names' meaning
// rather than the library's evaluator.
double oracle(const TermSpec& t, const Vec& x, const Vec& u) {
  double v = 1.0;
  for (int j = 0; j < t.state_dim(); ++j) v *= std::pow(x[j], t.exponents()[static_cast<std::size_t>(j)]);
  for (const auto& f : t.trig_factors()) {
    const double arg = f.freq * x[f.var];
    v *= f.fn == TrigFn::Sin ? std::sin(arg) : std::cos(arg);
  }
  for (int j = 0; j < t.control_dim(); ++j) v *= std::pow(u[j], t.control_exponents()[static_cast<std::size_t>(j)]);
  return v;
}

std::vector<std::string> names(const CandidateLibrary& lib) { return lib.names(); }

}  // namespace

TEST_CASE("term names") {
  CHECK(TermSpec::constant(2).name() == "1");
  CHECK(TermSpec::monomial({1, 0}).name() == "x1");
  CHECK(TermSpec::monomial({2, 1}).name() == "x1^2*x2");
  CHECK(TermSpec::trig(2, {TrigFn::Sin, 1, 3}).name() == "sin(3*x2)");
  CHECK(TermSpec::trig(2, {TrigFn::Cos, 0, 1}).name() == "cos(x1)");
  CHECK(TermSpec({1, 0}, {}, {1}).name() == "x1*u1");
  CHECK(TermSpec({0, 0}, {}, {1}).name() == "u1");
  const TermSpec s = TermSpec::trig(1, {TrigFn::Sin, 0, 1});
  CHECK((s * s).name() == "sin(x1)^2");
  CHECK(TermSpec({0, 0}, {}, {1}).kind() == TermKind::ControlCross);
  CHECK(TermSpec({1, 0}, {{TrigFn::Cos, 1, 1}}, {}).kind() == TermKind::TrigProduct);
}

TEST_CASE("polynomial library enumeration") {
  CHECK(names(build_polynomial_library(1, 2, true)) == std::vector<std::string>{"1", "x1", "x1^2"});
  const CandidateLibrary lib = build_polynomial_library(2, 2, true);
  CHECK(names(lib) == std::vector<std::string>{"1", "x1", "x2", "x1^2", "x1*x2", "x2^2", "x1^2*x2", "x1*x2^2",
                                                "x1^2*x2^2"});
  for (int d = 1; d <= 4; ++d) CHECK(build_polynomial_library(2, d, true).size() == (d + 1) * (d + 1));
  CHECK(build_polynomial_library(2, 2, false).size() == 8);
  // restricted variables
  CHECK(names(build_polynomial_library(3, 1, false, {1})) == std::vector<std::string>{"x2"});
}

TEST_CASE("fourier library enumeration") {
  CHECK(names(build_fourier_library(1, 1)) == std::vector<std::string>{"sin(x1)", "cos(x1)"});
  const CandidateLibrary lib = build_fourier_library(2, 3);
  CHECK(lib.size() == 12);
  CHECK(lib[0].name() == "sin(x1)");
  CHECK(lib[1].name() == "cos(x1)");
  CHECK(lib[2].name() == "sin(2*x1)");
  CHECK(lib[6].name() == "sin(x2)");
  const Mat th = lib.evaluate(Mat::Zero(1, 2));
  for (Index j = 0; j < lib.size(); ++j) CHECK(th(0, j) == (j % 2 == 0 ? 0.0 : 1.0));
}

TEST_CASE("merge libraries") {
  const CandidateLibrary m = merge_libraries(build_polynomial_library(1, 1, true), build_fourier_library(1, 1));
  CHECK(names(m) == std::vector<std::string>{"1", "x1", "sin(x1)", "cos(x1)"});
  CHECK(names(merge_libraries(m, CandidateLibrary(1, 0))) == names(m));
  CHECK_THROWS_AS(merge_libraries(m, m), ConflictError);
  CHECK_THROWS_AS(merge_libraries(m, build_fourier_library(2, 1)), ShapeError);
}

TEST_CASE("control products") {
  const CandidateLibrary lib = with_control_products(build_polynomial_library(1, 1, true), 1, 1);
  CHECK(names(lib) == std::vector<std::string>{"1", "x1", "u1", "x1*u1"});
  const Vec row = lib.evaluate_row((Vec(1) << 2.0).finished(), (Vec(1) << 3.0).finished());
  CHECK(row[3] == 6.0);
  Mat X(1, 1), U(1, 1);
  X << 2.0;
  U << 3.0;
  CHECK_THROWS_AS(lib.evaluate(X), ShapeError);
  CHECK(lib.evaluate(X, &U)(0, 3) == 6.0);
}

TEST_CASE("evaluation of the seven displayed columns") {
  const CandidateLibrary lib =
      filter_library(build_polynomial_library(2, 2, true), {"1", "x1", "x2", "x1*x2", "x1^2*x2", "x1*x2^2", "x1^2*x2^2"});
  REQUIRE(lib.size() == 7);
  const Vec row = lib.evaluate_row((Vec(2) << 1.0, 2.0).finished(), Vec(0));
  CHECK(row == (Vec(7) << 1, 1, 2, 2, 2, 4, 4).finished());
  CHECK_THROWS_AS(filter_library(lib, {"x3"}), ParameterError);
}

TEST_CASE("evaluation at the origin") {
  const CandidateLibrary lib = merge_libraries(build_polynomial_library(3, 2, true), build_fourier_library(3, 2));
  const Mat th = lib.evaluate(Mat::Zero(2, 3));
  for (Index j = 0; j < lib.size(); ++j) {
    const auto& t = lib[j];
    double expect = 0.0;
    if (t.is_constant()) expect = 1.0;
    else if (t.kind() == TermKind::Trig) expect = t.trig_factors()[0].fn == TrigFn::Cos ? 1.0 : 0.0;
    CHECK(th(0, j) == expect);
  }
}

TEST_CASE("theta matches a scalar oracle") {
  CandidateLibrary lib = merge_libraries(build_polynomial_library(3, 3, true), build_fourier_library(3, 3));
  lib = merge_libraries(lib, product_library(build_polynomial_library(3, 1, false), build_fourier_library(3, 1, {0})));
  lib = with_control_products(lib, 2, 2);
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  Mat X(100, 3), U(100, 2);
  for (Index i = 0; i < X.size(); ++i) X.data()[i] = d(gen);
  for (Index i = 0; i < U.size(); ++i) U.data()[i] = d(gen);
  const Mat th = lib.evaluate(X, &U);
  double worst = 0.0;
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < lib.size(); ++j) {
      const double o = oracle(lib[j], X.row(i).transpose(), U.row(i).transpose());
      worst = std::max(worst, std::abs(th(i, j) - o) / std::max(1.0, std::abs(o)));
    }
  CHECK(worst <= 1e-14);
}

TEST_CASE("evaluation is rowwise and merge concatenates") {
  const CandidateLibrary a = build_polynomial_library(2, 2, true);
  const CandidateLibrary b = build_fourier_library(2, 2);
  Mat X(5, 2);
  X << 0.1, 0.2, -0.3, 0.4, 0.5, -0.6, 0.7, 0.8, -0.9, 1.0;
  const Mat ab = merge_libraries(a, b).evaluate(X);
  CHECK(ab.leftCols(a.size()) == a.evaluate(X));
  CHECK(ab.rightCols(b.size()) == b.evaluate(X));
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
  perm.indices() << 4, 2, 0, 1, 3;
  CHECK(a.evaluate(perm * X) == perm * a.evaluate(X));
  CHECK_THROWS_AS(a.evaluate(Mat::Zero(3, 3)), ShapeError);
}

TEST_CASE("pendulum control library has sin(x1) and u1") {
  CandidateLibrary lib = merge_libraries(build_polynomial_library(6, 1, true), build_fourier_library(6, 1, {0, 1}));
  lib = with_control_products(lib, 1, 1);
  CHECK(lib.index_of("sin(x1)") >= 0);
  CHECK(lib.index_of("u1") >= 0);
  CHECK(lib.index_of("sin(x1)") != lib.index_of("u1"));
  CHECK(lib.index_of("nope") == -1);
}

TEST_CASE("duplicate names are rejected") {
  CHECK_THROWS_AS(CandidateLibrary(1, 0, {TermSpec::monomial({1}), TermSpec::monomial({1})}), ConflictError);
}

TEST_CASE("library json round trip") {
  CandidateLibrary lib = merge_libraries(build_polynomial_library(2, 2, true), build_fourier_library(2, 2));
  lib = merge_libraries(lib, product_library(build_polynomial_library(2, 1, false), build_fourier_library(2, 1)));
  lib = with_control_products(lib, 1, 2);
  const nlohmann::json j = to_json(lib);
  const CandidateLibrary back = library_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.names() == lib.names());
  CHECK(back.state_dim() == 2);
  CHECK(back.control_dim() == 1);
  Mat X(3, 2), U(3, 1);
  X << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
  U << 1, 2, 3;
  CHECK(back.evaluate(X, &U) == lib.evaluate(X, &U));

  nlohmann::json tampered = j;
  tampered["terms"][1]["name"] = "x7";
  CHECK_THROWS(library_from_json(tampered));
}

TEST_CASE("library recipes") {
  const nlohmann::json r = {{"state_dim", 2},
                            {"polynomial", {{"max_degree", 2}, {"include_constant", true}}},
                            {"fourier", {{"max_order", 1}, {"variables", {0}}}},
                            {"keep", {"1", "x1", "x1^2*x2", "sin(x1)"}}};
  CHECK(names(library_from_recipe(r)) == std::vector<std::string>{"1", "x1", "x1^2*x2", "sin(x1)"});
  const nlohmann::json c = {{"state_dim", 1}, {"polynomial", {{"max_degree", 1}}}, {"control", {{"dim", 1}}}};
  CHECK(names(library_from_recipe(c)) == std::vector<std::string>{"1", "x1", "u1", "x1*u1"});
}
