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

#include <span>
#include <string>
#include <vector>

#include "dsindy/numerics.hpp"

namespace dsindy {

enum class TermKind { Constant, Monomial, Trig, TrigProduct, ControlCross };
enum class TrigFn { Sin, Cos };

struct TrigFactor {
  TrigFn fn = TrigFn::Sin;
  int var = 0;   ///< zero-based state index
  int freq = 1;  ///< integer frequency >= 1

  bool operator==(const TrigFactor&) const = default;
};

/// One candidate function: a state monomial times trig factors times a
/// control monomial. Names follow `1`, `x1`, `x1^2*x2`, `sin(3*x2)`, `x1*u1`.
class TermSpec {
 public:
  TermSpec(std::vector<int> exponents, std::vector<TrigFactor> trig, std::vector<int> control_exponents);

  static TermSpec constant(int n, int r = 0);
  static TermSpec monomial(std::vector<int> exponents, int r = 0);
  static TermSpec trig(int n, TrigFactor f, int r = 0);

  TermKind kind() const noexcept { return kind_; }
  const std::vector<int>& exponents() const noexcept { return exponents_; }
  const std::vector<TrigFactor>& trig_factors() const noexcept { return trig_; }
  const std::vector<int>& control_exponents() const noexcept { return control_exponents_; }
  int state_dim() const noexcept { return static_cast<int>(exponents_.size()); }
  int control_dim() const noexcept { return static_cast<int>(control_exponents_.size()); }
  const std::string& name() const noexcept { return name_; }
  bool is_constant() const noexcept { return kind_ == TermKind::Constant; }

  double eval(std::span<const double> x, std::span<const double> u) const;

  /// Product of two terms over the same dimensions.
  TermSpec operator*(const TermSpec& other) const;

  /// Same term with `r` zero control exponents appended (dimension lift).
  TermSpec with_control_dim(int r) const;

 private:
  std::vector<int> exponents_;
  std::vector<TrigFactor> trig_;
  std::vector<int> control_exponents_;
  TermKind kind_;
  std::string name_;
};

std::string to_string(TermKind k);

/// Ordered set of candidate functions; column j of the evaluated matrix is term j.
class CandidateLibrary {
 public:
  CandidateLibrary(int state_dim, int control_dim, std::vector<TermSpec> terms = {});

  int state_dim() const noexcept { return n_; }
  int control_dim() const noexcept { return r_; }
  Index size() const noexcept { return static_cast<Index>(terms_.size()); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<TermSpec>& terms() const noexcept { return terms_; }
  const TermSpec& operator[](Index i) const { return terms_[static_cast<std::size_t>(i)]; }
  std::vector<std::string> names() const;
  Index index_of(const std::string& name) const;  ///< -1 when absent

  /// Theta matrix, m x size(). `U` must be supplied iff control_dim() > 0.
  Mat evaluate(const Mat& X, const Mat* U = nullptr) const;
  Vec evaluate_row(const Vec& x, const Vec& u) const;

 private:
  int n_;
  int r_;
  std::vector<TermSpec> terms_;
};

/// Monomials in the chosen state variables with each exponent <= max_degree,
/// ordered by total degree, then descending lexicographically on exponents.
/// `variables` empty means all state variables.
CandidateLibrary build_polynomial_library(int n, int max_degree, bool include_constant,
                                          std::vector<int> variables = {});

/// sin(k x_j), cos(k x_j) for 1 <= k <= max_order; variable-major, sin first.
CandidateLibrary build_fourier_library(int n, int max_order, std::vector<int> variables = {});

/// Concatenation a-then-b. Throws ConflictError on a repeated name.
CandidateLibrary merge_libraries(const CandidateLibrary& a, const CandidateLibrary& b);

/// Appends control monomials of total degree 1..max_u_degree, then every
/// non-constant state term multiplied by each of those monomials.
CandidateLibrary with_control_products(const CandidateLibrary& lib, int r, int max_u_degree);

/// Every pairwise product a_i * b_j of non-constant terms.
CandidateLibrary product_library(const CandidateLibrary& a, const CandidateLibrary& b);

/// Keeps the listed names, in library order. Unknown names are a ParameterError.
CandidateLibrary filter_library(const CandidateLibrary& lib, const std::vector<std::string>& keep);

nlohmann::json to_json(const TermSpec& t);
TermSpec term_from_json(const nlohmann::json& j, int n, int r);
nlohmann::json to_json(const CandidateLibrary& lib);
CandidateLibrary library_from_json(const nlohmann::json& j);

/// Builds a library from a recipe document:
/// {"state_dim": n, "polynomial": {...}, "fourier": {...}, "products": [...],
///  "control": {...}, "keep": [...]} or an explicit {"terms": [...]} list.
CandidateLibrary library_from_recipe(const nlohmann::json& recipe);

}  // namespace dsindy
