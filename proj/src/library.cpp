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

#include "dsindy/library.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "dsindy/errors.hpp"

namespace dsindy {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

bool trig_less(const TrigFactor& a, const TrigFactor& b) {
  return std::tie(a.var, a.freq, a.fn) < std::tie(b.var, b.freq, b.fn);
}

std::string trig_name(const TrigFactor& f) {
  std::string arg = "x" + std::to_string(f.var + 1);
  if (f.freq != 1) arg = std::to_string(f.freq) + "*" + arg;
  return (f.fn == TrigFn::Sin ? "sin(" : "cos(") + arg + ")";
}

void append_powers(std::vector<std::string>& parts, const std::vector<int>& exps, char sym) {
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    std::string s = std::string(1, sym) + std::to_string(i + 1);
    if (exps[i] > 1) s += "^" + std::to_string(exps[i]);
    parts.push_back(std::move(s));
  }
}

// All exponent vectors over `vars` (others zero) with each entry <= max_deg and
// total degree in [min_total, max_total], graded then descending lexicographic.
std::vector<std::vector<int>> enumerate_exponents(int dim, const std::vector<int>& vars, int max_deg,
                                                  int min_total, int max_total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == vars.size()) {
      const int total = std::accumulate(cur.begin(), cur.end(), 0);
      if (total >= min_total && total <= max_total) out.push_back(cur);
      return;
    }
    for (int e = 0; e <= max_deg; ++e) {
      cur[static_cast<std::size_t>(vars[k])] = e;
      rec(k + 1);
    }
    cur[static_cast<std::size_t>(vars[k])] = 0;
  };
  rec(0);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const int ta = std::accumulate(a.begin(), a.end(), 0);
    const int tb = std::accumulate(b.begin(), b.end(), 0);
    if (ta != tb) return ta < tb;
    return a > b;
  });
  return out;
}

std::vector<int> resolve_vars(int n, std::vector<int> vars) {
  if (vars.empty()) {
    vars.resize(static_cast<std::size_t>(n));
    std::iota(vars.begin(), vars.end(), 0);
  }
  for (int v : vars)
    if (v < 0 || v >= n) throw ParameterError("library: variable index " + std::to_string(v) + " out of range");
  if (std::set<int>(vars.begin(), vars.end()).size() != vars.size())
    throw ParameterError("library: repeated variable index");
  return vars;
}

}  // namespace

std::string to_string(TermKind k) {
  switch (k) {
    case TermKind::Constant: return "constant";
    case TermKind::Monomial: return "monomial";
    case TermKind::Trig: return "trig";
    case TermKind::TrigProduct: return "trig-product";
    case TermKind::ControlCross: return "control-cross";
  }
  return "unknown";
}

TermSpec::TermSpec(std::vector<int> exponents, std::vector<TrigFactor> trig,
                   std::vector<int> control_exponents)
    : exponents_(std::move(exponents)), trig_(std::move(trig)), control_exponents_(std::move(control_exponents)) {
  const int n = state_dim();
  for (int e : exponents_)
    if (e < 0) throw ParameterError("term: negative exponent");
  for (int e : control_exponents_)
    if (e < 0) throw ParameterError("term: negative control exponent");
  for (const auto& f : trig_) {
    if (f.var < 0 || f.var >= n) throw ParameterError("term: trig variable out of range");
    if (f.freq < 1) throw ParameterError("term: trig frequency must be >= 1");
  }
  std::sort(trig_.begin(), trig_.end(), trig_less);

  const bool has_mono = std::any_of(exponents_.begin(), exponents_.end(), [](int e) { return e > 0; });
  const bool has_ctrl = std::any_of(control_exponents_.begin(), control_exponents_.end(), [](int e) { return e > 0; });
  if (has_ctrl)
    kind_ = TermKind::ControlCross;
  else if (trig_.empty())
    kind_ = has_mono ? TermKind::Monomial : TermKind::Constant;
  else
    kind_ = (trig_.size() == 1 && !has_mono) ? TermKind::Trig : TermKind::TrigProduct;

  std::vector<std::string> parts;
  append_powers(parts, exponents_, 'x');
  for (std::size_t i = 0; i < trig_.size();) {
    std::size_t j = i;
    while (j < trig_.size() && trig_[j] == trig_[i]) ++j;
    std::string s = trig_name(trig_[i]);
    if (j - i > 1) s += "^" + std::to_string(j - i);
    parts.push_back(std::move(s));
    i = j;
  }
  append_powers(parts, control_exponents_, 'u');
  if (parts.empty()) {
    name_ = "1";
  } else {
    name_ = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) name_ += "*" + parts[i];
  }
}

TermSpec TermSpec::constant(int n, int r) {
  return TermSpec(std::vector<int>(static_cast<std::size_t>(n), 0), {}, std::vector<int>(static_cast<std::size_t>(r), 0));
}

TermSpec TermSpec::monomial(std::vector<int> exponents, int r) {
  return TermSpec(std::move(exponents), {}, std::vector<int>(static_cast<std::size_t>(r), 0));
}

TermSpec TermSpec::trig(int n, TrigFactor f, int r) {
  return TermSpec(std::vector<int>(static_cast<std::size_t>(n), 0), {f},
                  std::vector<int>(static_cast<std::size_t>(r), 0));
}

double TermSpec::eval(std::span<const double> x, std::span<const double> u) const {
  double v = 1.0;
  for (std::size_t i = 0; i < exponents_.size(); ++i)
    if (exponents_[i] != 0) v *= ipow(x[i], exponents_[i]);
  for (const auto& f : trig_) {
    const double a = static_cast<double>(f.freq) * x[static_cast<std::size_t>(f.var)];
    v *= f.fn == TrigFn::Sin ? std::sin(a) : std::cos(a);
  }
  for (std::size_t i = 0; i < control_exponents_.size(); ++i)
    if (control_exponents_[i] != 0) v *= ipow(u[i], control_exponents_[i]);
  return v;
}

TermSpec TermSpec::operator*(const TermSpec& other) const {
  if (other.state_dim() != state_dim() || other.control_dim() != control_dim())
    throw ShapeError("term product: dimension mismatch");
  std::vector<int> e = exponents_;
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exponents_[i];
  std::vector<TrigFactor> t = trig_;
  t.insert(t.end(), other.trig_.begin(), other.trig_.end());
  std::vector<int> c = control_exponents_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.control_exponents_[i];
  return TermSpec(std::move(e), std::move(t), std::move(c));
}

TermSpec TermSpec::with_control_dim(int r) const {
  std::vector<int> c = control_exponents_;
  c.resize(static_cast<std::size_t>(r), 0);
  return TermSpec(exponents_, trig_, std::move(c));
}

CandidateLibrary::CandidateLibrary(int state_dim, int control_dim, std::vector<TermSpec> terms)
    : n_(state_dim), r_(control_dim), terms_(std::move(terms)) {
  if (n_ < 1) throw ParameterError("library: state dimension must be >= 1");
  if (r_ < 0) throw ParameterError("library: control dimension must be >= 0");
  std::set<std::string> seen;
  for (const auto& t : terms_) {
    if (t.state_dim() != n_ || t.control_dim() != r_)
      throw ShapeError("library: term '" + t.name() + "' has mismatched dimensions");
    if (!seen.insert(t.name()).second) throw ConflictError("library: duplicate term '" + t.name() + "'");
  }
}

std::vector<std::string> CandidateLibrary::names() const {
  std::vector<std::string> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.name());
  return out;
}

Index CandidateLibrary::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].name() == name) return static_cast<Index>(i);
  return -1;
}

Mat CandidateLibrary::evaluate(const Mat& X, const Mat* U) const {
  if (X.cols() != n_)
    throw ShapeError("library: state matrix has " + std::to_string(X.cols()) + " columns, expected " +
                     std::to_string(n_));
  if (r_ > 0) {
    if (U == nullptr) throw ShapeError("library: control matrix required");
    if (U->cols() != r_ || U->rows() != X.rows()) throw ShapeError("library: control matrix shape mismatch");
  } else if (U != nullptr && U->cols() != 0) {
    throw ShapeError("library: control matrix given to an uncontrolled library");
  }
  const Index m = X.rows();
  Mat theta(m, size());
  std::vector<double> x(static_cast<std::size_t>(n_));
  std::vector<double> u(static_cast<std::size_t>(r_));
  for (Index i = 0; i < m; ++i) {
    for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = X(i, j);
    for (int j = 0; j < r_; ++j) u[static_cast<std::size_t>(j)] = (*U)(i, j);
    for (Index k = 0; k < size(); ++k) theta(i, k) = terms_[static_cast<std::size_t>(k)].eval(x, u);
  }
  return theta;
}

Vec CandidateLibrary::evaluate_row(const Vec& x, const Vec& u) const {
  if (x.size() != n_ || u.size() != r_) throw ShapeError("library: row dimension mismatch");
  Vec out(size());
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  const std::span<const double> us(u.data(), static_cast<std::size_t>(u.size()));
  for (Index k = 0; k < size(); ++k) out[k] = terms_[static_cast<std::size_t>(k)].eval(xs, us);
  return out;
}

CandidateLibrary build_polynomial_library(int n, int max_degree, bool include_constant,
                                          std::vector<int> variables) {
  if (n < 1) throw ParameterError("polynomial library: n must be >= 1");
  if (max_degree < 1) throw ParameterError("polynomial library: max_degree must be >= 1");
  const auto vars = resolve_vars(n, std::move(variables));
  const int max_total = max_degree * static_cast<int>(vars.size());
  std::vector<TermSpec> terms;
  for (auto& e : enumerate_exponents(n, vars, max_degree, include_constant ? 0 : 1, max_total))
    terms.push_back(TermSpec::monomial(std::move(e)));
  return CandidateLibrary(n, 0, std::move(terms));
}

CandidateLibrary build_fourier_library(int n, int max_order, std::vector<int> variables) {
  if (max_order < 1) throw ParameterError("fourier library: max_order must be >= 1");
  const auto vars = resolve_vars(n, std::move(variables));
  std::vector<TermSpec> terms;
  for (int v : vars)
    for (int k = 1; k <= max_order; ++k) {
      terms.push_back(TermSpec::trig(n, {TrigFn::Sin, v, k}));
      terms.push_back(TermSpec::trig(n, {TrigFn::Cos, v, k}));
    }
  return CandidateLibrary(n, 0, std::move(terms));
}

CandidateLibrary merge_libraries(const CandidateLibrary& a, const CandidateLibrary& b) {
  if (a.state_dim() != b.state_dim() || a.control_dim() != b.control_dim())
    throw ShapeError("merge: libraries have different dimensions");
  std::vector<TermSpec> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return CandidateLibrary(a.state_dim(), a.control_dim(), std::move(terms));
}

CandidateLibrary with_control_products(const CandidateLibrary& lib, int r, int max_u_degree) {
  if (r < 1) throw ParameterError("control products: r must be >= 1");
  if (max_u_degree < 1) throw ParameterError("control products: max_u_degree must be >= 1");
  if (lib.control_dim() != 0) throw ParameterError("control products: library already has controls");
  const int n = lib.state_dim();
  std::vector<int> uvars(static_cast<std::size_t>(r));
  std::iota(uvars.begin(), uvars.end(), 0);
  const auto uexps = enumerate_exponents(r, uvars, max_u_degree, 1, max_u_degree);

  std::vector<TermSpec> terms;
  for (const auto& t : lib.terms()) terms.push_back(t.with_control_dim(r));
  std::vector<TermSpec> controls;
  for (const auto& e : uexps) {
    controls.emplace_back(std::vector<int>(static_cast<std::size_t>(n), 0), std::vector<TrigFactor>{}, e);
    terms.push_back(controls.back());
  }
  for (const auto& t : lib.terms()) {
    if (t.is_constant()) continue;
    const TermSpec lifted = t.with_control_dim(r);
    for (const auto& c : controls) terms.push_back(lifted * c);
  }
  return CandidateLibrary(n, r, std::move(terms));
}

CandidateLibrary product_library(const CandidateLibrary& a, const CandidateLibrary& b) {
  if (a.state_dim() != b.state_dim() || a.control_dim() != b.control_dim())
    throw ShapeError("product: libraries have different dimensions");
  std::vector<TermSpec> terms;
  for (const auto& x : a.terms()) {
    if (x.is_constant()) continue;
    for (const auto& y : b.terms()) {
      if (y.is_constant()) continue;
      terms.push_back(x * y);
    }
  }
  return CandidateLibrary(a.state_dim(), a.control_dim(), std::move(terms));
}

CandidateLibrary filter_library(const CandidateLibrary& lib, const std::vector<std::string>& keep) {
  for (const auto& name : keep)
    if (lib.index_of(name) < 0) throw ParameterError("filter: library has no term '" + name + "'");
  std::vector<TermSpec> terms;
  for (const auto& t : lib.terms())
    if (std::find(keep.begin(), keep.end(), t.name()) != keep.end()) terms.push_back(t);
  return CandidateLibrary(lib.state_dim(), lib.control_dim(), std::move(terms));
}

nlohmann::json to_json(const TermSpec& t) {
  nlohmann::json trig = nlohmann::json::array();
  for (const auto& f : t.trig_factors())
    trig.push_back({{"fn", f.fn == TrigFn::Sin ? "sin" : "cos"}, {"var", f.var}, {"freq", f.freq}});
  return {{"name", t.name()},
          {"kind", to_string(t.kind())},
          {"exponents", t.exponents()},
          {"trig", trig},
          {"control_exponents", t.control_exponents()}};
}

TermSpec term_from_json(const nlohmann::json& j, int n, int r) {
  std::vector<int> e = j.value("exponents", std::vector<int>{});
  if (e.empty()) e.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> c = j.value("control_exponents", std::vector<int>{});
  if (c.empty()) c.assign(static_cast<std::size_t>(r), 0);
  std::vector<TrigFactor> trig;
  if (j.contains("trig"))
    for (const auto& f : j.at("trig")) {
      const std::string fn = f.at("fn").get<std::string>();
      if (fn != "sin" && fn != "cos") throw ParameterError("term: unknown trig function '" + fn + "'");
      trig.push_back({fn == "sin" ? TrigFn::Sin : TrigFn::Cos, f.at("var").get<int>(), f.value("freq", 1)});
    }
  if (static_cast<int>(e.size()) != n || static_cast<int>(c.size()) != r)
    throw ShapeError("term: exponent vector length mismatch");
  TermSpec t(std::move(e), std::move(trig), std::move(c));
  if (j.contains("name") && j.at("name").get<std::string>() != t.name())
    throw ParameterError("term: name '" + j.at("name").get<std::string>() + "' does not match structure '" +
                         t.name() + "'");
  return t;
}

nlohmann::json to_json(const CandidateLibrary& lib) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : lib.terms()) terms.push_back(to_json(t));
  return {{"state_dim", lib.state_dim()}, {"control_dim", lib.control_dim()}, {"terms", terms}};
}

CandidateLibrary library_from_json(const nlohmann::json& j) {
  const int n = j.at("state_dim").get<int>();
  const int r = j.value("control_dim", 0);
  std::vector<TermSpec> terms;
  for (const auto& t : j.at("terms")) terms.push_back(term_from_json(t, n, r));
  return CandidateLibrary(n, r, std::move(terms));
}

CandidateLibrary library_from_recipe(const nlohmann::json& recipe) {
  if (recipe.contains("terms")) return library_from_json(recipe);
  const int n = recipe.at("state_dim").get<int>();
  CandidateLibrary lib(n, 0);
  if (recipe.contains("polynomial")) {
    const auto& p = recipe.at("polynomial");
    lib = merge_libraries(lib, build_polynomial_library(n, p.at("max_degree").get<int>(),
                                                         p.value("include_constant", true),
                                                         p.value("variables", std::vector<int>{})));
  }
  if (recipe.contains("fourier")) {
    const auto& f = recipe.at("fourier");
    lib = merge_libraries(lib, build_fourier_library(n, f.at("max_order").get<int>(),
                                                      f.value("variables", std::vector<int>{})));
  }
  if (recipe.contains("products"))
    for (const auto& pr : recipe.at("products")) {
      nlohmann::json left = pr.at("left");
      nlohmann::json right = pr.at("right");
      left["state_dim"] = n;
      right["state_dim"] = n;
      lib = merge_libraries(lib, product_library(library_from_recipe(left), library_from_recipe(right)));
    }
  if (recipe.contains("keep")) lib = filter_library(lib, recipe.at("keep").get<std::vector<std::string>>());
  if (recipe.contains("control")) {
    const auto& c = recipe.at("control");
    lib = with_control_products(lib, c.at("dim").get<int>(), c.value("max_degree", 1));
  }
  return lib;
}

}  // namespace dsindy
