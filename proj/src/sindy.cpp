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

#include "dsindy/sindy.hpp"

#include <cmath>
#include <memory>

#include "dsindy/errors.hpp"

namespace dsindy {

namespace {

Mat solve_on_support(const Mat& theta, const Vec& y, const std::vector<Index>& support) {
  Vec out = Vec::Zero(theta.cols());
  if (support.empty()) return out;
  Mat sub(theta.rows(), static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) sub.col(static_cast<Index>(k)) = theta.col(support[k]);
  const Vec z = solve_least_squares(sub, y).solution.col(0);
  for (std::size_t k = 0; k < support.size(); ++k) out[support[k]] = z[static_cast<Index>(k)];
  return out;
}

std::vector<Index> support_of(const std::vector<bool>& mask) {
  std::vector<Index> s;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) s.push_back(static_cast<Index>(i));
  return s;
}

double column_rms(const Mat& m, Index j) {
  return m.rows() > 0 ? m.col(j).norm() / std::sqrt(static_cast<double>(m.rows())) : 0.0;
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

double number_or_inf(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

std::vector<std::string> SparseCoefficients::active_terms(Index column) const {
  std::vector<std::string> out;
  for (Index i = 0; i < terms(); ++i)
    if (active(i, column)) out.push_back(term_names[static_cast<std::size_t>(i)]);
  return out;
}

SparseCoefficients stlsq(const Mat& theta, const Mat& targets, const StlsqOptions& opts,
                         std::vector<std::string> term_names) {
  const Index m = theta.rows();
  const Index p = theta.cols();
  const Index n = targets.cols();
  if (targets.rows() != m)
    throw ShapeError("stlsq: library has " + std::to_string(m) + " rows, targets have " +
                     std::to_string(targets.rows()));
  if (!(opts.lambda >= 0.0) || !std::isfinite(opts.lambda)) throw ParameterError("stlsq: lambda must be >= 0");
  if (opts.max_iters < 1) throw ParameterError("stlsq: max_iters must be >= 1");
  if (!theta.allFinite() || !targets.allFinite()) throw DataError("stlsq: non-finite input");
  if (term_names.empty())
    for (Index i = 0; i < p; ++i) term_names.push_back("theta" + std::to_string(i + 1));
  if (static_cast<Index>(term_names.size()) != p) throw ShapeError("stlsq: term name count mismatch");

  SparseCoefficients out;
  out.term_names = std::move(term_names);
  out.options = opts;
  out.xi = Mat::Zero(p, n);
  out.active = BoolMat::Constant(p, n, false);
  if (m <= p)
    out.warnings.push_back("underdetermined: " + std::to_string(m) + " rows for " + std::to_string(p) + " terms");

  Vec scale = Vec::Ones(p);
  std::vector<bool> usable(static_cast<std::size_t>(p), true);
  for (Index j = 0; j < p; ++j) {
    const double rms = column_rms(theta, j);
    if (rms == 0.0) usable[static_cast<std::size_t>(j)] = false;
    if (opts.normalize && rms > 0.0) scale[j] = rms;
  }
  const Mat scaled = theta * scale.cwiseInverse().asDiagonal();

  for (Index c = 0; c < n; ++c) {
    std::vector<bool> active = usable;
    Vec xi = solve_on_support(scaled, targets.col(c), support_of(active));
    std::vector<Index> history{static_cast<Index>(support_of(active).size())};
    int iters = 0;
    for (int it = 1; it <= opts.max_iters; ++it) {
      iters = it;
      std::vector<bool> next = active;
      for (Index j = 0; j < p; ++j)
        if (next[static_cast<std::size_t>(j)] && std::abs(xi[j]) < opts.lambda) next[static_cast<std::size_t>(j)] = false;
      if (next == active) break;
      active = std::move(next);
      history.push_back(static_cast<Index>(support_of(active).size()));
      xi = solve_on_support(scaled, targets.col(c), support_of(active));
    }
    // Ran out of passes right after a refit: enforce the threshold once more.
    bool trimmed = false;
    for (Index j = 0; j < p; ++j)
      if (active[static_cast<std::size_t>(j)] && std::abs(xi[j]) < opts.lambda) {
        active[static_cast<std::size_t>(j)] = false;
        xi[j] = 0.0;
        trimmed = true;
      }
    if (trimmed) history.push_back(static_cast<Index>(support_of(active).size()));
    for (Index j = 0; j < p; ++j) {
      if (!active[static_cast<std::size_t>(j)]) xi[j] = 0.0;
      out.active(j, c) = active[static_cast<std::size_t>(j)];
    }
    out.xi.col(c) = xi.cwiseQuotient(scale);
    const bool pruned = support_of(active).empty();
    out.all_pruned.push_back(pruned);
    out.iterations.push_back(iters);
    out.support_history.push_back(std::move(history));
    if (pruned) out.warnings.push_back("all terms pruned in column " + std::to_string(c + 1));
  }
  return out;
}

Mat assemble_discrepancy_targets(const TimeSeries& data, const DerivativeEstimate& xdot,
                                 const DynamicsModel& nominal) {
  const Mat& X = data.states();
  if (xdot.values.rows() != X.rows() || xdot.values.cols() != X.cols())
    throw ShapeError("discrepancy targets: derivative shape differs from states");
  if (nominal.state_dim != X.cols()) throw ShapeError("discrepancy targets: nominal model state dimension mismatch");
  if (nominal.control_dim != data.control_dim())
    throw ShapeError("discrepancy targets: nominal model control dimension (" + std::to_string(nominal.control_dim) +
                     ") differs from data (" + std::to_string(data.control_dim()) + ")");
  Mat targets(X.rows(), X.cols());
  Vec u = Vec::Zero(nominal.control_dim);
  for (Index i = 0; i < X.rows(); ++i) {
    if (data.has_controls()) u = data.controls()->row(i).transpose();
    Vec f;
    try {
      f = nominal(X.row(i).transpose(), u);
    } catch (const std::exception& e) {
      throw RowError(static_cast<std::size_t>(i), e.what());
    }
    if (!f.allFinite()) throw RowError(static_cast<std::size_t>(i), "nominal model returned a non-finite value");
    targets.row(i) = xdot.values.row(i) - f.transpose();
  }
  return targets;
}

Vec DiscrepancyModel::predict(const Vec& x, const Vec& u) const {
  return coefficients.xi.transpose() * library.evaluate_row(x, u);
}

Mat DiscrepancyModel::predict(const Mat& X, const Mat* U) const {
  return library.evaluate(X, U) * coefficients.xi;
}

DiscrepancyModel fit_library(const Mat& X, const Mat* U, const Mat& targets, const CandidateLibrary& lib,
                             const FitConfig& cfg, std::vector<std::string> output_names) {
  const Mat theta = lib.evaluate(X, U);
  const Index p = theta.cols();
  DiscrepancyModel model{lib, stlsq(theta, targets, cfg.solver, lib.names()), {}, std::move(output_names)};
  if (model.output_names.empty())
    for (Index c = 0; c < targets.cols(); ++c) model.output_names.push_back("y" + std::to_string(c + 1));

  auto& diag = model.diagnostics;
  diag.rows = theta.rows();
  diag.warnings = model.coefficients.warnings;
  if (theta.rows() < cfg.min_rows_per_term * p)
    diag.warnings.push_back("short data: " + std::to_string(theta.rows()) + " rows for " + std::to_string(p) +
                            " terms (guard " + std::to_string(cfg.min_rows_per_term) + " per term)");

  const Mat resid = targets - theta * model.coefficients.xi;
  diag.residual_rmse = (resid.colwise().squaredNorm() / static_cast<double>(std::max<Index>(resid.rows(), 1)))
                           .cwiseSqrt()
                           .transpose();
  for (Index c = 0; c < diag.residual_rmse.size(); ++c)
    if (diag.residual_rmse[c] > cfg.residual_ceiling)
      diag.warnings.push_back("fit quality: residual RMSE " + std::to_string(diag.residual_rmse[c]) +
                              " above ceiling in column " + std::to_string(c + 1));

  if (p > 0) {
    Mat scaled = theta;
    for (Index j = 0; j < p; ++j) {
      const double rms = column_rms(theta, j);
      if (cfg.solver.normalize && rms > 0.0) scaled.col(j) /= rms;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(scaled.transpose() * scaled, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    diag.condition = lo > 0.0 ? std::sqrt(hi / lo) : std::numeric_limits<double>::infinity();
  }
  return model;
}

DiscrepancyModel fit_discrepancy(const TimeSeries& data, const DerivativeEstimate& xdot,
                                 const DynamicsModel& nominal, const CandidateLibrary& lib,
                                 const FitConfig& cfg) {
  if (lib.state_dim() != data.state_dim() || lib.control_dim() != data.control_dim())
    throw ShapeError("fit: library dimensions do not match the data");
  const Mat targets = assemble_discrepancy_targets(data, xdot, nominal);
  std::vector<std::string> outputs;
  for (Index c = 0; c < data.state_dim(); ++c) outputs.push_back("dx" + std::to_string(c + 1));
  const Mat* U = data.has_controls() ? &*data.controls() : nullptr;
  return fit_library(data.states(), U, targets, lib, cfg, std::move(outputs));
}

DiscrepancyModel fit_discrepancy(const TimeSeries& data, const DynamicsModel& nominal,
                                 const CandidateLibrary& lib, const FitConfig& cfg) {
  const SmoothedDerivative d = estimate_derivative(data, cfg.derivative);
  return fit_discrepancy(d.states, d.xdot, nominal, lib, cfg);
}

HybridModel::HybridModel(DynamicsModel nominal_model, DiscrepancyModel disc)
    : nominal(std::move(nominal_model)), discrepancy(std::move(disc)) {
  if (nominal.state_dim != discrepancy.state_dim() || nominal.control_dim != discrepancy.control_dim())
    throw ShapeError("hybrid: nominal and discrepancy dimensions differ");
  if (discrepancy.coefficients.outputs() != nominal.state_dim)
    throw ShapeError("hybrid: discrepancy output count differs from state dimension");
}

Vec evaluate_hybrid(const HybridModel& h, const Vec& x, const Vec& u) {
  return h.nominal(x, u) + h.discrepancy.predict(x, u);
}

DynamicsModel HybridModel::as_dynamics() const {
  auto self = std::make_shared<const HybridModel>(*this);
  DynamicsModel m;
  m.name = "hybrid(" + nominal.name + ")";
  m.state_dim = nominal.state_dim;
  m.control_dim = nominal.control_dim;
  m.field = [self](const Vec& x, const Vec& u) { return evaluate_hybrid(*self, x, u); };
  return m;
}

nlohmann::json to_json(const SparseCoefficients& c) {
  nlohmann::json xi = nlohmann::json::array();
  nlohmann::json active = nlohmann::json::array();
  for (Index i = 0; i < c.terms(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    nlohmann::json arow = nlohmann::json::array();
    for (Index k = 0; k < c.outputs(); ++k) {
      row.push_back(c.xi(i, k));
      arow.push_back(static_cast<bool>(c.active(i, k)));
    }
    xi.push_back(row);
    active.push_back(arow);
  }
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : c.support_history) history.push_back(h);
  return {{"terms", c.term_names},
          {"xi", xi},
          {"active", active},
          {"lambda", c.options.lambda},
          {"max_iters", c.options.max_iters},
          {"normalize", c.options.normalize},
          {"all_pruned", c.all_pruned},
          {"iterations", c.iterations},
          {"support_history", history},
          {"warnings", c.warnings}};
}

nlohmann::json to_json(const DiscrepancyModel& m) {
  std::vector<double> rmse(m.diagnostics.residual_rmse.data(),
                           m.diagnostics.residual_rmse.data() + m.diagnostics.residual_rmse.size());
  nlohmann::json active_terms = nlohmann::json::object();
  for (Index c = 0; c < m.coefficients.outputs(); ++c) {
    nlohmann::json col = nlohmann::json::object();
    for (Index i = 0; i < m.coefficients.terms(); ++i)
      if (m.coefficients.active(i, c)) col[m.coefficients.term_names[static_cast<std::size_t>(i)]] = m.coefficients.xi(i, c);
    active_terms[m.output_names[static_cast<std::size_t>(c)]] = col;
  }
  return {{"outputs", m.output_names},
          {"library", to_json(m.library)},
          {"coefficients", to_json(m.coefficients)},
          {"active_terms", active_terms},
          {"diagnostics",
           {{"residual_rmse", rmse},
            {"condition", finite_or_null(m.diagnostics.condition)},
            {"rows", m.diagnostics.rows},
            {"warnings", m.diagnostics.warnings}}}};
}

DiscrepancyModel discrepancy_from_json(const nlohmann::json& j) {
  CandidateLibrary lib = library_from_json(j.at("library"));
  const auto& cj = j.at("coefficients");
  SparseCoefficients c;
  c.term_names = cj.at("terms").get<std::vector<std::string>>();
  if (c.term_names != lib.names()) throw DataError("model report: coefficient terms do not match library");
  const auto& xi = cj.at("xi");
  const Index p = static_cast<Index>(xi.size());
  const Index n = p > 0 ? static_cast<Index>(xi.at(0).size()) : static_cast<Index>(j.at("outputs").size());
  c.xi = Mat::Zero(p, n);
  c.active = BoolMat::Constant(p, n, false);
  for (Index i = 0; i < p; ++i) {
    if (static_cast<Index>(xi.at(static_cast<std::size_t>(i)).size()) != n) throw DataError("model report: ragged xi");
    for (Index k = 0; k < n; ++k) {
      c.xi(i, k) = xi.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<double>();
      c.active(i, k) = cj.at("active").at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<bool>();
    }
  }
  c.options.lambda = cj.at("lambda").get<double>();
  c.options.max_iters = cj.at("max_iters").get<int>();
  c.options.normalize = cj.at("normalize").get<bool>();
  c.all_pruned = cj.value("all_pruned", std::vector<bool>{});
  c.iterations = cj.value("iterations", std::vector<int>{});
  c.support_history = cj.value("support_history", std::vector<std::vector<Index>>{});
  c.warnings = cj.value("warnings", std::vector<std::string>{});

  DiscrepancyModel m{std::move(lib), std::move(c), {}, j.at("outputs").get<std::vector<std::string>>()};
  if (static_cast<Index>(m.output_names.size()) != n) throw DataError("model report: output count mismatch");
  if (j.contains("diagnostics")) {
    const auto& d = j.at("diagnostics");
    const auto rmse = d.value("residual_rmse", std::vector<double>{});
    m.diagnostics.residual_rmse = Eigen::Map<const Vec>(rmse.data(), static_cast<Index>(rmse.size()));
    m.diagnostics.condition = number_or_inf(d.at("condition"));
    m.diagnostics.rows = d.value("rows", Index{0});
    m.diagnostics.warnings = d.value("warnings", std::vector<std::string>{});
  }
  return m;
}

}  // namespace dsindy
