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

#include <limits>
#include <string>
#include <vector>

#include "dsindy/library.hpp"
#include "dsindy/numerics.hpp"

namespace dsindy {

using BoolMat = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct StlsqOptions {
  double lambda = 0.05;
  int max_iters = 10;
  /// Threshold on coefficients of library columns scaled to unit root mean
  /// square, which keeps lambda independent of the sample count.
  bool normalize = true;
};

/// Result of sequentially thresholded least squares, one column per target.
///
/// When `normalize` is set the threshold applies to coefficients of the
/// unit-RMS columns, so a stored entry below lambda can be nonzero; the
/// zero pattern always matches `active`.
struct SparseCoefficients {
  Mat xi;  ///< p x n
  std::vector<std::string> term_names;
  StlsqOptions options;
  BoolMat active;
  std::vector<bool> all_pruned;
  std::vector<int> iterations;
  /// Active-set size after the initial fit and after each thresholding pass.
  std::vector<std::vector<Index>> support_history;
  std::vector<std::string> warnings;

  Index terms() const noexcept { return xi.rows(); }
  Index outputs() const noexcept { return xi.cols(); }
  std::vector<std::string> active_terms(Index column) const;
};

/// Solves targets ~= theta * xi with hard thresholding: fit on the active set,
/// drop coefficients below lambda (ties are kept), refit, until the set stops
/// changing or max_iters passes have run.
SparseCoefficients stlsq(const Mat& theta, const Mat& targets, const StlsqOptions& opts,
                         std::vector<std::string> term_names = {});

/// Rows of xdot - f_nominal(x, u).
Mat assemble_discrepancy_targets(const TimeSeries& data, const DerivativeEstimate& xdot,
                                 const DynamicsModel& nominal);

struct FitDiagnostics {
  Vec residual_rmse;   ///< per output column
  double condition = 0.0;  ///< 2-norm condition number of the (normalized) library matrix
  Index rows = 0;
  std::vector<std::string> warnings;
};

/// Learned correction g(x, u) = Theta(x, u) * Xi.
struct DiscrepancyModel {
  CandidateLibrary library;
  SparseCoefficients coefficients;
  FitDiagnostics diagnostics;
  std::vector<std::string> output_names;

  Vec predict(const Vec& x, const Vec& u) const;
  Mat predict(const Mat& X, const Mat* U = nullptr) const;
  Index state_dim() const noexcept { return library.state_dim(); }
  Index control_dim() const noexcept { return library.control_dim(); }
};

struct FitConfig {
  StlsqOptions solver;
  DerivativeOptions derivative;
  Index min_rows_per_term = 10;
  double residual_ceiling = std::numeric_limits<double>::infinity();
};

/// Smooths and differentiates `data`, subtracts the nominal model, and runs
/// stlsq on the library evaluated at the (smoothed) states.
DiscrepancyModel fit_discrepancy(const TimeSeries& data, const DynamicsModel& nominal,
                                 const CandidateLibrary& lib, const FitConfig& cfg);

/// Same pipeline with derivatives supplied by the caller; `data` is used as is.
DiscrepancyModel fit_discrepancy(const TimeSeries& data, const DerivativeEstimate& xdot,
                                 const DynamicsModel& nominal, const CandidateLibrary& lib,
                                 const FitConfig& cfg);

/// Regression of arbitrary targets on a library (used by the energy fit).
DiscrepancyModel fit_library(const Mat& X, const Mat* U, const Mat& targets, const CandidateLibrary& lib,
                             const FitConfig& cfg, std::vector<std::string> output_names);

/// Nominal model plus learned discrepancy.
struct HybridModel {
  DynamicsModel nominal;
  DiscrepancyModel discrepancy;

  HybridModel(DynamicsModel nominal, DiscrepancyModel discrepancy);
  /// Evaluable vector field f_nominal + Theta * Xi.
  DynamicsModel as_dynamics() const;
};

Vec evaluate_hybrid(const HybridModel& h, const Vec& x, const Vec& u);

nlohmann::json to_json(const SparseCoefficients& c);
nlohmann::json to_json(const DiscrepancyModel& m);
DiscrepancyModel discrepancy_from_json(const nlohmann::json& j);

}  // namespace dsindy
