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

#include <optional>
#include <string>
#include <vector>

#include "dsindy/numerics.hpp"

namespace dsindy {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  Mat values;

  Index column(const std::string& name) const;  ///< -1 if absent
};

/// Header line plus one row per matrix row, comma separated, LF endings.
void write_csv(const std::string& path, const std::vector<std::string>& header, const Mat& values);
std::string to_csv(const std::vector<std::string>& header, const Mat& values);

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

/// A trajectory file: t, x1..xn, optional u1..ur and dx1..dxn.
struct TrajectoryData {
  TimeSeries series;
  std::optional<Mat> xdot;
};

std::vector<std::string> trajectory_header(Index n, Index r, bool with_xdot);
void write_trajectory_csv(const std::string& path, const TimeSeries& ts, const Mat* xdot = nullptr);
/// Requires uniformly spaced t (relative deviation <= 1e-9 of dt).
TrajectoryData trajectory_from_table(const CsvTable& table);
TrajectoryData read_trajectory_csv(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace dsindy
