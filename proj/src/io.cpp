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

#include "dsindy/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dsindy/errors.hpp"

namespace dsindy {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Index CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<Index>(i);
  return -1;
}

std::string to_csv(const std::vector<std::string>& header, const Mat& values) {
  if (static_cast<Index>(header.size()) != values.cols()) throw ShapeError("csv: header width differs from data");
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out += ',';
    out += header[j];
  }
  out += '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(path, "cannot open for writing");
  f << text;
  f.flush();
  if (!f) throw IoError(path, "write failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path, "file not found or unreadable");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header, const Mat& values) {
  write_text(path, to_csv(header, values));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    lines.push_back(rest.substr(0, nl));
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  // trailing blank lines are tolerated, interior ones are not
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw CsvParseError(1, 1, "missing header");

  CsvTable table;
  for (auto cell : split(lines[0])) {
    if (cell.empty()) throw CsvParseError(1, table.header.size() + 1, "empty column name");
    table.header.emplace_back(cell);
  }
  const std::size_t width = table.header.size();
  table.values.resize(static_cast<Index>(lines.size() - 1), static_cast<Index>(width));
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    if (cells.size() != width)
      throw CsvParseError(r + 1, std::min(cells.size(), width) + 1,
                          "expected " + std::to_string(width) + " cells, found " + std::to_string(cells.size()));
    for (std::size_t c = 0; c < width; ++c) {
      const auto cell = cells[c];
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw CsvParseError(r + 1, c + 1, "not a number: '" + std::string(cell) + "'");
      if (!std::isfinite(v)) throw CsvParseError(r + 1, c + 1, "non-finite value");
      table.values(static_cast<Index>(r - 1), static_cast<Index>(c)) = v;
    }
  }
  return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_text(path)); }

std::vector<std::string> trajectory_header(Index n, Index r, bool with_xdot) {
  std::vector<std::string> h{"t"};
  for (Index i = 1; i <= n; ++i) h.push_back("x" + std::to_string(i));
  for (Index i = 1; i <= r; ++i) h.push_back("u" + std::to_string(i));
  if (with_xdot)
    for (Index i = 1; i <= n; ++i) h.push_back("dx" + std::to_string(i));
  return h;
}

void write_trajectory_csv(const std::string& path, const TimeSeries& ts, const Mat* xdot) {
  const Index n = ts.state_dim(), r = ts.control_dim();
  if (xdot && (xdot->rows() != ts.rows() || xdot->cols() != n))
    throw ShapeError("trajectory csv: derivative block does not match the states");
  Mat out(ts.rows(), 1 + n + r + (xdot ? n : 0));
  out.col(0) = ts.times();
  out.middleCols(1, n) = ts.states();
  if (r) out.middleCols(1 + n, r) = *ts.controls();
  if (xdot) out.rightCols(n) = *xdot;
  write_csv(path, trajectory_header(n, r, xdot != nullptr), out);
}

TrajectoryData trajectory_from_table(const CsvTable& table) {
  const auto& h = table.header;
  if (h.empty() || h[0] != "t") throw DataError("trajectory csv: first column must be 't'");
  auto count = [&](const std::string& prefix, std::size_t from) {
    Index k = 0;
    while (from + k < h.size() && h[from + k] == prefix + std::to_string(k + 1)) ++k;
    return k;
  };
  const Index n = count("x", 1);
  const Index r = count("u", 1 + n);
  const Index nd = count("dx", 1 + n + r);
  if (n == 0) throw DataError("trajectory csv: no state columns x1..xn");
  if (nd != 0 && nd != n) throw DataError("trajectory csv: derivative columns must be dx1..dx" + std::to_string(n));
  if (static_cast<Index>(h.size()) != 1 + n + r + nd)
    throw DataError("trajectory csv: unexpected column '" + h[1 + n + r + nd] + "'");
  const Mat& v = table.values;
  if (v.rows() < 2) throw InsufficientDataError("trajectory csv: need at least 2 rows");
  const double t0 = v(0, 0);
  const Index last = v.rows() - 1;
  auto deviation = [&](Index i, double dt) { return std::abs(v(i, 0) - (t0 + static_cast<double>(i) * dt)); };
  auto off_grid = [&](double dt, double tol) -> Index {
    for (Index i = 0; i <= last; ++i)
      if (deviation(i, dt) > tol) return i;
    return -1;
  };
  const double first = v(1, 0) - t0;
  if (!(first > 0.0)) throw CsvParseError(3, 1, "time must increase");
  double dt = (v(last, 0) - t0) / static_cast<double>(last);
  if (off_grid(dt, 1e-9 * dt) >= 0) {
    const Index bad = std::max<Index>(off_grid(first, 1e-9 * first), 1);
    throw CsvParseError(static_cast<std::size_t>(bad) + 2, 1, "time column is not uniformly spaced");
  }
  // The grid was most likely written as t0 + i*dt with a short decimal dt;
  // take the shortest one that regenerates every t to within a few ulps.
  const double ulps = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t0), std::abs(v(last, 0)));
  for (int digits = 1; digits <= 17; ++digits) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, dt, std::chars_format::general, digits);
    double cand = 0.0;
    std::from_chars(buf, res.ptr, cand);
    if (cand > 0.0 && off_grid(cand, ulps) < 0) {
      dt = cand;
      break;
    }
  }
  std::optional<Mat> u;
  if (r) u = v.middleCols(1, n + r).rightCols(r);
  TrajectoryData d{TimeSeries(t0, dt, v.middleCols(1, n), std::move(u)), std::nullopt};
  if (nd) d.xdot = v.rightCols(nd);
  return d;
}

TrajectoryData read_trajectory_csv(const std::string& path) { return trajectory_from_table(read_csv(path)); }

}  // namespace dsindy
