// Copyright 2026 The ghostfringe Authors
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

#include "ghostfringe/pattern.hpp"

#include <algorithm>
#include <cmath>

#include "ghostfringe/errors.hpp"

namespace ghostfringe {

Mode parse_mode(std::string_view name) {
  if (name == "exact") return Mode::exact;
  if (name == "asymptotic") return Mode::asymptotic;
  throw ArgumentError("unknown evaluation mode '" + std::string(name) +
                      "' (expected exact or asymptotic)");
}

std::string_view to_string(Mode mode) {
  return mode == Mode::exact ? "exact" : "asymptotic";
}

std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::exact: return "exact";
    case PatternKind::asymptotic: return "asymptotic";
    case PatternKind::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

ScanAxis parse_axis(std::string_view name) {
  if (name == "x_C" || name == "x_c") return ScanAxis::x_c;
  if (name == "x_T" || name == "x_t") return ScanAxis::x_t;
  if (name == "diagonal") return ScanAxis::diagonal;
  throw ArgumentError("unknown scan axis '" + std::string(name) +
                      "' (expected x_C, x_T or diagonal)");
}

std::string_view to_string(ScanAxis axis) {
  switch (axis) {
    case ScanAxis::x_c: return "x_C";
    case ScanAxis::x_t: return "x_T";
    case ScanAxis::diagonal: return "diagonal";
  }
  return "unknown";
}

namespace {

std::vector<double> axis_points(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("scan step must be positive");
  if (!std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw ArgumentError("scan range must be finite with stop >= start");
  }
  // Index-based so accumulated rounding never drops the end point.
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> pts(n);
  for (std::size_t k = 0; k < n; ++k) pts[k] = start + static_cast<double>(k) * step;
  return pts;
}

}  // namespace

Grid make_scan(ScanAxis axis, double start, double stop, double step, double fixed) {
  Grid grid;
  for (double x : axis_points(start, stop, step)) {
    switch (axis) {
      case ScanAxis::x_c: grid.push_back({x, fixed}); break;
      case ScanAxis::x_t: grid.push_back({fixed, x}); break;
      case ScanAxis::diagonal: grid.push_back({x, x}); break;
    }
  }
  return grid;
}

Grid make_grid_2d(double start, double stop, double step) {
  const auto pts = axis_points(start, stop, step);
  Grid grid;
  grid.reserve(pts.size() * pts.size());
  for (double xc : pts)
    for (double xt : pts) grid.push_back({xc, xt});
  return grid;
}

double visibility(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double sum = *hi + *lo;
  return sum == 0.0 ? 0.0 : (*hi - *lo) / sum;
}

}  // namespace ghostfringe
