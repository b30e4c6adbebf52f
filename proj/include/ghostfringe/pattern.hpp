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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ghostfringe {

/// Detector transverse positions (meters) for one correlation sample.
struct DetectorPair {
  double x_c = 0.0;
  double x_t = 0.0;

  friend bool operator==(const DetectorPair&, const DetectorPair&) = default;
};

using Grid = std::vector<DetectorPair>;

/// Closed-form evaluation modes. `exact` keeps all four path pairs with their
/// coherence envelopes; `asymptotic` keeps only the two matched pairs.
enum class Mode { exact, asymptotic };

enum class PatternKind { exact, asymptotic, monte_carlo };

Mode parse_mode(std::string_view name);
std::string_view to_string(Mode mode);
std::string_view to_string(PatternKind kind);

/// Normalized fluctuation-correlation samples over a detector grid.
struct CorrelationPattern {
  Grid grid;
  std::vector<double> values;
  PatternKind kind = PatternKind::exact;
  std::optional<std::vector<double>> std_errors;
  std::vector<std::string> warnings;
};

enum class ScanAxis { x_c, x_t, diagonal };

ScanAxis parse_axis(std::string_view name);
std::string_view to_string(ScanAxis axis);

/// Inclusive scan from start to stop with the given step; the fixed detector
/// sits at `fixed` for single-axis scans.
Grid make_scan(ScanAxis axis, double start, double stop, double step, double fixed = 0.0);

/// Uniform 2-D product grid.
Grid make_grid_2d(double start, double stop, double step);

/// (max - min) / (max + min); zero for an all-zero pattern.
double visibility(std::span<const double> values);

}  // namespace ghostfringe
