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

// Experiment configuration: a sectioned key = value file.
//
//   [setup]   kind = basic | gate | mz, geometry keys of that kind
//   [angles]  phi_c, phi_t, theta_c, theta_t (gate and mz); numbers or
//             multiples of pi such as "pi/4" or "3*pi/2"
//   [scan]    axis = x_C | x_T | diagonal, start, stop, step, detector_x
//   [run]     mode = exact | asymptotic | mc | all
//   [mc]      n_realizations, n_emitters, seed, batches, mean_photon_number,
//             intensity = projected | total_power
//
// '#' and ';' start comments. Every key is optional; unknown keys and keys
// that do not apply to the chosen setup kind are rejected.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ghostfringe/analytic.hpp"
#include "ghostfringe/gate.hpp"
#include "ghostfringe/mc.hpp"
#include "ghostfringe/pattern.hpp"

namespace ghostfringe {

/// Parse or validation failure, carrying the source location when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string field, std::string message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }  ///< 0 when not tied to a line
  const std::string& field() const { return field_; }
  /// The message without the location prefix.
  const std::string& message() const { return message_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
  std::string message_;
};

enum class SetupKind { basic, gate, mz };
enum class RunMode { exact, asymptotic, mc, all };

std::string_view to_string(SetupKind kind);
std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view text);

struct ScanSpec {
  ScanAxis axis = ScanAxis::diagonal;
  double start = -1e-3;
  double stop = 1e-3;
  double step = 5e-5;
  double detector_x = 0.0;  ///< fixed detector for single-axis scans
};

struct McSpec {
  int n_realizations = 20000;
  int n_emitters = 256;
  std::uint64_t seed = 1;
  int batches = 10;
  double mean_photon_number = 1.0;
  IntensityMode intensity = IntensityMode::projected;
};

struct ExperimentConfig {
  SetupKind kind = SetupKind::basic;
  SetupBasic basic;  ///< geometry for basic and gate
  SetupMZ mz;
  GateAngles angles;
  ScanSpec scan;
  RunMode mode = RunMode::exact;
  McSpec mc;

  /// Instrument for the Monte-Carlo oracle.
  Instrument instrument() const;
  /// Geometry warnings; throws ConfigError on invariant violations.
  std::vector<std::string> validate() const;
};

ExperimentConfig parse_config(const std::string& path);
/// `source` names the text in diagnostics.
ExperimentConfig parse_config_text(std::string_view text, const std::string& source = "<config>");

/// Every key accepted in a section, for any setup kind.
std::vector<std::string_view> known_keys(std::string_view section);
std::vector<std::string_view> known_sections();

/// Closest candidate within edit distance 2, if any.
std::optional<std::string_view> suggest(std::string_view word,
                                        const std::vector<std::string_view>& candidates);
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Canonical key=value lines (all keys, defaults included) that re-parse to
/// the same configuration.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config);

/// Shortest round-trip formatting of a double.
std::string format_double(double v);

}  // namespace ghostfringe
