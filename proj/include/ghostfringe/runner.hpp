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

// Orchestration behind the command-line driver: evaluates a configuration in
// the requested modes and writes CSV output.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghostfringe/config.hpp"

namespace ghostfringe {

struct ModePattern {
  std::string mode;  ///< exact, asymptotic or mc
  CorrelationPattern pattern;
  std::optional<EnsembleEstimate> estimate;  ///< mc only
};

struct ComparisonRow {
  std::string reference;
  std::string candidate;
  std::string scale;  ///< peak or absolute
  double nrmse = 0.0;
  double pearson = 0.0;
  double max_sigma_dev = 0.0;
  double max_abs_dev = 0.0;
};

struct ModeTruthTable {
  std::string mode;
  TruthTable value;
  std::optional<TruthTable> std_error;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<ModePattern> patterns;
  std::vector<ModeTruthTable> truth_tables;
  std::vector<std::pair<std::string, double>> margins;
  std::vector<std::string> condition_warnings;
  std::vector<ComparisonRow> comparisons;
  std::vector<std::pair<std::string, double>> timings;  ///< seconds; never written to CSV
  std::optional<bool> verified;                         ///< set by run_verify
};

Grid scan_grid(const ExperimentConfig& config);

/// Closed-form pattern of the configured layout.
CorrelationPattern evaluate_pattern(const ExperimentConfig& config, const Grid& grid, Mode mode);

/// Margins and warnings over the configured scan.
void assess_conditions(const ExperimentConfig& config, RunReport& report);

RunReport run_scan(const ExperimentConfig& config);
/// Basis truth table at x_C = x_T = scan.detector_x (gate and mz layouts).
RunReport run_truth_table(const ExperimentConfig& config);
RunReport run_conditions(const ExperimentConfig& config);
/// Exact versus Monte-Carlo on the absolute scale: passes when
/// max_sigma_dev <= 4 and pearson >= 0.99.
RunReport run_verify(const ExperimentConfig& config);

inline constexpr double kVerifyMaxSigma = 4.0;
inline constexpr double kVerifyMinPearson = 0.99;

/// Writes pattern_<mode>.csv, truth_table_<mode>.csv, comparison.csv and
/// conditions.csv as applicable. Output is a pure function of the report
/// minus its timings.
std::vector<std::filesystem::path> emit(const RunReport& report, const std::filesystem::path& out_dir);

/// Human-readable summary, including timings.
std::string summarize(const RunReport& report);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> preamble;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace ghostfringe
