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

// Stochastic-field oracle. The chaotic source is a row of independent point
// emitters with circular complex-Gaussian amplitudes; each realization is
// propagated through the instrument with explicit Fresnel kernels and Jones
// elements, and <dI_C dI_T> is estimated by ensemble averaging.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ghostfringe/analytic.hpp"
#include "ghostfringe/gate.hpp"
#include "ghostfringe/pattern.hpp"
#include "ghostfringe/phys_core.hpp"

namespace ghostfringe {

inline constexpr int kMinEmitters = 64;
inline constexpr int kMinRealizations = 100;

/// Equal-weight emitters across [-a, a]. Use uniform_source() for ensemble
/// work; point_sources() exists for few-emitter diagnostics.
struct SourceModel {
  double a = 0.5e-3;
  double mean_photon_number = 1.0;
  std::vector<double> positions;

  int n_emitters() const { return static_cast<int>(positions.size()); }
};

/// Cell-centered grid of n emitters strictly inside [-a, a]; n >= 64.
SourceModel uniform_source(double a, int n_emitters = 256, double mean_photon_number = 1.0);
/// Emitters at explicit positions within [-a, a].
SourceModel point_sources(double a, std::vector<double> positions,
                          double mean_photon_number = 1.0);

struct Realization {
  std::vector<Complexd> amplitudes;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

/// Deterministic in (seed, index); amplitude m depends only on
/// (seed, index, m).
Realization sample_realization(const SourceModel& source, std::uint64_t seed,
                               std::uint64_t index);

/// Single amplitude draw, exposed for streaming use.
Complexd sample_amplitude(std::uint64_t seed, std::uint64_t index, std::uint32_t emitter,
                          double mean_photon_number);

enum class IntensityMode {
  projected,   ///< |analyzer . E|^2
  total_power  ///< |E_H|^2 + |E_V|^2 (debug)
};

/// The optical system a realization is pushed through.
struct Instrument {
  std::variant<SetupBasic, SetupGate, SetupMZ> setup;
  /// Preparation half-wave plates; used by the polarized layouts only.
  double prep_c = 0.0;
  double prep_t = 0.0;
  /// Removes both masks: free propagation over z + f (mask layouts only).
  bool masks_removed = false;
  std::array<bool, 2> control_open{true, true};
  std::array<bool, 2> target_open{true, true};
  BeamSplitterConvention bs_convention = BeamSplitterConvention::i_reflection;
  IntensityMode intensity = IntensityMode::projected;

  static Instrument basic(const SetupBasic& s);
  static Instrument gate(const SetupGate& s, const GateAngles& angles);
  static Instrument mz(const SetupMZ& s, const GateAngles& angles);

  bool polarized() const { return !std::holds_alternative<SetupBasic>(setup); }
  double wavelength() const;
  /// Validates geometry; returns warnings.
  std::vector<std::string> validate() const;
};

/// Field at detector x_d for one realization, summed over emitters and open
/// paths. Polarized instruments require an analyzer angle; the basic layout
/// ignores it.
Complexd field_at_detector(const Realization& realization, const SourceModel& source,
                           const Instrument& instrument, Arm arm, double x_d,
                           std::optional<double> analyzer = std::nullopt);

/// Both polarization components of the field (H, V) before the analyzer.
JonesVectord field_vector_at_detector(const Realization& realization, const SourceModel& source,
                                      const Instrument& instrument, Arm arm, double x_d);

struct McOptions {
  int batches = 10;
  /// 0 means: GHOSTFRINGE_THREADS if set, else hardware concurrency.
  int threads = 0;
  /// Realizations per matrix product inside a batch.
  int chunk = 512;
};

/// Worker count from GHOSTFRINGE_THREADS, capped at the hardware concurrency.
int default_thread_count();

struct EnsembleEstimate {
  CorrelationPattern pattern;        ///< normalized to its maximum, kind monte_carlo
  int n_realizations = 0;
  std::vector<double> std_errors;    ///< same scale as pattern.values
  std::vector<double> raw;           ///< unnormalized covariance
  std::vector<double> raw_std_errors;
  /// Covariance of one fully coherent path pair with unit polarization
  /// weight; raw / coherent_unit is on the closed-form engines' scale.
  double coherent_unit = 1.0;
  std::vector<double> mean_intensity_c;
  std::vector<double> mean_intensity_t;

  std::vector<double> absolute() const;
  std::vector<double> absolute_std_errors() const;
};

/// <I_C I_T> - <I_C><I_T> per grid point, batch-means standard errors.
/// Analyzer angles come from `angles` for polarized instruments (the
/// preparation angles in `angles` override instrument.prep_*).
EnsembleEstimate estimate_dn_corr(const Instrument& instrument, const SourceModel& source,
                                  const std::optional<GateAngles>& angles, const Grid& grid,
                                  int n_realizations, std::uint64_t seed,
                                  const McOptions& options = {});

/// Basis-angle truth table from the ensemble at one detector pair, on the
/// closed-form scale (raw / coherent_unit). One estimate per entry, all
/// sharing the same realizations.
struct McTruthTable {
  TruthTable value;
  TruthTable std_error;
};

McTruthTable estimate_truth_table(const Instrument& instrument, const SourceModel& source,
                                  DetectorPair detectors, int n_realizations, std::uint64_t seed,
                                  const McOptions& options = {});

enum class CompareScale {
  peak,     ///< both patterns normalized to their own maximum
  absolute  ///< analytic values against raw / coherent_unit
};

struct PatternComparison {
  double nrmse = 0.0;
  double pearson = 0.0;
  double max_sigma_dev = 0.0;
};

PatternComparison compare_patterns(const CorrelationPattern& analytic, const EnsembleEstimate& mc,
                                   CompareScale scale = CompareScale::peak);

}  // namespace ghostfringe
