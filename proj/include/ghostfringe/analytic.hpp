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

// Closed-form fluctuation correlations for the two-mask interferometer: a
// chaotic source, a balanced beam splitter, one two-pinhole mask per arm at
// distance z and a point detector per arm at distance f behind the mask.

#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghostfringe/pattern.hpp"
#include "ghostfringe/phys_core.hpp"

namespace ghostfringe {

/// Geometry of the two-mask interferometer. Unprimed pinholes belong to the
/// control-arm mask, primed ones to the target-arm mask. Lengths in meters.
struct SetupBasic {
  double a = 0.5e-3;       ///< source half-width
  double lambda = 500e-9;  ///< wavelength
  double z = 1.0;          ///< source -> mask
  double f = 1.0;          ///< mask -> detector
  double x1 = -5e-3;
  double x2 = 5e-3;
  double x1p = -5e-3;
  double x2p = 5e-3;

  /// Throws InvalidGeometry on non-positive or non-finite lengths; returns
  /// paraxial-sanity warnings (max(|x_i|, a) > z/10).
  std::vector<std::string> validate() const;

  double omega() const { return angular_frequency(lambda); }
  /// omega / c, the free-space wavenumber.
  double wavenumber() const { return omega() / kSpeedOfLight; }
  /// 1/h = 1/z + 1/f.
  double h() const { return 1.0 / (1.0 / z + 1.0 / f); }
  double l_coh() const { return lambda * z / (2.0 * a); }

  /// Control pinhole i in {1, 2}.
  double control_pinhole(int i) const;
  /// Target pinhole j in {1, 2} (that is 1', 2').
  double target_pinhole(int j) const;
};

/// Normalized source envelope as a function of pinhole separation; must
/// equal 1 at zero separation. The top-hat profile is the default.
using Envelope = std::function<double(double separation)>;

Envelope tophat_envelope(const SetupBasic& setup);

/// One path-pair term G1_{i,j'} of the first-order cross correlation.
struct PairContribution {
  int i = 1;              ///< control pinhole, 1 or 2
  int j = 1;              ///< target pinhole, 1' or 2' stored as 1 or 2
  double envelope = 0.0;  ///< sinc factor, peak 1
  double phase = 0.0;     ///< raw (unwrapped) phase in radians
  Complexd value;         ///< envelope * exp(i phase)
};

double coherence_length(const SetupBasic& setup);

/// Unit-modulus pinhole phase factor B_j(x_d) without constant prefactors.
Complexd b_phase(double xj, double xd, const SetupBasic& setup);

PairContribution g1_pair(int i, int j, double x_c, double x_t, const SetupBasic& setup);
PairContribution g1_pair(int i, int j, double x_c, double x_t, const SetupBasic& setup,
                         const Envelope& envelope);

/// All four pairs in the order (1,1'), (2,2'), (1,2'), (2,1').
std::array<PairContribution, 4> g1_pairs(double x_c, double x_t, const SetupBasic& setup);
std::array<PairContribution, 4> g1_pairs(double x_c, double x_t, const SetupBasic& setup,
                                         const Envelope& envelope);

/// Interference phase between the (2,2') and (1,1') path pairs.
double phase_phi_basic(const SetupBasic& setup, double x_c, double x_t);

/// |sum of pair values|^2.
double coherent_intensity(std::span<const PairContribution> pairs);

/// Normalized <dn_C dn_T>. Exact mode is |sum over the four pairs|^2 with
/// unit-peak envelopes, so a coherent symmetric configuration gives 4;
/// asymptotic mode is |1 + exp(i phi)|^2.
double dn_corr_basic(const SetupBasic& setup, double x_c, double x_t, Mode mode);
double dn_corr_basic(const SetupBasic& setup, double x_c, double x_t, std::string_view mode);
double dn_corr_basic(const SetupBasic& setup, double x_c, double x_t, Mode mode,
                     const Envelope& envelope);

/// Period lambda*f/|x1 - x2| of the pattern along x_C at fixed x_T.
double fringe_period_xc(const SetupBasic& setup);

/// Separations in units of l_coh: the cross pairs should be >> 1 and the
/// matched pairs << 1 for the two-term form to hold.
struct BasicConditionMargins {
  double cross_1_2p = 0.0;
  double cross_2_1p = 0.0;
  double direct_1_1p = 0.0;
  double direct_2_2p = 0.0;
};

BasicConditionMargins basic_condition_margins(const SetupBasic& setup);

/// Human-readable violations of the two-pair conditions at the given ratio
/// (cross >= ratio, direct <= 1/ratio). Empty when all hold.
std::vector<std::string> check_basic_conditions(const SetupBasic& setup, double ratio = 20.0);

/// Evaluates dn_corr_basic over a grid. Asymptotic patterns carry condition
/// warnings when the two-pair premise is violated.
CorrelationPattern evaluate_basic_pattern(const SetupBasic& setup, const Grid& grid, Mode mode);

}  // namespace ghostfringe
