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

// Polarization-resolved correlations for the two gate-simulation layouts:
//
//  * mask layout: the two-mask interferometer with half-wave preparation plates,
//    H/V polarizers on control pinholes 1/2, nothing on 1' and a flip plate on 2';
//  * Mach-Zehnder layout: each mask replaced by a two-path interferometer whose
//    path-1 mirror is tilted by delta_C (delta_T), mirrors at zbar from the
//    detectors and detectors at z from the source.
//
// In both, the fluctuation correlation is proportional to the post-selected
// joint detection probability of a controlled-U_phi gate.

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ghostfringe/analytic.hpp"
#include "ghostfringe/phys_core.hpp"

namespace ghostfringe {

/// Preparation plates (phi_c, phi_t) and analyzers (theta_c, theta_t), all
/// reduced to [0, 2*pi) on construction.
class GateAngles {
 public:
  GateAngles() = default;
  GateAngles(double phi_c, double phi_t, double theta_c, double theta_t);

  double phi_c() const { return phi_c_; }
  double phi_t() const { return phi_t_; }
  double theta_c() const { return theta_c_; }
  double theta_t() const { return theta_t_; }

 private:
  double phi_c_ = 0.0;
  double phi_t_ = 0.0;
  double theta_c_ = 0.0;
  double theta_t_ = 0.0;
};

/// Mask layout; the polarization optics on the pinholes are fixed.
struct SetupGate {
  SetupBasic geometry;

  std::vector<std::string> validate() const { return geometry.validate(); }
};

/// Mach-Zehnder layout. Lengths in meters, tilts in radians.
struct SetupMZ {
  double a = 0.5e-3;
  double lambda = 500e-9;
  double z = 1.0;     ///< source -> detectors
  double zbar = 0.2;  ///< tilted mirrors -> detectors
  double delta_c = 0.0;
  double delta_t = 0.0;

  /// Throws InvalidGeometry; warns when |delta| > 0.05 rad.
  std::vector<std::string> validate() const;

  double omega() const { return angular_frequency(lambda); }
  double wavenumber() const { return omega() / kSpeedOfLight; }
  double l_coh() const { return lambda * z / (2.0 * a); }
};

enum class Arm { control, target };

/// |cos phi_c cos theta_c cos(phi_t - theta_t)
///   + e^{i phi} sin phi_c sin theta_c sin(phi_t + theta_t)|^2
double p_controlled_u(const GateAngles& angles, double phi);
double p_cnot(const GateAngles& angles);

/// Real polarization weights of the four path pairs, ordered
/// (1,1'), (2,2'), (1,2'), (2,1'). The Mach-Zehnder layout carries a minus
/// sign on both cross pairs.
std::array<double, 4> gate_pair_weights(const GateAngles& angles);
std::array<double, 4> mz_pair_weights(const GateAngles& angles);

double dn_corr_gate(const SetupGate& setup, const GateAngles& angles, double x_c, double x_t,
                    Mode mode);
double dn_corr_gate(const SetupGate& setup, const GateAngles& angles, double x_c, double x_t,
                    std::string_view mode);

/// |phi| at the detector pair; at or below kCnotRegimeThreshold the gate
/// behaves as a CNOT to within 0.25 % in probability.
double cnot_condition_margin(const SetupGate& setup, double x_c, double x_t);
inline constexpr double kCnotRegimeThreshold = 0.1;

/// Effective detector position seen through Mach-Zehnder path p (1 or 2):
/// path 1 is displaced by 2*zbar*delta, path 2 is not.
double mz_effective_position(const SetupMZ& setup, Arm arm, int path, double x_d);

double mz_phase(const SetupMZ& setup, double x_c, double x_t);

/// Geometric factor of Mach-Zehnder path pair (i, j'): envelope at
/// x_{T,j} - x_{C,i} and phase k (x_{C,i}^2 - x_{T,j}^2) / (2z).
PairContribution mz_pair(int i, int j, double x_c, double x_t, const SetupMZ& setup);

double dn_corr_mz(const SetupMZ& setup, const GateAngles& angles, double x_c, double x_t,
                  Mode mode);
double dn_corr_mz(const SetupMZ& setup, const GateAngles& angles, double x_c, double x_t,
                  std::string_view mode);

/// Dimensionless ratios for the Mach-Zehnder validity conditions.
struct MzConditionMargins {
  double tilt_c = 0.0;           ///< |delta_C| 2 zbar / l_coh, want >> 1
  double tilt_t = 0.0;           ///< |delta_T| 2 zbar / l_coh, want >> 1
  double tilt_mismatch = 0.0;    ///< |delta_C - delta_T| 2 zbar / l_coh, want << 1
  double detector_offset = 0.0;  ///< |x_C - x_T| / l_coh, want << 1
  double phase = 0.0;            ///< |phi|, want << 1 for CNOT
};

MzConditionMargins mz_condition_margins(const SetupMZ& setup, double x_c, double x_t);
std::vector<std::string> check_mz_conditions(const SetupMZ& setup, double x_c, double x_t,
                                             double ratio = 20.0);

// ---------------------------------------------------------------------------
// Block propagation matrices

enum class Layout { masks, mach_zehnder };

/// Identifies one free-space path from the source to a detector.
struct PathId {
  Arm arm = Arm::control;
  int pinhole = 1;  ///< 1 or 2 (primed on the target arm)

  friend bool operator==(const PathId&, const PathId&) = default;
};

/// One term g_path * matrix of a (detector, source) block.
struct PathTerm {
  PathId path;
  JonesMatrixd matrix;
};

/// Source -> detector propagation with the Green's functions kept symbolic:
/// block(d, s) = sum over terms of g_{term.path} * term.matrix.
/// Rows index detectors (control, target); columns the beam-splitter input
/// ports (S, S').
class BlockMatrix {
 public:
  Layout layout = Layout::masks;
  double kappa = 0.0;  ///< transverse mode label carried through unchanged
  std::array<std::array<std::vector<PathTerm>, 2>, 2> blocks;

  const std::vector<PathTerm>& block(Arm detector, int source_port) const;

  /// Coefficient of g_{arm, pinhole} in analyzer . block(arm, S) . H.
  std::array<Complexd, 2> arm_amplitudes(Arm arm, double analyzer_angle,
                                         int source_port = 0) const;

  /// Coefficient of conj(g_i) g_j' in the first-order cross correlation,
  /// pairs ordered (1,1'), (2,2'), (1,2'), (2,1'). Mean occupations weight
  /// the two input ports; the unused port is vacuum by default.
  std::array<Complexd, 4> pair_coefficients(const GateAngles& angles,
                                            double occupation_s = 1.0,
                                            double occupation_s_prime = 0.0) const;
};

BlockMatrix compose_network(const SetupGate& setup, const GateAngles& angles, double kappa);
BlockMatrix compose_network(const SetupMZ& setup, const GateAngles& angles, double kappa);

// ---------------------------------------------------------------------------
// Truth tables

/// Rows: input (control, target) preparation; columns: analyzer outcome.
/// Basis order HH, HV, VH, VV with H at angle 0 and V at pi/2.
struct TruthTable {
  std::array<std::array<double, 4>, 4> p{};

  static constexpr std::array<std::string_view, 4> kLabels{"HH", "HV", "VH", "VV"};
};

/// Angles for input row r and output column c.
GateAngles basis_angles(int row, int col);

TruthTable ideal_cnot_table();

template <typename Fn>
TruthTable make_truth_table(Fn&& probability) {
  TruthTable t;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) t.p[r][c] = probability(basis_angles(r, c));
  return t;
}

}  // namespace ghostfringe
