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

#include "ghostfringe/gate.hpp"

#include <cmath>
#include <sstream>

namespace ghostfringe {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << v << ")";
    throw InvalidGeometry(os.str());
  }
}

void require_finite_angle(double v, const char* name) {
  if (!std::isfinite(v)) throw ArgumentError(std::string(name) + " must be finite");
}

/// Amplitude weights (A, B) with P_U = |A + e^{i phi} B|^2.
struct MatchedWeights {
  double direct_1;  // (1,1')
  double direct_2;  // (2,2')
};

MatchedWeights matched_weights(const GateAngles& g) {
  const auto pc = sincos_snapped(g.phi_c());
  const auto tc = sincos_snapped(g.theta_c());
  const double cos_diff = sincos_snapped(g.phi_t() - g.theta_t()).cos;
  const double sin_sum = sincos_snapped(g.phi_t() + g.theta_t()).sin;
  return {pc.cos * tc.cos * cos_diff, pc.sin * tc.sin * sin_sum};
}

}  // namespace

GateAngles::GateAngles(double phi_c, double phi_t, double theta_c, double theta_t) {
  require_finite_angle(phi_c, "phi_c");
  require_finite_angle(phi_t, "phi_t");
  require_finite_angle(theta_c, "theta_c");
  require_finite_angle(theta_t, "theta_t");
  phi_c_ = canonical_angle(phi_c);
  phi_t_ = canonical_angle(phi_t);
  theta_c_ = canonical_angle(theta_c);
  theta_t_ = canonical_angle(theta_t);
}

std::vector<std::string> SetupMZ::validate() const {
  require_positive(a, "a");
  require_positive(lambda, "lambda");
  require_positive(z, "z");
  require_positive(zbar, "zbar");
  if (!std::isfinite(delta_c) || !std::isfinite(delta_t)) {
    throw InvalidGeometry("tilt angles must be finite");
  }
  std::vector<std::string> warnings;
  for (const auto& [v, name] : {std::pair{delta_c, "delta_c"}, std::pair{delta_t, "delta_t"}}) {
    if (std::abs(v) > 0.05) {
      std::ostringstream os;
      os << "small-angle sanity: |" << name << "| = " << std::abs(v) << " rad exceeds 0.05 rad";
      warnings.push_back(os.str());
    }
  }
  return warnings;
}

double p_controlled_u(const GateAngles& angles, double phi) {
  const auto w = matched_weights(angles);
  return std::norm(Complexd(w.direct_1, 0.0) + std::polar(w.direct_2, phi));
}

double p_cnot(const GateAngles& angles) {
  const auto w = matched_weights(angles);
  const double amp = w.direct_1 + w.direct_2;
  return amp * amp;
}

std::array<double, 4> gate_pair_weights(const GateAngles& g) {
  const auto pc = sincos_snapped(g.phi_c());
  const auto tc = sincos_snapped(g.theta_c());
  const double cos_diff = sincos_snapped(g.theta_t() - g.phi_t()).cos;
  const double sin_sum = sincos_snapped(g.theta_t() + g.phi_t()).sin;
  const double c1 = tc.cos * pc.cos;
  const double c2 = tc.sin * pc.sin;
  return {c1 * cos_diff, c2 * sin_sum, c1 * sin_sum, c2 * cos_diff};
}

std::array<double, 4> mz_pair_weights(const GateAngles& g) {
  auto w = gate_pair_weights(g);
  w[2] = -w[2];
  w[3] = -w[3];
  return w;
}

double dn_corr_gate(const SetupGate& setup, const GateAngles& angles, double x_c, double x_t,
                    Mode mode) {
  if (mode == Mode::asymptotic) {
    return p_controlled_u(angles, phase_phi_basic(setup.geometry, x_c, x_t));
  }
  const auto pairs = g1_pairs(x_c, x_t, setup.geometry);
  const auto w = gate_pair_weights(angles);
  Complexd sum{0.0, 0.0};
  for (std::size_t k = 0; k < pairs.size(); ++k) sum += w[k] * pairs[k].value;
  return std::norm(sum);
}

double dn_corr_gate(const SetupGate& setup, const GateAngles& angles, double x_c, double x_t,
                    std::string_view mode) {
  return dn_corr_gate(setup, angles, x_c, x_t, parse_mode(mode));
}

double cnot_condition_margin(const SetupGate& setup, double x_c, double x_t) {
  return std::abs(phase_phi_basic(setup.geometry, x_c, x_t));
}

double mz_effective_position(const SetupMZ& setup, Arm arm, int path, double x_d) {
  if (path != 1 && path != 2) throw ArgumentError("Mach-Zehnder path must be 1 or 2");
  if (path == 2) return x_d;
  const double delta = arm == Arm::control ? setup.delta_c : setup.delta_t;
  return x_d + 2.0 * setup.zbar * delta;
}

double mz_phase(const SetupMZ& setup, double x_c, double x_t) {
  const double zb = setup.zbar;
  const double dc = setup.delta_c;
  const double dt = setup.delta_t;
  return 2.0 * setup.wavenumber() / setup.z *
         (zb * zb * (dc * dc - dt * dt) + zb * (x_c * dc - x_t * dt));
}

PairContribution mz_pair(int i, int j, double x_c, double x_t, const SetupMZ& setup) {
  const double xci = mz_effective_position(setup, Arm::control, i, x_c);
  const double xtj = mz_effective_position(setup, Arm::target, j, x_t);
  PairContribution p;
  p.i = i;
  p.j = j;
  p.envelope = tophat_ft(setup.a, xtj - xci, setup.l_coh()) / (2.0 * setup.a);
  p.phase = setup.wavenumber() * (xci * xci - xtj * xtj) / (2.0 * setup.z);
  p.value = std::polar(1.0, p.phase) * p.envelope;
  return p;
}

double dn_corr_mz(const SetupMZ& setup, const GateAngles& angles, double x_c, double x_t,
                  Mode mode) {
  if (mode == Mode::asymptotic) return p_controlled_u(angles, mz_phase(setup, x_c, x_t));
  const auto w = mz_pair_weights(angles);
  const std::array<std::pair<int, int>, 4> order{{{1, 1}, {2, 2}, {1, 2}, {2, 1}}};
  Complexd sum{0.0, 0.0};
  for (std::size_t k = 0; k < order.size(); ++k) {
    sum += w[k] * mz_pair(order[k].first, order[k].second, x_c, x_t, setup).value;
  }
  return std::norm(sum);
}

double dn_corr_mz(const SetupMZ& setup, const GateAngles& angles, double x_c, double x_t,
                  std::string_view mode) {
  return dn_corr_mz(setup, angles, x_c, x_t, parse_mode(mode));
}

MzConditionMargins mz_condition_margins(const SetupMZ& setup, double x_c, double x_t) {
  const double scale = 2.0 * setup.zbar / setup.l_coh();
  return {std::abs(setup.delta_c) * scale, std::abs(setup.delta_t) * scale,
          std::abs(setup.delta_c - setup.delta_t) * scale,
          std::abs(x_c - x_t) / setup.l_coh(), std::abs(mz_phase(setup, x_c, x_t))};
}

std::vector<std::string> check_mz_conditions(const SetupMZ& setup, double x_c, double x_t,
                                             double ratio) {
  const auto m = mz_condition_margins(setup, x_c, x_t);
  std::vector<std::string> out;
  auto report = [&](bool bad, const char* what, double v, const char* rel, double thr) {
    if (!bad) return;
    std::ostringstream os;
    os << what << " = " << v << ", expected " << rel << ' ' << thr;
    out.push_back(os.str());
  };
  report(m.tilt_c < ratio, "|delta_C| 2 zbar / l_coh", m.tilt_c, ">=", ratio);
  report(m.tilt_t < ratio, "|delta_T| 2 zbar / l_coh", m.tilt_t, ">=", ratio);
  report(m.tilt_mismatch > 1.0 / ratio, "|delta_C - delta_T| 2 zbar / l_coh", m.tilt_mismatch,
         "<=", 1.0 / ratio);
  report(m.detector_offset > 1.0 / ratio, "|x_C - x_T| / l_coh", m.detector_offset, "<=",
         1.0 / ratio);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using Block4 = BlockMatrix4<double>;

/// Places the pinhole element of one path into the otherwise-zero 4x4
/// detector-side propagation matrix.
Block4 path_selector(Arm arm, const JonesMatrixd& element) {
  Block4 p = Block4::Zero();
  const int offset = arm == Arm::control ? 0 : 2;
  p.block<2, 2>(offset, offset) = element;
  return p;
}

Block4 preparation(const GateAngles& angles) {
  Block4 r = Block4::Zero();
  r.block<2, 2>(0, 0) = rotation(angles.phi_c());
  r.block<2, 2>(2, 2) = rotation(angles.phi_t());
  return r;
}

BlockMatrix compose(Layout layout, const std::array<std::pair<PathId, JonesMatrixd>, 4>& paths,
                    const GateAngles& angles, double kappa) {
  BlockMatrix m;
  m.layout = layout;
  m.kappa = kappa;
  const Block4 upstream = preparation(angles) * bs_block<double>();
  for (const auto& [path, element] : paths) {
    const Block4 full = path_selector(path.arm, element) * upstream;
    const int row = path.arm == Arm::control ? 0 : 1;
    for (int port = 0; port < 2; ++port) {
      m.blocks[row][port].push_back({path, full.block<2, 2>(2 * row, 2 * port)});
    }
  }
  return m;
}

}  // namespace

const std::vector<PathTerm>& BlockMatrix::block(Arm detector, int source_port) const {
  if (source_port != 0 && source_port != 1) throw ArgumentError("source port must be 0 or 1");
  return blocks[detector == Arm::control ? 0 : 1][source_port];
}

std::array<Complexd, 2> BlockMatrix::arm_amplitudes(Arm arm, double analyzer_angle,
                                                   int source_port) const {
  const JonesVectord row = analyzer(analyzer_angle);
  std::array<Complexd, 2> out{};
  for (const auto& term : block(arm, source_port)) {
    const Complexd amp = (row.transpose() * term.matrix * h_state<double>())(0, 0);
    out[term.path.pinhole - 1] += amp;
  }
  return out;
}

std::array<Complexd, 4> BlockMatrix::pair_coefficients(const GateAngles& angles,
                                                       double occupation_s,
                                                       double occupation_s_prime) const {
  const std::array<std::pair<int, int>, 4> order{{{1, 1}, {2, 2}, {1, 2}, {2, 1}}};
  std::array<Complexd, 4> out{};
  const std::array<double, 2> occupation{occupation_s, occupation_s_prime};
  for (int port = 0; port < 2; ++port) {
    if (occupation[port] == 0.0) continue;
    const auto lc = arm_amplitudes(Arm::control, angles.theta_c(), port);
    const auto lt = arm_amplitudes(Arm::target, angles.theta_t(), port);
    for (std::size_t k = 0; k < order.size(); ++k) {
      out[k] += occupation[port] * std::conj(lc[order[k].first - 1]) * lt[order[k].second - 1];
    }
  }
  return out;
}

BlockMatrix compose_network(const SetupGate& setup, const GateAngles& angles, double kappa) {
  setup.validate();
  return compose(Layout::masks,
                 {{{PathId{Arm::control, 1}, polarizer_h<double>()},
                   {PathId{Arm::control, 2}, polarizer_v<double>()},
                   {PathId{Arm::target, 1}, JonesMatrixd::Identity()},
                   {PathId{Arm::target, 2}, flip<double>()}}},
                 angles, kappa);
}

BlockMatrix compose_network(const SetupMZ& setup, const GateAngles& angles, double kappa) {
  setup.validate();
  const Complexd i{0.0, 1.0};
  // Control: PBS pair selects H on path 1 and V (with a sign) on path 2.
  // Target: two balanced passes give 1/2; path 2' carries the flip plate.
  return compose(Layout::mach_zehnder,
                 {{{PathId{Arm::control, 1}, i * polarizer_h<double>()},
                   {PathId{Arm::control, 2}, -i * polarizer_v<double>()},
                   {PathId{Arm::target, 1}, (i / 2.0) * JonesMatrixd::Identity()},
                   {PathId{Arm::target, 2}, -(i / 2.0) * flip<double>()}}},
                 angles, kappa);
}

GateAngles basis_angles(int row, int col) {
  if (row < 0 || row > 3 || col < 0 || col > 3) throw ArgumentError("truth-table index out of range");
  constexpr double v = std::numbers::pi / 2.0;
  const auto bit = [v](int code, int shift) { return ((code >> shift) & 1) ? v : 0.0; };
  return GateAngles(bit(row, 1), bit(row, 0), bit(col, 1), bit(col, 0));
}

TruthTable ideal_cnot_table() {
  TruthTable t;
  for (int r = 0; r < 4; ++r) {
    const int control = r >> 1;
    const int target = r & 1;
    const int out = (control << 1) | (target ^ control);
    t.p[r][out] = 1.0;
  }
  return t;
}

}  // namespace ghostfringe
