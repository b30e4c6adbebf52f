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

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/SVD>

#include "ghostfringe/gate.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ghostfringe;
using namespace ghostfringe::testing;
using C = std::complex<double>;

namespace {

constexpr double kQ = kPi / 4;
constexpr double kH = kPi / 2;

GateAngles random_angles(std::mt19937_64& g) {
  return GateAngles(uniform(g, -7, 7), uniform(g, -7, 7), uniform(g, -7, 7), uniform(g, -7, 7));
}

std::array<double, 4> as_array(const GateAngles& a) {
  return {a.phi_c(), a.phi_t(), a.theta_c(), a.theta_t()};
}

/// Independent P_U: amplitudes written out from the path coefficients.
double p_u_reference(const GateAngles& a, double phi) {
  const C first = oracle::through_h(a.phi_c(), a.theta_c()) * oracle::through_identity(a.phi_t(), a.theta_t());
  const C second = oracle::through_v(a.phi_c(), a.theta_c()) * oracle::through_flip(a.phi_t(), a.theta_t());
  return std::norm(first + std::polar(1.0, phi) * second);
}

/// Ratio-N mask geometry: cross separations on a sinc zero, matched offsets
/// up to l_coh/N.
SetupGate ratio_geometry(std::mt19937_64& g, double n_ratio, bool integer_cross = true) {
  SetupGate s;
  auto& b = s.geometry;
  const double l = b.l_coh();
  const double sep = (integer_cross ? std::round(n_ratio) : n_ratio) * l;
  b.x1 = uniform(g, -3e-3, 3e-3);
  b.x1p = b.x1 + uniform(g, -l / n_ratio, l / n_ratio);
  b.x2 = b.x1p + sep;
  b.x2p = b.x1 + sep;
  return s;
}

oracle::Geometry to_oracle(const SetupBasic& s) {
  return {s.a, s.lambda, s.z, s.f, s.x1, s.x2, s.x1p, s.x2p};
}

}  // namespace

TEST_CASE("GateAngles canonical reduction") {
  const GateAngles a(-kH, 5 * kPi, 2 * kPi, 0.3);
  CHECK(a.phi_c() == doctest::Approx(3 * kH));
  CHECK(a.phi_t() == doctest::Approx(kPi));
  CHECK(a.theta_c() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(a.theta_t() == 0.3);
  CHECK_THROWS_AS(GateAngles(std::nan(""), 0, 0, 0), ArgumentError);
  CHECK_THROWS_AS(GateAngles(0, 0, 0, INFINITY), ArgumentError);
}

TEST_CASE("p_controlled_u examples") {
  for (double phi : {0.0, 1.0, kPi, -2.5}) {
    CHECK(p_controlled_u(GateAngles(0, 0, 0, 0), phi) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(p_controlled_u(GateAngles(kH, 0, kH, kH), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p_controlled_u(GateAngles(kQ, 0, kQ, 0), kPi) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("p_controlled_u matches the path-amplitude reference") {
  auto g = rng(31);
  for (int n = 0; n < 20000; ++n) {
    const auto a = random_angles(g);
    const double phi = uniform(g, -10, 10);
    CHECK(std::abs(p_controlled_u(a, phi) - p_u_reference(a, phi)) < 1e-13);
  }
}

TEST_CASE("p_controlled_u stays in [0, 1]") {
  auto g = rng(32);
  double lo = 1.0;
  double hi = 0.0;
  for (int n = 0; n < 1000000; ++n) {
    const double p = p_controlled_u(random_angles(g), uniform(g, -kPi, kPi));
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  CHECK(lo >= 0.0);
  CHECK(hi <= 1.0 + 1e-15);
}

TEST_CASE("p_cnot examples") {
  CHECK(p_cnot(GateAngles(0, 0, 0, 0)) == 1.0);
  CHECK(p_cnot(GateAngles(kH, kH, kH, 0)) == 1.0);
  for (double tt : {0.0, 0.4, kH, 2.0}) CHECK(p_cnot(GateAngles(0, 0, kH, tt)) == 0.0);
  auto g = rng(33);
  for (int n = 0; n < 1000; ++n) {
    const auto a = random_angles(g);
    CHECK(std::abs(p_cnot(a) - p_controlled_u(a, 0.0)) < 1e-15);
  }
}

TEST_CASE("CNOT truth table is exact on the basis angles") {
  const auto table = make_truth_table([](const GateAngles& a) { return p_cnot(a); });
  const auto ideal = ideal_cnot_table();
  for (int r = 0; r < 4; ++r) {
    double row = 0.0;
    for (int c = 0; c < 4; ++c) {
      CHECK(table.p[r][c] == ideal.p[r][c]);
      CHECK((ideal.p[r][c] == 0.0 || ideal.p[r][c] == 1.0));
      row += ideal.p[r][c];
    }
    CHECK(row == 1.0);
  }
  // Control H keeps the target, control V flips it.
  CHECK(ideal.p[0][0] == 1.0);
  CHECK(ideal.p[1][1] == 1.0);
  CHECK(ideal.p[2][3] == 1.0);
  CHECK(ideal.p[3][2] == 1.0);
  CHECK(TruthTable::kLabels[2] == "VH");
  const auto b = basis_angles(2, 1);
  CHECK(b.phi_c() == kH);
  CHECK(b.phi_t() == 0.0);
  CHECK(b.theta_c() == 0.0);
  CHECK(b.theta_t() == kH);
  CHECK_THROWS_AS(basis_angles(4, 0), ArgumentError);
}

TEST_CASE("factorization at basis control preparations") {
  auto g = rng(34);
  for (double phi_c : {0.0, kH}) {
    for (int trial = 0; trial < 20; ++trial) {
      const double phi_t = uniform(g, -kPi, kPi);
      const double phi = uniform(g, -kPi, kPi);
      Eigen::MatrixXd m(12, 12);
      for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 12; ++j) {
          m(i, j) = p_controlled_u(GateAngles(phi_c, phi_t, i * kPi / 12, j * kPi / 12), phi);
        }
      }
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      const auto sv = svd.singularValues();
      CHECK(sv(1) <= 1e-12 * std::max(1.0, sv(0)));
    }
  }
  // A superposed control preparation is not separable in general.
  Eigen::MatrixXd m(12, 12);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) m(i, j) = p_controlled_u(GateAngles(kQ, 0.0, i * kPi / 12, j * kPi / 12), 0.0);
  CHECK(Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(1) > 1e-3);
}

TEST_CASE("dn_corr_gate examples") {
  const SetupGate s;
  CHECK(dn_corr_gate(s, GateAngles(0, 0, 0, 0), 0.0, 0.0, Mode::exact) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dn_corr_gate(s, GateAngles(0, 0, 0, 0), 0.0, 0.0, Mode::asymptotic) == 1.0);
  const GateAngles q(kQ, kQ, kQ, kQ);
  CHECK(dn_corr_gate(s, q, 0.0, 0.0, "asymptotic") == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dn_corr_gate(s, q, 0.0, 0.0, "exact") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(dn_corr_gate(s, q, 0.0, 0.0, "mc"), ArgumentError);
}

TEST_CASE("dn_corr_gate asymptotic is p_controlled_u at the setup phase") {
  auto g = rng(35);
  for (int n = 0; n < 5000; ++n) {
    SetupGate s;
    s.geometry.x1 = uniform(g, -5e-3, 5e-3);
    s.geometry.x2 = uniform(g, -5e-3, 5e-3);
    s.geometry.x1p = uniform(g, -5e-3, 5e-3);
    s.geometry.x2p = uniform(g, -5e-3, 5e-3);
    const auto a = random_angles(g);
    const double xc = uniform(g, -1e-3, 1e-3);
    const double xt = uniform(g, -1e-3, 1e-3);
    CHECK(dn_corr_gate(s, a, xc, xt, Mode::asymptotic) ==
          p_controlled_u(a, phase_phi_basic(s.geometry, xc, xt)));
  }
}

TEST_CASE("dn_corr_gate exact matches source-plane quadrature") {
  auto g = rng(36);
  for (int n = 0; n < 40; ++n) {
    SetupGate s;
    auto& b = s.geometry;
    b.x1 = uniform(g, -1.5e-3, 1.5e-3);
    b.x2 = uniform(g, -1.5e-3, 1.5e-3);
    b.x1p = uniform(g, -1.5e-3, 1.5e-3);
    b.x2p = uniform(g, -1.5e-3, 1.5e-3);
    const auto a = random_angles(g);
    const double xc = uniform(g, -2e-3, 2e-3);
    const double xt = uniform(g, -2e-3, 2e-3);
    CHECK(std::abs(dn_corr_gate(s, a, xc, xt, Mode::exact) -
                   oracle::gate_exact(to_oracle(b), as_array(a), xc, xt)) < 1e-8);
  }
}

TEST_CASE("dn_corr_gate exact and asymptotic agree within 1% at ratio 20") {
  auto g = rng(37);
  double worst = 0.0;
  for (int n = 0; n < 5000; ++n) {
    const SetupGate s = ratio_geometry(g, 20.0 + std::floor(uniform(g, 0, 20)));
    const auto a = random_angles(g);
    const double xc = uniform(g, -3e-3, 3e-3);
    const double xt = uniform(g, -3e-3, 3e-3);
    worst = std::max(worst, std::abs(dn_corr_gate(s, a, xc, xt, Mode::exact) -
                                     dn_corr_gate(s, a, xc, xt, Mode::asymptotic)));
  }
  CHECK(worst <= 0.01);
}

TEST_CASE("dn_corr_gate exact converges to asymptotic with the condition ratio") {
  auto g = rng(38);
  double previous = 1.0;
  for (double n_ratio : {10.3, 20.3, 40.3, 80.3, 160.3}) {
    const double s_min = std::sin(kPi / n_ratio) / (kPi / n_ratio);
    const double delta = (1.0 - s_min) + 1.0 / (n_ratio * kPi);
    const double bound = 2.0 * delta + delta * delta;
    double worst = 0.0;
    for (int n = 0; n < 2000; ++n) {
      const SetupGate s = ratio_geometry(g, n_ratio, false);
      const auto a = random_angles(g);
      const double xc = uniform(g, -3e-3, 3e-3);
      const double xt = uniform(g, -3e-3, 3e-3);
      const double err = std::abs(dn_corr_gate(s, a, xc, xt, Mode::exact) -
                                  dn_corr_gate(s, a, xc, xt, Mode::asymptotic));
      CHECK(err <= bound);
      worst = std::max(worst, err);
    }
    CHECK(worst < previous);
    previous = worst;
  }
}

TEST_CASE("cnot_condition_margin examples") {
  const SetupGate s;
  CHECK(cnot_condition_margin(s, 0.0, 0.0) == 0.0);
  CHECK(cnot_condition_margin(s, 2e-4, 2e-4) == 0.0);

  // |x1'^2 - x1^2| = 2 l_coh a h / (pi z) at x_C = x_T is the unit boundary.
  SetupGate b;
  auto& g = b.geometry;
  const double target = 2.0 * g.l_coh() * g.a * g.h() / (kPi * g.z);
  g.x1p = std::sqrt(g.x1 * g.x1 + target);
  g.x2p = g.x2;
  CHECK(cnot_condition_margin(b, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-9));

  double last = -1.0;
  for (int k = 0; k <= 50; ++k) {
    SetupGate m;
    m.geometry.x1p = -std::sqrt(25e-6 + k * target / 10);
    const double v = cnot_condition_margin(m, 0.0, 0.0);
    CHECK(v >= last);
    last = v;
  }
  CHECK(kCnotRegimeThreshold == 0.1);
  CHECK(std::cos(kCnotRegimeThreshold) >= 0.995);
}

TEST_CASE("mz_phase examples") {
  SetupMZ s;
  s.delta_c = s.delta_t = 0.004;
  CHECK(mz_phase(s, 1e-4, 1e-4) == 0.0);

  auto g = rng(39);
  for (int n = 0; n < 10000; ++n) {
    SetupMZ m;
    m.lambda = uniform(g, 400e-9, 900e-9);
    m.z = uniform(g, 0.5, 2.0);
    m.zbar = uniform(g, 0.05, 0.4);
    m.delta_c = uniform(g, -0.01, 0.01);
    m.delta_t = uniform(g, -0.01, 0.01);
    const double xc = uniform(g, -2e-3, 2e-3);
    const double xt = uniform(g, -2e-3, 2e-3);
    const double phi = mz_phase(m, xc, xt);

    SetupMZ flipped = m;
    flipped.delta_c = -m.delta_c;
    flipped.delta_t = -m.delta_t;
    const double k = 2.0 * kPi / m.lambda;
    const double quad = 2 * k / m.z * m.zbar * m.zbar * (m.delta_c * m.delta_c - m.delta_t * m.delta_t);
    const double lin = phi - quad;
    CHECK(close_rel(mz_phase(flipped, xc, xt), quad - lin, 1e-9, 1e-9));

    // Quadratic-expansion oracle from the effective detector positions.
    const double zb = m.zbar;
    const double ec = xc + 2 * m.delta_c * zb;
    const double et = xt + 2 * m.delta_t * zb;
    const double expanded = k / (2 * m.z) * (ec * ec - et * et) - k / (2 * m.z) * (xc * xc - xt * xt);
    CHECK(close_rel(phi, expanded, 1e-8, 1e-9));
  }
}

TEST_CASE("dn_corr_mz examples") {
  SetupMZ s;
  s.delta_c = s.delta_t = 10 * s.l_coh() / (2 * s.zbar);
  CHECK(mz_condition_margins(s, 0.0, 0.0).tilt_c == doctest::Approx(10.0));
  const GateAngles q(kQ, kQ, kQ, kQ);
  CHECK(dn_corr_mz(s, q, 3e-4, 3e-4, Mode::asymptotic) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dn_corr_mz(s, q, 3e-4, 3e-4, "exact") == doctest::Approx(1.0).epsilon(1e-12));
  auto g = rng(40);
  for (int n = 0; n < 200; ++n) {
    SetupMZ t;
    t.delta_c = uniform(g, -0.01, 0.01);
    t.delta_t = uniform(g, -0.01, 0.01);
    const double xc = uniform(g, -1e-3, 1e-3);
    const double xt = uniform(g, -1e-3, 1e-3);
    CHECK(dn_corr_mz(t, GateAngles(0, 0, 0, 0), xc, xt, Mode::asymptotic) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(dn_corr_mz(s, q, 0, 0, "nope"), ArgumentError);
}

TEST_CASE("dn_corr_mz exact matches source-plane quadrature") {
  auto g = rng(41);
  for (int n = 0; n < 40; ++n) {
    SetupMZ m;
    m.delta_c = uniform(g, -0.004, 0.004);
    m.delta_t = uniform(g, -0.004, 0.004);
    const auto a = random_angles(g);
    const double xc = uniform(g, -1e-3, 1e-3);
    const double xt = uniform(g, -1e-3, 1e-3);
    const oracle::MzGeometry og{m.a, m.lambda, m.z, m.zbar, m.delta_c, m.delta_t};
    CHECK(std::abs(dn_corr_mz(m, a, xc, xt, Mode::exact) - oracle::mz_exact(og, as_array(a), xc, xt)) < 1e-8);
  }
}

TEST_CASE("dn_corr_mz exact and asymptotic agree within 1% at ratio 20") {
  // Tilts at 20..40 l_coh/(2 zbar); tilt mismatch and detector offset each
  // up to l_coh/40 so the matched-pair separation stays within l_coh/20.
  auto g = rng(42);
  double worst = 0.0;
  for (int n = 0; n < 5000; ++n) {
    SetupMZ m;
    const double l = m.l_coh();
    const double unit = l / (2 * m.zbar);
    m.delta_c = std::round(uniform(g, 20, 40)) * unit * (uniform(g, 0, 1) < 0.5 ? -1 : 1);
    m.delta_t = m.delta_c + uniform(g, -unit / 40, unit / 40);
    const double xc = uniform(g, -2e-3, 2e-3);
    const double xt = xc + uniform(g, -l / 40, l / 40);
    const auto a = random_angles(g);
    worst = std::max(worst, std::abs(dn_corr_mz(m, a, xc, xt, Mode::exact) -
                                     dn_corr_mz(m, a, xc, xt, Mode::asymptotic)));
  }
  CHECK(worst <= 0.01);
}

TEST_CASE("mz_condition_margins examples") {
  SetupMZ s;
  auto m = mz_condition_margins(s, 1e-4, 1e-4);
  CHECK(m.tilt_c == 0.0);
  CHECK(m.tilt_t == 0.0);
  CHECK(m.tilt_mismatch == 0.0);
  CHECK(m.detector_offset == 0.0);
  s.delta_c = 10 * s.l_coh() / (2 * s.zbar);
  m = mz_condition_margins(s, 2e-4, 1e-4);
  CHECK(m.tilt_c == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(m.detector_offset == doctest::Approx(0.2));
  CHECK(m.phase == doctest::Approx(std::abs(mz_phase(s, 2e-4, 1e-4))));
  CHECK_FALSE(check_mz_conditions(s, 2e-4, 1e-4).empty());
  s.delta_t = s.delta_c = 25 * s.l_coh() / (2 * s.zbar);
  CHECK(check_mz_conditions(s, 1e-4, 1e-4).empty());
  SetupMZ big;
  big.delta_c = 0.06;
  CHECK(big.validate().size() == 1);
  big.zbar = 0.0;
  CHECK_THROWS_AS(big.validate(), InvalidGeometry);
}

TEST_CASE("mz effective positions") {
  SetupMZ s;
  s.delta_c = 0.001;
  s.delta_t = -0.002;
  CHECK(mz_effective_position(s, Arm::control, 1, 1e-3) == doctest::Approx(1e-3 + 2 * 0.2 * 0.001));
  CHECK(mz_effective_position(s, Arm::target, 1, 0.0) == doctest::Approx(-2 * 0.2 * 0.002));
  CHECK(mz_effective_position(s, Arm::control, 2, 1e-3) == 1e-3);
  CHECK_THROWS_AS(mz_effective_position(s, Arm::control, 3, 0.0), ArgumentError);
}

TEST_CASE("compose_network examples") {
  const SetupGate sg;
  const auto fig2 = compose_network(sg, GateAngles(0, 0, 0, 0), 123.0);
  CHECK(fig2.kappa == 123.0);
  const auto lc = fig2.arm_amplitudes(Arm::control, 0.0);
  CHECK(close_c(lc[0], C(1 / std::sqrt(2.0), 0), 1e-15));
  CHECK(close_c(lc[1], C(0, 0), 1e-15));

  const SetupMZ sm;
  auto g = rng(43);
  for (int n = 0; n < 200; ++n) {
    const auto a = random_angles(g);
    const auto mz = compose_network(sm, a, 0.0);
    const auto lt = mz.arm_amplitudes(Arm::target, a.theta_t());
    // Path 1' carries -1/(2 sqrt 2) times cos(theta_T - phi_T).
    const double expect = -1.0 / (2 * std::sqrt(2.0)) * std::cos(a.theta_t() - a.phi_t());
    CHECK(close_c(lt[0], C(expect, 0), 1e-14));
  }

  // Unused port: its blocks are populated but a vacuum input adds nothing.
  const GateAngles a(0.3, 1.1, 0.7, 2.0);
  const auto net = compose_network(sg, a, 0.0);
  double s_prime_norm = 0.0;
  for (const auto& t : net.block(Arm::target, 1)) s_prime_norm += t.matrix.norm();
  CHECK(s_prime_norm > 0.1);
  const auto with_vac = net.pair_coefficients(a, 1.0, 0.0);
  const auto none = net.pair_coefficients(a, 0.0, 0.0);
  const auto alone = net.pair_coefficients(a);
  for (int k = 0; k < 4; ++k) {
    CHECK(none[k] == C(0, 0));
    CHECK(with_vac[k] == alone[k]);
  }
  CHECK_THROWS_AS(net.block(Arm::control, 2), ArgumentError);
}

TEST_CASE("compose_network contraction equals the four-path decomposition") {
  const SetupGate sg;
  const SetupMZ sm;
  auto g = rng(44);
  for (int n = 0; n < 2000; ++n) {
    const auto a = random_angles(g);
    const auto w = gate_pair_weights(a);
    const auto wm = mz_pair_weights(a);
    const auto cg = compose_network(sg, a, 0.0).pair_coefficients(a);
    const auto cm = compose_network(sm, a, 0.0).pair_coefficients(a);
    // Reference coefficients from hand-multiplied path amplitudes.
    const C hc = oracle::through_h(a.phi_c(), a.theta_c());
    const C vc = oracle::through_v(a.phi_c(), a.theta_c());
    const C it = oracle::through_identity(a.phi_t(), a.theta_t());
    const C ft = oracle::through_flip(a.phi_t(), a.theta_t());
    const std::array<C, 4> ref{hc * it, vc * ft, hc * ft, vc * it};
    const C i{0.0, 1.0};
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(cg[k] - 0.5 * i * w[k]) <= 1e-10 * std::max(1e-3, std::abs(cg[k])));
      CHECK(std::abs(cm[k] - 0.25 * i * wm[k]) <= 1e-10 * std::max(1e-3, std::abs(cm[k])));
      CHECK(std::abs(w[k] - ref[k]) < 1e-13);
    }
    CHECK(std::abs(wm[2] + w[2]) < 1e-15);
    CHECK(std::abs(wm[3] + w[3]) < 1e-15);
  }
}
