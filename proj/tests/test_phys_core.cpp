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

#include <cmath>
#include <complex>

#include "ghostfringe/philox.hpp"
#include "ghostfringe/phys_core.hpp"
#include "test_util.hpp"

using namespace ghostfringe;
using namespace ghostfringe::testing;
using C = std::complex<double>;

TEST_CASE("fresnel_phase examples") {
  CHECK(fresnel_phase(0.0, 123.4) == C(1.0, 0.0));
  CHECK(fresnel_phase(0.0, -9e9) == C(1.0, 0.0));

  auto g = rng(1);
  for (int n = 0; n < 1000; ++n) {
    const double alpha = uniform(g, -1e-2, 1e-2);
    const double beta = uniform(g, -1e8, 1e8);
    CHECK(close_c(std::conj(fresnel_phase(alpha, beta)), fresnel_phase(alpha, -beta), 1e-12));
  }

  const C expected(std::cos(5.0), std::sin(5.0));
  CHECK(close_c(fresnel_phase(1.0e-3, 1.0e7), expected, 1e-12));
  CHECK(close_c(fresnel_phase(FresnelArgs<double>{1.0e-3, 1.0e7}), expected, 1e-12));
}

TEST_CASE("fresnel_phase has unit modulus") {
  auto g = rng(2);
  for (int n = 0; n < 10000; ++n) {
    const double alpha = uniform(g, -0.1, 0.1);
    const double beta = uniform(g, -1e9, 1e9);
    CHECK(std::abs(std::abs(fresnel_phase(alpha, beta)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("fresnel composition property") {
  auto g = rng(3);
  for (int n = 0; n < 2000; ++n) {
    const double a1 = uniform(g, -2e-3, 2e-3);
    const double a2 = uniform(g, -2e-3, 2e-3);
    const double beta = uniform(g, -2e7, 2e7);
    const C lhs = fresnel_phase(a1 + a2, beta);
    const C rhs = fresnel_phase(a1, beta) * fresnel_phase(a2, beta) * std::polar(1.0, beta * a1 * a2);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
  }
}

TEST_CASE("fresnel_phase works in single precision") {
  const auto v = fresnel_phase(1.0e-3f, 1.0e7f);
  CHECK(std::abs(std::arg(v) - std::remainder(5.0, 2.0 * kPi)) < 1e-5);
}

TEST_CASE("propagation helpers") {
  const double lambda = 500e-9;
  CHECK(close_rel(angular_frequency(lambda), 2.0 * kPi * 299792458.0 / lambda, 1e-15));
  CHECK(close_rel(propagation_beta(lambda, 2.0), 2.0 * kPi / lambda / 2.0, 1e-14));
  CHECK_THROWS_AS(angular_frequency(0.0), InvalidGeometry);
  CHECK_THROWS_AS(propagation_beta(lambda, -1.0), InvalidGeometry);
}

TEST_CASE("tophat_ft examples") {
  CHECK(tophat_ft(1e-3, 0.0, 5e-4) == doctest::Approx(2e-3).epsilon(1e-15));
  CHECK(std::abs(tophat_ft(1e-3, 5e-4, 5e-4)) < 1e-18);
  CHECK(tophat_ft(1e-3, 2.5e-4, 5e-4) == doctest::Approx(2e-3 * 2.0 / kPi).epsilon(1e-14));
  CHECK(tophat_ft(1e-3, 2.5e-4, 5e-4) == doctest::Approx(1.2732e-3).epsilon(1e-4));
}

TEST_CASE("tophat_ft rejects invalid geometry") {
  CHECK_THROWS_AS(tophat_ft(0.0, 0.0, 1.0), InvalidGeometry);
  CHECK_THROWS_AS(tophat_ft(-1e-3, 0.0, 1.0), InvalidGeometry);
  CHECK_THROWS_AS(tophat_ft(1e-3, 0.0, 0.0), InvalidGeometry);
  CHECK_THROWS_AS(tophat_ft(1e-3, 0.0, -5e-4), InvalidGeometry);
  CHECK_THROWS_AS(tophat_ft(std::nan(""), 0.0, 1.0), InvalidGeometry);
}

TEST_CASE("tophat_ft invariants") {
  auto g = rng(4);
  for (int n = 0; n < 10000; ++n) {
    const double a = uniform(g, 1e-5, 1e-2);
    const double l = uniform(g, 1e-5, 1e-2);
    const double dx = uniform(g, -50 * l, 50 * l);
    const double v = tophat_ft(a, dx, l);
    CHECK(v == tophat_ft(a, -dx, l));
    CHECK(std::abs(v) <= 2.0 * a * (1.0 + 1e-15));
    if (dx != 0.0) CHECK(std::abs(v) <= 2.0 * a * l / (kPi * std::abs(dx)) * (1.0 + 1e-12));
  }
}

TEST_CASE("sinc series branch is continuous") {
  for (double x : {1e-4, -1e-4, 5e-5, 1e-8, 0.0}) {
    const double direct = x == 0.0 ? 1.0 : std::sin(x) / x;
    CHECK(std::abs(sinc(x) - direct) <= 2.3e-16);
  }
  CHECK(sinc(kPi) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("angle helpers") {
  CHECK(canonical_angle(-kPi / 2) == doctest::Approx(3 * kPi / 2));
  CHECK(canonical_angle(5 * kPi) == doctest::Approx(kPi));
  CHECK(canonical_angle(0.0) == 0.0);
  CHECK(wrap_phase(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
  auto g = rng(5);
  for (int n = 0; n < 1000; ++n) {
    const double x = uniform(g, -100, 100);
    const double c = canonical_angle(x);
    CHECK(c >= 0.0);
    CHECK(c < 2 * kPi);
    const double w = wrap_phase(x);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::abs(std::polar(1.0, w) - std::polar(1.0, x)) < 1e-12);
  }
}

TEST_CASE("sincos_snapped is exact at quarter turns") {
  for (int q = -8; q <= 8; ++q) {
    const auto sc = sincos_snapped(q * kPi / 2);
    const int m = ((q % 4) + 4) % 4;
    const double s[] = {0, 1, 0, -1};
    const double c[] = {1, 0, -1, 0};
    CHECK(sc.sin == s[m]);
    CHECK(sc.cos == c[m]);
  }
  const auto sc = sincos_snapped(0.3);
  CHECK(sc.sin == std::sin(0.3));
  CHECK(sc.cos == std::cos(0.3));
}

TEST_CASE("jones_element examples") {
  JonesMatrixd r0;
  r0 << 1.0, 0.0, 0.0, -1.0;
  CHECK(jones_element<double>(JonesKind::rotation, 0.0).isApprox(r0));
  const auto f = jones_element<double>(JonesKind::flip);
  CHECK((f * f).isApprox(JonesMatrixd::Identity()));
  const auto ph = jones_element<double>(JonesKind::polarizer_h);
  const auto pv = jones_element<double>(JonesKind::polarizer_v);
  CHECK((ph * pv).isZero(0.0));
  CHECK(jones_element<double>(JonesKind::identity) == JonesMatrixd::Identity());

  JonesMatrixd expected;
  expected << 0.0, 1.0, 1.0, 0.0;
  CHECK(f == expected);
  CHECK(ph(0, 0) == 1.0);
  CHECK(ph(1, 1) == 0.0);
  CHECK(pv(1, 1) == 1.0);
  CHECK(pv(0, 0) == 0.0);
}

TEST_CASE("jones_element angle contract") {
  CHECK_THROWS_AS(jones_element<double>(JonesKind::rotation), ArgumentError);
  CHECK_THROWS_AS(jones_element<double>(JonesKind::flip, 0.3), ArgumentError);
  CHECK_THROWS_AS(jones_element<double>(JonesKind::polarizer_h, 0.0), ArgumentError);
  CHECK_THROWS_AS(jones_element<double>(JonesKind::identity, 1.0), ArgumentError);
}

TEST_CASE("rotation is unitary, self-adjoint and an involution") {
  auto g = rng(6);
  for (int n = 0; n < 2000; ++n) {
    const double phi = uniform(g, -20, 20);
    const auto r = rotation(phi);
    CHECK(std::abs(r(0, 0) - std::cos(phi)) < 1e-15);
    CHECK(std::abs(r(0, 1) - std::sin(phi)) < 1e-15);
    CHECK(std::abs(r(1, 0) - std::sin(phi)) < 1e-15);
    CHECK(std::abs(r(1, 1) + std::cos(phi)) < 1e-15);
    CHECK((r * r.adjoint() - JonesMatrixd::Identity()).norm() < 1e-12);
    CHECK((r - r.adjoint()).norm() < 1e-15);
    CHECK((r * r - JonesMatrixd::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("polarizers are complementary projectors") {
  const auto ph = polarizer_h<double>();
  const auto pv = polarizer_v<double>();
  CHECK(ph * ph == ph);
  CHECK(pv * pv == pv);
  CHECK(ph + pv == JonesMatrixd::Identity());
}

TEST_CASE("Jones composition is associative") {
  auto g = rng(7);
  for (int n = 0; n < 200; ++n) {
    const auto a = rotation(uniform(g, 0, 7));
    const auto b = flip<double>() * rotation(uniform(g, 0, 7));
    const auto c = polarizer_v<double>() + 0.5 * rotation(uniform(g, 0, 7));
    CHECK(((a * b) * c - a * (b * c)).norm() < 1e-13);
  }
}

TEST_CASE("analyzer directions are real unit vectors") {
  auto g = rng(8);
  for (int n = 0; n < 500; ++n) {
    const auto v = analyzer(uniform(g, -10, 10));
    CHECK(v(0).imag() == 0.0);
    CHECK(v(1).imag() == 0.0);
    CHECK(std::abs(v.norm() - 1.0) < 1e-15);
  }
}

TEST_CASE("bs_block examples") {
  const auto bs = bs_block<double>();
  CHECK((bs * bs.adjoint() - BlockMatrix4<double>::Identity()).norm() < 1e-15);
  CHECK(std::abs(bs_transmitted<double>() - C(1.0 / std::sqrt(2.0), 0.0)) < 1e-16);
  CHECK(std::abs(bs_reflected<double>() - C(0.0, 1.0 / std::sqrt(2.0))) < 1e-16);
  CHECK(std::abs(bs(0, 2) - C(0.0, 1.0 / std::sqrt(2.0))) < 1e-16);
  CHECK(std::abs(bs(1, 3) - C(0.0, 1.0 / std::sqrt(2.0))) < 1e-16);
  CHECK(bs(0, 1) == C(0.0, 0.0));
  CHECK(std::abs(bs_reflected<double>(BeamSplitterConvention::pi_reflection) +
                 1.0 / std::sqrt(2.0)) < 1e-16);
}

TEST_CASE("complex modulus does not overflow at large components") {
  const C z(1e12, -1e12);
  CHECK(std::abs(z) == doctest::Approx(std::sqrt(2.0) * 1e12));
  CHECK(std::isfinite(std::abs(C(1e300, 1e300))));
}

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using P = Philox4x32;
  CHECK(P::generate({0, 0, 0, 0}, {0, 0}) ==
        P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(P::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                    {0xffffffffu, 0xffffffffu}) ==
        P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(P::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                    {0xa4093822u, 0x299f31d0u}) ==
        P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("Philox unit-interval maps") {
  using P = Philox4x32;
  CHECK(P::to_unit_open_closed(0, 0) > 0.0);
  CHECK(P::to_unit_open_closed(0xffffffffu, 0xffffffffu) == 1.0);
  CHECK(P::to_unit_closed_open(0, 0) == 0.0);
  CHECK(P::to_unit_closed_open(0xffffffffu, 0xffffffffu) < 1.0);
}
