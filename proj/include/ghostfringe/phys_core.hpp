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

// Scalar-templated numerics shared by every engine: Fresnel phase factors,
// the top-hat source envelope and the Jones-calculus elements.

#pragma once

#include <cmath>
#include <algorithm>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "ghostfringe/errors.hpp"

namespace ghostfringe {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact

template <typename Scalar>
using Complex = std::complex<Scalar>;
template <typename Scalar>
using JonesMatrix = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using JonesVector = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar>
using BlockMatrix4 = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

using Complexd = Complex<double>;
using JonesMatrixd = JonesMatrix<double>;
using JonesVectord = JonesVector<double>;

/// Argument pair of the paraxial Fresnel factor exp(i*beta*alpha^2/2):
/// alpha is a transverse offset in meters, beta = omega/(c*L) in rad/m^2.
template <typename Scalar>
struct FresnelArgs {
  Scalar alpha;
  Scalar beta;
};

template <typename Scalar>
Complex<Scalar> fresnel_phase(Scalar alpha, Scalar beta) {
  return std::polar(Scalar(1), beta * alpha * alpha / Scalar(2));
}

template <typename Scalar>
Complex<Scalar> fresnel_phase(const FresnelArgs<Scalar>& args) {
  return fresnel_phase(args.alpha, args.beta);
}

/// Angular frequency 2*pi*c/lambda. The wavelength is the only user-facing
/// spectral input.
template <typename Scalar>
Scalar angular_frequency(Scalar lambda) {
  if (!(lambda > Scalar(0))) throw InvalidGeometry("wavelength must be positive");
  return Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(kSpeedOfLight) / lambda;
}

/// beta = omega/(c*L) for a free-space segment of length L.
template <typename Scalar>
Scalar propagation_beta(Scalar lambda, Scalar length) {
  if (!(length > Scalar(0))) throw InvalidGeometry("propagation length must be positive");
  return angular_frequency(lambda) / (Scalar(kSpeedOfLight) * length);
}

/// sin(x)/x; the removable singularity is handled by a series below 1e-4.
template <typename Scalar>
Scalar sinc(Scalar x) {
  const Scalar ax = std::abs(x);
  if (ax < Scalar(1e-4)) {
    const Scalar x2 = x * x;
    return Scalar(1) - x2 / Scalar(6) + x2 * x2 / Scalar(120);
  }
  return std::sin(x) / x;
}

/// Fourier transform of a top-hat intensity profile of half-width a, evaluated
/// at the pinhole separation dx: 2a*sinc(pi*dx/l_coh).
template <typename Scalar>
Scalar tophat_ft(Scalar a, Scalar dx, Scalar l_coh) {
  if (!(a > Scalar(0))) throw InvalidGeometry("source half-width a must be positive");
  if (!(l_coh > Scalar(0))) throw InvalidGeometry("coherence length must be positive");
  return Scalar(2) * a * sinc(std::numbers::pi_v<Scalar> * dx / l_coh);
}

/// Reduces an angle to [0, 2*pi).
template <typename Scalar>
Scalar canonical_angle(Scalar angle) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar r = std::fmod(angle, two_pi);
  if (r < Scalar(0)) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

/// Wraps a phase to (-pi, pi]. Display only; engines keep raw phases.
template <typename Scalar>
Scalar wrap_phase(Scalar phase) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar r = std::remainder(phase, Scalar(2) * pi);
  if (r <= -pi) r += Scalar(2) * pi;
  return r;
}

template <typename Scalar>
struct SinCos {
  Scalar sin;
  Scalar cos;
};

/// sin/cos that return exact 0 and +-1 at quarter turns (within a few ulps),
/// so basis-angle truth tables come out as exact zeros and ones.
template <typename Scalar>
SinCos<Scalar> sincos_snapped(Scalar angle) {
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / Scalar(2);
  const Scalar quarters = angle / half_pi;
  const Scalar nearest = std::round(quarters);
  if (std::abs(quarters - nearest) < Scalar(16) * std::numeric_limits<Scalar>::epsilon() *
                                         std::max(Scalar(1), std::abs(nearest))) {
    switch (static_cast<long long>(std::fmod(std::fmod(nearest, Scalar(4)) + Scalar(4), Scalar(4)))) {
      case 0: return {Scalar(0), Scalar(1)};
      case 1: return {Scalar(1), Scalar(0)};
      case 2: return {Scalar(0), Scalar(-1)};
      default: return {Scalar(-1), Scalar(0)};
    }
  }
  return {std::sin(angle), std::cos(angle)};
}

// ---------------------------------------------------------------------------
// Jones calculus

enum class JonesKind { rotation, polarizer_h, polarizer_v, flip, identity };

/// Half-wave plate at angle phi: [[cos, sin], [sin, -cos]]. Unitary,
/// self-adjoint and an involution.
template <typename Scalar>
JonesMatrix<Scalar> rotation(Scalar phi) {
  const auto sc = sincos_snapped(phi);
  JonesMatrix<Scalar> m;
  m << sc.cos, sc.sin, sc.sin, -sc.cos;
  return m;
}

template <typename Scalar>
JonesMatrix<Scalar> polarizer_h() {
  JonesMatrix<Scalar> m = JonesMatrix<Scalar>::Zero();
  m(0, 0) = Scalar(1);
  return m;
}

template <typename Scalar>
JonesMatrix<Scalar> polarizer_v() {
  JonesMatrix<Scalar> m = JonesMatrix<Scalar>::Zero();
  m(1, 1) = Scalar(1);
  return m;
}

/// H <-> V exchange (half-wave plate at pi/4).
template <typename Scalar>
JonesMatrix<Scalar> flip() {
  JonesMatrix<Scalar> m;
  m << Scalar(0), Scalar(1), Scalar(1), Scalar(0);
  return m;
}

template <typename Scalar>
JonesMatrix<Scalar> jones_element(JonesKind kind, std::optional<Scalar> angle = std::nullopt) {
  if ((kind == JonesKind::rotation) != angle.has_value()) {
    throw ArgumentError(kind == JonesKind::rotation
                            ? "rotation element requires an angle"
                            : "only the rotation element takes an angle");
  }
  switch (kind) {
    case JonesKind::rotation: return rotation(*angle);
    case JonesKind::polarizer_h: return polarizer_h<Scalar>();
    case JonesKind::polarizer_v: return polarizer_v<Scalar>();
    case JonesKind::flip: return flip<Scalar>();
    case JonesKind::identity: return JonesMatrix<Scalar>::Identity();
  }
  throw ArgumentError("unknown Jones element");
}

/// Real unit analyzer direction (cos theta, sin theta).
template <typename Scalar>
JonesVector<Scalar> analyzer(Scalar theta) {
  const auto sc = sincos_snapped(theta);
  return JonesVector<Scalar>(sc.cos, sc.sin);
}

template <typename Scalar>
JonesVector<Scalar> h_state() {
  return JonesVector<Scalar>(Scalar(1), Scalar(0));
}

// ---------------------------------------------------------------------------
// Balanced beam splitter

/// Phase convention for the reflected port. The per-arm phase is common to
/// both paths of an arm and drops out of every correlation.
enum class BeamSplitterConvention { i_reflection, pi_reflection };

template <typename Scalar>
Complex<Scalar> bs_transmitted() {
  return {Scalar(1) / std::sqrt(Scalar(2)), Scalar(0)};
}

template <typename Scalar>
Complex<Scalar> bs_reflected(BeamSplitterConvention conv = BeamSplitterConvention::i_reflection) {
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  return conv == BeamSplitterConvention::i_reflection ? Complex<Scalar>(0, r)
                                                      : Complex<Scalar>(-r, 0);
}

/// (1/sqrt 2) [[I, iI], [iI, I]] acting on (port S, port S') x (H, V).
template <typename Scalar>
BlockMatrix4<Scalar> bs_block() {
  using M2 = JonesMatrix<Scalar>;
  BlockMatrix4<Scalar> bs;
  const M2 id = M2::Identity();
  bs.template block<2, 2>(0, 0) = bs_transmitted<Scalar>() * id;
  bs.template block<2, 2>(0, 2) = bs_reflected<Scalar>() * id;
  bs.template block<2, 2>(2, 0) = bs_reflected<Scalar>() * id;
  bs.template block<2, 2>(2, 2) = bs_transmitted<Scalar>() * id;
  return bs;
}

}  // namespace ghostfringe
