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

#include "ghostfringe/analytic.hpp"

#include <algorithm>
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

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvalidGeometry(std::string(name) + " must be finite");
}

void require_pinhole_id(int id, const char* which) {
  if (id != 1 && id != 2) {
    throw ArgumentError(std::string(which) + " pinhole id must be 1 or 2 (got " +
                        std::to_string(id) + ")");
  }
}

}  // namespace

std::vector<std::string> SetupBasic::validate() const {
  require_positive(a, "a");
  require_positive(lambda, "lambda");
  require_positive(z, "z");
  require_positive(f, "f");
  require_finite(x1, "x1");
  require_finite(x2, "x2");
  require_finite(x1p, "x1p");
  require_finite(x2p, "x2p");
  std::vector<std::string> warnings;
  const double extent = std::max({std::abs(x1), std::abs(x2), std::abs(x1p), std::abs(x2p), a});
  if (extent > z / 10.0) {
    std::ostringstream os;
    os << "paraxial sanity: max(|x_i|, a) = " << extent << " m exceeds z/10 = " << z / 10.0
       << " m";
    warnings.push_back(os.str());
  }
  return warnings;
}

double SetupBasic::control_pinhole(int i) const {
  require_pinhole_id(i, "control");
  return i == 1 ? x1 : x2;
}

double SetupBasic::target_pinhole(int j) const {
  require_pinhole_id(j, "target");
  return j == 1 ? x1p : x2p;
}

Envelope tophat_envelope(const SetupBasic& setup) {
  const double a = setup.a;
  const double l = setup.l_coh();
  return [a, l](double separation) { return tophat_ft(a, separation, l) / (2.0 * a); };
}

double coherence_length(const SetupBasic& setup) {
  setup.validate();
  return setup.l_coh();
}

Complexd b_phase(double xj, double xd, const SetupBasic& setup) {
  const double k = setup.wavenumber();
  return fresnel_phase(xd, k / setup.f) * fresnel_phase(xj, k / setup.h()) *
         std::polar(1.0, -k * xd * xj / setup.f);
}

PairContribution g1_pair(int i, int j, double x_c, double x_t, const SetupBasic& setup,
                         const Envelope& envelope) {
  const double xi = setup.control_pinhole(i);
  const double xj = setup.target_pinhole(j);
  const double k = setup.wavenumber();
  const double h = setup.h();
  const double f = setup.f;

  PairContribution p;
  p.i = i;
  p.j = j;
  p.envelope = envelope(xi - xj);
  p.phase = -(k * x_c * x_c / (2.0 * f) + k * xi * xi / (2.0 * h) - k * x_c * xi / f) +
            (k * x_t * x_t / (2.0 * f) + k * xj * xj / (2.0 * h) - k * x_t * xj / f);
  p.value = std::conj(b_phase(xi, x_c, setup)) * b_phase(xj, x_t, setup) * p.envelope;
  return p;
}

PairContribution g1_pair(int i, int j, double x_c, double x_t, const SetupBasic& setup) {
  return g1_pair(i, j, x_c, x_t, setup, tophat_envelope(setup));
}

std::array<PairContribution, 4> g1_pairs(double x_c, double x_t, const SetupBasic& setup,
                                         const Envelope& envelope) {
  return {g1_pair(1, 1, x_c, x_t, setup, envelope), g1_pair(2, 2, x_c, x_t, setup, envelope),
          g1_pair(1, 2, x_c, x_t, setup, envelope), g1_pair(2, 1, x_c, x_t, setup, envelope)};
}

std::array<PairContribution, 4> g1_pairs(double x_c, double x_t, const SetupBasic& setup) {
  return g1_pairs(x_c, x_t, setup, tophat_envelope(setup));
}

double phase_phi_basic(const SetupBasic& setup, double x_c, double x_t) {
  const double k = setup.wavenumber();
  const double h = setup.h();
  const auto& s = setup;
  return k / (2.0 * h) * (s.x1 * s.x1 + s.x2p * s.x2p - s.x1p * s.x1p - s.x2 * s.x2) +
         k / s.f * (x_c * s.x2 - x_t * s.x2p - x_c * s.x1 + x_t * s.x1p);
}

double coherent_intensity(std::span<const PairContribution> pairs) {
  Complexd sum{0.0, 0.0};
  for (const auto& p : pairs) sum += p.value;
  return std::norm(sum);
}

double dn_corr_basic(const SetupBasic& setup, double x_c, double x_t, Mode mode,
                     const Envelope& envelope) {
  if (mode == Mode::asymptotic) {
    return 2.0 + 2.0 * std::cos(phase_phi_basic(setup, x_c, x_t));
  }
  const auto pairs = g1_pairs(x_c, x_t, setup, envelope);
  return coherent_intensity(pairs);
}

double dn_corr_basic(const SetupBasic& setup, double x_c, double x_t, Mode mode) {
  return dn_corr_basic(setup, x_c, x_t, mode, tophat_envelope(setup));
}

double dn_corr_basic(const SetupBasic& setup, double x_c, double x_t, std::string_view mode) {
  return dn_corr_basic(setup, x_c, x_t, parse_mode(mode));
}

double fringe_period_xc(const SetupBasic& setup) {
  setup.validate();
  if (setup.x1 == setup.x2) {
    throw DegenerateGeometry("fringe period undefined for coincident control pinholes");
  }
  return setup.lambda * setup.f / std::abs(setup.x1 - setup.x2);
}

BasicConditionMargins basic_condition_margins(const SetupBasic& setup) {
  const double l = setup.l_coh();
  return {std::abs(setup.x1 - setup.x2p) / l, std::abs(setup.x2 - setup.x1p) / l,
          std::abs(setup.x1 - setup.x1p) / l, std::abs(setup.x2 - setup.x2p) / l};
}

std::vector<std::string> check_basic_conditions(const SetupBasic& setup, double ratio) {
  const auto m = basic_condition_margins(setup);
  std::vector<std::string> out;
  auto cross = [&](double v, const char* name) {
    if (v < ratio) {
      std::ostringstream os;
      os << name << " = " << v << " l_coh, below the cross-pair threshold " << ratio;
      out.push_back(os.str());
    }
  };
  auto direct = [&](double v, const char* name) {
    if (v > 1.0 / ratio) {
      std::ostringstream os;
      os << name << " = " << v << " l_coh, above the matched-pair threshold " << 1.0 / ratio;
      out.push_back(os.str());
    }
  };
  cross(m.cross_1_2p, "|x1 - x2'|");
  cross(m.cross_2_1p, "|x2 - x1'|");
  direct(m.direct_1_1p, "|x1 - x1'|");
  direct(m.direct_2_2p, "|x2 - x2'|");
  return out;
}

CorrelationPattern evaluate_basic_pattern(const SetupBasic& setup, const Grid& grid, Mode mode) {
  CorrelationPattern pattern;
  pattern.warnings = setup.validate();
  pattern.grid = grid;
  pattern.kind = mode == Mode::exact ? PatternKind::exact : PatternKind::asymptotic;
  if (mode == Mode::asymptotic) {
    for (auto& w : check_basic_conditions(setup)) pattern.warnings.push_back(std::move(w));
  }
  const auto envelope = tophat_envelope(setup);
  pattern.values.reserve(grid.size());
  for (const auto& p : grid) {
    pattern.values.push_back(dn_corr_basic(setup, p.x_c, p.x_t, mode, envelope));
  }
  return pattern;
}

}  // namespace ghostfringe
