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

#include "ghostfringe/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "ghostfringe/philox.hpp"

namespace ghostfringe {

// ---------------------------------------------------------------------------
// Source

SourceModel uniform_source(double a, int n_emitters, double mean_photon_number) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidGeometry("source half-width a must be positive");
  if (n_emitters < kMinEmitters) {
    throw InvalidGeometry("uniform source needs at least " + std::to_string(kMinEmitters) +
                          " emitters (got " + std::to_string(n_emitters) + ")");
  }
  if (!(mean_photon_number > 0.0)) throw InvalidGeometry("mean photon number must be positive");
  SourceModel s;
  s.a = a;
  s.mean_photon_number = mean_photon_number;
  s.positions.resize(static_cast<std::size_t>(n_emitters));
  const double cell = 2.0 * a / n_emitters;
  for (int m = 0; m < n_emitters; ++m) s.positions[m] = -a + (m + 0.5) * cell;
  return s;
}

SourceModel point_sources(double a, std::vector<double> positions, double mean_photon_number) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidGeometry("source half-width a must be positive");
  if (positions.empty()) throw InvalidGeometry("need at least one emitter");
  if (!(mean_photon_number > 0.0)) throw InvalidGeometry("mean photon number must be positive");
  for (double x : positions) {
    if (!(std::abs(x) <= a)) throw InvalidGeometry("emitter outside the source aperture");
  }
  return {a, mean_photon_number, std::move(positions)};
}

Complexd sample_amplitude(std::uint64_t seed, std::uint64_t index, std::uint32_t emitter,
                          double mean_photon_number) {
  const Philox4x32::Counter ctr{emitter, static_cast<std::uint32_t>(index),
                                static_cast<std::uint32_t>(index >> 32), 0u};
  const auto r = Philox4x32::generate(ctr, Philox4x32::key_from_seed(seed));
  const double u = Philox4x32::to_unit_open_closed(r[0], r[1]);
  const double v = Philox4x32::to_unit_closed_open(r[2], r[3]);
  // |alpha|^2 is exponential with mean nbar; the phase is uniform.
  return std::polar(std::sqrt(-mean_photon_number * std::log(u)), 2.0 * std::numbers::pi * v);
}

Realization sample_realization(const SourceModel& source, std::uint64_t seed,
                               std::uint64_t index) {
  Realization r;
  r.seed = seed;
  r.index = index;
  r.amplitudes.resize(source.positions.size());
  for (std::size_t m = 0; m < r.amplitudes.size(); ++m) {
    r.amplitudes[m] =
        sample_amplitude(seed, index, static_cast<std::uint32_t>(m), source.mean_photon_number);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Instrument

Instrument Instrument::basic(const SetupBasic& s) {
  Instrument in;
  in.setup = s;
  return in;
}

Instrument Instrument::gate(const SetupGate& s, const GateAngles& angles) {
  Instrument in;
  in.setup = s;
  in.prep_c = angles.phi_c();
  in.prep_t = angles.phi_t();
  return in;
}

Instrument Instrument::mz(const SetupMZ& s, const GateAngles& angles) {
  Instrument in;
  in.setup = s;
  in.prep_c = angles.phi_c();
  in.prep_t = angles.phi_t();
  return in;
}

double Instrument::wavelength() const {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SetupGate>) return s.geometry.lambda;
        else return s.lambda;
      },
      setup);
}

std::vector<std::string> Instrument::validate() const {
  if (masks_removed && std::holds_alternative<SetupMZ>(setup)) {
    throw ArgumentError("masks_removed applies to the mask layouts only");
  }
  return std::visit([](const auto& s) { return s.validate(); }, setup);
}

namespace {

/// One open optical path of an arm: a Fresnel kernel from emitter to
/// detector and the Jones vector it delivers for unit H input.
struct ArmPath {
  JonesVectord gain;
  bool via_pinhole = true;  // two segments through a pinhole, else one segment
  double pinhole = 0.0;
  double beta_first = 0.0;   // source -> pinhole, or the whole path
  double beta_second = 0.0;  // pinhole -> detector
  double shift = 0.0;        // effective detector displacement (single segment)

  Complexd kernel(double x_m, double x_d) const {
    if (via_pinhole) {
      return fresnel_phase(x_m - pinhole, beta_first) * fresnel_phase(pinhole - x_d, beta_second);
    }
    return fresnel_phase(x_m - (x_d + shift), beta_first);
  }
};

struct ArmModel {
  std::vector<ArmPath> paths;
  double element_scale = 1.0;  // largest path-element magnitude
  Complexd splitter;
};

ArmModel arm_model(const Instrument& in, Arm arm) {
  const bool control = arm == Arm::control;
  ArmModel model;
  model.splitter = control ? bs_transmitted<double>() : bs_reflected<double>(in.bs_convention);
  const auto& open = control ? in.control_open : in.target_open;
  const Complexd i{0.0, 1.0};

  JonesVectord prepared = h_state<double>();
  if (in.polarized()) prepared = rotation(control ? in.prep_c : in.prep_t) * prepared;

  auto add = [&](const JonesMatrixd& element, ArmPath path) {
    path.gain = model.splitter * (element * prepared);
    model.paths.push_back(path);
  };

  if (const auto* mz = std::get_if<SetupMZ>(&in.setup)) {
    const double beta = propagation_beta(mz->lambda, mz->z);
    const double delta = control ? mz->delta_c : mz->delta_t;
    const std::array<JonesMatrixd, 2> elements =
        control ? std::array<JonesMatrixd, 2>{i * polarizer_h<double>(), -i * polarizer_v<double>()}
                : std::array<JonesMatrixd, 2>{(i / 2.0) * JonesMatrixd::Identity(),
                                              -(i / 2.0) * flip<double>()};
    model.element_scale = control ? 1.0 : 0.5;
    for (int p = 0; p < 2; ++p) {
      if (!open[p]) continue;
      ArmPath path;
      path.via_pinhole = false;
      path.beta_first = beta;
      path.shift = p == 0 ? 2.0 * mz->zbar * delta : 0.0;
      add(elements[p], path);
    }
    return model;
  }

  const SetupBasic& g = std::holds_alternative<SetupBasic>(in.setup)
                            ? std::get<SetupBasic>(in.setup)
                            : std::get<SetupGate>(in.setup).geometry;
  if (in.masks_removed) {
    ArmPath path;
    path.via_pinhole = false;
    path.beta_first = propagation_beta(g.lambda, g.z + g.f);
    add(JonesMatrixd::Identity(), path);
    return model;
  }
  std::array<JonesMatrixd, 2> elements{JonesMatrixd::Identity(), JonesMatrixd::Identity()};
  if (in.polarized()) {
    elements = control ? std::array<JonesMatrixd, 2>{polarizer_h<double>(), polarizer_v<double>()}
                       : std::array<JonesMatrixd, 2>{JonesMatrixd::Identity(), flip<double>()};
  }
  const std::array<double, 2> pinholes =
      control ? std::array<double, 2>{g.x1, g.x2} : std::array<double, 2>{g.x1p, g.x2p};
  for (int p = 0; p < 2; ++p) {
    if (!open[p]) continue;
    ArmPath path;
    path.pinhole = pinholes[p];
    path.beta_first = propagation_beta(g.lambda, g.z);
    path.beta_second = propagation_beta(g.lambda, g.f);
    add(elements[p], path);
  }
  return model;
}

}  // namespace

JonesVectord field_vector_at_detector(const Realization& realization, const SourceModel& source,
                                      const Instrument& instrument, Arm arm, double x_d) {
  if (realization.amplitudes.size() != source.positions.size()) {
    throw ArgumentError("realization does not match the source model");
  }
  const ArmModel model = arm_model(instrument, arm);
  JonesVectord e = JonesVectord::Zero();
  for (std::size_t m = 0; m < source.positions.size(); ++m) {
    Complexd h{0.0, 0.0};
    Complexd v{0.0, 0.0};
    for (const auto& path : model.paths) {
      const Complexd k = realization.amplitudes[m] * path.kernel(source.positions[m], x_d);
      h += k * path.gain(0);
      v += k * path.gain(1);
    }
    e(0) += h;
    e(1) += v;
  }
  return e;
}

Complexd field_at_detector(const Realization& realization, const SourceModel& source,
                           const Instrument& instrument, Arm arm, double x_d,
                           std::optional<double> analyzer_angle) {
  if (instrument.polarized() && !analyzer_angle) {
    throw ArgumentError("polarized instruments need an analyzer angle");
  }
  const JonesVectord e = field_vector_at_detector(realization, source, instrument, arm, x_d);
  if (!instrument.polarized()) return e(0);
  return (analyzer(*analyzer_angle).transpose() * e)(0, 0);
}

// ---------------------------------------------------------------------------
// Estimator

int default_thread_count() {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GHOSTFRINGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, hw));
  }
  return hw;
}

std::vector<double> EnsembleEstimate::absolute() const {
  std::vector<double> out(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) out[k] = raw[k] / coherent_unit;
  return out;
}

std::vector<double> EnsembleEstimate::absolute_std_errors() const {
  std::vector<double> out(raw_std_errors.size());
  for (std::size_t k = 0; k < raw_std_errors.size(); ++k) out[k] = raw_std_errors[k] / coherent_unit;
  return out;
}

namespace {

struct BatchSums {
  std::vector<double> ic, it, ict;
  std::int64_t count = 0;

  explicit BatchSums(std::size_t n = 0) : ic(n, 0.0), it(n, 0.0), ict(n, 0.0) {}
};

/// Rows of detector-side weights: field = W * amplitudes. In total-power mode
/// each grid point owns two consecutive rows (H, V).
Eigen::MatrixXcd arm_weights(const ArmModel& model, const SourceModel& source, const Grid& grid,
                             Arm arm, std::optional<double> analyzer_angle, IntensityMode mode) {
  const int per_point = mode == IntensityMode::total_power ? 2 : 1;
  const auto n_pts = static_cast<Eigen::Index>(grid.size());
  const auto n_em = static_cast<Eigen::Index>(source.positions.size());
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n_pts * per_point, n_em);

  std::vector<Complexd> projected;
  for (const auto& path : model.paths) {
    projected.push_back(analyzer_angle
                            ? (analyzer(*analyzer_angle).transpose() * path.gain)(0, 0)
                            : path.gain(0));
  }
  for (Eigen::Index k = 0; k < n_pts; ++k) {
    const double x_d = arm == Arm::control ? grid[k].x_c : grid[k].x_t;
    for (Eigen::Index m = 0; m < n_em; ++m) {
      for (std::size_t p = 0; p < model.paths.size(); ++p) {
        const Complexd kern = model.paths[p].kernel(source.positions[m], x_d);
        if (per_point == 1) {
          w(k, m) += kern * projected[p];
        } else {
          w(2 * k, m) += kern * model.paths[p].gain(0);
          w(2 * k + 1, m) += kern * model.paths[p].gain(1);
        }
      }
    }
  }
  return w;
}

BatchSums run_batch(const Eigen::MatrixXcd& wc, const Eigen::MatrixXcd& wt,
                    const SourceModel& source, std::uint64_t seed, std::int64_t first,
                    std::int64_t last, int chunk, int per_point, std::size_t n_pts) {
  BatchSums sums(n_pts);
  const auto n_em = static_cast<Eigen::Index>(source.positions.size());
  Eigen::MatrixXcd amps;
  for (std::int64_t lo = first; lo < last; lo += chunk) {
    const auto cols = static_cast<Eigen::Index>(std::min<std::int64_t>(chunk, last - lo));
    amps.resize(n_em, cols);
    for (Eigen::Index r = 0; r < cols; ++r) {
      const auto index = static_cast<std::uint64_t>(lo + r);
      for (Eigen::Index m = 0; m < n_em; ++m) {
        amps(m, r) = sample_amplitude(seed, index, static_cast<std::uint32_t>(m),
                                      source.mean_photon_number);
      }
    }
    const Eigen::MatrixXcd ec = wc * amps;
    const Eigen::MatrixXcd et = wt * amps;
    for (Eigen::Index r = 0; r < cols; ++r) {
      for (std::size_t k = 0; k < n_pts; ++k) {
        double ic = 0.0;
        double it = 0.0;
        for (int c = 0; c < per_point; ++c) {
          ic += std::norm(ec(static_cast<Eigen::Index>(k) * per_point + c, r));
          it += std::norm(et(static_cast<Eigen::Index>(k) * per_point + c, r));
        }
        sums.ic[k] += ic;
        sums.it[k] += it;
        sums.ict[k] += ic * it;
      }
    }
    sums.count += cols;
  }
  return sums;
}

}  // namespace

EnsembleEstimate estimate_dn_corr(const Instrument& instrument_in, const SourceModel& source,
                                  const std::optional<GateAngles>& angles, const Grid& grid,
                                  int n_realizations, std::uint64_t seed,
                                  const McOptions& options) {
  if (n_realizations < kMinRealizations) {
    throw ArgumentError("Monte-Carlo estimation needs at least " +
                        std::to_string(kMinRealizations) + " realizations (got " +
                        std::to_string(n_realizations) + ")");
  }
  if (options.batches < 2 || options.batches > n_realizations) {
    throw ArgumentError("batch count must be in [2, n_realizations]");
  }
  if (options.chunk < 1) throw ArgumentError("chunk size must be positive");
  if (grid.empty()) throw ArgumentError("empty detector grid");
  if (source.positions.empty()) throw InvalidGeometry("source has no emitters");

  Instrument instrument = instrument_in;
  std::optional<double> analyzer_c;
  std::optional<double> analyzer_t;
  if (instrument.polarized()) {
    if (!angles) throw ArgumentError("polarized instruments need gate angles");
    instrument.prep_c = angles->phi_c();
    instrument.prep_t = angles->phi_t();
    if (instrument.intensity == IntensityMode::projected) {
      analyzer_c = angles->theta_c();
      analyzer_t = angles->theta_t();
    }
  }
  EnsembleEstimate est;
  est.pattern.warnings = instrument.validate();
  est.pattern.grid = grid;
  est.pattern.kind = PatternKind::monte_carlo;
  est.n_realizations = n_realizations;

  const ArmModel mc = arm_model(instrument, Arm::control);
  const ArmModel mt = arm_model(instrument, Arm::target);
  const IntensityMode mode = instrument.polarized() ? instrument.intensity : IntensityMode::projected;
  const int per_point = mode == IntensityMode::total_power ? 2 : 1;
  const Eigen::MatrixXcd wc = arm_weights(mc, source, grid, Arm::control, analyzer_c, mode);
  const Eigen::MatrixXcd wt = arm_weights(mt, source, grid, Arm::target, analyzer_t, mode);

  const double unit_amp = source.mean_photon_number * source.n_emitters() *
                          std::abs(mc.splitter) * std::abs(mt.splitter) * mc.element_scale *
                          mt.element_scale;
  est.coherent_unit = unit_amp * unit_amp;

  // Batch b owns realizations [b*n/B, (b+1)*n/B); batches are reduced in
  // index order, so the thread count never changes the result.
  const int n_batches = options.batches;
  std::vector<BatchSums> batches(static_cast<std::size_t>(n_batches));
  auto batch_range = [&](int b) {
    const auto n = static_cast<std::int64_t>(n_realizations);
    return std::pair<std::int64_t, std::int64_t>{n * b / n_batches, n * (b + 1) / n_batches};
  };
  auto work = [&](int b) {
    const auto [first, last] = batch_range(b);
    batches[static_cast<std::size_t>(b)] =
        run_batch(wc, wt, source, seed, first, last, options.chunk, per_point, grid.size());
  };
  const int n_threads =
      std::clamp(options.threads > 0 ? options.threads : default_thread_count(), 1, n_batches);
  if (n_threads == 1) {
    for (int b = 0; b < n_batches; ++b) work(b);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&, t] {
        for (int b = t; b < n_batches; b += n_threads) work(b);
      });
    }
  }

  const std::size_t n_pts = grid.size();
  BatchSums total(n_pts);
  std::vector<std::vector<double>> batch_cov(n_pts, std::vector<double>(n_batches));
  for (int b = 0; b < n_batches; ++b) {
    const auto& s = batches[static_cast<std::size_t>(b)];
    const double nb = static_cast<double>(s.count);
    for (std::size_t k = 0; k < n_pts; ++k) {
      total.ic[k] += s.ic[k];
      total.it[k] += s.it[k];
      total.ict[k] += s.ict[k];
      batch_cov[k][b] = s.ict[k] / nb - (s.ic[k] / nb) * (s.it[k] / nb);
    }
    total.count += s.count;
  }

  const double n = static_cast<double>(total.count);
  est.raw.resize(n_pts);
  est.raw_std_errors.resize(n_pts);
  est.mean_intensity_c.resize(n_pts);
  est.mean_intensity_t.resize(n_pts);
  for (std::size_t k = 0; k < n_pts; ++k) {
    const double mean_c = total.ic[k] / n;
    const double mean_t = total.it[k] / n;
    est.mean_intensity_c[k] = mean_c;
    est.mean_intensity_t[k] = mean_t;
    est.raw[k] = total.ict[k] / n - mean_c * mean_t;
    double mean_b = 0.0;
    for (double v : batch_cov[k]) mean_b += v;
    mean_b /= n_batches;
    double ss = 0.0;
    for (double v : batch_cov[k]) ss += (v - mean_b) * (v - mean_b);
    est.raw_std_errors[k] = std::sqrt(ss / (n_batches - 1) / n_batches);
  }

  const double peak = *std::max_element(est.raw.begin(), est.raw.end());
  const double scale = peak > 0.0 ? peak : 1.0;
  est.pattern.values.resize(n_pts);
  est.std_errors.resize(n_pts);
  for (std::size_t k = 0; k < n_pts; ++k) {
    est.pattern.values[k] = est.raw[k] / scale;
    est.std_errors[k] = est.raw_std_errors[k] / scale;
  }
  est.pattern.std_errors = est.std_errors;
  return est;
}

McTruthTable estimate_truth_table(const Instrument& instrument, const SourceModel& source,
                                  DetectorPair detectors, int n_realizations, std::uint64_t seed,
                                  const McOptions& options) {
  if (!instrument.polarized()) throw ArgumentError("truth tables need a polarized instrument");
  McTruthTable out;
  const Grid grid{detectors};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const auto est =
          estimate_dn_corr(instrument, source, basis_angles(r, c), grid, n_realizations, seed, options);
      out.value.p[r][c] = est.absolute()[0];
      out.std_error.p[r][c] = est.absolute_std_errors()[0];
    }
  }
  return out;
}

PatternComparison compare_patterns(const CorrelationPattern& analytic, const EnsembleEstimate& mc,
                                   CompareScale scale) {
  const auto& grid = analytic.grid;
  if (grid.size() != mc.pattern.grid.size() || analytic.values.size() != grid.size() ||
      mc.pattern.values.size() != grid.size()) {
    throw ArgumentError("compare_patterns: grid sizes differ");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] == mc.pattern.grid[k])) {
      throw ArgumentError("compare_patterns: grids differ at point " + std::to_string(k));
    }
  }
  if (grid.empty()) throw ArgumentError("compare_patterns: empty grid");

  std::vector<double> a = analytic.values;
  std::vector<double> m;
  std::vector<double> s;
  if (scale == CompareScale::peak) {
    const double peak = *std::max_element(a.begin(), a.end());
    if (!(peak > 0.0)) throw ArgumentError("compare_patterns: analytic pattern has no positive peak");
    for (double& v : a) v /= peak;
    m = mc.pattern.values;
    s = mc.std_errors;
  } else {
    m = mc.absolute();
    s = mc.absolute_std_errors();
  }
  if (s.size() != grid.size()) throw ArgumentError("compare_patterns: missing standard errors");

  double peak = 0.0;
  for (double v : a) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) peak = 1.0;

  const double n = static_cast<double>(a.size());
  double sq = 0.0;
  double mean_a = 0.0;
  double mean_m = 0.0;
  PatternComparison out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - m[k];
    sq += (d / peak) * (d / peak);
    mean_a += a[k];
    mean_m += m[k];
    if (d != 0.0) {
      out.max_sigma_dev = std::max(out.max_sigma_dev, s[k] > 0.0 ? std::abs(d) / s[k]
                                                                 : std::numeric_limits<double>::infinity());
    }
  }
  out.nrmse = std::sqrt(sq / n);
  mean_a /= n;
  mean_m /= n;
  double saa = 0.0;
  double smm = 0.0;
  double sam = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    saa += (a[k] - mean_a) * (a[k] - mean_a);
    smm += (m[k] - mean_m) * (m[k] - mean_m);
    sam += (a[k] - mean_a) * (m[k] - mean_m);
  }
  out.pearson = (saa > 0.0 && smm > 0.0) ? sam / std::sqrt(saa * smm)
                                         : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace ghostfringe
