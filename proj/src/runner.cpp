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

#include "ghostfringe/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ghostfringe {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Mode> analytic_modes(RunMode mode) {
  switch (mode) {
    case RunMode::exact: return {Mode::exact};
    case RunMode::asymptotic: return {Mode::asymptotic};
    case RunMode::mc: return {};
    case RunMode::all: return {Mode::exact, Mode::asymptotic};
  }
  return {};
}

bool wants_mc(RunMode mode) { return mode == RunMode::mc || mode == RunMode::all; }

McOptions mc_options(const ExperimentConfig& c) {
  McOptions o;
  o.batches = c.mc.batches;
  return o;
}

std::optional<GateAngles> mc_angles(const ExperimentConfig& c) {
  if (c.kind == SetupKind::basic) return std::nullopt;
  return c.angles;
}

SourceModel mc_source(const ExperimentConfig& c) {
  return uniform_source(c.kind == SetupKind::mz ? c.mz.a : c.basic.a, c.mc.n_emitters,
                        c.mc.mean_photon_number);
}

ComparisonRow compare_analytic(const ModePattern& ref, const ModePattern& cand) {
  ComparisonRow row{ref.mode, cand.mode, "absolute"};
  const auto& a = ref.pattern.values;
  const auto& b = cand.pattern.values;
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) peak = 1.0;
  double sq = 0.0, ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sq += (d / peak) * (d / peak);
    row.max_abs_dev = std::max(row.max_abs_dev, std::abs(d));
    ma += a[k];
    mb += b[k];
  }
  const double n = static_cast<double>(a.size());
  row.nrmse = std::sqrt(sq / n);
  ma /= n;
  mb /= n;
  double saa = 0, sbb = 0, sab = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
    sab += (a[k] - ma) * (b[k] - mb);
  }
  row.pearson = saa > 0 && sbb > 0 ? sab / std::sqrt(saa * sbb) : std::numeric_limits<double>::quiet_NaN();
  row.max_sigma_dev = std::numeric_limits<double>::quiet_NaN();
  return row;
}

ComparisonRow compare_mc(const ModePattern& ref, const EnsembleEstimate& est, CompareScale scale) {
  const auto c = compare_patterns(ref.pattern, est, scale);
  ComparisonRow row{ref.mode, "mc", scale == CompareScale::peak ? "peak" : "absolute"};
  row.nrmse = c.nrmse;
  row.pearson = c.pearson;
  row.max_sigma_dev = c.max_sigma_dev;
  std::vector<double> a = ref.pattern.values;
  std::vector<double> m = scale == CompareScale::peak ? est.pattern.values : est.absolute();
  if (scale == CompareScale::peak) {
    const double peak = *std::max_element(a.begin(), a.end());
    for (double& v : a) v /= peak;
  }
  for (std::size_t k = 0; k < a.size(); ++k) row.max_abs_dev = std::max(row.max_abs_dev, std::abs(a[k] - m[k]));
  return row;
}

void add_comparisons(RunReport& r) {
  const ModePattern* mc = nullptr;
  std::vector<const ModePattern*> analytic;
  for (const auto& p : r.patterns) {
    if (p.estimate) mc = &p;
    else analytic.push_back(&p);
  }
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    for (std::size_t j = i + 1; j < analytic.size(); ++j) {
      r.comparisons.push_back(compare_analytic(*analytic[i], *analytic[j]));
    }
  }
  if (!mc) return;
  for (const auto* a : analytic) {
    r.comparisons.push_back(compare_mc(*a, *mc->estimate, CompareScale::absolute));
    r.comparisons.push_back(compare_mc(*a, *mc->estimate, CompareScale::peak));
  }
}

RunReport run_patterns(const ExperimentConfig& config, const std::vector<Mode>& modes, bool mc) {
  RunReport r;
  r.config = config;
  config.validate();
  assess_conditions(config, r);
  const Grid grid = scan_grid(config);
  for (Mode m : modes) {
    const auto t0 = Clock::now();
    r.patterns.push_back({std::string(to_string(m)), evaluate_pattern(config, grid, m), std::nullopt});
    r.timings.emplace_back(std::string(to_string(m)), seconds_since(t0));
  }
  if (mc) {
    const auto t0 = Clock::now();
    auto est = estimate_dn_corr(config.instrument(), mc_source(config), mc_angles(config), grid,
                                config.mc.n_realizations, config.mc.seed, mc_options(config));
    CorrelationPattern pattern = est.pattern;
    r.patterns.push_back({"mc", std::move(pattern), std::move(est)});
    r.timings.emplace_back("mc", seconds_since(t0));
  }
  add_comparisons(r);
  return r;
}

}  // namespace

Grid scan_grid(const ExperimentConfig& c) {
  return make_scan(c.scan.axis, c.scan.start, c.scan.stop, c.scan.step, c.scan.detector_x);
}

CorrelationPattern evaluate_pattern(const ExperimentConfig& c, const Grid& grid, Mode mode) {
  if (c.kind == SetupKind::basic) return evaluate_basic_pattern(c.basic, grid, mode);
  CorrelationPattern p;
  p.grid = grid;
  p.kind = mode == Mode::exact ? PatternKind::exact : PatternKind::asymptotic;
  p.values.reserve(grid.size());
  for (const auto& d : grid) {
    p.values.push_back(c.kind == SetupKind::gate
                           ? dn_corr_gate(SetupGate{c.basic}, c.angles, d.x_c, d.x_t, mode)
                           : dn_corr_mz(c.mz, c.angles, d.x_c, d.x_t, mode));
  }
  return p;
}

void assess_conditions(const ExperimentConfig& c, RunReport& r) {
  r.condition_warnings = c.validate();
  const Grid grid = scan_grid(c);
  if (c.kind != SetupKind::mz) {
    const auto m = basic_condition_margins(c.basic);
    r.margins = {{"cross_1_2p_over_lcoh", m.cross_1_2p},
                 {"cross_2_1p_over_lcoh", m.cross_2_1p},
                 {"direct_1_1p_over_lcoh", m.direct_1_1p},
                 {"direct_2_2p_over_lcoh", m.direct_2_2p}};
    if (c.kind == SetupKind::gate) {
      double worst = 0.0;
      for (const auto& d : grid) worst = std::max(worst, cnot_condition_margin(SetupGate{c.basic}, d.x_c, d.x_t));
      r.margins.emplace_back("max_abs_phi", worst);
    }
    for (auto& w : check_basic_conditions(c.basic)) r.condition_warnings.push_back(std::move(w));
    return;
  }
  // Geometric tilt ratios are grid independent; report the worst point for
  // the detector-dependent ones.
  MzConditionMargins worst = mz_condition_margins(c.mz, grid.front().x_c, grid.front().x_t);
  DetectorPair worst_offset = grid.front();
  for (const auto& d : grid) {
    const auto m = mz_condition_margins(c.mz, d.x_c, d.x_t);
    if (m.detector_offset > worst.detector_offset) {
      worst.detector_offset = m.detector_offset;
      worst_offset = d;
    }
    worst.phase = std::max(worst.phase, m.phase);
  }
  r.margins = {{"tilt_c_ratio", worst.tilt_c},
               {"tilt_t_ratio", worst.tilt_t},
               {"tilt_mismatch_ratio", worst.tilt_mismatch},
               {"max_detector_offset_over_lcoh", worst.detector_offset},
               {"max_abs_phi", worst.phase}};
  for (auto& w : check_mz_conditions(c.mz, worst_offset.x_c, worst_offset.x_t)) {
    r.condition_warnings.push_back(std::move(w));
  }
}

RunReport run_scan(const ExperimentConfig& config) {
  return run_patterns(config, analytic_modes(config.mode), wants_mc(config.mode));
}

RunReport run_verify(const ExperimentConfig& config) {
  RunReport r = run_patterns(config, {Mode::exact}, true);
  bool pass = false;
  for (const auto& row : r.comparisons) {
    if (row.reference == "exact" && row.candidate == "mc" && row.scale == "absolute") {
      pass = row.max_sigma_dev <= kVerifyMaxSigma && row.pearson >= kVerifyMinPearson;
    }
  }
  r.verified = pass;
  return r;
}

RunReport run_conditions(const ExperimentConfig& config) {
  RunReport r;
  r.config = config;
  assess_conditions(config, r);
  return r;
}

RunReport run_truth_table(const ExperimentConfig& c) {
  if (c.kind == SetupKind::basic) {
    throw ConfigError("<config>", 0, "[setup] kind", "truth tables need setup kind gate or mz");
  }
  RunReport r;
  r.config = c;
  c.validate();
  assess_conditions(c, r);
  const double x = c.scan.detector_x;
  const double phi = c.kind == SetupKind::gate ? phase_phi_basic(c.basic, x, x) : mz_phase(c.mz, x, x);
  r.margins.emplace_back("truth_table_abs_phi", std::abs(phi));
  if (std::abs(phi) > kCnotRegimeThreshold) {
    std::ostringstream os;
    os << "|phi| = " << std::abs(phi) << " at x_C = x_T = " << x
       << " exceeds the CNOT regime threshold " << kCnotRegimeThreshold;
    r.condition_warnings.push_back(os.str());
  }
  for (Mode m : analytic_modes(c.mode)) {
    const auto t0 = Clock::now();
    const auto table = make_truth_table([&](const GateAngles& a) {
      return c.kind == SetupKind::gate ? dn_corr_gate(SetupGate{c.basic}, a, x, x, m)
                                       : dn_corr_mz(c.mz, a, x, x, m);
    });
    r.truth_tables.push_back({std::string(to_string(m)), table, std::nullopt});
    r.timings.emplace_back(std::string(to_string(m)), seconds_since(t0));
  }
  if (wants_mc(c.mode)) {
    const auto t0 = Clock::now();
    const auto t = estimate_truth_table(c.instrument(), mc_source(c), {x, x}, c.mc.n_realizations,
                                        c.mc.seed, mc_options(c));
    r.truth_tables.push_back({"mc", t.value, t.std_error});
    r.timings.emplace_back("mc", seconds_since(t0));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  return format_double(v);
}

void write_preamble(std::ostream& os, const RunReport& r,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  os << "# generator=ghostfringe\n";
  for (const auto& [k, v] : extra) os << "# " << k << '=' << v << '\n';
  for (const auto& [k, v] : config_entries(r.config)) os << "# " << k << '=' << v << '\n';
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void close_out(std::ofstream& os, const std::filesystem::path& path) {
  os.close();
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> emit(const RunReport& r, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;

  for (const auto& p : r.patterns) {
    const auto path = out_dir / ("pattern_" + p.mode + ".csv");
    auto os = open_out(path);
    std::vector<std::pair<std::string, std::string>> extra{{"pattern", p.mode}};
    if (p.estimate) {
      const double peak = *std::max_element(p.estimate->raw.begin(), p.estimate->raw.end());
      extra.emplace_back("scale", "peak");
      extra.emplace_back("mc.raw_peak", fmt(peak));
      extra.emplace_back("mc.coherent_unit", fmt(p.estimate->coherent_unit));
    } else {
      extra.emplace_back("scale", "closed_form");
    }
    for (const auto& w : p.pattern.warnings) extra.emplace_back("warning", w);
    write_preamble(os, r, extra);
    os << "x_C,x_T,value" << (p.pattern.std_errors ? ",stderr" : "") << '\n';
    for (std::size_t k = 0; k < p.pattern.grid.size(); ++k) {
      os << fmt(p.pattern.grid[k].x_c) << ',' << fmt(p.pattern.grid[k].x_t) << ',' << fmt(p.pattern.values[k]);
      if (p.pattern.std_errors) os << ',' << fmt((*p.pattern.std_errors)[k]);
      os << '\n';
    }
    close_out(os, path);
    written.push_back(path);
  }

  auto write_table = [&](const std::string& name, const std::string& mode, const TruthTable& t) {
    const auto path = out_dir / name;
    auto os = open_out(path);
    write_preamble(os, r, {{"truth_table", mode}, {"x_C", fmt(r.config.scan.detector_x)}, {"x_T", fmt(r.config.scan.detector_x)}});
    os << "input";
    for (auto l : TruthTable::kLabels) os << ',' << l;
    os << '\n';
    for (int i = 0; i < 4; ++i) {
      os << TruthTable::kLabels[i];
      for (int j = 0; j < 4; ++j) os << ',' << fmt(t.p[i][j]);
      os << '\n';
    }
    close_out(os, path);
    written.push_back(path);
  };
  for (const auto& t : r.truth_tables) {
    write_table("truth_table_" + t.mode + ".csv", t.mode, t.value);
    if (t.std_error) write_table("truth_table_" + t.mode + "_stderr.csv", t.mode + "_stderr", *t.std_error);
  }

  if (!r.comparisons.empty()) {
    const auto path = out_dir / "comparison.csv";
    auto os = open_out(path);
    write_preamble(os, r, {});
    os << "reference,candidate,scale,nrmse,pearson,max_sigma_dev,max_abs_dev\n";
    for (const auto& c : r.comparisons) {
      os << c.reference << ',' << c.candidate << ',' << c.scale << ',' << fmt(c.nrmse) << ','
         << fmt(c.pearson) << ',' << fmt(c.max_sigma_dev) << ',' << fmt(c.max_abs_dev) << '\n';
    }
    close_out(os, path);
    written.push_back(path);
  }

  {
    const auto path = out_dir / "conditions.csv";
    auto os = open_out(path);
    std::vector<std::pair<std::string, std::string>> extra;
    for (const auto& w : r.condition_warnings) extra.emplace_back("warning", w);
    write_preamble(os, r, extra);
    os << "margin,value\n";
    for (const auto& [k, v] : r.margins) os << k << ',' << fmt(v) << '\n';
    close_out(os, path);
    written.push_back(path);
  }
  return written;
}

std::string summarize(const RunReport& r) {
  std::ostringstream os;
  os << "setup: " << to_string(r.config.kind) << ", mode: " << to_string(r.config.mode) << '\n';
  for (const auto& [k, v] : r.margins) os << "  margin " << k << " = " << v << '\n';
  for (const auto& w : r.condition_warnings) os << "  warning: " << w << '\n';
  for (const auto& p : r.patterns) {
    os << "  pattern " << p.mode << ": " << p.pattern.values.size() << " points";
    if (!p.pattern.values.empty()) {
      const auto [lo, hi] = std::minmax_element(p.pattern.values.begin(), p.pattern.values.end());
      os << ", min " << *lo << ", max " << *hi << ", visibility " << visibility(p.pattern.values);
    }
    os << '\n';
  }
  for (const auto& t : r.truth_tables) {
    os << "  truth table (" << t.mode << ")\n";
    for (int i = 0; i < 4; ++i) {
      os << "    " << TruthTable::kLabels[i];
      for (int j = 0; j < 4; ++j) {
        char buf[48];
        if (t.std_error) std::snprintf(buf, sizeof buf, "  %7.4f+-%.4f", t.value.p[i][j], t.std_error->p[i][j]);
        else std::snprintf(buf, sizeof buf, "  %7.4f", t.value.p[i][j]);
        os << buf;
      }
      os << '\n';
    }
  }
  for (const auto& c : r.comparisons) {
    os << "  compare " << c.reference << " vs " << c.candidate << " (" << c.scale << "): nrmse " << c.nrmse
       << ", pearson " << c.pearson << ", max_sigma_dev " << c.max_sigma_dev << ", max_abs_dev "
       << c.max_abs_dev << '\n';
  }
  if (r.verified) os << "  verify: " << (*r.verified ? "PASS" : "FAIL") << '\n';
  for (const auto& [k, v] : r.timings) os << "  time " << k << ": " << v << " s\n";
  return os.str();
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      t.preamble.emplace_back(line.substr(2, eq - 2), eq == std::string::npos ? "" : line.substr(eq + 1));
    } else if (t.header.empty()) {
      t.header = split(line);
    } else if (!line.empty()) {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

}  // namespace ghostfringe
