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

// ghostfringe: command-line driver for the correlation engines.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ghostfringe/config.hpp"
#include "ghostfringe/errors.hpp"
#include "ghostfringe/runner.hpp"

namespace gf = ghostfringe;

namespace {

constexpr const char* kConfigHelp = R"(Configuration file (INI style). Keys and defaults:
  [setup]  kind = basic | gate | mz        (basic)
           a = 0.5e-3, lambda = 500e-9, z = 1, f = 1
           x1 = -5e-3, x2 = 5e-3, x1p = x1, x2p = x2
           mz only: zbar = 0.2, delta_c = 0, delta_t = 0 (no f, x*)
  [angles] phi_c, phi_t, theta_c, theta_t  (0; numbers or pi/4 style)
  [scan]   axis = x_C | x_T | diagonal      (diagonal)
           start = -1e-3, stop = 1e-3, step = 5e-5, detector_x = 0
  [run]    mode = exact | asymptotic | mc | all   (exact)
  [mc]     n_realizations = 20000, n_emitters = 256, seed = 1, batches = 10
           mean_photon_number = 1, intensity = projected | total_power
Lengths in meters, angles in radians.)";

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

void add_common(CLI::App* cmd, Options& o, bool with_output) {
  cmd->add_option("--config", o.config, kConfigHelp)->required()->check(CLI::ExistingFile);
  if (with_output) {
    cmd->add_option("--out", o.out, "Output directory for CSV files")->capture_default_str();
  }
  cmd->add_option("--mode", o.mode, "Override [run] mode: exact|asymptotic|mc|all")
      ->check(CLI::IsMember({"exact", "asymptotic", "mc", "all"}));
  cmd->add_option("--seed", o.seed, "Override [mc] seed");
  cmd->add_flag("--strict-conditions", o.strict, "Exit with status 2 when a validity margin is violated");
}

gf::ExperimentConfig load(const Options& o) {
  auto c = gf::parse_config(o.config);
  if (o.mode) c.mode = gf::parse_run_mode(*o.mode);
  if (o.seed) c.mc.seed = *o.seed;
  c.validate();
  return c;
}

int finish(const gf::RunReport& r, const Options& o, bool write) {
  if (write) {
    for (const auto& p : gf::emit(r, o.out)) std::cout << "wrote " << p.string() << '\n';
  }
  std::cout << gf::summarize(r);
  if (r.verified && !*r.verified) return 1;
  if (o.strict && !r.condition_warnings.empty()) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ghostfringe: photon-number correlation patterns, gate truth tables and Monte-Carlo checks"};
  app.require_subcommand(1);
  app.footer("Environment: GHOSTFRINGE_THREADS caps Monte-Carlo worker threads.\n"
             "Exit status: 0 ok, 1 error or failed verify, 2 condition warning with --strict-conditions.");

  Options o;
  auto* scan = app.add_subcommand("scan", "Evaluate the configured detector scan in the selected modes");
  auto* table = app.add_subcommand("truth-table", "4x4 basis truth table at x_C = x_T = detector_x (gate, mz)");
  auto* verify = app.add_subcommand("verify", "Exact pattern against Monte-Carlo (absolute scale)");
  auto* cond = app.add_subcommand("conditions", "Report validity margins only");
  add_common(scan, o, true);
  add_common(table, o, true);
  add_common(verify, o, true);
  add_common(cond, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto config = load(o);
    if (scan->parsed()) return finish(gf::run_scan(config), o, true);
    if (table->parsed()) return finish(gf::run_truth_table(config), o, true);
    if (verify->parsed()) {
      auto c = config;
      c.mode = gf::RunMode::all;
      return finish(gf::run_verify(c), o, true);
    }
    return finish(gf::run_conditions(config), o, true);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
