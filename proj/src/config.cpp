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

#include "ghostfringe/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace ghostfringe {

ConfigError::ConfigError(std::string source, int line, std::string field, std::string message)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << source;
        if (line > 0) os << ':' << line;
        os << ": ";
        if (!field.empty()) os << field << ": ";
        os << message;
        return os.str();
      }()),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)),
      message_(std::move(message)) {}

std::string_view to_string(SetupKind kind) {
  switch (kind) {
    case SetupKind::basic: return "basic";
    case SetupKind::gate: return "gate";
    case SetupKind::mz: return "mz";
  }
  return "?";
}

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::exact: return "exact";
    case RunMode::asymptotic: return "asymptotic";
    case RunMode::mc: return "mc";
    case RunMode::all: return "all";
  }
  return "?";
}

RunMode parse_run_mode(std::string_view text) {
  if (text == "exact") return RunMode::exact;
  if (text == "asymptotic") return RunMode::asymptotic;
  if (text == "mc") return RunMode::mc;
  if (text == "all") return RunMode::all;
  throw ArgumentError("unknown mode '" + std::string(text) + "' (expected exact, asymptotic, mc or all)");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::optional<std::string_view> suggest(std::string_view word,
                                        const std::vector<std::string_view>& candidates) {
  std::optional<std::string_view> best;
  std::size_t best_d = 3;
  for (auto c : candidates) {
    const std::size_t d = edit_distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

namespace {

const std::map<std::string_view, std::vector<std::string_view>>& key_table() {
  static const std::map<std::string_view, std::vector<std::string_view>> table{
      {"setup", {"kind", "a", "lambda", "z", "f", "x1", "x2", "x1p", "x2p", "zbar", "delta_c", "delta_t"}},
      {"angles", {"phi_c", "phi_t", "theta_c", "theta_t"}},
      {"scan", {"axis", "start", "stop", "step", "detector_x"}},
      {"run", {"mode"}},
      {"mc", {"n_realizations", "n_emitters", "seed", "batches", "mean_photon_number", "intensity"}},
  };
  return table;
}

bool applies(SetupKind kind, std::string_view section, std::string_view key) {
  if (section == "angles") return kind != SetupKind::basic;
  if (section != "setup") return true;
  static const std::vector<std::string_view> mask_only{"f", "x1", "x2", "x1p", "x2p"};
  static const std::vector<std::string_view> mz_only{"zbar", "delta_c", "delta_t"};
  if (std::find(mask_only.begin(), mask_only.end(), key) != mask_only.end()) return kind != SetupKind::mz;
  if (std::find(mz_only.begin(), mz_only.end(), key) != mz_only.end()) return kind == SetupKind::mz;
  return true;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Strips a comment that starts the line or follows whitespace.
std::string_view strip_comment(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((s[i] == '#' || s[i] == ';') && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t')) {
      return s.substr(0, i);
    }
  }
  return s;
}

struct Entry {
  std::string value;
  int line;
};

class Parser {
 public:
  Parser(std::string source, std::map<std::string, std::map<std::string, Entry>> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = entries_.find(section);
    if (s == entries_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key, const Entry* e,
                         const std::string& message) const {
    throw ConfigError(source_, e ? e->line : 0, "[" + section + "] " + key, message);
  }

  void real(const std::string& section, const std::string& key, double& out) const {
    const Entry* e = find(section, key);
    if (!e) return;
    const auto v = parse_number(e->value);
    if (!v) fail(section, key, e, "expected a number, got '" + e->value + "'");
    out = *v;
  }

  void angle(const std::string& section, const std::string& key, double& out) const {
    const Entry* e = find(section, key);
    if (!e) return;
    const auto v = parse_angle(e->value);
    if (!v) fail(section, key, e, "expected an angle such as 0.785 or pi/4, got '" + e->value + "'");
    out = *v;
  }

  template <typename Int>
  void integer(const std::string& section, const std::string& key, Int& out) const {
    const Entry* e = find(section, key);
    if (!e) return;
    Int v{};
    // Accept integral floating notation such as 2e4 as well.
    const auto& s = e->value;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) {
      out = v;
      return;
    }
    const auto d = parse_number(s);
    if (d && *d >= 0 && std::floor(*d) == *d && *d <= 9.007199254740992e15) {
      out = static_cast<Int>(*d);
      return;
    }
    fail(section, key, e, "expected a non-negative integer, got '" + s + "'");
  }

  static std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  }

  /// number | [-][number*]pi[/number]
  static std::optional<double> parse_angle(std::string_view s) {
    s = trim(s);
    if (auto v = parse_number(s)) return v;
    double sign = 1.0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      sign = s[0] == '-' ? -1.0 : 1.0;
      s.remove_prefix(1);
    }
    const auto p = s.find("pi");
    if (p == std::string_view::npos) return std::nullopt;
    double factor = 1.0;
    if (p > 0) {
      auto head = trim(s.substr(0, p));
      if (head.empty() || head.back() != '*') return std::nullopt;
      head.remove_suffix(1);
      const auto f = parse_number(head);
      if (!f) return std::nullopt;
      factor = *f;
    }
    auto tail = trim(s.substr(p + 2));
    double divisor = 1.0;
    if (!tail.empty()) {
      if (tail[0] != '/') return std::nullopt;
      const auto d = parse_number(tail.substr(1));
      if (!d || *d == 0.0) return std::nullopt;
      divisor = *d;
    }
    return sign * factor * std::numbers::pi / divisor;
  }

 private:
  std::string source_;
  std::map<std::string, std::map<std::string, Entry>> entries_;
};

}  // namespace

std::vector<std::string_view> known_sections() {
  std::vector<std::string_view> out;
  for (const auto& [k, v] : key_table()) out.push_back(k);
  return out;
}

std::vector<std::string_view> known_keys(std::string_view section) {
  const auto it = key_table().find(section);
  return it == key_table().end() ? std::vector<std::string_view>{} : it->second;
}

ExperimentConfig parse_config_text(std::string_view text, const std::string& source) {
  std::map<std::string, std::map<std::string, Entry>> entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "", "unterminated section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (key_table().count(name) == 0) {
        std::string msg = "unknown section [" + name + "]";
        if (auto s = suggest(name, known_sections())) msg += " (did you mean [" + std::string(*s) + "]?)";
        throw ConfigError(source, line_no, "", msg);
      }
      section = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, line_no, "", "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (section.empty()) throw ConfigError(source, line_no, key, "key outside of any section");
    if (key.empty()) throw ConfigError(source, line_no, "", "empty key");
    const auto& keys = key_table().at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      std::string msg = "unknown key '" + key + "'";
      if (auto s = suggest(key, keys)) msg += " (did you mean '" + std::string(*s) + "'?)";
      throw ConfigError(source, line_no, "[" + section + "] " + key, msg);
    }
    if (value.empty()) throw ConfigError(source, line_no, "[" + section + "] " + key, "missing value");
    auto [it, inserted] = entries[section].emplace(key, Entry{value, line_no});
    if (!inserted) {
      throw ConfigError(source, line_no, "[" + section + "] " + key,
                        "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
    }
  }

  const Parser p(source, entries);
  ExperimentConfig c;
  if (const Entry* e = p.find("setup", "kind")) {
    if (e->value == "basic") c.kind = SetupKind::basic;
    else if (e->value == "gate") c.kind = SetupKind::gate;
    else if (e->value == "mz") c.kind = SetupKind::mz;
    else p.fail("setup", "kind", e, "expected basic, gate or mz, got '" + e->value + "'");
  }
  for (const auto& [sec, keys] : entries) {
    for (const auto& [key, entry] : keys) {
      if (!applies(c.kind, sec, key)) {
        p.fail(sec, key, &entry, "does not apply to setup kind " + std::string(to_string(c.kind)));
      }
    }
  }

  // Unprimed positions default the primed ones.
  p.real("setup", "a", c.basic.a);
  p.real("setup", "lambda", c.basic.lambda);
  p.real("setup", "z", c.basic.z);
  p.real("setup", "f", c.basic.f);
  p.real("setup", "x1", c.basic.x1);
  p.real("setup", "x2", c.basic.x2);
  c.basic.x1p = c.basic.x1;
  c.basic.x2p = c.basic.x2;
  p.real("setup", "x1p", c.basic.x1p);
  p.real("setup", "x2p", c.basic.x2p);
  c.mz.a = c.basic.a;
  c.mz.lambda = c.basic.lambda;
  c.mz.z = c.basic.z;
  p.real("setup", "zbar", c.mz.zbar);
  p.real("setup", "delta_c", c.mz.delta_c);
  p.real("setup", "delta_t", c.mz.delta_t);

  double pc = 0, pt = 0, tc = 0, tt = 0;
  p.angle("angles", "phi_c", pc);
  p.angle("angles", "phi_t", pt);
  p.angle("angles", "theta_c", tc);
  p.angle("angles", "theta_t", tt);
  c.angles = GateAngles(pc, pt, tc, tt);

  if (const Entry* e = p.find("scan", "axis")) {
    try {
      c.scan.axis = parse_axis(e->value);
    } catch (const std::exception&) {
      p.fail("scan", "axis", e, "expected x_C, x_T or diagonal, got '" + e->value + "'");
    }
  }
  p.real("scan", "start", c.scan.start);
  p.real("scan", "stop", c.scan.stop);
  p.real("scan", "step", c.scan.step);
  p.real("scan", "detector_x", c.scan.detector_x);

  if (const Entry* e = p.find("run", "mode")) {
    try {
      c.mode = parse_run_mode(e->value);
    } catch (const std::exception&) {
      p.fail("run", "mode", e, "expected exact, asymptotic, mc or all, got '" + e->value + "'");
    }
  }

  p.integer("mc", "n_realizations", c.mc.n_realizations);
  p.integer("mc", "n_emitters", c.mc.n_emitters);
  p.integer("mc", "seed", c.mc.seed);
  p.integer("mc", "batches", c.mc.batches);
  p.real("mc", "mean_photon_number", c.mc.mean_photon_number);
  if (const Entry* e = p.find("mc", "intensity")) {
    if (e->value == "projected") c.mc.intensity = IntensityMode::projected;
    else if (e->value == "total_power") c.mc.intensity = IntensityMode::total_power;
    else p.fail("mc", "intensity", e, "expected projected or total_power, got '" + e->value + "'");
  }

  // Invariant violations point at the offending line when there is one.
  try {
    c.validate();
  } catch (const ConfigError& e) {
    const auto& f = e.field();
    const auto close = f.find(']');
    const Entry* entry = nullptr;
    if (f.size() > 1 && close != std::string::npos && f.size() > close + 2) {
      entry = p.find(f.substr(1, close - 1), f.substr(close + 2));
    }
    throw ConfigError(source, entry ? entry->line : 0, f, e.message());
  }
  return c;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "", "cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw ConfigError(path, 0, "", "read error");
  return parse_config_text(ss.str(), path);
}

std::vector<std::string> ExperimentConfig::validate() const {
  auto positive = [](double v, const char* sec, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("<config>", 0, std::string("[") + sec + "] " + key,
                        "must be positive (got " + format_double(v) + ")");
    }
  };
  positive(basic.a, "setup", "a");
  positive(basic.lambda, "setup", "lambda");
  positive(basic.z, "setup", "z");
  if (kind == SetupKind::mz) {
    positive(mz.zbar, "setup", "zbar");
  } else {
    positive(basic.f, "setup", "f");
  }
  positive(scan.step, "scan", "step");
  if (!(scan.stop >= scan.start)) {
    throw ConfigError("<config>", 0, "[scan] stop", "must not be below start");
  }
  if ((scan.stop - scan.start) / scan.step > 1e7) {
    throw ConfigError("<config>", 0, "[scan] step", "scan has more than 1e7 points");
  }
  if (mc.n_emitters < kMinEmitters) {
    throw ConfigError("<config>", 0, "[mc] n_emitters",
                      "must be at least " + std::to_string(kMinEmitters));
  }
  if (mc.batches < 2) throw ConfigError("<config>", 0, "[mc] batches", "must be at least 2");
  if (mode == RunMode::mc || mode == RunMode::all) {
    if (mc.n_realizations < kMinRealizations) {
      throw ConfigError("<config>", 0, "[mc] n_realizations",
                        "must be at least " + std::to_string(kMinRealizations) + " in mc mode");
    }
    if (mc.batches > mc.n_realizations) {
      throw ConfigError("<config>", 0, "[mc] batches", "must not exceed n_realizations");
    }
  }
  positive(mc.mean_photon_number, "mc", "mean_photon_number");
  try {
    return kind == SetupKind::mz ? mz.validate() : basic.validate();
  } catch (const InvalidGeometry& e) {
    throw ConfigError("<config>", 0, "[setup]", e.what());
  }
}

Instrument ExperimentConfig::instrument() const {
  Instrument in;
  switch (kind) {
    case SetupKind::basic: in = Instrument::basic(basic); break;
    case SetupKind::gate: in = Instrument::gate(SetupGate{basic}, angles); break;
    case SetupKind::mz: in = Instrument::mz(mz, angles); break;
  }
  in.intensity = mc.intensity;
  return in;
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](std::string sec, std::string_view key, std::string value) {
    out.emplace_back(sec + "." + std::string(key), std::move(value));
  };
  add("setup", "kind", std::string(to_string(c.kind)));
  add("setup", "a", format_double(c.basic.a));
  add("setup", "lambda", format_double(c.basic.lambda));
  add("setup", "z", format_double(c.basic.z));
  if (c.kind == SetupKind::mz) {
    add("setup", "zbar", format_double(c.mz.zbar));
    add("setup", "delta_c", format_double(c.mz.delta_c));
    add("setup", "delta_t", format_double(c.mz.delta_t));
  } else {
    add("setup", "f", format_double(c.basic.f));
    add("setup", "x1", format_double(c.basic.x1));
    add("setup", "x2", format_double(c.basic.x2));
    add("setup", "x1p", format_double(c.basic.x1p));
    add("setup", "x2p", format_double(c.basic.x2p));
  }
  if (c.kind != SetupKind::basic) {
    add("angles", "phi_c", format_double(c.angles.phi_c()));
    add("angles", "phi_t", format_double(c.angles.phi_t()));
    add("angles", "theta_c", format_double(c.angles.theta_c()));
    add("angles", "theta_t", format_double(c.angles.theta_t()));
  }
  add("scan", "axis", std::string(to_string(c.scan.axis)));
  add("scan", "start", format_double(c.scan.start));
  add("scan", "stop", format_double(c.scan.stop));
  add("scan", "step", format_double(c.scan.step));
  add("scan", "detector_x", format_double(c.scan.detector_x));
  add("run", "mode", std::string(to_string(c.mode)));
  add("mc", "n_realizations", std::to_string(c.mc.n_realizations));
  add("mc", "n_emitters", std::to_string(c.mc.n_emitters));
  add("mc", "seed", std::to_string(c.mc.seed));
  add("mc", "batches", std::to_string(c.mc.batches));
  add("mc", "mean_photon_number", format_double(c.mc.mean_photon_number));
  add("mc", "intensity", c.mc.intensity == IntensityMode::projected ? "projected" : "total_power");
  return out;
}

}  // namespace ghostfringe
