// Copyright 2026 The cvtele Authors
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

#include "cvtele/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

namespace cvtele::harness {

namespace {

std::string describe(std::size_t line, const std::string& key, const std::string& message) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!key.empty()) out += "key '" + key + "': ";
  return out + message;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, const std::string& message) {
  throw ConfigError(0, std::string(key), message);
}

double parse_double(std::string_view key, std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    bad_value(key, "expected a number, got '" + std::string(text) + "'");
  if (!std::isfinite(v)) bad_value(key, "value must be finite");
  return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    bad_value(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "true") return true;
  if (t == "false") return false;
  bad_value(key, "expected true or false, got '" + std::string(text) + "'");
}

std::array<double, 2> parse_pair(std::string_view key, std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    const double v = parse_double(key, text);
    return {v, v};
  }
  if (text.find(',', comma + 1) != std::string_view::npos)
    bad_value(key, "expected one value or two comma-separated values");
  return {parse_double(key, text.substr(0, comma)), parse_double(key, text.substr(comma + 1))};
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

Scenario parse_scenario(std::string_view key, std::string_view text) {
  const std::string_view t = trim(text);
  for (Scenario s : {Scenario::coherent, Scenario::squeezed_x, Scenario::squeezed_p, Scenario::vacuum})
    if (t == to_string(s)) return s;
  bad_value(key, "unknown scenario '" + std::string(t) +
                     "' (expected coherent, squeezed_x, squeezed_p or vacuum)");
}

struct KeyEntry {
  std::string name;  // section.key
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename M>
KeyEntry number_key(std::string name, M ExperimentConfig::*field) {
  KeyEntry e;
  e.name = name;
  e.set = [name, field](ExperimentConfig& c, std::string_view v) {
    using T = std::remove_reference_t<decltype(c.*field)>;
    if constexpr (std::is_same_v<T, double>) {
      c.*field = parse_double(name, v);
    } else if constexpr (std::is_same_v<T, bool>) {
      c.*field = parse_bool(name, v);
    } else {
      c.*field = static_cast<T>(parse_unsigned(name, v));
    }
  };
  e.get = [field](const ExperimentConfig& c) {
    using T = std::remove_cvref_t<decltype(c.*field)>;
    if constexpr (std::is_same_v<T, double>) {
      return format_double(c.*field);
    } else if constexpr (std::is_same_v<T, bool>) {
      return std::string(c.*field ? "true" : "false");
    } else {
      return std::to_string(c.*field);
    }
  };
  return e;
}

KeyEntry pair_key(std::string name, std::array<double, 2> ExperimentConfig::*field) {
  KeyEntry e;
  e.name = name;
  e.set = [name, field](ExperimentConfig& c, std::string_view v) { c.*field = parse_pair(name, v); };
  e.get = [field](const ExperimentConfig& c) {
    return format_double((c.*field)[0]) + ", " + format_double((c.*field)[1]);
  };
  return e;
}

const std::vector<KeyEntry>& registry() {
  static const std::vector<KeyEntry> keys = [] {
    using C = ExperimentConfig;
    std::vector<KeyEntry> k;
    KeyEntry type;
    type.name = "scenario.type";
    type.set = [](C& c, std::string_view v) { c.scenario = parse_scenario("scenario.type", v); };
    type.get = [](const C& c) { return std::string(to_string(c.scenario)); };
    k.push_back(type);
    k.push_back(number_key("scenario.alpha", &C::alpha));
    k.push_back(number_key("scenario.input_sq_db", &C::input_sq_db));
    k.push_back(number_key("scenario.input_antisq_db", &C::input_antisq_db));
    k.push_back(number_key("scenario.input_detector_referenced", &C::input_detector_referenced));

    k.push_back(pair_key("teleporter.epr_sq_db", &C::epr_sq_db));
    k.push_back(pair_key("teleporter.epr_antisq_db", &C::epr_antisq_db));
    k.push_back(pair_key("teleporter.eta_source", &C::eta_source));
    k.push_back(pair_key("teleporter.eta_prop", &C::eta_prop));
    k.push_back(number_key("teleporter.visibility", &C::visibility));
    k.push_back(number_key("teleporter.eta_verify", &C::eta_verify));
    k.push_back(number_key("teleporter.g_x", &C::g_x));
    k.push_back(number_key("teleporter.g_p", &C::g_p));

    k.push_back(number_key("calibration.enabled", &C::calibrate));
    k.push_back(number_key("calibration.target_x_db", &C::target_x_db));
    k.push_back(number_key("calibration.target_p_db", &C::target_p_db));

    k.push_back(number_key("trace.n_points", &C::trace_points));
    k.push_back(number_key("trace.averages", &C::trace_averages));
    k.push_back(number_key("trace.noise", &C::trace_noise));

    k.push_back(number_key("tomography.samples", &C::samples));
    k.push_back(number_key("tomography.phase_bins", &C::phase_bins));
    k.push_back(number_key("tomography.cutoff", &C::cutoff));
    k.push_back(number_key("tomography.bin_fraction", &C::bin_fraction));
    k.push_back(number_key("tomography.field_of_view", &C::field_of_view));
    k.push_back(number_key("tomography.auto_grid", &C::auto_grid));
    k.push_back(number_key("tomography.n_x", &C::n_x));
    k.push_back(number_key("tomography.n_p", &C::n_p));
    k.push_back(number_key("tomography.x_min", &C::x_min));
    k.push_back(number_key("tomography.x_max", &C::x_max));
    k.push_back(number_key("tomography.p_min", &C::p_min));
    k.push_back(number_key("tomography.p_max", &C::p_max));

    k.push_back(number_key("run.seed", &C::seed));
    k.push_back(number_key("run.shots", &C::shots));
    KeyEntry out;
    out.name = "run.output_dir";
    out.set = [](C& c, std::string_view v) { c.output_dir = std::string(trim(v)); };
    out.get = [](const C& c) { return c.output_dir; };
    k.push_back(out);
    return k;
  }();
  return keys;
}

const KeyEntry* find_key(std::string_view name) {
  for (const auto& e : registry())
    if (e.name == name) return &e;
  return nullptr;
}

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ConfigError(0, key, message);
}

}  // namespace

ConfigError::ConfigError(std::size_t line, std::string key, const std::string& message)
    : std::runtime_error(describe(line, key, message)), line_(line), key_(std::move(key)), message_(message) {}

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::coherent: return "coherent";
    case Scenario::squeezed_x: return "squeezed_x";
    case Scenario::squeezed_p: return "squeezed_p";
    case Scenario::vacuum: return "vacuum";
  }
  return "unknown";
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.name);
  return out;
}

void set_config_value(ExperimentConfig& config, std::string_view dotted_key, std::string_view value,
                      std::size_t line) {
  const KeyEntry* entry = find_key(dotted_key);
  if (entry == nullptr) throw ConfigError(line, std::string(dotted_key), "unknown key");
  try {
    entry->set(config, value);
  } catch (const ConfigError& e) {
    if (line == 0) throw;
    throw ConfigError(line, e.key(), e.message());
  }
}

void validate_config(const ExperimentConfig& c) {
  for (int i = 0; i < 2; ++i) {
    require(c.epr_sq_db[i] <= 0.0, "teleporter.epr_sq_db",
            "squeezing must be given as a non-positive dB value, got " + format_double(c.epr_sq_db[i]));
    require(c.epr_antisq_db[i] >= -c.epr_sq_db[i], "teleporter.epr_antisq_db",
            "anti-squeezing below the squeezing level violates the uncertainty relation");
    require(c.eta_source[i] > 0.0 && c.eta_source[i] <= 1.0, "teleporter.eta_source",
            "efficiency must lie in (0, 1]");
    require(c.eta_prop[i] > 0.0 && c.eta_prop[i] <= 1.0, "teleporter.eta_prop",
            "efficiency must lie in (0, 1]");
  }
  require(c.visibility > 0.0 && c.visibility <= 1.0, "teleporter.visibility",
          "visibility must lie in (0, 1]");
  require(c.eta_verify > 0.0 && c.eta_verify <= 1.0, "teleporter.eta_verify",
          "efficiency must lie in (0, 1]");
  require(c.input_sq_db <= 0.0, "scenario.input_sq_db",
          "squeezing must be given as a non-positive dB value");
  require(c.input_antisq_db >= -c.input_sq_db, "scenario.input_antisq_db",
          "anti-squeezing below the squeezing level violates the uncertainty relation");
  require(c.target_x_db < 0.0, "calibration.target_x_db", "target correlation must be below 0 dB");
  require(c.target_p_db < 0.0, "calibration.target_p_db", "target correlation must be below 0 dB");
  require(c.trace_points >= 2, "trace.n_points", "need at least 2 points");
  require(c.trace_averages >= 1, "trace.averages", "need at least 1 average");
  require(c.samples >= 1000, "tomography.samples", "need at least 1000 samples");
  require(c.phase_bins >= 8, "tomography.phase_bins", "need at least 8 phase bins");
  require(c.cutoff > 0.0 && c.cutoff <= 1.0, "tomography.cutoff", "cutoff must lie in (0, 1]");
  require(c.bin_fraction > 0.0 && c.bin_fraction <= 1.0, "tomography.bin_fraction",
          "bin fraction must lie in (0, 1]");
  require(c.field_of_view > 0.0, "tomography.field_of_view", "must be positive");
  require(c.n_x >= 2, "tomography.n_x", "need at least 2 grid points");
  require(c.n_p >= 2, "tomography.n_p", "need at least 2 grid points");
  require(c.x_min < c.x_max, "tomography.x_max", "x_max must exceed x_min");
  require(c.p_min < c.p_max, "tomography.p_max", "p_max must exceed p_min");
  require(c.shots >= 2, "run.shots", "need at least 2 shots");
  require(c.output_dir.find('\n') == std::string::npos, "run.output_dir", "must be a single line");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::map<std::string, std::size_t> seen;
  std::set<std::string> sections;
  for (const auto& e : registry()) sections.insert(e.name.substr(0, e.name.find('.')));

  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line_no == 1 && raw.starts_with("\xEF\xBB\xBF")) {
      throw ConfigError(line_no, "", "byte-order mark not allowed");
    }
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "", "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!sections.contains(section)) throw ConfigError(line_no, section, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(line_no, "", "missing key before '='");
    if (section.empty()) throw ConfigError(line_no, key, "key outside of a [section]");
    const std::string dotted = section + "." + key;
    if (find_key(dotted) == nullptr) throw ConfigError(line_no, dotted, "unknown key");
    if (seen.contains(dotted))
      throw ConfigError(line_no, dotted,
                        "duplicate key (first set on line " + std::to_string(seen[dotted]) + ")");
    seen[dotted] = line_no;
    set_config_value(config, dotted, line.substr(eq + 1), line_no);
  }

  try {
    validate_config(config);
  } catch (const ConfigError& e) {
    const auto it = seen.find(e.key());
    if (it == seen.end()) throw;
    throw ConfigError(it->second, e.key(), e.message());
  }
  return config;
}

std::string emit_config(const ExperimentConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& e : registry()) {
    const auto dot = e.name.find('.');
    const std::string s = e.name.substr(0, dot);
    if (s != section) {
      if (!section.empty()) out << '\n';
      out << '[' << s << "]\n";
      section = s;
    }
    const std::string value = e.get(config);
    out << e.name.substr(dot + 1) << (value.empty() ? " =" : " = ") << value << '\n';
  }
  return out.str();
}

ExperimentConfig preset_config(Scenario scenario) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.visibility = 0.98;
  c.calibrate = true;
  c.target_x_db = -5.6;
  c.target_p_db = -5.5;
  c.input_sq_db = -6.2;
  c.input_antisq_db = 12.0;
  c.alpha = scenario == Scenario::coherent ? 3.5 : 0.0;
  return c;
}

}  // namespace cvtele::harness
