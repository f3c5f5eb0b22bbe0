#include "tdho/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace tdho {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& what, const std::string& raw) {
  throw std::invalid_argument(what + " '" + raw + "'");
}

double parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) bad_value("expected a number, got", raw);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) bad_value("malformed number", s);
  if (!std::isfinite(v)) bad_value("number must be finite, got", s);
  return v;
}

std::size_t parse_size(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty() || s[0] == '-') bad_value("expected a non-negative integer, got", raw);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) bad_value("malformed integer", s);
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  bad_value("expected true or false, got", raw);
}

std::vector<double> parse_list(const std::string& raw) {
  std::vector<double> out;
  const std::string s = trim(raw);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    const std::string item =
        (comma == std::string::npos) ? s.substr(start) : s.substr(start, comma - start);
    out.push_back(parse_double(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(v[i]);
  }
  return out;
}

ProfileVariant parse_variant(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "smoothed_step") return ProfileVariant::SmoothedStep;
  if (s == "ideal_step") return ProfileVariant::IdealStep;
  if (s == "constant") return ProfileVariant::Constant;
  if (s == "tabulated") return ProfileVariant::Tabulated;
  bad_value("unknown profile variant", s);
}

std::string variant_name(ProfileVariant v) {
  switch (v) {
    case ProfileVariant::SmoothedStep: return "smoothed_step";
    case ProfileVariant::IdealStep: return "ideal_step";
    case ProfileVariant::Constant: return "constant";
    case ProfileVariant::Tabulated: return "tabulated";
  }
  return "smoothed_step";
}

RouteChoice parse_route(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "direct") return RouteChoice::Direct;
  if (s == "pinney") return RouteChoice::Pinney;
  if (s == "both") return RouteChoice::Both;
  bad_value("unknown route (expected direct, pinney, or both), got", s);
}

std::string route_name(RouteChoice r) {
  switch (r) {
    case RouteChoice::Direct: return "direct";
    case RouteChoice::Pinney: return "pinney";
    case RouteChoice::Both: return "both";
  }
  return "direct";
}

struct KeyInfo {
  const char* section;
  const char* key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

const std::vector<KeyInfo>& key_table() {
  static const std::vector<KeyInfo> table = {
      {"profile", "variant",
       [](ScenarioConfig& c, const std::string& v) { c.profile.variant = parse_variant(v); },
       [](const ScenarioConfig& c) { return variant_name(c.profile.variant); }},
      {"profile", "omega1",
       [](ScenarioConfig& c, const std::string& v) { c.profile.omega1 = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.profile.omega1); }},
      {"profile", "omega2",
       [](ScenarioConfig& c, const std::string& v) { c.profile.omega2 = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.profile.omega2); }},
      {"profile", "epsilon",
       [](ScenarioConfig& c, const std::string& v) { c.profile.epsilon = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.profile.epsilon); }},
      {"profile", "t_s",
       [](ScenarioConfig& c, const std::string& v) { c.profile.t_step = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.profile.t_step); }},
      {"profile", "omega0",
       [](ScenarioConfig& c, const std::string& v) { c.profile.omega0 = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.profile.omega0); }},
      {"profile", "tab_times",
       [](ScenarioConfig& c, const std::string& v) { c.profile.tab_times = parse_list(v); },
       [](const ScenarioConfig& c) { return fmt_list(c.profile.tab_times); }},
      {"profile", "tab_values",
       [](ScenarioConfig& c, const std::string& v) { c.profile.tab_values = parse_list(v); },
       [](const ScenarioConfig& c) { return fmt_list(c.profile.tab_values); }},
      {"profile", "alt_omega_form",
       [](ScenarioConfig& c, const std::string& v) { c.profile.alt_omega_form = parse_bool(v); },
       [](const ScenarioConfig& c) { return std::string(c.profile.alt_omega_form ? "true" : "false"); }},
      {"solver", "t0",
       [](ScenarioConfig& c, const std::string& v) { c.solver.t0 = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.solver.t0); }},
      {"solver", "t1",
       [](ScenarioConfig& c, const std::string& v) { c.solver.t1 = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.solver.t1); }},
      {"solver", "dt",
       [](ScenarioConfig& c, const std::string& v) { c.solver.dt = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.solver.dt); }},
      {"solver", "route",
       [](ScenarioConfig& c, const std::string& v) { c.solver.route = parse_route(v); },
       [](const ScenarioConfig& c) { return route_name(c.solver.route); }},
      {"state", "rho0",
       [](ScenarioConfig& c, const std::string& v) { c.state.rho0 = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.state.rho0); }},
      {"state", "rho_dot0",
       [](ScenarioConfig& c, const std::string& v) { c.state.rho_dot0 = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.state.rho_dot0); }},
      {"state", "alpha_re",
       [](ScenarioConfig& c, const std::string& v) { c.state.alpha_re = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.state.alpha_re); }},
      {"state", "alpha_im",
       [](ScenarioConfig& c, const std::string& v) { c.state.alpha_im = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.state.alpha_im); }},
      {"oracle", "oracle_enabled",
       [](ScenarioConfig& c, const std::string& v) { c.oracle.enabled = parse_bool(v); },
       [](const ScenarioConfig& c) { return std::string(c.oracle.enabled ? "true" : "false"); }},
      {"oracle", "grid_n",
       [](ScenarioConfig& c, const std::string& v) { c.oracle.grid_n = parse_size(v); },
       [](const ScenarioConfig& c) { return std::to_string(c.oracle.grid_n); }},
      {"oracle", "x_min",
       [](ScenarioConfig& c, const std::string& v) { c.oracle.x_min = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.oracle.x_min); }},
      {"oracle", "x_max",
       [](ScenarioConfig& c, const std::string& v) { c.oracle.x_max = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.oracle.x_max); }},
      {"oracle", "dt_grid",
       [](ScenarioConfig& c, const std::string& v) { c.oracle.dt_grid = parse_double(v); },
       [](const ScenarioConfig& c) { return fmt_double(c.oracle.dt_grid); }},
      {"output", "out",
       [](ScenarioConfig& c, const std::string& v) { c.output.out = trim(v); },
       [](const ScenarioConfig& c) { return c.output.out; }},
      {"output", "report_out",
       [](ScenarioConfig& c, const std::string& v) { c.output.report_out = trim(v); },
       [](const ScenarioConfig& c) { return c.output.report_out; }},
      {"output", "format",
       [](ScenarioConfig& c, const std::string& v) {
         const std::string s = trim(v);
         if (s != "csv") bad_value("unsupported format (only csv is available), got", s);
         c.output.format = s;
       },
       [](const ScenarioConfig& c) { return c.output.format; }},
      {"sweep", "omega2_values",
       [](ScenarioConfig& c, const std::string& v) { c.sweep.omega2_values = parse_list(v); },
       [](const ScenarioConfig& c) { return fmt_list(c.sweep.omega2_values); }},
  };
  return table;
}

const KeyInfo* find_key(const std::string& key) {
  for (const auto& info : key_table()) {
    if (key == info.key) return &info;
  }
  return nullptr;
}

bool known_section(const std::string& name) {
  for (const auto& info : key_table()) {
    if (name == info.section) return true;
  }
  return false;
}

[[noreturn]] void parse_error(const std::string& name, std::size_t line,
                              const std::string& message) {
  std::ostringstream msg;
  msg << name << ":" << line << ": " << message;
  throw std::invalid_argument(msg.str());
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& name) {
  ScenarioConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (body[0] == '[') {
      if (body.back() != ']') parse_error(name, lineno, "unterminated section header");
      const std::string sect = trim(body.substr(1, body.size() - 2));
      if (!known_section(sect)) parse_error(name, lineno, "unknown section '" + sect + "'");
      section = sect;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) parse_error(name, lineno, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = body.substr(eq + 1);
    if (key.empty()) parse_error(name, lineno, "empty key");
    const KeyInfo* info = find_key(key);
    if (!info) parse_error(name, lineno, "unknown key '" + key + "'");
    if (section.empty()) {
      parse_error(name, lineno, "key '" + key + "' appears before any [section]");
    }
    if (section != info->section) {
      parse_error(name, lineno, "key '" + key + "' belongs in [" + info->section +
                                    "], not [" + section + "]");
    }
    try {
      info->set(config, value);
    } catch (const std::invalid_argument& err) {
      parse_error(name, lineno, err.what());
    }
  }
  return config;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string serialize_config(const ScenarioConfig& config) {
  std::string out;
  std::string section;
  for (const auto& info : key_table()) {
    if (section != info.section) {
      if (!out.empty()) out += "\n";
      section = info.section;
      out += "[" + section + "]\n";
    }
    out += std::string(info.key) + " = " + info.get(config) + "\n";
  }
  return out;
}

void apply_override(ScenarioConfig& config, const std::string& key,
                    const std::string& value) {
  const KeyInfo* info = find_key(trim(key));
  if (!info) throw std::invalid_argument("unknown configuration key '" + key + "'");
  try {
    info->set(config, value);
  } catch (const std::invalid_argument& err) {
    throw std::invalid_argument(std::string(info->key) + ": " + err.what());
  }
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& info : key_table()) out.emplace_back(info.key);
    return out;
  }();
  return keys;
}

FrequencyProfile make_profile(const ProfileConfig& config) {
  switch (config.variant) {
    case ProfileVariant::SmoothedStep:
      return FrequencyProfile::smoothed_step(config.omega1, config.omega2,
                                             config.epsilon, config.t_step,
                                             config.alt_omega_form);
    case ProfileVariant::IdealStep:
      return FrequencyProfile::ideal_step(config.omega1, config.omega2, config.t_step);
    case ProfileVariant::Constant:
      return FrequencyProfile::constant(config.omega0);
    case ProfileVariant::Tabulated:
      return FrequencyProfile::tabulated(config.tab_times, config.tab_values);
  }
  throw std::invalid_argument("unknown profile variant");
}

}  // namespace tdho
