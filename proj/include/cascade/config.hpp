#pragma once

// Run configuration: flat `key = value` text with [section] headers.
//
//   [physical]   frequencies and rates in ordinary Hz (keys end in _over_2pi),
//                temperatures in K, eta dimensionless
//   [budget]     optional pump / sphere data from which g_ab, g_am are derived
//   [sweep]      optional grid definition; axis values use units of omega_b
//                (T in K, eta dimensionless)
//   [output]     path, verbosity
//
// '#' starts a comment. Unknown sections and keys are rejected.

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/errors.hpp"
#include "cascade/model.hpp"
#include "cascade/sweep.hpp"

namespace cascade {

struct KeySpec {
  std::string_view key;
  std::string_view unit;
  bool required;
};

// Order here is the canonical echo order.
inline constexpr KeySpec kPhysicalKeys[] = {
    {"omega_b_over_2pi", "Hz", true},  {"omega_m_over_2pi", "Hz", true},  {"omega_1_over_2pi", "Hz", true},
    {"omega_2_over_2pi", "Hz", true},  {"omega_d_over_2pi", "Hz", true},  {"kappa_1_over_2pi", "Hz", true},
    {"kappa_2_over_2pi", "Hz", true},  {"gamma_b_over_2pi", "Hz", true},  {"gamma_m_over_2pi", "Hz", true},
    {"g_ab_over_2pi", "Hz", false},    {"g_am_over_2pi", "Hz", false},    {"eta", "1", false},
    {"T", "K", false},                 {"T_1", "K", false},               {"T_2", "K", false},
    {"T_b", "K", false},               {"T_m", "K", false},
};

inline constexpr KeySpec kBudgetKeys[] = {
    {"pump_power", "W", false},      {"g_ab_single_over_2pi", "Hz", false}, {"sphere_diameter", "m", false},
    {"spin_density", "m^-3", false}, {"g_m0_over_2pi", "Hz", false},        {"spin_s", "1", false},
};

inline constexpr KeySpec kSweepKeys[] = {
    {"axis1", "name", true},         {"axis1_min", "", true},          {"axis1_max", "", true},
    {"axis1_points", "count", true}, {"axis1_spacing", "linear|log", false}, {"axis2", "name", false},
    {"axis2_min", "", false},        {"axis2_max", "", false},         {"axis2_points", "count", false},
    {"axis2_spacing", "linear|log", false},
};

inline constexpr KeySpec kOutputKeys[] = {{"path", "file", false}, {"verbosity", "level", false}};

struct RunConfig {
  PhysicalParams params;  // rad/s, K
  std::optional<CouplingBudget> budget;
  std::optional<SweepSpec> sweep;
  std::string output_path;
  int verbosity = 0;

  // normalized text of every accepted entry, by section, for echo
  std::map<std::string, std::map<std::string, std::string>> entries;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(where + ": '" + text + "' is not a finite number");
  return v;
}

inline std::string canonical_number(double v) {
  // shortest form that parses back to the same double
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <std::size_t N>
const KeySpec* find_key(const KeySpec (&table)[N], std::string_view key) {
  for (const KeySpec& k : table)
    if (k.key == key) return &k;
  return nullptr;
}

inline Param sweep_param(const std::string& name, const std::string& where) {
  if (auto p = parse_param(name)) return *p;
  throw ConfigError(where + ": unknown sweep parameter '" + name + "'");
}

inline Spacing parse_spacing(const std::string& s, const std::string& where) {
  if (s == "linear") return Spacing::linear;
  if (s == "log") return Spacing::log;
  throw ConfigError(where + ": spacing must be 'linear' or 'log'");
}

// "<coeff> * axis1" (or axis2)
inline Link parse_link(const std::string& target, const std::string& value, const std::string& where) {
  Link l;
  l.target = sweep_param(target, where);
  const auto star = value.find('*');
  if (star == std::string::npos) throw ConfigError(where + ": link must read '<coeff> * axis1|axis2'");
  l.coeff = parse_number(trim(value.substr(0, star)), where);
  const std::string src = trim(value.substr(star + 1));
  if (src == "axis1")
    l.axis = 1;
  else if (src == "axis2")
    l.axis = 2;
  else
    throw ConfigError(where + ": link source must be axis1 or axis2");
  return l;
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in, const std::string& origin = "config") {
  RunConfig cfg;
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::vector<std::pair<std::string, std::string>> links;
  std::string section;
  std::string line;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    const std::string text = detail::trim(std::string_view(line).substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(where + ": malformed section header");
      section = detail::trim(std::string_view(text).substr(1, text.size() - 2));
      if (section != "physical" && section != "budget" && section != "sweep" && section != "output")
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = detail::trim(std::string_view(text).substr(0, eq));
    const std::string value = detail::trim(std::string_view(text).substr(eq + 1));
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    if (key.empty() || value.empty()) throw ConfigError(where + ": empty key or value");

    bool known = false;
    bool numeric = true;
    if (section == "physical") {
      known = detail::find_key(kPhysicalKeys, key) != nullptr;
    } else if (section == "budget") {
      known = detail::find_key(kBudgetKeys, key) != nullptr;
    } else if (section == "sweep") {
      if (key.rfind("link.", 0) == 0) {
        detail::parse_link(key.substr(5), value, where);
        links.emplace_back(key.substr(5), value);
        known = true;
        numeric = false;
      } else {
        known = detail::find_key(kSweepKeys, key) != nullptr;
        numeric = key != "axis1" && key != "axis2" && key != "axis1_spacing" && key != "axis2_spacing";
      }
    } else if (section == "output") {
      known = detail::find_key(kOutputKeys, key) != nullptr;
      numeric = key != "path";
    }
    if (!known) throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
    if (raw[section].count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    raw[section][key] = numeric ? detail::canonical_number(detail::parse_number(value, where)) : value;
  }

  auto num = [&](const std::string& sec, const std::string& key) -> std::optional<double> {
    auto s = raw.find(sec);
    if (s == raw.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return detail::parse_number(k->second, origin + " [" + sec + "] " + key);
  };
  auto need = [&](const std::string& sec, const std::string& key) {
    if (auto v = num(sec, key)) return *v;
    throw ConfigError(origin + ": missing required key '" + key + "' in [" + sec + "]");
  };

  PhysicalParams& p = cfg.params;
  p.omega_b = kTwoPi * need("physical", "omega_b_over_2pi");
  p.omega_m = kTwoPi * need("physical", "omega_m_over_2pi");
  p.omega_1 = kTwoPi * need("physical", "omega_1_over_2pi");
  p.omega_2 = kTwoPi * need("physical", "omega_2_over_2pi");
  p.omega_d = kTwoPi * need("physical", "omega_d_over_2pi");
  p.kappa_1 = kTwoPi * need("physical", "kappa_1_over_2pi");
  p.kappa_2 = kTwoPi * need("physical", "kappa_2_over_2pi");
  p.gamma_b = kTwoPi * need("physical", "gamma_b_over_2pi");
  p.gamma_m = kTwoPi * need("physical", "gamma_m_over_2pi");
  p.eta = num("physical", "eta").value_or(1.0);
  raw["physical"]["eta"] = detail::canonical_number(p.eta);

  const auto T = num("physical", "T");
  auto bath = [&](const char* key) {
    if (auto v = num("physical", key)) return *v;
    if (T) return *T;
    throw ConfigError(origin + ": temperature '" + key + "' needs either T or " + key);
  };
  p.T_1 = bath("T_1");
  p.T_2 = bath("T_2");
  p.T_b = bath("T_b");
  p.T_m = bath("T_m");

  if (raw.count("budget")) {
    CouplingBudget b;
    b.pump_power = num("budget", "pump_power").value_or(0.0);
    b.g_ab_single = kTwoPi * num("budget", "g_ab_single_over_2pi").value_or(0.0);
    b.sphere_diameter = num("budget", "sphere_diameter").value_or(0.0);
    b.spin_density = num("budget", "spin_density").value_or(0.0);
    b.g_m0 = kTwoPi * num("budget", "g_m0_over_2pi").value_or(0.0);
    b.spin_s = num("budget", "spin_s").value_or(2.5);
    cfg.budget = b;
  }

  // a direct coupling wins over the budget
  if (auto g = num("physical", "g_ab_over_2pi")) {
    p.g_ab = kTwoPi * *g;
  } else {
    if (!cfg.budget || !(cfg.budget->pump_power > 0.0) || !(cfg.budget->g_ab_single > 0.0))
      throw ConfigError(origin + ": g_ab_over_2pi missing and no pump_power / g_ab_single_over_2pi budget");
    p.g_ab = coupling_from_power(*cfg.budget, p.kappa_1, p.omega_1 - p.omega_d, p.omega_1);
  }
  if (auto g = num("physical", "g_am_over_2pi")) {
    p.g_am = kTwoPi * *g;
  } else {
    if (!cfg.budget || !(cfg.budget->sphere_diameter > 0.0) || !(cfg.budget->spin_density > 0.0) ||
        !(cfg.budget->g_m0 > 0.0))
      throw ConfigError(origin + ": g_am_over_2pi missing and no sphere budget");
    p.g_am = magnon_coupling_from_sphere(*cfg.budget).g_am;
  }

  try {
    validate(p);
  } catch (const DomainError& e) {
    throw ConfigError(origin + ": " + e.what());
  }

  if (raw.count("sweep")) {
    const auto& s = raw["sweep"];
    SweepSpec spec;
    spec.base = p;
    auto axis = [&](const std::string& prefix) {
      Axis a;
      const std::string where = origin + " [sweep] " + prefix;
      a.param = detail::sweep_param(s.at(prefix), where);
      a.min = need("sweep", prefix + "_min");
      a.max = need("sweep", prefix + "_max");
      const double pts = need("sweep", prefix + "_points");
      if (pts != std::floor(pts) || pts < 1 || pts > 1e7) throw ConfigError(where + "_points must be a positive integer");
      a.points = static_cast<int>(pts);
      if (auto it = s.find(prefix + "_spacing"); it != s.end()) a.spacing = detail::parse_spacing(it->second, where);
      try {
        a.validate();
      } catch (const DomainError& e) {
        throw ConfigError(where + ": " + e.what());
      }
      return a;
    };
    if (!s.count("axis1")) throw ConfigError(origin + ": [sweep] needs axis1");
    spec.axis1 = axis("axis1");
    if (s.count("axis2")) spec.axis2 = axis("axis2");
    for (const auto& [target, value] : links) {
      Link l = detail::parse_link(target, value, origin + " [sweep] link." + target);
      if (l.axis == 2 && !spec.axis2) throw ConfigError(origin + ": link." + target + " refers to missing axis2");
      spec.links.push_back(l);
    }
    cfg.sweep = spec;
  }

  if (auto it = raw.find("output"); it != raw.end()) {
    if (auto k = it->second.find("path"); k != it->second.end()) cfg.output_path = k->second;
    if (auto v = num("output", "verbosity")) cfg.verbosity = static_cast<int>(*v);
  }

  cfg.entries = std::move(raw);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  return parse_config(f, path);
}

/// Canonical text of the effective configuration; parse_config(echo) yields
/// the same parameters bit for bit.
inline std::string echo_config(const RunConfig& cfg) {
  std::ostringstream os;
  auto section = [&](const std::string& name, auto& table) {
    auto it = cfg.entries.find(name);
    if (it == cfg.entries.end()) return;
    os << '[' << name << "]\n";
    for (const KeySpec& k : table)
      if (auto e = it->second.find(std::string(k.key)); e != it->second.end())
        os << k.key << " = " << e->second << '\n';
    for (const auto& [key, value] : it->second)
      if (key.rfind("link.", 0) == 0) os << key << " = " << value << '\n';
    os << '\n';
  };
  section("physical", kPhysicalKeys);
  section("budget", kBudgetKeys);
  section("sweep", kSweepKeys);
  section("output", kOutputKeys);
  return os.str();
}

}  // namespace cascade
