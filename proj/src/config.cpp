#include "hybrid/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hybrid/constants.hpp"
#include "hybrid/errors.hpp"

namespace hybrid::config {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

const std::map<std::string, double>& unit_table() {
  namespace c = hybrid::constants;
  static const std::map<std::string, double> units = {
      // frequency (per second; combine with 2pi* for angular)
      {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"rad/s", 1.0},
      // time
      {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12},
      // length
      {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12},
      {"fm", 1e-15},
      // mass
      {"kg", 1.0}, {"g", 1e-3}, {"mg", 1e-6}, {"ug", 1e-9}, {"ng", 1e-12}, {"pg", 1e-15},
      {"amu", c::atomic_mass_unit},
      // temperature
      {"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"nK", 1e-9},
      // voltage, current, field
      {"V", 1.0}, {"mV", 1e-3}, {"kV", 1e3},
      {"A", 1.0}, {"mA", 1e-3}, {"uA", 1e-6}, {"nA", 1e-9},
      {"T", 1.0}, {"mT", 1e-3}, {"uT", 1e-6},
      {"T/m", 1.0},
      // capacitance, force
      {"F", 1.0}, {"pF", 1e-12}, {"fF", 1e-15}, {"aF", 1e-18},
      {"N", 1.0}, {"aN", 1e-18},
      // energy: joule, electronvolt, and h * frequency shorthands
      {"J", 1.0}, {"eV", c::elementary_charge},
      {"GHz_h", c::planck_h * 1e9}, {"MHz_h", c::planck_h * 1e6},
      // moments
      {"J/T", 1.0},
  };
  return units;
}

}  // namespace

double parse_quantity(const std::string& raw_in, int line) {
  std::string raw = trim(raw_in);
  if (raw.empty()) throw config_error("empty value", line);

  double prefactor = 1.0;
  if (raw.rfind("2pi*", 0) == 0) {
    prefactor = hybrid::constants::two_pi;
    raw = trim(raw.substr(4));
  } else if (raw.rfind("-2pi*", 0) == 0) {
    prefactor = -hybrid::constants::two_pi;
    raw = trim(raw.substr(5));
  }

  size_t pos = 0;
  double value = 0;
  try {
    value = std::stod(raw, &pos);
  } catch (const std::exception&) {
    throw config_error("not a number: '" + raw_in + "'", line);
  }
  std::string suffix = trim(raw.substr(pos));
  if (!suffix.empty()) {
    auto it = unit_table().find(suffix);
    if (it == unit_table().end())
      throw config_error("unknown unit '" + suffix + "' in '" + raw_in + "'", line);
    value *= it->second;
  }
  return prefactor * value;
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw config_error("unterminated section header", lineno);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw config_error("empty section name", lineno);
      cfg.sections_[section];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw config_error("expected key = value", lineno);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("empty key", lineno);
    if (section.empty()) throw config_error("key outside of any [section]", lineno);
    if (cfg.sections_[section].count(key))
      throw config_error("duplicate key '" + section + "." + key + "'", lineno);
    cfg.sections_[section][key] = Entry{value, lineno};
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Config cfg = parse_string(buf.str(), path);
  return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

const Entry& Config::entry(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end() || !it->second.count(key))
    throw config_error("missing required key '" + section + "." + key + "'");
  return it->second.at(key);
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  return entry(section, key).raw;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? entry(section, key).raw : fallback;
}

double Config::get_number(const std::string& section, const std::string& key) const {
  const Entry& e = entry(section, key);
  return parse_quantity(e.raw, e.line);
}

double Config::get_number(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_number(section, key) : fallback;
}

long Config::get_integer(const std::string& section, const std::string& key, long fallback) const {
  if (!has(section, key)) return fallback;
  double v = get_number(section, key);
  long n = std::lround(v);
  if (std::abs(v - static_cast<double>(n)) > 1e-9)
    throw config_error("expected an integer for '" + section + "." + key + "'",
                       entry(section, key).line);
  return n;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = entry(section, key).raw;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw config_error("expected a boolean for '" + section + "." + key + "'",
                     entry(section, key).line);
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, entries] : sections_) out.push_back(name);
  return out;
}

std::vector<std::string> Config::keys(const std::string& section) const {
  std::vector<std::string> out;
  auto it = sections_.find(section);
  if (it != sections_.end())
    for (const auto& [k, e] : it->second) out.push_back(k);
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& raw) {
  sections_[section][key] = Entry{raw, 0};
}

std::vector<std::string> Config::dump() const {
  std::vector<std::string> out;
  for (const auto& [sec, entries] : sections_)
    for (const auto& [key, e] : entries) out.push_back(sec + "." + key + " = " + e.raw);
  return out;
}

}  // namespace hybrid::config
