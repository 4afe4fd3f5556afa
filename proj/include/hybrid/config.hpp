#ifndef HYBRID_CONFIG_HPP
#define HYBRID_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hybrid::config {

// Flat sectioned key=value text. Numeric values carry SI unit suffix tokens
// ("5 ng", "100 nm") and an optional explicit 2pi* prefix for quantities
// quoted as ordinary frequencies ("omega_m = 2pi*10e3 Hz" -> rad/s).
// '#' and ';' start comments.

struct Entry {
  std::string raw;
  int line = 0;
};

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  const Entry& entry(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_number(const std::string& section, const std::string& key) const;
  double get_number(const std::string& section, const std::string& key, double fallback) const;
  long get_integer(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  std::vector<std::string> sections() const;
  std::vector<std::string> keys(const std::string& section) const;

  void set(const std::string& section, const std::string& key, const std::string& raw);

  // normalized section.key=raw lines, sorted; used for run metadata
  std::vector<std::string> dump() const;

  const std::string& origin() const { return origin_; }

 private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::string origin_;
};

// "2pi*<number> <unit>" or "<number> <unit>" or bare number -> SI value
double parse_quantity(const std::string& raw, int line = 0);

}  // namespace hybrid::config

#endif
