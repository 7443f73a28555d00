#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixedwave/study.hpp"

namespace mixedwave {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line-oriented `key = value` text. `[section]` lines open a section;
/// keys are addressed as "section.key". `#` starts a comment. Errors carry
/// the source name and line number.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "config");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  /// Line of a key, 0 when absent.
  int line(const std::string& key) const;
  std::vector<std::string> keys() const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<std::string> get_words(const std::string& key, const std::vector<std::string>& fallback) const;
  BoundaryTag get_tag(const std::string& key, BoundaryTag fallback) const;

  /// Throws on the first key not in `allowed`.
  void check_keys(const std::set<std::string>& allowed) const;
  /// Throws with the location of `key`.
  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  struct Entry {
    std::string value;
    int line;
  };
  std::string source_;
  std::map<std::string, Entry> entries_;
};

/// Everything the command-line driver needs.
struct AppConfig {
  Scenario scenario;
  StudyOptions study;
  int run_level = 3;
  std::vector<std::string> fields{"p", "p_tilde", "u_hat", "u_tilde"};
  EnergyOptions energy;
};

/// Maps a parsed config onto scenario, study, run and energy settings.
/// Unknown keys and invalid values raise ConfigError.
AppConfig make_app_config(const Config& config);

}  // namespace mixedwave
