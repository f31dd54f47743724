#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairbid {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `section.key = value` text configuration. `#` starts a comment.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Comma list `a,b,c` or inclusive range `lo:hi:step`.
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> values_;
  double parse_num(const std::string& key, const std::string& raw) const;
};

}  // namespace fairbid
