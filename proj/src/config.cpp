#include "fairbid/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace fairbid {

namespace {
std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
  KeyValueConfig cfg;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    cfg.values_[key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse(in);
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::parse_num(const std::string& key,
                                 const std::string& raw) const {
  try {
    std::size_t pos = 0;
    double d = std::stod(raw, &pos);
    if (pos != raw.size() || !std::isfinite(d)) throw std::invalid_argument(raw);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + raw + "'");
  }
}

double KeyValueConfig::get_double(const std::string& key) const {
  return parse_num(key, get_string(key));
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long KeyValueConfig::get_long(const std::string& key) const {
  double d = get_double(key);
  long l = static_cast<long>(d);
  if (static_cast<double>(l) != d)
    throw ConfigError("config key '" + key + "': expected an integer");
  return l;
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean");
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  std::string raw = get_string(key);
  std::vector<double> out;
  if (raw.find(':') != std::string::npos) {
    // inclusive range lo:hi:step
    std::vector<std::string> parts;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    if (parts.size() != 3)
      throw ConfigError("config key '" + key + "': range must be lo:hi:step");
    double lo = parse_num(key, parts[0]);
    double hi = parse_num(key, parts[1]);
    double step = parse_num(key, parts[2]);
    if (step <= 0.0) throw ConfigError("config key '" + key + "': step must be > 0");
    for (double x = lo; x <= hi + step * 1e-9; x += step) out.push_back(x);
  } else {
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::string t = trim(item);
      if (!t.empty()) out.push_back(parse_num(key, t));
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key, std::vector<double> fallback) const {
  return has(key) ? get_double_list(key) : std::move(fallback);
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

}  // namespace fairbid
