#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aflab {

// Raised for malformed config text, unknown keys, or invalid values; the CLI
// maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// INI-style key/value configuration with [section] headers, '#'/';' comments,
// and environment overrides AFLAB_<SECTION>_<KEY>. Keys not in the schema are
// hard errors: a typo must never silently fall back to a default.
class Config {
 public:
  static Config parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string s = strip(strip_comment(line));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') {
          throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section header");
        }
        section = strip(s.substr(1, s.size() - 2));
        if (section.empty()) {
          throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
        }
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      }
      const std::string key = strip(s.substr(0, eq));
      const std::string value = strip(s.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
      }
      if (section.empty()) {
        throw ConfigError("config line " + std::to_string(lineno) + ": key outside any [section]");
      }
      c.values_[section + "." + key] = value;
    }
    return c;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  // AFLAB_<SECTION>_<KEY> (upper-cased, '.' and '-' become '_') overrides the
  // file value; overrides of unknown keys are caught by validate() like any
  // other unknown key.
  void apply_env_overrides(const std::set<std::string>& schema) {
    for (const std::string& full : schema) {
      std::string env = "AFLAB_";
      for (char ch : full) {
        if (ch == '.' || ch == '-') {
          env += '_';
        } else {
          env += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        }
      }
      if (const char* v = std::getenv(env.c_str())) {
        values_[full] = v;
      }
    }
  }

  // Every present key must be in the schema of known "section.key" names.
  void validate(const std::set<std::string>& schema) const {
    for (const auto& [k, v] : values_) {
      if (!schema.count(k)) {
        throw ConfigError("unknown config key: " + k);
      }
    }
  }

  bool has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) != 0;
  }

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const {
    const auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& section, const std::string& key, double fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    return to_double(it->second, section + "." + key);
  }

  int get_int(const std::string& section, const std::string& key, int fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const int v = std::stoi(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config value for " + section + "." + key + " is not an integer: " +
                        it->second);
    }
  }

  bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config value for " + section + "." + key + " is not a boolean: " + v);
  }

  std::vector<double> get_list(const std::string& section, const std::string& key,
                               std::vector<double> fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::istringstream in(it->second);
    std::string item;
    while (std::getline(in, item, ',')) {
      const std::string t = strip(item);
      if (t.empty()) continue;
      out.push_back(to_double(t, section + "." + key));
    }
    if (out.empty()) {
      throw ConfigError("config value for " + section + "." + key + " is an empty list");
    }
    return out;
  }

  void set(const std::string& section, const std::string& key, const std::string& value) {
    values_[section + "." + key] = value;
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  static std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
  }
  static std::string strip_comment(const std::string& s) {
    const auto pos = s.find_first_of("#;");
    return pos == std::string::npos ? s : s.substr(0, pos);
  }
  static double to_double(const std::string& s, const std::string& what) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config value for " + what + " is not a number: " + s);
    }
  }

  std::map<std::string, std::string> values_;
};

}  // namespace aflab
