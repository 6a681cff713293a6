#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aflab/certificate.hpp"

namespace aflab {

inline constexpr const char* kToolVersion = "aflab 1.0.0";
inline constexpr const char* kCsvSchemaVersion = "aflab-csv v1";

// One tabular result set. Serialized as CSV with a versioned schema comment on
// the first line, and mirrored into the JSON report.
struct SweepTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> footer;  // e.g. fitted exponents with their bands

  std::string to_csv() const {
    std::string out = "# ";
    out += kCsvSchemaVersion;
    out += " ";
    out += name;
    out += "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ",";
      out += columns[i];
    }
    out += "\n";
    char buf[64];
    for (const auto& row : rows) {
      if (row.size() != columns.size()) {
        throw std::logic_error("SweepTable: row width mismatch in " + name);
      }
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ",";
        std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
        out += buf;
      }
      out += "\n";
    }
    for (const auto& line : footer) {
      out += "# ";
      out += line;
      out += "\n";
    }
    return out;
  }
};

// Full run record: certificates, tables, and the configuration echo. Contains
// no wall-clock data, so identical inputs serialize to identical bytes;
// timings go to a separate file.
struct Report {
  std::string tool;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<Certificate> certificates;
  std::vector<SweepTable> tables;

  Report() : tool(kToolVersion) {}

  bool all_pass() const {
    for (const auto& c : certificates) {
      if (!c.pass) return false;
    }
    return true;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = tool;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_echo) cfg[k] = v;
    j["config"] = std::move(cfg);
    j["certificates"] = nlohmann::ordered_json::array();
    for (const auto& c : certificates) j["certificates"].push_back(c.to_json());
    j["tables"] = nlohmann::ordered_json::array();
    for (const auto& t : tables) {
      nlohmann::ordered_json jt;
      jt["name"] = t.name;
      jt["schema"] = kCsvSchemaVersion;
      jt["columns"] = t.columns;
      jt["rows"] = t.rows;
      jt["footer"] = t.footer;
      j["tables"].push_back(std::move(jt));
    }
    j["all_pass"] = all_pass();
    return j;
  }

  std::string to_json_text() const { return to_json().dump(2) + "\n"; }

  // Writes report.json plus one CSV per table into `dir`.
  void write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", to_json_text());
    for (const auto& t : tables) {
      write_text(dir / (t.name + ".csv"), t.to_csv());
    }
  }

  static void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
  }
};

// Wall-clock bookkeeping, kept out of the Report so reports stay
// byte-reproducible. Serialized separately as timing.json.
class StageTimer {
 public:
  void start(const std::string& stage) {
    stage_ = stage;
    t0_ = std::chrono::steady_clock::now();
  }
  void stop() {
    const auto t1 = std::chrono::steady_clock::now();
    stages_.emplace_back(stage_, std::chrono::duration<double>(t1 - t0_).count());
  }

  void write(const std::filesystem::path& dir) const {
    nlohmann::ordered_json j;
    for (const auto& [name, sec] : stages_) j[name] = sec;
    Report::write_text(dir / "timing.json", j.dump(2) + "\n");
  }

  const std::vector<std::pair<std::string, double>>& stages() const { return stages_; }

 private:
  std::string stage_;
  std::chrono::steady_clock::time_point t0_;
  std::vector<std::pair<std::string, double>> stages_;
};

}  // namespace aflab
