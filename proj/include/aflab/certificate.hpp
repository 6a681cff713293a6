#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace aflab {

// Audited record of one inequality instance. `margin` is oriented so that
// nonnegative means the inequality holds; `pass` allows `margin >= -tol`.
struct Certificate {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 1e-9;
  bool pass = false;
  std::map<std::string, double> params;
  std::vector<std::string> flags;  // caveats, e.g. "centered_ball_surrogate"

  static Certificate make(std::string name, double lhs, double rhs, double margin,
                          double tol) {
    Certificate c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = margin;
    c.tol = tol;
    c.pass = margin >= -tol;
    return c;
  }

  Certificate& with(const std::string& key, double value) {
    params[key] = value;
    return *this;
  }

  Certificate& flag(std::string f) {
    flags.push_back(std::move(f));
    return *this;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["margin"] = margin;
    j["tol"] = tol;
    j["pass"] = pass;
    j["params"] = params;
    j["flags"] = flags;
    return j;
  }
};

}  // namespace aflab
