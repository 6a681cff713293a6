#include <doctest.h>

#include <cstdlib>
#include <set>
#include <string>

#include "aflab/config.hpp"
#include "aflab/report.hpp"

using namespace aflab;

TEST_CASE("ini parsing: sections, comments, whitespace") {
  const auto c = Config::parse(
      "# leading comment\n"
      "[metric]\n"
      "family = flat   ; trailing comment\n"
      "masses = 1, 0.3 , 0.1\n"
      "\n"
      "[output]\n"
      "jobs=4\n");
  CHECK(c.get_string("metric", "family", "") == "flat");
  CHECK(c.get_int("output", "jobs", 1) == 4);
  const auto masses = c.get_list("metric", "masses", {});
  REQUIRE(masses.size() == 3);
  CHECK(masses[1] == doctest::Approx(0.3));
  CHECK(c.get_double("metric", "absent", 2.5) == 2.5);
}

TEST_CASE("malformed lines are hard errors") {
  CHECK_THROWS_AS((void)Config::parse("[metric\nfamily = flat\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse("[]\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse("[m]\nno_equals_sign\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse("[m]\n= value\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse("key = outside_section\n"), ConfigError);
  CHECK_THROWS_AS((void)Config::parse_file("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("typed getters reject junk") {
  const auto c = Config::parse(
      "[t]\n"
      "d = 1.5x\n"
      "i = 7.2\n"
      "b = maybe\n"
      "l = ,\n");
  CHECK_THROWS_AS((void)c.get_double("t", "d", 0.0), ConfigError);
  CHECK_THROWS_AS((void)c.get_int("t", "i", 0), ConfigError);
  CHECK_THROWS_AS((void)c.get_bool("t", "b", false), ConfigError);
  CHECK_THROWS_AS((void)c.get_list("t", "l", {1.0}), ConfigError);
}

TEST_CASE("unknown keys fail validation") {
  const auto c = Config::parse("[metric]\nfamly = flat\n");
  CHECK_THROWS_AS(c.validate({"metric.family"}), ConfigError);
  const auto ok = Config::parse("[metric]\nfamily = flat\n");
  CHECK_NOTHROW(ok.validate({"metric.family"}));
}

TEST_CASE("environment variables override file values") {
  auto c = Config::parse("[output]\njobs = 2\n");
  setenv("AFLAB_OUTPUT_JOBS", "8", 1);
  c.apply_env_overrides({"output.jobs"});
  unsetenv("AFLAB_OUTPUT_JOBS");
  CHECK(c.get_int("output", "jobs", 1) == 8);
}

TEST_CASE("csv serialization is versioned and strict about widths") {
  SweepTable t;
  t.name = "sweep";
  t.columns = {"mass", "delta"};
  t.rows = {{1.0, 0.5}, {0.3, 0.25}};
  t.footer = {"slope = 0.7"};
  const std::string csv = t.to_csv();
  CHECK(csv.rfind("# aflab-csv v1 sweep\n", 0) == 0);
  CHECK(csv.find("mass,delta\n") != std::string::npos);
  CHECK(csv.find("# slope = 0.7\n") != std::string::npos);
  t.rows.push_back({1.0});
  CHECK_THROWS_AS((void)t.to_csv(), std::logic_error);
}

TEST_CASE("certificate json carries the full audit record") {
  auto c = Certificate::make("demo", 2.0, 1.0, 1.0, 1e-9).with("beta", 3.0);
  c.flag("caveat");
  const auto j = c.to_json();
  CHECK(j["name"] == "demo");
  CHECK(j["lhs"] == 2.0);
  CHECK(j["margin"] == 1.0);
  CHECK(j["pass"] == true);
  CHECK(j["params"]["beta"] == 3.0);
  CHECK(j["flags"][0] == "caveat");
  CHECK_FALSE(Certificate::make("bad", 0.0, 1.0, -1.0, 1e-9).pass);
}

TEST_CASE("report serialization is deterministic") {
  Report r;
  r.config_echo = {{"metric.family", "flat"}};
  r.certificates.push_back(Certificate::make("a", 1.0, 1.0, 0.0, 1e-9));
  SweepTable t;
  t.name = "tbl";
  t.columns = {"x"};
  t.rows = {{0.1234567890123456789}};
  r.tables.push_back(t);
  const std::string s1 = r.to_json_text();
  const std::string s2 = r.to_json_text();
  CHECK(s1 == s2);
  CHECK(r.all_pass());
  r.certificates.push_back(Certificate::make("b", 0.0, 1.0, -1.0, 1e-9));
  CHECK_FALSE(r.all_pass());
}
