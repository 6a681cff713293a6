#include <doctest.h>

#include <string>

#include "aflab/runner.hpp"

using namespace aflab;

TEST_CASE("run config defaults and overrides") {
  const auto rc = load_run_config(Config{});
  CHECK(rc.family == "smoothed_schwarzschild");
  CHECK(rc.masses.size() == 7);
  CHECK(rc.design_order == 5);
  CHECK(rc.jobs == 1);

  const auto c = Config::parse(
      "[metric]\nfamily = flat\nmasses = 0.5\n"
      "[output]\njobs = 3\ndir = /tmp/x\n");
  const auto rc2 = load_run_config(c);
  CHECK(rc2.family == "flat");
  CHECK(rc2.masses.size() == 1);
  CHECK(rc2.jobs == 3);
  CHECK(rc2.out_dir == "/tmp/x");
}

TEST_CASE("invalid run configs are rejected") {
  CHECK_THROWS_AS((void)load_run_config(Config::parse("[metric]\nfamily = torus\n")),
                  ConfigError);
  CHECK_THROWS_AS((void)load_run_config(Config::parse("[checks]\nfixture = explode\n")),
                  ConfigError);
  CHECK_THROWS_AS((void)load_run_config(Config::parse("[dp]\ndesign_order = 4\n")),
                  ConfigError);
  CHECK_THROWS_AS((void)load_run_config(Config::parse("[dp]\np_values = 2.5\n")),
                  ConfigError);
  CHECK_THROWS_AS((void)load_run_config(Config::parse("[tolerances]\ntol_scale = 0\n")),
                  ConfigError);
  CHECK_THROWS_AS((void)load_run_config(Config::parse("[metric]\nbogus = 1\n")),
                  ConfigError);
}

TEST_CASE("verify on flat space: every certificate passes") {
  RunConfig cfg;
  cfg.family = "flat";
  cfg.masses = {0.0};
  cfg.sobolev_grid = 512;
  cfg.entropy_grid = 512;
  cfg.iso_samples = 128;
  cfg.capacity_samples = 200;
  StageTimer timer;
  const auto rep = run_verify(cfg, timer);
  CHECK(rep.certificates.size() >= 10);
  for (const auto& c : rep.certificates) {
    INFO(c.name, " margin=", c.margin);
    CHECK(c.pass);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("forced epsilon fixture fails the willmore bound on a curved metric") {
  RunConfig cfg;
  cfg.masses = {0.3};
  cfg.fixture = "force_epsilon_zero";
  cfg.sobolev_grid = 512;
  cfg.entropy_grid = 512;
  cfg.iso_samples = 128;
  cfg.capacity_samples = 200;
  StageTimer timer;
  const auto rep = run_verify(cfg, timer);
  CHECK_FALSE(rep.all_pass());
  bool found = false;
  for (const auto& c : rep.certificates) {
    if (c.name == "willmore_lower_bound") {
      found = true;
      CHECK_FALSE(c.pass);
    }
  }
  CHECK(found);
}
