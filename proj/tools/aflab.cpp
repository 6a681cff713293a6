// Command-line runner for the verification laboratory.
//
// Subcommands:
//   verify  - run the full inequality chain per metric; exit 0 iff all pass
//   sweep   - emit the family sweep table with the stability-exponent fit
//   dp      - d_p exponent recovery, audits, family trend, binary dump
//   report  - re-serialize a config echo without running checks (dry run)
//
// Exit codes: 0 pass, 1 check failures, 2 config error, 3 numerical error.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "aflab/runner.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  int jobs = 0;
  double tol_scale = 0.0;
  int resolution = 0;
};

aflab::RunConfig resolve_config(const CliOptions& cli) {
  aflab::Config raw;
  if (!cli.config_path.empty()) {
    raw = aflab::Config::parse_file(cli.config_path);
  }
  raw.apply_env_overrides(aflab::config_schema());
  aflab::RunConfig cfg = aflab::load_run_config(raw);
  if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
  if (cli.jobs > 0) cfg.jobs = cli.jobs;
  if (cli.tol_scale > 0.0) cfg.tol_scale = cli.tol_scale;
  if (cli.resolution > 0) cfg.sobolev_grid = cli.resolution;
  return cfg;
}

int finish(const aflab::Report& rep, const aflab::RunConfig& cfg, aflab::StageTimer& timer) {
  rep.write(cfg.out_dir);
  timer.write(cfg.out_dir);
  int failed = 0;
  for (const auto& c : rep.certificates) {
    if (!c.pass) {
      ++failed;
      std::printf("FAIL %s (margin %.3e, tol %.3e)\n", c.name.c_str(), c.margin, c.tol);
    }
  }
  std::printf("%zu certificates, %d failed; report written to %s\n", rep.certificates.size(),
              failed, cfg.out_dir.c_str());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aflab: numerical verification laboratory for asymptotically flat radial metrics"};
  app.require_subcommand(1);

  CliOptions cli;
  app.add_option("--config", cli.config_path, "Path to the INI configuration file");
  app.add_option("--out", cli.out_dir, "Output directory (overrides output.dir)");
  app.add_option("--jobs", cli.jobs, "Worker count for independent metric runs");
  app.add_option("--tol-scale", cli.tol_scale, "Multiplier applied to certificate tolerances");
  app.add_option("--resolution", cli.resolution, "Sobolev optimizer grid size");

  auto* cmd_verify = app.add_subcommand("verify", "Run the full inequality chain");
  auto* cmd_sweep = app.add_subcommand("sweep", "Family sweep with exponent fit");
  auto* cmd_dp = app.add_subcommand("dp", "d_p distance study");
  auto* cmd_report = app.add_subcommand("report", "Echo the resolved configuration");
  for (auto* c : {cmd_verify, cmd_sweep, cmd_dp, cmd_report}) c->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const aflab::RunConfig cfg = resolve_config(cli);
    aflab::StageTimer timer;
    try {
      if (cmd_verify->parsed()) {
        return finish(aflab::run_verify(cfg, timer), cfg, timer);
      }
      if (cmd_sweep->parsed()) {
        return finish(aflab::run_sweep(cfg, timer), cfg, timer);
      }
      if (cmd_dp->parsed()) {
        return finish(aflab::run_dp(cfg, timer), cfg, timer);
      }
      if (cmd_report->parsed()) {
        aflab::Report rep;
        aflab::detail::echo_config(rep, cfg, "report");
        rep.write(cfg.out_dir);
        timer.write(cfg.out_dir);
        std::printf("configuration echoed to %s\n", cfg.out_dir.c_str());
        return 0;
      }
    } catch (const std::exception& e) {
      std::fprintf(stderr, "numerical error: %s\n", e.what());
      return 3;
    }
  } catch (const aflab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
