#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "aflab/capacity.hpp"
#include "aflab/config.hpp"
#include "aflab/conformal.hpp"
#include "aflab/dpmetric.hpp"
#include "aflab/entropy.hpp"
#include "aflab/isoperimetric.hpp"
#include "aflab/report.hpp"
#include "aflab/sobolev.hpp"
#include "aflab/willmore.hpp"

namespace aflab {

// Resolved run parameters. Defaults reproduce the reference corpus: the
// smoothed-Schwarzschild family at a = 1 with masses descending to the
// near-flat regime used by the stability-exponent fit.
struct RunConfig {
  std::string family = "smoothed_schwarzschild";
  std::vector<double> masses = {1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001};
  double smoothing = 1.0;

  double base_radius = 1.0;    // willmore/capacity base sphere, units of the length scale
  double delta_max = 10.0;     // chain validity ceiling fed to the epsilon map
  double fit_delta_max = 0.02; // rows entering the log-log exponent fit

  bool with_dp = true;
  std::string fixture = "none";  // none | force_epsilon_zero

  double tol_scale = 1.0;

  int sobolev_grid = 2048;
  int iso_samples = 256;
  int capacity_samples = 400;
  int entropy_grid = 1024;

  int dp_shells = 16;
  int design_order = 5;
  std::vector<double> p_values = {4.0, 6.0, 10.0};
  double dp_ball_radius = 1.0;
  int exponent_shells = 34;
  double exponent_radius = 16.0;
  unsigned seed = 20260823;

  std::string out_dir = "out";
  int jobs = 1;
};

inline const std::set<std::string>& config_schema() {
  static const std::set<std::string> schema = {
      "metric.family",        "metric.masses",        "metric.smoothing",
      "chain.base_radius",    "chain.delta_max",      "chain.fit_delta_max",
      "checks.dp",            "checks.fixture",
      "tolerances.tol_scale",
      "resolution.sobolev_grid", "resolution.iso_samples",
      "resolution.capacity_samples", "resolution.entropy_grid",
      "dp.shells",            "dp.design_order",      "dp.p_values",
      "dp.ball_radius",       "dp.exponent_shells",   "dp.exponent_radius",
      "dp.seed",
      "output.dir",           "output.jobs",
  };
  return schema;
}

inline RunConfig load_run_config(const Config& c) {
  c.validate(config_schema());
  RunConfig rc;
  rc.family = c.get_string("metric", "family", rc.family);
  if (rc.family != "flat" && rc.family != "smoothed_schwarzschild") {
    throw ConfigError("metric.family must be flat or smoothed_schwarzschild, got " + rc.family);
  }
  rc.masses = c.get_list("metric", "masses", rc.masses);
  rc.smoothing = c.get_double("metric", "smoothing", rc.smoothing);
  rc.base_radius = c.get_double("chain", "base_radius", rc.base_radius);
  rc.delta_max = c.get_double("chain", "delta_max", rc.delta_max);
  rc.fit_delta_max = c.get_double("chain", "fit_delta_max", rc.fit_delta_max);
  rc.with_dp = c.get_bool("checks", "dp", rc.with_dp);
  rc.fixture = c.get_string("checks", "fixture", rc.fixture);
  if (rc.fixture != "none" && rc.fixture != "force_epsilon_zero") {
    throw ConfigError("checks.fixture must be none or force_epsilon_zero, got " + rc.fixture);
  }
  rc.tol_scale = c.get_double("tolerances", "tol_scale", rc.tol_scale);
  rc.sobolev_grid = c.get_int("resolution", "sobolev_grid", rc.sobolev_grid);
  rc.iso_samples = c.get_int("resolution", "iso_samples", rc.iso_samples);
  rc.capacity_samples = c.get_int("resolution", "capacity_samples", rc.capacity_samples);
  rc.entropy_grid = c.get_int("resolution", "entropy_grid", rc.entropy_grid);
  rc.dp_shells = c.get_int("dp", "shells", rc.dp_shells);
  rc.design_order = c.get_int("dp", "design_order", rc.design_order);
  if (rc.design_order != 5) {
    throw ConfigError("dp.design_order: only the icosahedral 5-design is implemented");
  }
  rc.p_values = c.get_list("dp", "p_values", rc.p_values);
  rc.dp_ball_radius = c.get_double("dp", "ball_radius", rc.dp_ball_radius);
  rc.exponent_shells = c.get_int("dp", "exponent_shells", rc.exponent_shells);
  rc.exponent_radius = c.get_double("dp", "exponent_radius", rc.exponent_radius);
  rc.seed = static_cast<unsigned>(c.get_int("dp", "seed", static_cast<int>(rc.seed)));
  rc.out_dir = c.get_string("output", "dir", rc.out_dir);
  rc.jobs = c.get_int("output", "jobs", rc.jobs);
  for (double p : rc.p_values) {
    if (!(p > 3.0)) throw ConfigError("dp.p_values: every p must exceed 3");
  }
  if (!(rc.tol_scale > 0.0)) throw ConfigError("tolerances.tol_scale must be positive");
  if (rc.masses.empty()) throw ConfigError("metric.masses must be nonempty");
  return rc;
}

inline RadialMetric make_metric(const RunConfig& cfg, double mass) {
  if (cfg.family == "flat" || mass == 0.0) return RadialMetric::flat();
  return RadialMetric::smoothed_schwarzschild(mass, cfg.smoothing);
}

namespace detail {

struct LogFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

inline LogFit log_log_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  LogFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(xs[i]) && std::isfinite(ys[i])) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  const int n = static_cast<int>(lx.size());
  fit.points = n;
  if (n < 2) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  const double b = (sy - fit.slope * sx) / n;
  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.slope * lx[i] + b);
    ss_res += r * r;
  }
  if (n > 2) {
    fit.stderr_slope = std::sqrt(ss_res / (n - 2) / (sxx - sx * sx / n));
  }
  return fit;
}

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Results of the full inequality chain on one metric.
struct MetricRun {
  double mass = 0.0;
  std::vector<Certificate> certificates;
  double delta_hat = 0.0;
  double epsilon = 0.0;      // clamped chain bound
  double epsilon_raw = 0.0;  // unclamped, used for the exponent fit
  double willmore_min = 0.0;
  double iso_c = 0.0;
  double eta_willmore = 0.0;  // Willmore slack of the base sphere
  double eta_iso = 0.0;       // iso constant relative to Euclidean
  double mu = 0.0;
  double sobolev_residual = 0.0;
  int sobolev_iterations = 0;
};

inline MetricRun run_chain(const RunConfig& cfg, double mass) {
  MetricRun out;
  out.mass = mass;
  const RadialMetric metric = make_metric(cfg, mass);
  const double scale = metric.length_scale();
  const double r0 = cfg.base_radius * scale;
  const double tol = 1e-9 * cfg.tol_scale;

  // Sobolev deficit via the radial optimizer
  SobolevResult sob = optimal_radial_constant(metric, static_cast<std::size_t>(cfg.sobolev_grid));
  out.delta_hat = sob.deficit;
  out.sobolev_residual = sob.residual;
  out.sobolev_iterations = sob.iterations;
  {
    auto cert = Certificate::make("sobolev_deficit_nonnegative", sob.quotient,
                                  euclidean_constant(), sob.deficit, 1e-6 * cfg.tol_scale);
    cert.with("quotient", sob.quotient).with("iterations", sob.iterations);
    cert.flag("radial_upper_bound");
    out.certificates.push_back(cert);
    auto res_cert = Certificate::make("sobolev_stationarity", sob.residual, 1e-6,
                                      1e-6 * cfg.tol_scale - sob.residual, 0.0);
    out.certificates.push_back(res_cert);
  }

  // Capacity flow: W interpolation bound and the initial Miao-type bound
  CapacitaryPotential cap(metric, r0);
  out.certificates.push_back(check_W_monotonicity(cap, cfg.capacity_samples, 1e-3, 12.0, tol));
  out.certificates.push_back(check_miao_bound(cap, tol));

  // Willmore lower bound from the calibrated chain
  Certificate wcert =
      willmore_certificate(metric, r0, std::max(out.delta_hat, 0.0), cfg.delta_max, tol);
  out.epsilon = wcert.params.at("epsilon");
  out.epsilon_raw = wcert.params.at("epsilon_raw");
  if (cfg.fixture == "force_epsilon_zero") {
    // negative fixture: pretend the deficit certifies epsilon = 0, i.e. the
    // sphere must be exactly round; fails on every curved metric
    const double lhs = wcert.lhs;
    const double rhs = 16.0 * kPi;
    wcert = Certificate::make("willmore_lower_bound", lhs, rhs, lhs - rhs, tol);
    wcert.with("epsilon", 0.0).flag("negative_fixture");
  }
  out.certificates.push_back(wcert);
  out.eta_willmore = willmore_slack(metric, r0);

  // min Willmore energy over centered spheres spanning the bump and the tail
  out.willmore_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 64; ++i) {
    const double r = log_interp(0.1 * scale, 10.0 * scale, i, 64);
    out.willmore_min = std::min(out.willmore_min, willmore_energy_sphere(metric, r));
  }

  // Isoperimetric comparison with the chain epsilon (clamped into [0, 1/2))
  const double eps_iso = std::min(out.epsilon, 0.4999);
  IsoProfile prof = profile_centered(metric, static_cast<std::size_t>(cfg.iso_samples));
  {
    auto c1 = check_differential_inequality(prof, eps_iso, tol);
    auto c2 = compare_euclidean(prof, eps_iso, tol);
    if (out.epsilon > 0.4999) {
      c1.flag("epsilon_clamped_below_half");
      c2.flag("epsilon_clamped_below_half");
    }
    out.certificates.push_back(c1);
    out.certificates.push_back(c2);
  }
  out.iso_c = iso_constant(prof);
  out.eta_iso = std::min(out.iso_c / euclidean_iso_constant(), 1.0);

  // Entropy: rearrangement bundle on a concentrated bump, then mu >= 3 log eta
  RhoMap map(metric, static_cast<std::size_t>(cfg.entropy_grid));
  {
    const double L = scale;
    auto u = [&map, L](double x) {
      const double r = map.rho(x) / L;
      return std::pow(1.0 + r * r, -1.5);
    };
    auto du = [&map, L](double x) {
      const double r = map.rho(x) / L;
      return -3.0 * (r / L) * std::pow(1.0 + r * r, -2.5) * map.drho(x);
    };
    out.certificates.push_back(
        verify_rearrangement(metric, u, du, out.eta_iso, map, 1e3 * scale,
                             1e-8 * cfg.tol_scale, tol));
  }
  {
    MuEstimate mu = mu_estimate(metric, 1.0, map);
    out.mu = mu.value;
    const double bound = entropy_lower_bound(out.eta_iso);
    auto cert = Certificate::make("entropy_mu_lower_bound", mu.value, bound,
                                  mu.value - bound, tol);
    cert.with("eta", out.eta_iso).with("best_sigma", mu.best_sigma).with("tau", 1.0);
    cert.flag("upper_bound_family_estimate");
    out.certificates.push_back(cert);
  }
  return out;
}

inline std::vector<MetricRun> run_corpus(const RunConfig& cfg) {
  const std::vector<double> masses =
      cfg.family == "flat" ? std::vector<double>{0.0} : cfg.masses;
  std::vector<MetricRun> runs(masses.size());
  const int jobs = std::max(cfg.jobs, 1);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < masses.size(); ++i) runs[i] = run_chain(cfg, masses[i]);
    return runs;
  }
  // fan out, but assemble strictly in config order for determinism
  std::vector<std::future<MetricRun>> futs(masses.size());
  std::size_t next = 0;
  while (next < masses.size()) {
    const std::size_t batch = std::min<std::size_t>(jobs, masses.size() - next);
    for (std::size_t k = 0; k < batch; ++k) {
      const double m = masses[next + k];
      futs[next + k] = std::async(std::launch::async, [&cfg, m] { return run_chain(cfg, m); });
    }
    for (std::size_t k = 0; k < batch; ++k) runs[next + k] = futs[next + k].get();
    next += batch;
  }
  return runs;
}

inline void append_conformal_suite(Report& rep, double tol_scale) {
  const ConformalFactor f = limit_profile_factor();
  rep.certificates.push_back(check_pde(f, 1e-9 * tol_scale));
  rep.certificates.push_back(check_norms(f, 1e-8 * tol_scale));
  rep.certificates.push_back(check_sobolev_equality(f, 1e-8 * tol_scale));
  rep.certificates.push_back(check_round_sphere(f, 1e-8 * tol_scale));
}

inline void echo_config(Report& rep, const RunConfig& cfg, const std::string& command) {
  rep.config_echo.emplace_back("command", command);
  rep.config_echo.emplace_back("family", cfg.family);
  std::string ms;
  for (std::size_t i = 0; i < cfg.masses.size(); ++i) {
    if (i) ms += ",";
    ms += fmt(cfg.masses[i]);
  }
  rep.config_echo.emplace_back("masses", ms);
  rep.config_echo.emplace_back("smoothing", fmt(cfg.smoothing));
  rep.config_echo.emplace_back("tol_scale", fmt(cfg.tol_scale));
  rep.config_echo.emplace_back("sobolev_grid", std::to_string(cfg.sobolev_grid));
  rep.config_echo.emplace_back("dp_shells", std::to_string(cfg.dp_shells));
  rep.config_echo.emplace_back("fixture", cfg.fixture);
}

}  // namespace detail

// Full verification pipeline: per metric sobolev -> capacity -> willmore ->
// isoperimetric -> entropy, then the conformal limit suite once.
inline Report run_verify(const RunConfig& cfg, StageTimer& timer) {
  Report rep;
  detail::echo_config(rep, cfg, "verify");
  timer.start("chain");
  const auto runs = detail::run_corpus(cfg);
  timer.stop();
  for (const auto& r : runs) {
    for (Certificate c : r.certificates) {
      c.with("mass", r.mass);
      rep.certificates.push_back(std::move(c));
    }
  }
  timer.start("conformal");
  detail::append_conformal_suite(rep, cfg.tol_scale);
  timer.stop();
  return rep;
}

// Sweep table over the metric family plus the stability-exponent fit footer.
inline Report run_sweep(const RunConfig& cfg, StageTimer& timer) {
  Report rep;
  detail::echo_config(rep, cfg, "sweep");
  timer.start("chain");
  const auto runs = detail::run_corpus(cfg);
  timer.stop();

  SweepTable table;
  table.name = "sweep";
  table.columns = {"mass",        "smoothing",    "delta_hat",   "epsilon",
                   "epsilon_raw", "willmore_min", "iso_constant", "eta_willmore",
                   "eta_iso",     "mu",           "sobolev_residual"};

  const bool with_dp = cfg.with_dp && cfg.family != "flat";
  std::vector<double> dp_ps = cfg.p_values;
  if (with_dp) {
    for (double p : dp_ps) {
      table.columns.push_back("dp_ball_volume_p" + detail::fmt(p));
      table.columns.push_back("dp_ball_volume_gap_p" + detail::fmt(p));
    }
    table.columns.push_back("gh_distortion");
    table.columns.push_back("dp_max_gap");
  }

  // flat reference meshes/balls for the gap and distortion columns
  timer.start("dp_columns");
  const double mesh_r = 2.0 * cfg.dp_ball_radius;
  std::vector<DpBall> flat_balls;
  MeshGraph flat_mesh;
  if (with_dp) {
    flat_mesh = build_mesh(RadialMetric::flat(), mesh_r, cfg.dp_shells);
    for (double p : dp_ps) {
      flat_balls.push_back(dp_ball(flat_mesh, 0, cfg.dp_ball_radius, p));
    }
  }

  for (const auto& r : runs) {
    for (Certificate c : r.certificates) {
      c.with("mass", r.mass);
      rep.certificates.push_back(std::move(c));
    }
    std::vector<double> row = {r.mass,        cfg.smoothing,  r.delta_hat,   r.epsilon,
                               r.epsilon_raw, r.willmore_min, r.iso_c,       r.eta_willmore,
                               r.eta_iso,     r.mu,           r.sobolev_residual};
    if (with_dp) {
      const RadialMetric metric = make_metric(cfg, r.mass);
      MeshGraph mesh = build_mesh(metric, mesh_r, cfg.dp_shells);
      double max_gap = 0.0;
      double distortion = 0.0;
      for (std::size_t ip = 0; ip < dp_ps.size(); ++ip) {
        DpBall ball = dp_ball(mesh, 0, cfg.dp_ball_radius, dp_ps[ip]);
        row.push_back(ball.volume);
        row.push_back(std::abs(ball.volume - flat_balls[ip].volume));
        max_gap = std::max(max_gap, ball.max_gap);
        distortion = std::max(distortion, gh_distortion({ball.dist}, {flat_balls[ip].dist}));
      }
      row.push_back(distortion);
      row.push_back(max_gap);
    }
    table.rows.push_back(std::move(row));
  }
  timer.stop();

  // stability exponent: log-log fit of the unclamped chain bound vs the
  // measured deficit, restricted to the chain's asymptotic validity window
  std::vector<double> xs, ys;
  for (const auto& r : runs) {
    if (r.delta_hat > 0.0 && r.delta_hat <= cfg.fit_delta_max && std::isfinite(r.epsilon_raw)) {
      xs.push_back(r.delta_hat);
      ys.push_back(r.epsilon_raw);
    }
  }
  const auto fit = detail::log_log_fit(xs, ys);
  table.footer.push_back("epsilon_vs_delta_slope = " + detail::fmt(fit.slope));
  table.footer.push_back("epsilon_vs_delta_slope_stderr = " + detail::fmt(fit.stderr_slope));
  table.footer.push_back("epsilon_vs_delta_band = [" +
                         detail::fmt(fit.slope - 2.0 * fit.stderr_slope) + ", " +
                         detail::fmt(fit.slope + 2.0 * fit.stderr_slope) + "]");
  table.footer.push_back("fit_points = " + std::to_string(fit.points) +
                         " (delta_hat <= " + detail::fmt(cfg.fit_delta_max) + ")");
  rep.tables.push_back(std::move(table));

  timer.start("conformal");
  detail::append_conformal_suite(rep, cfg.tol_scale);
  timer.stop();
  return rep;
}

// d_p study: Euclidean exponent recovery, symmetry and triangle audits on the
// flat fixture, and the family trend at fixed radius.
inline Report run_dp(const RunConfig& cfg, StageTimer& timer) {
  Report rep;
  detail::echo_config(rep, cfg, "dp");

  // deep geometric mesh: radius 4x the largest target, inner cutoff deep
  // enough that the slow (r_min/r)^{1-3/p} bias is negligible at p = 4
  timer.start("exponent_recovery");
  const RadialMetric flat = RadialMetric::flat();
  MeshGraph deep = build_mesh(flat, cfg.exponent_radius, cfg.exponent_shells,
                              cfg.exponent_radius / 1048576.0);
  SweepTable exp_table;
  exp_table.name = "dp_exponent";
  exp_table.columns = {"p", "r", "primal", "dual", "rel_gap", "ratio"};
  for (double p : cfg.p_values) {
    std::vector<double> xs, ys;
    double worst_gap = 0.0;
    for (int k = 0; k < deep.nshells; ++k) {
      const int v = deep.vertex(k, 0);
      const double r = deep.radius[v];
      if (r < 0.24 || r > 4.01) continue;
      DpSolution s = dp_distance(deep, 0, v, p);
      const double rel_gap = s.gap / std::max(s.dual, 1e-300);
      worst_gap = std::max(worst_gap, rel_gap);
      exp_table.rows.push_back(
          {p, r, s.primal, s.dual, rel_gap, s.primal / std::pow(r, 1.0 - 3.0 / p)});
      xs.push_back(r);
      ys.push_back(s.primal);
    }
    const auto fit = detail::log_log_fit(xs, ys);
    const double target = 1.0 - 3.0 / p;
    exp_table.footer.push_back("p = " + detail::fmt(p) + ": slope = " + detail::fmt(fit.slope) +
                               ", target = " + detail::fmt(target) + ", rel_err = " +
                               detail::fmt(std::abs(fit.slope / target - 1.0)));
    auto cert = Certificate::make("dp_exponent_recovery_p" + detail::fmt(p), fit.slope, target,
                                  0.02 - std::abs(fit.slope / target - 1.0), 0.0);
    cert.with("p", p).with("worst_rel_gap", worst_gap);
    rep.certificates.push_back(cert);
    auto gap_cert = Certificate::make("dp_enclosure_gap_p" + detail::fmt(p), worst_gap, 0.05,
                                      0.05 - worst_gap, 0.0);
    gap_cert.with("p", p);
    rep.certificates.push_back(gap_cert);
  }
  rep.tables.push_back(std::move(exp_table));
  timer.stop();

  // symmetry and triangle audits on the working-resolution flat mesh
  timer.start("audits");
  MeshGraph mesh = build_mesh(flat, 2.0 * cfg.dp_ball_radius, cfg.dp_shells);
  const double p_mid = cfg.p_values[cfg.p_values.size() / 2];
  {
    const int va = mesh.vertex(cfg.dp_shells / 2, 1);
    const int vb = mesh.vertex(cfg.dp_shells / 3, 7);
    DpSolution ab = dp_distance(mesh, va, vb, p_mid);
    DpSolution ba = dp_distance(mesh, vb, va, p_mid);
    const double diff = std::abs(ab.primal - ba.primal);
    const double allowance = ab.gap + ba.gap + 1e-12 * ab.dual;
    auto cert = Certificate::make("dp_symmetry", ab.primal, ba.primal, allowance - diff, 0.0);
    cert.with("p", p_mid);
    rep.certificates.push_back(cert);
    if (!cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir);
      dump_solution((std::filesystem::path(cfg.out_dir) / "dp_solution.bin").string(), mesh, ab,
                    p_mid);
    }
  }
  {
    std::mt19937 rng(cfg.seed);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(mesh.size()) - 1);
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
      int xi = pick(rng), yi = pick(rng), zi = pick(rng);
      if (xi == yi || yi == zi || xi == zi) continue;
      DpSolution xz = dp_distance(mesh, xi, zi, p_mid);
      DpSolution xy = dp_distance(mesh, xi, yi, p_mid);
      DpSolution yz = dp_distance(mesh, yi, zi, p_mid);
      // triangle inequality audited through the enclosures: primal lower bound
      // of the long side against dual upper bounds of the two legs, with twice
      // the total enclosure width as allowance
      const double slack = xy.dual + yz.dual - xz.primal;
      const double allowance = 2.0 * (xy.gap + yz.gap + xz.gap);
      worst = std::min(worst, slack + allowance);
    }
    auto cert = Certificate::make("dp_triangle_audit", worst, 0.0, worst, 0.0);
    cert.with("p", p_mid).with("trials", 100.0).with("seed", static_cast<double>(cfg.seed));
    rep.certificates.push_back(cert);
  }
  timer.stop();

  // family trend at fixed radius: ball volume gap and distortion vs flat
  timer.start("family_trend");
  SweepTable trend;
  trend.name = "dp_family_trend";
  trend.columns = {"mass", "p", "ball_volume", "ball_volume_gap", "gh_distortion", "max_gap"};
  if (cfg.family != "flat") {
    DpBall flat_ball = dp_ball(mesh, 0, cfg.dp_ball_radius, p_mid);
    for (double m : cfg.masses) {
      MeshGraph gm = build_mesh(make_metric(cfg, m), 2.0 * cfg.dp_ball_radius, cfg.dp_shells);
      DpBall ball = dp_ball(gm, 0, cfg.dp_ball_radius, p_mid);
      trend.rows.push_back({m, p_mid, ball.volume,
                            std::abs(ball.volume - flat_ball.volume),
                            gh_distortion({ball.dist}, {flat_ball.dist}), ball.max_gap});
    }
  }
  rep.tables.push_back(std::move(trend));
  timer.stop();
  return rep;
}

}  // namespace aflab
