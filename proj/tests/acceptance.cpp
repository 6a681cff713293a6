// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and carries its own time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "aflab/runner.hpp"

using namespace aflab;

namespace {

int failures = 0;

struct Clock {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report_line(int idx, const char* what, bool ok, double sec, double budget) {
  const bool in_time = sec <= budget;
  if (!(ok && in_time)) ++failures;
  std::printf("criterion %d (%s): %s (%.2fs, budget %.0fs)\n", idx, what,
              ok ? (in_time ? "PASS" : "FAIL [over budget]") : "FAIL", sec, budget);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

// --- criterion 1: closed-form integrals against independent quadrature ------

bool criterion1() {
  bool ok = true;
  for (double beta : {0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 500.0, 1000.0}) {
    BetaProfile bp(beta);
    const auto cf = beta_integrals_closed_form(beta);
    const double grad_num = integrate_to_inf(
        [&bp](double r) { return bp.ds(r) * bp.ds(r) * 4.0 * kPi * r * r; }, 1.0,
        {1e-13, 1e-13, 2000, 16}, 10.0 * beta);
    const double l6_num = integrate_to_inf(
        [&bp](double r) { return std::pow(bp.s(r), 6.0) * 4.0 * kPi * r * r; }, 1.0,
        {1e-13, 1e-13, 2000, 16}, 10.0 * beta);
    ok = ok && std::abs(grad_num / cf.grad_integral - 1.0) <= 1e-9;
    ok = ok && std::abs(l6_num / cf.l6_integral - 1.0) <= 1e-9;
  }
  // fourth-order remainder decay: the documented expansion remainder of the
  // gradient integral shrinks by ~16 under beta doubling, and the quotient
  // residual after the beta^-3 term decays at least as fast (it is ~ beta^-5)
  auto grad_resid = [](double beta) {
    return beta_integrals_closed_form(beta).grad_integral -
           0.75 * kPi * kPi * (beta + 1.0 / beta);
  };
  for (double beta : {50.0, 100.0, 200.0}) {
    const double ratio = grad_resid(beta) / grad_resid(2.0 * beta);
    ok = ok && std::abs(ratio) > 12.8 && std::abs(ratio) < 19.2;
  }
  auto q_resid = [](double beta) {
    return sobolev_quotient_expansion(beta) - euclidean_constant() -
           quotient_leading_coefficient() / (beta * beta * beta);
  };
  for (double beta : {10.0, 20.0, 40.0}) {
    const double ratio = q_resid(beta) / q_resid(2.0 * beta);
    ok = ok && std::abs(ratio) > 12.8;
  }
  return ok;
}

// --- criterion 2: exact flat-space equalities --------------------------------

bool criterion2() {
  bool ok = true;
  const RadialMetric flat = RadialMetric::flat();

  CapacitaryPotential cap(flat, 1.0);
  for (double t : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    ok = ok && std::abs(flux_W(cap, t) / (4.0 * kPi) - 1.0) <= 1e-8;
  }
  const auto miao = check_miao_bound(cap);
  ok = ok && miao.pass && std::abs(miao.margin) <= 1e-8;

  const auto wcert = willmore_certificate(flat, 1.0, 0.0);
  ok = ok && wcert.pass && std::abs(wcert.lhs / (16.0 * kPi) - 1.0) <= 1e-8;
  ok = ok && std::abs(wcert.margin) <= 1e-6;

  const auto prof = profile_centered(flat);
  ok = ok && prof.vol.front() < 1e-3 && prof.vol.back() > 1e3;  // six decades
  const double c_iso = euclidean_iso_constant();
  for (std::size_t i = 0; i < prof.x.size(); ++i) {
    const double exact = c_iso * std::pow(prof.vol[i], 2.0 / 3.0);
    ok = ok && std::abs(prof.area[i] / exact - 1.0) <= 1e-9;
  }

  for (double beta : {0.5, 3.0, 10.0}) {
    BetaProfile bp(beta);
    const double q = sobolev_quotient(
        flat, [&bp](double r) { return bp.s(r); }, [&bp](double r) { return bp.ds(r); });
    ok = ok && std::abs(q / euclidean_constant() - 1.0) <= 1e-8;
  }

  RhoMap map(flat);
  EntropyDatum d;
  d.metric = flat;
  d.tau = 1.0;
  d.x_max = map.x_of_rho(std::sqrt(800.0)) + 10.0;
  d.u = [&map](double r) {
    const double rho = map.rho(r);
    return std::exp(-rho * rho / 8.0);
  };
  d.du = [&map](double r) {
    const double rho = map.rho(r);
    return -std::exp(-rho * rho / 8.0) * rho * map.drho(r) / 4.0;
  };
  const auto w = w_functional(d);
  ok = ok && std::abs(w.u_form) <= 1e-8 && std::abs(w.f_form) <= 1e-8;
  return ok;
}

// --- criterion 3: conformal limit identities ---------------------------------

bool criterion3() {
  const ConformalFactor f = limit_profile_factor();
  return check_pde(f).pass && check_norms(f).pass && check_sobolev_equality(f).pass &&
         check_round_sphere(f).pass;
}

// --- criteria 4 and 5: pipeline corpus and the stability exponent ------------

bool criterion4(const std::vector<detail::MetricRun>& runs) {
  bool ok = runs.size() == 5;
  std::vector<double> deltas, eps, gaps;
  for (const auto& r : runs) {
    for (const auto& c : r.certificates) {
      ok = ok && c.margin >= -1e-6;
    }
    deltas.push_back(r.delta_hat);
    eps.push_back(r.epsilon_raw);
    gaps.push_back(1.0 - r.eta_iso);
  }
  return ok && strictly_decreasing(deltas) && strictly_decreasing(eps) &&
         strictly_decreasing(gaps);
}

bool criterion5(const std::vector<detail::MetricRun>& runs) {
  std::vector<double> xs, ys;
  for (const auto& r : runs) {
    if (r.delta_hat > 0.0 && r.delta_hat <= 0.02 && std::isfinite(r.epsilon_raw)) {
      xs.push_back(r.delta_hat);
      ys.push_back(r.epsilon_raw);
    }
  }
  if (xs.size() < 3) return false;
  const auto fit = detail::log_log_fit(xs, ys);
  return fit.slope >= 0.6 && fit.slope <= 0.75;
}

// --- criterion 6: d_p metric study -------------------------------------------

bool criterion6() {
  RunConfig cfg;  // 16 shells, design order 5, p in {4, 6, 10}
  cfg.out_dir.clear();
  StageTimer timer;
  const Report rep = run_dp(cfg, timer);
  bool ok = rep.all_pass();
  for (const auto& t : rep.tables) {
    if (t.name != "dp_family_trend") continue;
    std::vector<double> vol_gap, distortion;
    for (const auto& row : t.rows) {
      vol_gap.push_back(row[3]);
      distortion.push_back(row[4]);
    }
    ok = ok && t.rows.size() == cfg.masses.size();
    ok = ok && strictly_decreasing(vol_gap) && strictly_decreasing(distortion);
  }
  return ok;
}

// --- criterion 7: byte-identical reruns --------------------------------------

bool criterion7() {
  RunConfig cfg;
  cfg.masses = {0.1, 0.03};
  cfg.sobolev_grid = 512;
  cfg.entropy_grid = 512;
  cfg.iso_samples = 128;
  cfg.capacity_samples = 200;
  cfg.with_dp = false;
  StageTimer t1, t2;
  const Report a = run_sweep(cfg, t1);
  const Report b = run_sweep(cfg, t2);
  if (a.to_json_text() != b.to_json_text()) return false;
  if (a.tables.size() != b.tables.size()) return false;
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    if (a.tables[i].to_csv() != b.tables[i].to_csv()) return false;
  }
  return true;
}

}  // namespace

int main() {
  {
    Clock c;
    const bool ok = criterion1();
    report_line(1, "closed-form oracles", ok, c.seconds(), 5.0);
  }
  {
    Clock c;
    const bool ok = criterion2();
    report_line(2, "flat equality suite", ok, c.seconds(), 10.0);
  }
  {
    Clock c;
    const bool ok = criterion3();
    report_line(3, "conformal limit suite", ok, c.seconds(), 5.0);
  }
  {
    // one corpus pass feeds both the monotonicity and exponent criteria;
    // criterion 4 uses exactly the five heaviest masses, criterion 5 adds the
    // two small-deficit points that sit inside the fit window
    Clock c;
    RunConfig cfg;
    cfg.masses = {1.0, 0.3, 0.1, 0.03, 0.01};
    const auto runs5 = detail::run_corpus(cfg);
    const bool ok4 = criterion4(runs5);
    const double sec4 = c.seconds();
    report_line(4, "pipeline corpus", ok4, sec4, 300.0);

    Clock c5;
    auto runs = runs5;
    runs.push_back(detail::run_chain(cfg, 0.003));
    runs.push_back(detail::run_chain(cfg, 0.001));
    const bool ok5 = criterion5(runs);
    report_line(5, "stability exponent", ok5, sec4 + c5.seconds(), 300.0);
  }
  {
    Clock c;
    const bool ok = criterion6();
    report_line(6, "d_p metric study", ok, c.seconds(), 600.0);
  }
  {
    Clock c;
    const bool ok = criterion7();
    report_line(7, "byte-identical reruns", ok, c.seconds(), 300.0);
  }
  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failed\n", failures);
  return 1;
}
