#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "aflab/metric.hpp"
#include "aflab/profile.hpp"
#include "aflab/quadrature.hpp"
#include "aflab/willmore.hpp"

namespace aflab {

// Quotient int |grad v|^2_g dv / (int v^6 dv)^{1/3} for a radial test function
// given by callables (value, derivative) on the coordinate radius.
// Conformal form: int u^2 v'^2 4 pi r^2 dr over (int u^6 v^6 4 pi r^2 dr)^{1/3}.
template <typename F, typename DF>
double sobolev_quotient(const RadialMetric& m, const F& v, const DF& dv,
                        QuadOptions opt = {}) {
  const double scale = m.length_scale();
  double num, den;
  if (m.form() == MetricForm::conformal) {
    auto grad_integrand = [&](double r) {
      const double u = m.factor(r);
      const double d = dv(r);
      return 4.0 * kPi * u * u * d * d * r * r;
    };
    auto l6_integrand = [&](double r) {
      const double u = m.factor(r);
      const double val = v(r);
      return 4.0 * kPi * std::pow(u, 6.0) * std::pow(val, 6.0) * r * r;
    };
    num = integrate_to_inf(grad_integrand, 0.0, opt, 10.0 * scale);
    den = integrate_to_inf(l6_integrand, 0.0, opt, 10.0 * scale);
  } else {
    auto grad_integrand = [&](double s) {
      const double d = dv(s);
      return d * d * sphere_area(m, s);
    };
    auto l6_integrand = [&](double s) {
      return std::pow(v(s), 6.0) * sphere_area(m, s);
    };
    num = integrate(grad_integrand, 0.0, m.domain_max(), opt);
    den = integrate(l6_integrand, 0.0, m.domain_max(), opt);
  }
  if (!(den > 0.0) || !std::isfinite(num) || !std::isfinite(den)) {
    throw std::domain_error("sobolev_quotient: non-convergent integrals");
  }
  return num / std::cbrt(den);
}

// Quotient of a sampled profile. Outside the sampled window the profile is
// continued by a constant at the core and the harmonic tail C/r at infinity,
// matching the decay of every admissible minimizer.
inline double sobolev_quotient(const RadialMetric& m, const RadialProfile& p,
                               QuadOptions opt = {}) {
  const double r_lo = p.domain_min();
  const double r_hi = p.domain_max();
  const double c_tail = p(r_hi) * r_hi;
  auto v = [&p, r_lo, r_hi, c_tail](double r) {
    if (r <= r_lo) return p(r_lo);
    if (r >= r_hi) return c_tail / r;
    return p(r);
  };
  auto dv = [&p, r_lo, r_hi, c_tail](double r) {
    if (r <= r_lo) return 0.0;
    if (r >= r_hi) return -c_tail / (r * r);
    return p.derivative(r);
  };
  return sobolev_quotient(m, v, dv, opt);
}

struct SobolevResult {
  double quotient = 0.0;
  double deficit = 0.0;  // Lambda - quotient
  RadialProfile minimizer;
  int iterations = 0;
  double residual = 0.0;  // scale-invariant first-order stationarity
  int best_seed = -1;
  std::vector<double> seed_quotients;
};

namespace detail {

// Discretized quotient on a fixed log grid: piecewise-linear elements with
// midpoint metric weights, plus analytic core and tail contributions.
class DiscreteQuotient {
 public:
  DiscreteQuotient(const RadialMetric& m, std::vector<double> grid)
      : grid_(std::move(grid)) {
    const std::size_t n = grid_.size();
    wg_.resize(n - 1);
    wf_.resize(n - 1);
    mid_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = grid_[i + 1] - grid_[i];
      const double rm = 0.5 * (grid_[i] + grid_[i + 1]);
      const double u = m.factor(rm);
      mid_[i] = rm;
      wg_[i] = 4.0 * kPi * u * u * rm * rm * h;
      wf_[i] = 4.0 * kPi * std::pow(u, 6.0) * rm * rm * h;
    }
    // core: v constant, only the L6 term contributes
    core_f_ = integrate(
        [&m](double r) { return 4.0 * kPi * std::pow(m.factor(r), 6.0) * r * r; }, 0.0,
        grid_.front());
    // tail: v = v_N r_N / r
    const double rN = grid_.back();
    tail_g_ = rN * rN *
              integrate_to_inf(
                  [&m](double r) {
                    const double u = m.factor(r);
                    return 4.0 * kPi * u * u / (r * r);
                  },
                  rN, {}, 2.0 * rN);
    tail_f_ = std::pow(rN, 6.0) *
              integrate_to_inf(
                  [&m](double r) {
                    return 4.0 * kPi * std::pow(m.factor(r), 6.0) / std::pow(r, 4.0);
                  },
                  rN, {}, 2.0 * rN);
  }

  const std::vector<double>& grid() const { return grid_; }

  double energy(const std::vector<double>& v) const {
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double h = grid_[i + 1] - grid_[i];
      const double d = (v[i + 1] - v[i]) / h;
      e += wg_[i] * d * d;
    }
    e += tail_g_ * v.back() * v.back();
    return e;
  }

  double mass(const std::vector<double>& v) const {
    double f = core_f_ * std::pow(v.front(), 6.0);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double vm = 0.5 * (v[i] + v[i + 1]);
      f += wf_[i] * std::pow(vm, 6.0);
    }
    f += tail_f_ * std::pow(v.back(), 6.0);
    return f;
  }

  double quotient(const std::vector<double>& v) const {
    return energy(v) / std::cbrt(mass(v));
  }

  // grad Q = F^{-1/3} (grad E - (E / 3F) grad F)
  std::vector<double> gradient(const std::vector<double>& v) const {
    const std::size_t n = v.size();
    std::vector<double> ge(n, 0.0), gf(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = grid_[i + 1] - grid_[i];
      const double d = (v[i + 1] - v[i]) / h;
      const double t = 2.0 * wg_[i] * d / h;
      ge[i] -= t;
      ge[i + 1] += t;
      const double vm = 0.5 * (v[i] + v[i + 1]);
      const double s = 3.0 * wf_[i] * std::pow(vm, 5.0);
      gf[i] += s;
      gf[i + 1] += s;
    }
    ge[n - 1] += 2.0 * tail_g_ * v[n - 1];
    gf[0] += 6.0 * core_f_ * std::pow(v[0], 5.0);
    gf[n - 1] += 6.0 * tail_f_ * std::pow(v[n - 1], 5.0);
    const double e = energy(v);
    const double f = mass(v);
    const double fac = std::pow(f, -1.0 / 3.0);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = fac * (ge[i] - e / (3.0 * f) * gf[i]);
    }
    return g;
  }

  // Diagonal of the stiffness part; the weights span many orders of magnitude
  // on a log grid, so stationarity is measured in this preconditioned metric.
  std::vector<double> stiffness_diagonal() const {
    const std::size_t n = grid_.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = grid_[i + 1] - grid_[i];
      d[i] += 2.0 * wg_[i] / (h * h);
      d[i + 1] += 2.0 * wg_[i] / (h * h);
    }
    d[n - 1] += 2.0 * tail_g_;
    return d;
  }

  // Tridiagonal stiffness K with E(v) = v^T K v, including the tail term.
  // K is an SPD M-matrix: the constant vector has positive energy through the
  // tail, and the off-diagonals are negative, so K^{-1} preserves positivity.
  void stiffness(std::vector<double>& diag, std::vector<double>& off) const {
    const std::size_t n = grid_.size();
    diag.assign(n, 0.0);
    off.assign(n - 1, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = grid_[i + 1] - grid_[i];
      const double k = wg_[i] / (h * h);
      diag[i] += k;
      diag[i + 1] += k;
      off[i] = -k;
    }
    diag[n - 1] += tail_g_;
  }

  // grad F: the right-hand side of the stationarity equation 2 K v = (E/3F) grad F.
  std::vector<double> mass_gradient(const std::vector<double>& v) const {
    const std::size_t n = v.size();
    std::vector<double> gf(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double vm = 0.5 * (v[i] + v[i + 1]);
      const double s = 3.0 * wf_[i] * std::pow(vm, 5.0);
      gf[i] += s;
      gf[i + 1] += s;
    }
    gf[0] += 6.0 * core_f_ * std::pow(v[0], 5.0);
    gf[n - 1] += 6.0 * tail_f_ * std::pow(v[n - 1], 5.0);
    return gf;
  }

 private:
  std::vector<double> grid_;
  std::vector<double> mid_, wg_, wf_;
  double core_f_ = 0.0, tail_g_ = 0.0, tail_f_ = 0.0;
};

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Damped inverse iteration on the stationarity equation 2 K v = (E/3F) grad F:
// each step solves the tridiagonal system K y = grad F(v) (a Thomas solve),
// rescales y to v's energy, and mixes v <- (1-theta) v + theta y with
// backtracking on theta so the quotient never increases. K^{-1} preserves
// positivity, so iterates stay nonnegative without projection, and the fixed
// point is exactly the discrete ground state.
struct DescentOutcome {
  std::vector<double> v;
  double quotient;
  int iterations;
  double residual;
};

inline DescentOutcome descend(const DiscreteQuotient& dq, std::vector<double> v,
                              int max_iter = 2000, double res_tol = 1e-8) {
  const std::vector<double> diag = dq.stiffness_diagonal();
  const std::size_t n = v.size();
  // scale-invariant stationarity measure in the preconditioned metric
  auto residual_of = [&](const std::vector<double>& g, const std::vector<double>& vv,
                         double q) {
    double gg = 0.0, vn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gg += g[i] * g[i] / diag[i];
      vn += vv[i] * vv[i] * diag[i];
    }
    return std::sqrt(gg * vn) / q;
  };

  std::vector<double> kd, ko;
  dq.stiffness(kd, ko);
  std::vector<double> cp(n), dv(n);
  auto thomas = [&](const std::vector<double>& b) {
    std::vector<double> y(n);
    cp[0] = ko[0] / kd[0];
    dv[0] = b[0] / kd[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double m = kd[i] - ko[i - 1] * cp[i - 1];
      if (i + 1 < n) cp[i] = ko[i] / m;
      dv[i] = (b[i] - ko[i - 1] * dv[i - 1]) / m;
    }
    y[n - 1] = dv[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) y[i] = dv[i] - cp[i] * y[i + 1];
    return y;
  };

  double q = dq.quotient(v);
  std::vector<double> g = dq.gradient(v);
  double res = residual_of(g, v, q);
  std::vector<double> trial(n);
  int it = 0;
  for (; it < max_iter && res > res_tol; ++it) {
    std::vector<double> y = thomas(dq.mass_gradient(v));
    const double c = std::sqrt(dq.energy(v) / dq.energy(y));
    for (double& t : y) t *= c;
    double theta = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = (1.0 - theta) * v[i] + theta * y[i];
      const double qt = dq.quotient(trial);
      if (qt <= q * (1.0 + 1e-15)) {
        v = trial;
        q = qt;
        accepted = true;
        break;
      }
      theta *= 0.5;
    }
    if (!accepted) break;
    g = dq.gradient(v);
    res = residual_of(g, v, q);
  }
  return {std::move(v), q, it, res};
}

}  // namespace detail

// Estimate of the optimal radial Sobolev quotient by multi-start descent on a
// log-grid discretization. Seeds are bubble pullbacks v = s_beta / u, which
// reduce to the exact Euclidean minimizers on flat space. The reported value
// re-evaluates every candidate with adaptive quadrature, so the discrete
// optimizer only has to locate the minimizer, not price it.
inline SobolevResult optimal_radial_constant(const RadialMetric& m, std::size_t grid_n = 2048,
                                             int max_iter = 2000) {
  if (m.form() != MetricForm::conformal) {
    throw std::invalid_argument("optimal_radial_constant: conformal form required");
  }
  const double scale = m.length_scale();
  const double r_lo = 1e-3 * scale;
  const double r_hi = 1e4 * scale;
  std::vector<double> grid(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) {
    grid[i] = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (grid_n - 1));
  }
  detail::DiscreteQuotient dq(m, grid);

  // beta < 1 seeds cover the weakly curved regime where the optimal bubble is
  // wider than the unit one.
  const std::vector<double> betas = {0.77, 1.0, 3.0, 10.0, 30.0};
  const double lam = euclidean_constant();

  SobolevResult out;
  double best_q = std::numeric_limits<double>::infinity();
  int seed_idx = 0;
  for (double beta : betas) {
    BetaProfile bp(beta);
    std::vector<double> v(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) {
      v[i] = bp.s(grid[i] / scale) / m.factor(grid[i]);
    }
    const double q_seed_disc = dq.quotient(v);
    auto outcome = detail::descend(dq, v, max_iter);
    if (outcome.quotient > q_seed_disc + 1e-12) {
      throw std::runtime_error("optimal_radial_constant: descent increased the quotient");
    }
    // accurate re-evaluation of both the seed and the descent output
    RadialProfile seed_prof(grid, std::move(v));
    RadialProfile min_prof(grid, outcome.v);
    const double q_seed = sobolev_quotient(m, seed_prof);
    const double q_min = sobolev_quotient(m, min_prof);
    out.seed_quotients.push_back(q_seed);
    for (auto [q, prof, its, res] :
         {std::tuple<double, RadialProfile*, int, double>{q_seed, &seed_prof, 0, 0.0},
          {q_min, &min_prof, outcome.iterations, outcome.residual}}) {
      if (q < best_q) {
        best_q = q;
        out.minimizer = *prof;
        out.iterations = its;
        out.residual = res;
        out.best_seed = seed_idx;
      }
    }
    ++seed_idx;
  }
  out.quotient = best_q;
  out.deficit = lam - best_q;
  return out;
}

}  // namespace aflab
