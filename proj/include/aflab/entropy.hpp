#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "aflab/certificate.hpp"
#include "aflab/metric.hpp"
#include "aflab/profile.hpp"
#include "aflab/quadrature.hpp"
#include "aflab/roots.hpp"

namespace aflab {

// Volume-radius coordinate rho(x): Euclidean radius of the ball with the same
// metric volume as the coordinate ball of radius x. Monotone; rho' follows
// from dV = A ds analytically, so no interpolant differentiation is involved.
class RhoMap {
 public:
  RhoMap(const RadialMetric& m, std::size_t n = 1024, double x_lo = 0.0, double x_hi = 0.0)
      : metric_(m) {
    if (m.form() != MetricForm::conformal) {
      throw std::invalid_argument("RhoMap: conformal form required");
    }
    const double scale = m.length_scale();
    if (x_lo <= 0.0) x_lo = 1e-4 * scale;
    if (x_hi <= 0.0) x_hi = 1e4 * scale;
    std::vector<double> xg(n), rho(n);
    double v = 0.0, prev = 0.0;
    auto integrand = [&m](double r) {
      return 4.0 * kPi * std::pow(m.factor(r), 6.0) * r * r;
    };
    for (std::size_t i = 0; i < n; ++i) {
      xg[i] = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (n - 1));
      v += integrate(integrand, prev, xg[i]);
      prev = xg[i];
      rho[i] = std::cbrt(3.0 * v / (4.0 * kPi));
    }
    table_ = RadialProfile(xg, rho);
    x_lo_ = x_lo;
    x_hi_ = x_hi;
    rho_lo_ = rho.front();
    rho_hi_ = rho.back();
  }

  double rho(double x) const {
    if (x <= x_lo_) return rho_lo_ * x / x_lo_;
    if (x >= x_hi_) {
      // AF continuation: volume grows at the Euclidean rate beyond the table
      return std::cbrt(rho_hi_ * rho_hi_ * rho_hi_ + x * x * x - x_hi_ * x_hi_ * x_hi_);
    }
    return table_(x);
  }

  double drho(double x) const {
    const double r = rho(x);
    const double u = metric_.factor(std::min(std::max(x, x_lo_ * 1e-6), 1e3 * x_hi_));
    return std::pow(u, 6.0) * x * x / (r * r);
  }

  double x_of_rho(double r) const {
    if (r <= rho_lo_) return x_lo_ * r / rho_lo_;
    if (r >= rho_hi_) {
      return std::cbrt(x_hi_ * x_hi_ * x_hi_ + r * r * r - rho_hi_ * rho_hi_ * rho_hi_);
    }
    return find_root([this, r](double x) { return table_(x) - r; }, x_lo_, x_hi_, 1e-14 * x_hi_);
  }

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }

 private:
  RadialMetric metric_;
  RadialProfile table_;
  double x_lo_ = 0.0, x_hi_ = 0.0, rho_lo_ = 0.0, rho_hi_ = 0.0;
};

// Radial weight for the Perelman functional: u with (4 pi tau)^{-3/2} int u^2 dv = 1.
struct EntropyDatum {
  RadialMetric metric;
  double tau = 1.0;
  std::function<double(double)> u;   // coordinate radius
  std::function<double(double)> du;
  double x_max = 0.0;  // integration cutoff; integrand negligible beyond
};

namespace detail {

// int_0^xmax G(r) dv_g for a conformal metric, radial integrand density G.
template <typename G>
double dv_integral(const RadialMetric& m, double x_max, const G& g) {
  auto integrand = [&](double r) {
    return g(r) * 4.0 * kPi * std::pow(m.factor(r), 6.0) * r * r;
  };
  return integrate(integrand, 0.0, x_max, {1e-12, 1e-12, 4000, 16});
}

}  // namespace detail

struct WValue {
  double u_form = 0.0;
  double f_form = 0.0;
};

// W(g, f, tau) evaluated two ways:
//   f-form: (4 pi tau)^{-3/2} int [tau(|grad f|^2 + R) + f - 3] e^{-f} dv
//   u-form: (4 pi tau)^{-3/2} int [4 tau |grad u|^2 + tau R u^2 - 2 u^2 log u - 3 u^2] dv
// with u^2 = e^{-f}. The R term is kept; it is nonnegative on the corpus.
inline WValue w_functional(const EntropyDatum& d, double norm_tol = 1e-6) {
  const RadialMetric& m = d.metric;
  if (m.form() != MetricForm::conformal) {
    throw std::invalid_argument("w_functional: conformal form required");
  }
  const double pref = std::pow(4.0 * kPi * d.tau, -1.5);
  const double mass = detail::dv_integral(m, d.x_max, [&](double r) {
    const double uu = d.u(r);
    return uu * uu;
  });
  if (std::abs(pref * mass - 1.0) > norm_tol) {
    throw std::invalid_argument("w_functional: datum not normalized");
  }

  WValue w;
  const double tau = d.tau;
  // u-form; |grad u|^2_g = u_c^{-4} (du/dr)^2
  w.u_form = pref * detail::dv_integral(m, d.x_max, [&](double r) {
    const double uu = d.u(r);
    if (uu < 1e-150) return 0.0;
    const double uc = m.factor(r);
    const double g2 = std::pow(uc, -4.0) * d.du(r) * d.du(r);
    const double R = scalar_curvature(m, r);
    return 4.0 * tau * g2 + tau * R * uu * uu - 2.0 * uu * uu * std::log(uu) -
           3.0 * uu * uu;
  });
  // f-form with f = -2 log u
  w.f_form = pref * detail::dv_integral(m, d.x_max, [&](double r) {
    const double uu = d.u(r);
    if (uu < 1e-150) return 0.0;
    const double uc = m.factor(r);
    const double f = -2.0 * std::log(uu);
    const double dfr = -2.0 * d.du(r) / uu;
    const double g2 = std::pow(uc, -4.0) * dfr * dfr;
    const double R = scalar_curvature(m, r);
    return (tau * (g2 + R) + f - 3.0) * uu * uu;
  });
  return w;
}

// Decreasing rearrangement onto flat space by exact volume transport,
// ubar(rho(x)) = u(x). Non-monotone input falls back to a 1024-level
// distribution-function rearrangement and is flagged.
struct Rearranged {
  RadialProfile ubar;  // on the Euclidean radius rho
  bool exact_transport = true;
  double rho_max = 0.0;
};

template <typename U>
Rearranged rearrange(const RadialMetric& m, const U& u, const RhoMap& map,
                     double x_max, std::size_t n = 4096) {
  std::vector<double> xg(n), uv(n);
  const double x_lo = std::min(1e-3 * x_max, map.x_lo());
  bool monotone = true;
  for (std::size_t i = 0; i < n; ++i) {
    xg[i] = x_lo * std::pow(x_max / x_lo, static_cast<double>(i) / (n - 1));
    uv[i] = u(xg[i]);
    if (i > 0 && uv[i] > uv[i - 1] + 1e-14 * std::abs(uv[i - 1])) monotone = false;
  }
  Rearranged out;
  if (monotone) {
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = map.rho(xg[i]);
    out.ubar = RadialProfile(rho, uv, SlopeRule::cubic);
    out.rho_max = rho.back();
    return out;
  }
  // fallback: mu(t) = Vol{u >= t} from a fine sample, then invert levels
  out.exact_transport = false;
  const std::size_t fine = 8192;
  std::vector<double> xs(fine + 1), us(fine + 1), cellv(fine);
  for (std::size_t i = 0; i <= fine; ++i) {
    xs[i] = x_lo * std::pow(x_max / x_lo, static_cast<double>(i) / fine);
    us[i] = u(xs[i]);
  }
  for (std::size_t i = 0; i < fine; ++i) {
    cellv[i] = integrate(
        [&m](double r) { return 4.0 * kPi * std::pow(m.factor(r), 6.0) * r * r; }, xs[i],
        xs[i + 1]);
  }
  double u_max = 0.0;
  for (double v : us) u_max = std::max(u_max, v);
  const std::size_t levels = 1024;
  std::vector<double> rho_l, ub_l;
  for (std::size_t k = 0; k < levels; ++k) {
    const double t = u_max * (1.0 - static_cast<double>(k + 1) / (levels + 1));
    double vol = 0.0;
    for (std::size_t i = 0; i < fine; ++i) {
      if (0.5 * (us[i] + us[i + 1]) >= t) vol += cellv[i];
    }
    const double r = std::cbrt(3.0 * vol / (4.0 * kPi));
    if (rho_l.empty() || r > rho_l.back() * (1.0 + 1e-12)) {
      rho_l.push_back(r);
      ub_l.push_back(t);
    }
  }
  out.ubar = RadialProfile(rho_l, ub_l, SlopeRule::monotone);
  out.rho_max = rho_l.back();
  return out;
}

// Bundle certificate: the two equimeasurability identities and the gradient
// inequality int |grad u|^2_g dv >= eta^2 int |grad ubar|^2 dx. The equality
// residuals are relative and enter the margin through eq_tol.
template <typename U, typename DU>
Certificate verify_rearrangement(const RadialMetric& m, const U& u, const DU& du,
                                 double eta, const RhoMap& map, double x_max,
                                 double eq_tol = 1e-8, double tol = 1e-9) {
  if (!(eta > 0.0) || !(eta <= 1.0)) {
    throw std::domain_error("verify_rearrangement: eta outside (0, 1]");
  }
  Rearranged re = rearrange(m, u, map, x_max);

  auto safe_l2log = [](double v) { return v < 1e-150 ? 0.0 : v * v * std::log(v); };
  const double l2_g = detail::dv_integral(m, x_max, [&](double r) {
    const double v = u(r);
    return v * v;
  });
  const double l2log_g = detail::dv_integral(m, x_max, [&](double r) { return safe_l2log(u(r)); });

  // Euclidean side evaluated independently through the rearranged profile
  const auto& ub = re.ubar;
  auto euc = [&](auto f) {
    return integrate(
        [&](double rho) { return f(ub(rho)) * 4.0 * kPi * rho * rho; }, ub.domain_min(),
        ub.domain_max(), {1e-12, 1e-12, 4000, 16});
  };
  const double l2_e = euc([](double v) { return v * v; }) +
                      (4.0 * kPi / 3.0) * std::pow(ub.domain_min(), 3.0) *
                          std::pow(ub(ub.domain_min()), 2.0);
  const double l2log_e = euc(safe_l2log) + (4.0 * kPi / 3.0) *
                                               std::pow(ub.domain_min(), 3.0) *
                                               safe_l2log(ub(ub.domain_min()));

  // gradient inequality; metric side int (du/ds)^2 A ds = int u_c^2 u'^2 4 pi r^2 dr
  const double grad_g = integrate(
      [&](double r) {
        const double uc = m.factor(r);
        const double d = du(r);
        return uc * uc * d * d * 4.0 * kPi * r * r;
      },
      0.0, x_max, {1e-12, 1e-12, 4000, 16});
  // Euclidean gradient by the exact transport identity:
  // int |grad ubar|^2 dx = int (du/ds)^2 (4 pi rho^2)^2 / A ds, no interpolant.
  const double grad_e = integrate(
      [&](double r) {
        const double uc = m.factor(r);
        const double d = du(r);
        const double rho = map.rho(r);
        return 4.0 * kPi * d * d * std::pow(rho, 4.0) / (std::pow(uc, 6.0) * r * r);
      },
      0.0, x_max, {1e-12, 1e-12, 4000, 16});

  const double res_l2 = std::abs(l2_g - l2_e) / std::max(l2_g, 1e-300);
  const double res_log = std::abs(l2log_g - l2log_e) / std::max(std::abs(l2log_g), 1e-12);
  const double grad_margin = (grad_g - eta * eta * grad_e) / std::max(grad_g, 1e-300);
  const double margin = std::min({grad_margin, eq_tol - res_l2, eq_tol - res_log});

  auto cert = Certificate::make("rearrangement_bundle", grad_g, eta * eta * grad_e, margin, tol);
  cert.with("eta", eta)
      .with("l2_metric", l2_g)
      .with("l2_euclidean", l2_e)
      .with("l2_residual", res_l2)
      .with("l2log_residual", res_log)
      .with("grad_margin", grad_margin);
  if (!re.exact_transport) cert.flag("distribution_function_fallback");
  return cert;
}

// mu(g, tau) >= 3 log eta with eta = c_iso / (36 pi)^{1/3}.
inline double entropy_lower_bound(double eta) {
  if (!(eta > 0.0) || !(eta <= 1.0)) {
    throw std::domain_error("entropy_lower_bound: eta outside (0, 1]");
  }
  return 3.0 * std::log(eta);
}

// Upper bound on mu(g, tau): min of W over a normalized test family of
// Gaussian pullbacks in the volume-radius coordinate (exactly normalized on
// every metric by equimeasurability) plus bubble-shaped bumps.
struct MuEstimate {
  double value = 0.0;
  double best_sigma = 0.0;
  std::vector<double> family_values;
};

inline MuEstimate mu_estimate(const RadialMetric& m, double tau, const RhoMap& map,
                              int sigma_points = 9) {
  if (!(tau > 0.0)) throw std::domain_error("mu_estimate: tau must be positive");
  MuEstimate out;
  out.value = std::numeric_limits<double>::infinity();

  for (int i = 0; i < sigma_points; ++i) {
    const double sigma = tau * log_interp(0.25, 4.0, i, sigma_points);
    // u = (tau/sigma)^{3/4} exp(-rho^2 / (8 sigma)); the shrinker at sigma = tau
    const double k = std::pow(tau / sigma, 0.75);
    EntropyDatum d;
    d.metric = m;
    d.tau = tau;
    d.x_max = map.x_of_rho(std::sqrt(800.0 * sigma)) + 10.0 * m.length_scale();
    d.u = [&map, k, sigma](double r) {
      const double rho = map.rho(r);
      return k * std::exp(-rho * rho / (8.0 * sigma));
    };
    d.du = [&map, k, sigma](double r) {
      const double rho = map.rho(r);
      return -k * std::exp(-rho * rho / (8.0 * sigma)) * rho * map.drho(r) / (4.0 * sigma);
    };
    const double w = w_functional(d).u_form;
    out.family_values.push_back(w);
    if (w < out.value) {
      out.value = w;
      out.best_sigma = sigma;
    }
  }

  // bubble-cubed bumps u ~ (1 + rho^2/L^2)^{-3/2}, u^2 integrable
  for (int i = 0; i < 5; ++i) {
    const double L = std::sqrt(tau) * log_interp(0.5, 8.0, i, 5);
    auto shape = [L](double rho) { return std::pow(1.0 + rho * rho / (L * L), -1.5); };
    const double mass_e = integrate_to_inf(
        [&](double rho) {
          const double s = shape(rho);
          return s * s * 4.0 * kPi * rho * rho;
        },
        0.0, {}, 4.0 * L);
    const double k = std::sqrt(std::pow(4.0 * kPi * tau, 1.5) / mass_e);
    EntropyDatum d;
    d.metric = m;
    d.tau = tau;
    d.x_max = map.x_of_rho(1e6 * L);
    d.u = [&map, shape, k](double r) { return k * shape(map.rho(r)); };
    d.du = [&map, k, L](double r) {
      const double rho = map.rho(r);
      return -3.0 * k * rho / (L * L) * std::pow(1.0 + rho * rho / (L * L), -2.5) *
             map.drho(r);
    };
    const double w = w_functional(d, 1e-5).u_form;
    out.family_values.push_back(w);
    if (w < out.value) {
      out.value = w;
      out.best_sigma = -L;  // negative marks the bump branch
    }
  }
  return out;
}

// nu(g, tau) = inf_{t in (0, tau]} mu(g, t), sampled on a log grid.
inline double nu_estimate(const RadialMetric& m, double tau, const RhoMap& map,
                          int t_points = 5) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < t_points; ++i) {
    const double t = tau * log_interp(0.1, 1.0, i, t_points);
    best = std::min(best, mu_estimate(m, t, map).value);
  }
  return best;
}

}  // namespace aflab
