#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "aflab/certificate.hpp"
#include "aflab/quadrature.hpp"
#include "aflab/willmore.hpp"

namespace aflab {

// Radial conformal factor on R^3 with two derivatives and the Yamabe-type
// eigenvalue lambda of Delta w + lambda w^5 = 0.
struct ConformalFactor {
  std::function<double(double)> w, dw, ddw;
  double lambda = 0.75;
};

// w(x) = sqrt(4 / (4 + |x|^2)); solves Delta w + (3/4) w^5 = 0 with w(0) = 1.
inline double limit_profile(double rho) { return std::sqrt(4.0 / (4.0 + rho * rho)); }

inline ConformalFactor limit_profile_factor() {
  ConformalFactor f;
  f.lambda = 0.75;
  f.w = [](double r) { return limit_profile(r); };
  f.dw = [](double r) { return -2.0 * r * std::pow(4.0 + r * r, -1.5); };
  f.ddw = [](double r) {
    const double q = 4.0 + r * r;
    return -2.0 * std::pow(q, -1.5) + 6.0 * r * r * std::pow(q, -2.5);
  };
  return f;
}

// w_mu(x) = mu^{1/2} w(mu x): solves the same equation with the same lambda.
inline ConformalFactor dilated(const ConformalFactor& f, double mu) {
  if (!(mu > 0.0)) throw std::domain_error("dilated: mu must be positive");
  ConformalFactor g;
  g.lambda = f.lambda;
  auto w = f.w, dw = f.dw, ddw = f.ddw;
  const double s = std::sqrt(mu);
  g.w = [w, s, mu](double r) { return s * w(mu * r); };
  g.dw = [dw, s, mu](double r) { return s * mu * dw(mu * r); };
  g.ddw = [ddw, s, mu](double r) { return s * mu * mu * ddw(mu * r); };
  return g;
}

// Radial PDE residual |w'' + 2 w'/rho + lambda w^5| on a log grid.
inline Certificate check_pde(const ConformalFactor& f, double res_tol = 1e-9,
                             double rho_lo = 1e-3, double rho_hi = 1e3, int n = 200) {
  double worst = 0.0, worst_rho = rho_lo;
  for (int i = 0; i < n; ++i) {
    const double rho = log_interp(rho_lo, rho_hi, i, n);
    const double res =
        std::abs(f.ddw(rho) + 2.0 * f.dw(rho) / rho + f.lambda * std::pow(f.w(rho), 5.0));
    if (res > worst) {
      worst = res;
      worst_rho = rho;
    }
  }
  auto cert = Certificate::make("conformal_pde_residual", worst, res_tol, res_tol - worst, 0.0);
  cert.with("lambda", f.lambda).with("rho_worst", worst_rho);
  return cert;
}

// L-infinity norm 1 (attained at the origin) and L^6 mass 2 pi^2.
inline Certificate check_norms(const ConformalFactor& f, double tol = 1e-8) {
  double sup = 0.0;
  for (int i = 0; i < 400; ++i) {
    sup = std::max(sup, f.w(log_interp(1e-6, 1e3, i, 400)));
  }
  sup = std::max(sup, f.w(1e-9));
  const double l6 = integrate_to_inf(
      [&f](double rho) { return 4.0 * kPi * std::pow(f.w(rho), 6.0) * rho * rho; }, 0.0, {},
      4.0);
  const double target = 2.0 * kPi * kPi;
  const double res = std::max(std::abs(sup - 1.0), std::abs(l6 / target - 1.0));
  auto cert = Certificate::make("conformal_norms", res, tol, tol - res, 0.0);
  cert.with("sup_norm", sup).with("l6_mass", l6);
  return cert;
}

// Sobolev equality: quotient = Lambda and int |grad w|^2 = lambda int w^6.
inline Certificate check_sobolev_equality(const ConformalFactor& f, double tol = 1e-8) {
  const double grad = integrate_to_inf(
      [&f](double rho) {
        const double d = f.dw(rho);
        return 4.0 * kPi * d * d * rho * rho;
      },
      0.0, {}, 4.0);
  const double l6 = integrate_to_inf(
      [&f](double rho) { return 4.0 * kPi * std::pow(f.w(rho), 6.0) * rho * rho; }, 0.0, {},
      4.0);
  const double quotient = grad / std::cbrt(l6);
  const double lam = euclidean_constant();
  const double res = std::max(std::abs(quotient / lam - 1.0),
                              std::abs(grad / (f.lambda * l6) - 1.0));
  auto cert = Certificate::make("conformal_sobolev_equality", res, tol, tol - res, 0.0);
  cert.with("quotient", quotient).with("grad_integral", grad).with("l6_integral", l6);
  return cert;
}

// Scalar curvature of w^4 g_euc equals 8 lambda (= 6 for the limit profile)
// identically, via R = -8 w^{-5} (w'' + 2 w'/rho).
inline Certificate check_round_sphere(const ConformalFactor& f, double tol = 1e-8,
                                      double rho_lo = 1e-3, double rho_hi = 1e3, int n = 200) {
  const double target = 8.0 * f.lambda;
  double worst = 0.0, worst_rho = rho_lo;
  for (int i = 0; i < n; ++i) {
    const double rho = log_interp(rho_lo, rho_hi, i, n);
    const double lap = f.ddw(rho) + 2.0 * f.dw(rho) / rho;
    const double R = -8.0 * std::pow(f.w(rho), -5.0) * lap;
    const double dev = std::abs(R - target);
    if (dev > worst) {
      worst = dev;
      worst_rho = rho;
    }
  }
  auto cert = Certificate::make("conformal_round_sphere", worst, tol, tol - worst, 0.0);
  cert.with("target_curvature", target).with("rho_worst", worst_rho);
  return cert;
}

}  // namespace aflab
