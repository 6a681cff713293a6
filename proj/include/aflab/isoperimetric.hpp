#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aflab/certificate.hpp"
#include "aflab/metric.hpp"

namespace aflab {

// Area/volume profile of the centered-ball family. This is an upper bound for
// the true isoperimetric profile (inf over all regions); every certificate
// derived from it carries the surrogate flag.
struct IsoProfile {
  std::vector<double> x;     // coordinate radius
  std::vector<double> vol;   // ball volume
  std::vector<double> area;  // sphere area
  std::vector<double> dAdv;  // dA/dv = mean curvature of the sphere
  bool centered_ball_surrogate = true;
};

inline IsoProfile profile_centered(const RadialMetric& m, std::size_t n = 256,
                                   double x_lo = 0.0, double x_hi = 0.0) {
  const double scale = m.length_scale();
  if (x_lo <= 0.0) x_lo = 1e-2 * scale;
  if (x_hi <= 0.0) x_hi = 1e2 * scale;
  IsoProfile p;
  p.x.resize(n);
  p.vol.resize(n);
  p.area.resize(n);
  p.dAdv.resize(n);
  double v_acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (n - 1));
    // volume accumulated incrementally so the table is consistent cell by cell
    auto integrand = [&m](double r) {
      if (m.form() == MetricForm::conformal) {
        return 4.0 * kPi * std::pow(m.factor(r), 6.0) * r * r;
      }
      const double phi = m.factor(r);
      return 4.0 * kPi * phi * phi;
    };
    v_acc += integrate(integrand, prev, x);
    prev = x;
    p.x[i] = x;
    p.vol[i] = v_acc;
    p.area[i] = sphere_area(m, x);
    p.dAdv[i] = mean_curvature_sphere(m, x);
  }
  return p;
}

inline double euclidean_iso_constant() { return std::cbrt(36.0 * kPi); }

// Solution of y' = (1-2e) sqrt(16 pi / y), y(0) = 0.
inline double ode_comparison_solution(double eps, double v) {
  if (!(eps >= 0.0) || !(eps < 0.5) || !(v >= 0.0)) {
    throw std::domain_error("ode_comparison_solution: need eps in [0, 1/2), v >= 0");
  }
  return euclidean_iso_constant() * std::pow(1.0 - 2.0 * eps, 2.0 / 3.0) * std::pow(v, 2.0 / 3.0);
}

// dA/dv >= (1 - 2 eps) sqrt(16 pi / A) at every grid point. Margin is the
// worst normalized slack, dimensionless under metric dilation.
inline Certificate check_differential_inequality(const IsoProfile& p, double eps,
                                                 double tol = 1e-9) {
  if (!(eps >= 0.0) || !(eps < 0.5)) {
    throw std::domain_error("check_differential_inequality: eps outside [0, 1/2)");
  }
  double worst = std::numeric_limits<double>::infinity();
  double w_lhs = 0.0, w_rhs = 0.0, w_v = 0.0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const double rhs = (1.0 - 2.0 * eps) * std::sqrt(16.0 * kPi / p.area[i]);
    const double margin = (p.dAdv[i] - rhs) / rhs;
    if (margin < worst) {
      worst = margin;
      w_lhs = p.dAdv[i];
      w_rhs = rhs;
      w_v = p.vol[i];
    }
  }
  auto cert = Certificate::make("iso_differential_inequality", w_lhs, w_rhs, worst, tol);
  cert.with("eps", eps).with("v_worst", w_v);
  if (p.centered_ball_surrogate) cert.flag("centered_ball_surrogate");
  return cert;
}

// A(v) >= (1 - 2 eps)^{2/3} (36 pi)^{1/3} v^{2/3} over the tabulated range.
inline Certificate compare_euclidean(const IsoProfile& p, double eps, double tol = 1e-9) {
  if (!(eps >= 0.0) || !(eps < 0.5)) {
    throw std::domain_error("compare_euclidean: eps outside [0, 1/2)");
  }
  double worst = std::numeric_limits<double>::infinity();
  double w_lhs = 0.0, w_rhs = 0.0, w_v = 0.0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const double rhs = ode_comparison_solution(eps, p.vol[i]);
    const double margin = p.area[i] / rhs - 1.0;
    if (margin < worst) {
      worst = margin;
      w_lhs = p.area[i];
      w_rhs = rhs;
      w_v = p.vol[i];
    }
  }
  auto cert = Certificate::make("iso_euclidean_comparison", w_lhs, w_rhs, worst, tol);
  cert.with("eps", eps).with("v_worst", w_v);
  if (p.centered_ball_surrogate) cert.flag("centered_ball_surrogate");
  return cert;
}

// inf over the grid of A / v^{2/3}; equals (36 pi)^{1/3} on flat space.
inline double iso_constant(const IsoProfile& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    best = std::min(best, p.area[i] / std::pow(p.vol[i], 2.0 / 3.0));
  }
  return best;
}

}  // namespace aflab
