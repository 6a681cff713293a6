#pragma once

#include <cmath>
#include <stdexcept>

#include "aflab/certificate.hpp"
#include "aflab/metric.hpp"
#include "aflab/quadrature.hpp"
#include "aflab/roots.hpp"

namespace aflab {

// Capacitary potential of the centered sphere r = r0 in a conformal metric:
// the harmonic function with phi = 1 on the sphere and phi -> 0 at infinity.
// Rotational symmetry reduces it to the tail integral
//   T(r) = int_r^inf dr' / (4 pi u(r')^2 r'^2),   phi(r) = T(r) / T(r0),
// and the flux of grad(phi) through every level sphere equals 1/T(r0).
class CapacitaryPotential {
 public:
  CapacitaryPotential(RadialMetric metric, double r0)
      : metric_(std::move(metric)), r0_(r0) {
    if (metric_.form() != MetricForm::conformal) {
      throw std::invalid_argument("CapacitaryPotential: conformal form required");
    }
    if (!(r0 > 0.0)) throw std::invalid_argument("CapacitaryPotential: r0 must be positive");
    t0_ = tail(r0_);
    if (!(t0_ > 0.0)) throw std::runtime_error("CapacitaryPotential: degenerate tail integral");
  }

  const RadialMetric& metric() const { return metric_; }
  double base_radius() const { return r0_; }
  double flux_constant() const { return 1.0 / t0_; }

  double tail(double r) const {
    auto integrand = [this](double t) {
      const double u = metric_.factor(t);
      return 1.0 / (4.0 * kPi * u * u * t * t);
    };
    return integrate_to_inf(integrand, r, {}, 2.0 * r);
  }

  double phi(double r) const { return tail(r) / t0_; }

  // |grad phi| on the level sphere through r, from the flux identity.
  double gradient_magnitude(double r) const {
    return flux_constant() / sphere_area(metric_, r);
  }

  // Coordinate radius of the level set { phi = e^{-t} }, t >= 0.
  double level_radius(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("level_radius: t must be >= 0");
    if (t == 0.0) return r0_;
    const double target = std::exp(-t);
    double hi = 2.0 * r0_;
    while (phi(hi) > target) hi *= 2.0;
    return find_root([this, target](double r) { return phi(r) - target; }, r0_, hi, 1e-13 * r0_);
  }

 private:
  RadialMetric metric_;
  double r0_;
  double t0_;
};

inline CapacitaryPotential solve_capacitary_potential(const RadialMetric& metric, double r0) {
  return CapacitaryPotential(metric, r0);
}

// W(t) = int_{Sigma_t} |grad phi|^2 / phi^2 = c_flux^2 e^{2t} / Area(Sigma_t).
// Equals 4 pi identically on flat space.
inline double flux_W(const CapacitaryPotential& cap, double t) {
  const double r = cap.level_radius(t);
  const double c = cap.flux_constant();
  return c * c * std::exp(2.0 * t) / sphere_area(cap.metric(), r);
}

// W(t) <= [ e^{-t} sqrt(W(0)) + (1 - e^{-t}) sqrt(4 pi) ]^2 along the flow of
// level sets, sampled at t = 0 plus log-spaced levels in [t_min, t_max].
// Margin is the worst-case slack sqrt(rhs) - sqrt(lhs).
inline Certificate check_W_monotonicity(const CapacitaryPotential& cap, int samples = 400,
                                        double t_min = 1e-3, double t_max = 12.0,
                                        double tol = 1e-9) {
  const double w0 = flux_W(cap, 0.0);
  const double sqrt_w0 = std::sqrt(w0);
  const double sqrt_4pi = std::sqrt(4.0 * kPi);
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_t = 0.0, worst_lhs = w0, worst_rhs = w0;
  for (int i = 0; i < samples; ++i) {
    const double t = i == 0 ? 0.0 : log_interp(t_min, t_max, i - 1, samples - 1);
    const double et = std::exp(-t);
    const double lhs = flux_W(cap, t);
    const double bound = et * sqrt_w0 + (1.0 - et) * sqrt_4pi;
    const double margin = bound - std::sqrt(lhs);
    if (margin < worst_margin) {
      worst_margin = margin;
      worst_t = t;
      worst_lhs = lhs;
      worst_rhs = bound * bound;
    }
  }
  auto cert = Certificate::make("flux_W_interpolation_bound", worst_lhs, worst_rhs,
                                worst_margin, tol);
  cert.with("t_worst", worst_t)
      .with("W0", w0)
      .with("samples", samples)
      .with("r0", cap.base_radius());
  return cert;
}

// sqrt(W(0)) <= sqrt(pi) + (1/4) sqrt(int_{Sigma_0} H^2): the initial flux
// quantity is controlled by the Willmore energy of the base sphere.
inline Certificate check_miao_bound(const CapacitaryPotential& cap, double tol = 1e-9) {
  const double w0 = flux_W(cap, 0.0);
  const double willmore = willmore_energy_sphere(cap.metric(), cap.base_radius());
  const double lhs = std::sqrt(w0);
  const double rhs = std::sqrt(kPi) + 0.25 * std::sqrt(willmore);
  auto cert = Certificate::make("initial_flux_area_bound", lhs, rhs, rhs - lhs, tol);
  cert.with("W0", w0).with("willmore_energy", willmore).with("r0", cap.base_radius());
  return cert;
}

}  // namespace aflab
