#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "aflab/profile.hpp"
#include "aflab/quadrature.hpp"
#include "aflab/roots.hpp"

namespace aflab {

inline constexpr double kPi = std::numbers::pi;

enum class MetricForm {
  conformal,  // g = u(r)^4 g_euc on R^3
  warped,     // g = ds^2 + phi(s)^2 g_{S^2}
};

// A rotationally symmetric asymptotically flat 3-metric. The radial factor
// (u for conformal form, phi for warped form) is carried as callables with
// two derivatives; family constructors supply closed forms, file-loaded
// profiles supply interpolants.
class RadialMetric {
 public:
  using Fn = std::function<double(double)>;

  MetricForm form() const { return form_; }
  const std::string& family() const { return family_; }
  const std::map<std::string, double>& mass_params() const { return mass_params_; }
  double domain_max() const { return domain_max_; }
  double length_scale() const { return length_scale_; }

  // u(r) resp. phi(s) and derivatives
  double factor(double x) const { return f_(x); }
  double dfactor(double x) const { return df_(x); }
  double ddfactor(double x) const { return ddf_(x); }

  // metric length of a radial coordinate increment: ds = ell(x) dx
  double length_element(double x) const {
    return form_ == MetricForm::conformal ? f_(x) * f_(x) : 1.0;
  }

  static RadialMetric flat() {
    RadialMetric m;
    m.form_ = MetricForm::conformal;
    m.family_ = "flat";
    m.f_ = [](double) { return 1.0; };
    m.df_ = [](double) { return 0.0; };
    m.ddf_ = [](double) { return 0.0; };
    return m;
  }

  // u = 1 + (m/2)(r^2 + a^2)^{-1/2}; R > 0, AF, smooth at the origin.
  static RadialMetric smoothed_schwarzschild(double mass, double a) {
    if (!(mass >= 0.0) || !(a > 0.0)) {
      throw std::invalid_argument("smoothed_schwarzschild: need m >= 0, a > 0");
    }
    RadialMetric m;
    m.form_ = MetricForm::conformal;
    m.family_ = "smoothed_schwarzschild";
    m.mass_params_ = {{"m", mass}, {"a", a}};
    m.length_scale_ = a;
    m.f_ = [mass, a](double r) { return 1.0 + 0.5 * mass / std::sqrt(r * r + a * a); };
    m.df_ = [mass, a](double r) {
      const double q = r * r + a * a;
      return -0.5 * mass * r * std::pow(q, -1.5);
    };
    m.ddf_ = [mass, a](double r) {
      const double q = r * r + a * a;
      return -0.5 * mass * (std::pow(q, -1.5) - 3.0 * r * r * std::pow(q, -2.5));
    };
    return m;
  }

  static RadialMetric conformal_custom(Fn u, Fn du, Fn ddu, std::string family = "custom",
                                       std::map<std::string, double> params = {},
                                       double scale = 1.0) {
    RadialMetric m;
    m.form_ = MetricForm::conformal;
    m.family_ = std::move(family);
    m.mass_params_ = std::move(params);
    m.length_scale_ = scale;
    m.f_ = std::move(u);
    m.df_ = std::move(du);
    m.ddf_ = std::move(ddu);
    return m;
  }

  static RadialMetric warped_custom(Fn phi, Fn dphi, Fn ddphi, double s_max,
                                    std::string family = "custom_warped",
                                    std::map<std::string, double> params = {},
                                    double scale = 1.0) {
    RadialMetric m;
    m.form_ = MetricForm::warped;
    m.family_ = std::move(family);
    m.mass_params_ = std::move(params);
    m.length_scale_ = scale;
    m.domain_max_ = s_max;
    m.f_ = std::move(phi);
    m.df_ = std::move(dphi);
    m.ddf_ = std::move(ddphi);
    return m;
  }

  // Conformal metric from a sampled u(r) profile. Outside the sampled window
  // the factor continues with the leading AF decay u = 1 + c/r.
  static RadialMetric conformal_from_profile(const RadialProfile& profile) {
    auto p = std::make_shared<RadialProfile>(profile);
    const double rmax = p->domain_max();
    const double rmin = p->domain_min();
    const double c_tail = ((*p)(rmax)-1.0) * rmax;
    auto u = [p, rmin, rmax, c_tail](double r) {
      if (r <= rmin) return (*p)(rmin);
      if (r >= rmax) return 1.0 + c_tail / r;
      return (*p)(r);
    };
    auto du = [p, rmin, rmax, c_tail](double r) {
      if (r <= rmin) return 0.0;
      if (r >= rmax) return -c_tail / (r * r);
      return p->derivative(r);
    };
    auto ddu = [p, rmin, rmax, c_tail](double r) -> double {
      if (r <= rmin) return 0.0;
      if (r >= rmax) return 2.0 * c_tail / (r * r * r);
      const double h = 1e-4 * r;
      return (p->derivative(r + h) - p->derivative(r - h)) / (2 * h);
    };
    RadialMetric m = conformal_custom(u, du, ddu, "profile");
    m.length_scale_ = std::sqrt(rmin * rmax);
    return m;
  }

  // g -> lambda^2 g, realized by pulling the factor back through the dilated
  // coordinate. For smoothed Schwarzschild this maps (m, a) -> (lambda m, lambda a).
  RadialMetric rescaled(double lambda) const {
    if (!(lambda > 0.0)) throw std::invalid_argument("rescaled: lambda must be positive");
    RadialMetric m = *this;
    auto f = f_, df = df_, ddf = ddf_;
    if (form_ == MetricForm::conformal) {
      m.f_ = [f, lambda](double r) { return f(r / lambda); };
      m.df_ = [df, lambda](double r) { return df(r / lambda) / lambda; };
      m.ddf_ = [ddf, lambda](double r) { return ddf(r / lambda) / (lambda * lambda); };
    } else {
      m.f_ = [f, lambda](double s) { return lambda * f(s / lambda); };
      m.df_ = [df, lambda](double s) { return df(s / lambda); };
      m.ddf_ = [ddf, lambda](double s) { return ddf(s / lambda) / lambda; };
      m.domain_max_ = domain_max_ * lambda;
    }
    m.length_scale_ = length_scale_ * lambda;
    for (auto& [k, v] : m.mass_params_) v *= lambda;
    return m;
  }

 private:
  MetricForm form_ = MetricForm::conformal;
  std::string family_ = "flat";
  std::map<std::string, double> mass_params_;
  double domain_max_ = std::numeric_limits<double>::infinity();
  double length_scale_ = 1.0;
  Fn f_, df_, ddf_;
};

inline void require_in_domain(const RadialMetric& m, double x) {
  if (!(x > 0.0) || !(x < m.domain_max())) {
    throw std::domain_error("radius outside metric domain");
  }
}

// R(u^4 g_euc) = -8 u^{-5} (u'' + 2u'/r); warped-product identity otherwise.
inline double scalar_curvature(const RadialMetric& m, double x) {
  require_in_domain(m, x);
  if (m.form() == MetricForm::conformal) {
    const double u = m.factor(x);
    const double lap = m.ddfactor(x) + 2.0 * m.dfactor(x) / x;
    return -8.0 * std::pow(u, -5.0) * lap;
  }
  const double phi = m.factor(x);
  const double dphi = m.dfactor(x);
  const double ddphi = m.ddfactor(x);
  return 2.0 * (1.0 - dphi * dphi) / (phi * phi) - 4.0 * ddphi / phi;
}

inline double sphere_area(const RadialMetric& m, double x) {
  require_in_domain(m, x);
  if (m.form() == MetricForm::conformal) {
    const double u = m.factor(x);
    return 4.0 * kPi * std::pow(u, 4.0) * x * x;
  }
  const double phi = m.factor(x);
  return 4.0 * kPi * phi * phi;
}

inline double ball_volume(const RadialMetric& m, double x, QuadOptions opt = {}) {
  require_in_domain(m, x);
  if (m.form() == MetricForm::conformal) {
    auto integrand = [&m](double r) {
      const double u = m.factor(r);
      return 4.0 * kPi * std::pow(u, 6.0) * r * r;
    };
    return integrate(integrand, 0.0, x, opt);
  }
  auto integrand = [&m](double s) {
    const double phi = m.factor(s);
    return 4.0 * kPi * phi * phi;
  };
  return integrate(integrand, 0.0, x, opt);
}

// Mean curvature of the centered sphere through x: H = 2 phi'(s)/phi(s).
inline double mean_curvature_sphere(const RadialMetric& m, double x) {
  require_in_domain(m, x);
  if (m.form() == MetricForm::warped) {
    return 2.0 * m.dfactor(x) / m.factor(x);
  }
  const double u = m.factor(x);
  const double du = m.dfactor(x);
  return 2.0 * (u + 2.0 * x * du) / (u * u * u * x);
}

// area * H^2 = 16 pi phi'(s)^2 for centered spheres; scale invariant.
inline double willmore_energy_sphere(const RadialMetric& m, double x) {
  const double h = mean_curvature_sphere(m, x);
  return sphere_area(m, x) * h * h;
}

// Warp coordinate s(r) = int_0^r u^2 for conformal metrics.
inline double warp_coordinate(const RadialMetric& m, double x, QuadOptions opt = {}) {
  if (m.form() == MetricForm::warped) return x;
  auto u2 = [&m](double r) {
    const double u = m.factor(r);
    return u * u;
  };
  return integrate(u2, 0.0, x, opt);
}

// Euclidean radius of the ball with the same metric volume.
inline double volume_radius(const RadialMetric& m, double x) {
  return std::cbrt(3.0 * ball_volume(m, x) / (4.0 * kPi));
}

namespace detail {

struct WarpTable {
  RadialMetric base;  // conformal
  RadialProfile s_of_r;
  double r_max;

  double s_exact(double r) const {
    const auto& g = s_of_r.grid();
    auto it = std::upper_bound(g.begin(), g.end(), r);
    std::size_t i = it == g.begin() ? 0 : static_cast<std::size_t>(it - g.begin()) - 1;
    i = std::min(i, g.size() - 1);
    auto u2 = [this](double t) {
      const double u = base.factor(t);
      return u * u;
    };
    return s_of_r.values()[i] + integrate(u2, g[i], r);
  }

  double r_of_s(double s) const {
    const auto& g = s_of_r.grid();
    const auto& v = s_of_r.values();
    if (s <= 0.0) return 0.0;
    auto it = std::upper_bound(v.begin(), v.end(), s);
    std::size_t i = it == v.begin() ? 0 : static_cast<std::size_t>(it - v.begin()) - 1;
    i = std::min(i, g.size() - 2);
    // Newton with exact s(r); s'(r) = u^2 > 0
    double r = g[i] + (g[i + 1] - g[i]) * (s - v[i]) / std::max(v[i + 1] - v[i], 1e-300);
    for (int k = 0; k < 30; ++k) {
      const double u = base.factor(r);
      const double step = (s_exact(r) - s) / (u * u);
      r -= step;
      if (r <= 0.0) r = 0.5 * (r + step);
      if (std::abs(step) < 1e-15 * std::max(r, 1.0)) break;
    }
    return r;
  }
};

}  // namespace detail

// Conversion to warped form: s(r) = int_0^r u^2, phi(s) = u(r(s))^2 r(s).
// Idempotent on warped input.
inline RadialMetric to_warped(const RadialMetric& m, std::size_t table_points = 2048) {
  if (m.form() == MetricForm::warped) return m;

  auto table = std::make_shared<detail::WarpTable>();
  table->base = m;
  const double scale = m.length_scale();
  const double r_lo = 1e-6 * scale;
  const double r_hi = 1e6 * scale;
  table->r_max = r_hi;

  std::vector<double> rg, sg;
  rg.reserve(table_points + 1);
  rg.push_back(0.0);
  for (std::size_t i = 0; i < table_points; ++i) {
    rg.push_back(r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (table_points - 1)));
  }
  sg.resize(rg.size());
  sg[0] = 0.0;
  auto u2 = [&m](double t) {
    const double u = m.factor(t);
    return u * u;
  };
  for (std::size_t i = 1; i < rg.size(); ++i) {
    sg[i] = sg[i - 1] + integrate(u2, rg[i - 1], rg[i]);
  }
  table->s_of_r = RadialProfile(rg, sg);

  const double s_max = sg.back();
  auto phi = [table](double s) {
    const double r = table->r_of_s(s);
    const double u = table->base.factor(r);
    return u * u * r;
  };
  auto dphi = [table](double s) {
    const double r = table->r_of_s(s);
    const double u = table->base.factor(r);
    const double du = table->base.dfactor(r);
    return 1.0 + 2.0 * r * du / u;
  };
  auto ddphi = [table](double s) {
    const double r = table->r_of_s(s);
    const double u = table->base.factor(r);
    const double du = table->base.dfactor(r);
    const double ddu = table->base.ddfactor(r);
    return 2.0 * (du / u + r * ddu / u - r * du * du / (u * u)) / (u * u);
  };
  return RadialMetric::warped_custom(phi, dphi, ddphi, s_max, m.family() + "_warped",
                                     m.mass_params(), m.length_scale());
}

}  // namespace aflab
