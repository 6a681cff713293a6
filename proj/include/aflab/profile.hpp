#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace aflab {

enum class SlopeRule {
  cubic,     // 4-point Lagrange slopes: reproduces polynomials of degree <= 3
  monotone,  // Fritsch-Carlson limited slopes: shape preserving
};

// A sampled radial function on a strictly increasing grid with cubic Hermite
// interpolation. Derivatives come from the interpolant; cell integrals are
// exact integrals of the cubic, so in SlopeRule::cubic mode any polynomial of
// degree <= 3 sampled on the grid integrates to round-off.
class RadialProfile {
 public:
  RadialProfile() = default;

  RadialProfile(std::vector<double> grid, std::vector<double> values,
                SlopeRule rule = SlopeRule::cubic)
      : grid_(std::move(grid)), values_(std::move(values)), rule_(rule) {
    if (grid_.size() != values_.size() || grid_.size() < 2) {
      throw std::invalid_argument("RadialProfile: need matching grid/values, size >= 2");
    }
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      if (!(grid_[i] > grid_[i - 1])) {
        throw std::invalid_argument("RadialProfile: grid must be strictly increasing");
      }
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("RadialProfile: non-finite value");
    }
    build_slopes();
  }

  template <typename F>
  static RadialProfile log_spaced(double lo, double hi, std::size_t n, const F& f,
                                  SlopeRule rule = SlopeRule::cubic) {
    std::vector<double> g(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
      v[i] = f(g[i]);
    }
    return RadialProfile(std::move(g), std::move(v), rule);
  }

  double domain_min() const { return grid_.front(); }
  double domain_max() const { return grid_.back(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  static constexpr int interpolation_order() { return 3; }

  double operator()(double x) const {
    const std::size_t i = cell(x);
    const double h = grid_[i + 1] - grid_[i];
    const double t = (x - grid_[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * values_[i] + h * h10 * slopes_[i] + h01 * values_[i + 1] + h * h11 * slopes_[i + 1];
  }

  double derivative(double x) const {
    const std::size_t i = cell(x);
    const double h = grid_[i + 1] - grid_[i];
    const double t = (x - grid_[i]) / h;
    const double d00 = 6 * t * (t - 1) / h;
    const double d10 = (3 * t - 1) * (t - 1);
    const double d01 = -d00;
    const double d11 = t * (3 * t - 2);
    return d00 * values_[i] + d10 * slopes_[i] + d01 * values_[i + 1] + d11 * slopes_[i + 1];
  }

  // Exact integral of the Hermite interpolant over [a, b] within the domain.
  double integrate(double a, double b) const {
    if (b < a) return -integrate(b, a);
    a = std::max(a, domain_min());
    b = std::min(b, domain_max());
    if (!(b > a)) return 0.0;
    double total = 0.0;
    std::size_t i = cell(a);
    while (a < b) {
      const double cell_end = std::min(grid_[i + 1], b);
      total += cell_integral(i, a, cell_end);
      a = cell_end;
      if (i + 2 < grid_.size()) ++i;
    }
    return total;
  }

 private:
  std::size_t cell(double x) const {
    if (x < grid_.front() || x > grid_.back()) {
      throw std::domain_error("RadialProfile: point outside domain");
    }
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::distance(grid_.begin(), it));
    if (i > 0) --i;
    if (i + 1 >= grid_.size()) i = grid_.size() - 2;
    return i;
  }

  double cell_integral(std::size_t i, double a, double b) const {
    const double h = grid_[i + 1] - grid_[i];
    auto anti = [&](double x) {
      const double t = (x - grid_[i]) / h;
      const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
      const double H00 = t - t3 + 0.5 * t4;
      const double H10 = 0.5 * t2 - (2.0 / 3.0) * t3 + 0.25 * t4;
      const double H01 = t3 - 0.5 * t4;
      const double H11 = 0.25 * t4 - t3 / 3.0;
      return h * (H00 * values_[i] + h * H10 * slopes_[i] + H01 * values_[i + 1] + h * H11 * slopes_[i + 1]);
    };
    return anti(b) - anti(a);
  }

  // Derivative at grid_[i] of the Lagrange cubic through points j0..j0+3.
  double lagrange_slope(std::size_t i, std::size_t j0) const {
    double result = 0.0;
    const double xi = grid_[i];
    for (std::size_t a = j0; a < j0 + 4; ++a) {
      double denom = 1.0;
      for (std::size_t b = j0; b < j0 + 4; ++b) {
        if (b != a) denom *= grid_[a] - grid_[b];
      }
      // d/dx prod_{b != a}(x - x_b) at x = xi
      double dsum = 0.0;
      for (std::size_t c = j0; c < j0 + 4; ++c) {
        if (c == a) continue;
        double term = 1.0;
        for (std::size_t b = j0; b < j0 + 4; ++b) {
          if (b != a && b != c) term *= xi - grid_[b];
        }
        dsum += term;
      }
      result += values_[a] * dsum / denom;
    }
    return result;
  }

  void build_slopes() {
    const std::size_t n = grid_.size();
    slopes_.assign(n, 0.0);
    if (rule_ == SlopeRule::cubic && n >= 4) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = std::min(std::max<std::size_t>(i, 1) - 1, n - 4);
        slopes_[i] = lagrange_slope(i, j0);
      }
      return;
    }
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      d[i] = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
    }
    slopes_[0] = d[0];
    slopes_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = grid_[i] - grid_[i - 1];
      const double h1 = grid_[i + 1] - grid_[i];
      // weighted harmonic mean; zero at local extrema (Fritsch-Carlson)
      if (d[i - 1] * d[i] <= 0.0) {
        slopes_[i] = 0.0;
      } else {
        const double w1 = 2 * h1 + h0;
        const double w2 = h1 + 2 * h0;
        slopes_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
  }

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  SlopeRule rule_ = SlopeRule::cubic;
};

}  // namespace aflab
