#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace aflab {

// Adaptive Gauss-Kronrod (G7,K15) quadrature on finite intervals, with
// helpers for semi-infinite integrals via the x -> 1/x substitution.

namespace detail {

// Kronrod-15 abscissae on [-1,1] (positive half) and weights; Gauss-7 weights.
inline constexpr double kK15Nodes[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
inline constexpr double kK15Weights[8] = {
    0.2094821410847278,
    0.2044329400752989,
    0.1903505780647854,
    0.1690047266392679,
    0.1406532597155259,
    0.1047900103222502,
    0.0630920926299786,
    0.0229353220105292,
};
inline constexpr double kG7Weights[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

struct PanelResult {
  double kronrod;
  double error;
};

template <typename F>
PanelResult gk15_panel(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  fv[7] = f(c);
  for (int i = 0; i < 7; ++i) {
    const double x = h * kK15Nodes[7 - i];
    fv[i] = f(c - x);
    fv[14 - i] = f(c + x);
  }
  double kron = kK15Weights[0] * fv[7];
  for (int i = 1; i < 8; ++i) {
    kron += kK15Weights[i] * (fv[7 - i] + fv[7 + i]);
  }
  // Gauss-7 uses the even Kronrod nodes (indices 1,3,5 of the positive half).
  double gauss = kG7Weights[0] * fv[7];
  gauss += kG7Weights[1] * (fv[5] + fv[9]);
  gauss += kG7Weights[2] * (fv[3] + fv[11]);
  gauss += kG7Weights[3] * (fv[1] + fv[13]);
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_panels = 4000;
  int initial_panels = 8;
};

// Integrate f over [a,b] by global adaptive refinement: always split the
// panel with the largest error estimate, stop when the total estimated error
// meets the tolerance or the panel budget runs out. Panels at the round-off
// floor are retired so the budget is spent where refinement still helps.
template <typename F>
double integrate(const F& f, double a, double b, QuadOptions opt = {}) {
  if (!(b > a)) return 0.0;
  std::vector<detail::Panel> heap;
  double done_value = 0.0;
  double done_error = 0.0;
  double active_value = 0.0;
  double active_error = 0.0;
  auto push = [&](double x0, double x1) {
    const auto r = detail::gk15_panel(f, x0, x1);
    if (r.error <= 1e-16 * (std::abs(r.kronrod) + 1e-300) || x1 - x0 <= 1e-15 * std::abs(x1)) {
      done_value += r.kronrod;
      done_error += r.error;
      return;
    }
    heap.push_back({x0, x1, r.kronrod, r.error});
    std::push_heap(heap.begin(), heap.end());
    active_value += r.kronrod;
    active_error += r.error;
  };
  const int n0 = opt.initial_panels;
  for (int i = 0; i < n0; ++i) {
    push(a + (b - a) * i / n0, a + (b - a) * (i + 1) / n0);
  }
  int splits = 0;
  while (!heap.empty() && splits < opt.max_panels) {
    const double total = done_value + active_value;
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (done_error + active_error <= tol) break;
    std::pop_heap(heap.begin(), heap.end());
    const detail::Panel p = heap.back();
    heap.pop_back();
    active_value -= p.value;
    active_error -= p.error;
    const double c = 0.5 * (p.a + p.b);
    push(p.a, c);
    push(c, p.b);
    ++splits;
  }
  return done_value + active_value;
}

// Integrate f over [a, infinity). Splits at `split` (default max(2a, 1)) and
// maps the far piece through x = 1/t, which keeps O(1/r^2)-type integrands
// polynomially smooth near t = 0.
template <typename F>
double integrate_to_inf(const F& f, double a, QuadOptions opt = {}, double split = 0.0) {
  if (split <= a) split = std::max(2.0 * std::abs(a), 1.0);
  double head = integrate(f, a, split, opt);
  auto mapped = [&f](double t) {
    const double r = 1.0 / t;
    return f(r) * r * r;
  };
  double tail = integrate(mapped, 0.0, 1.0 / split, opt);
  return head + tail;
}

// Geometric log-spaced sweep helper used by several modules.
inline double log_interp(double lo, double hi, int i, int n) {
  if (n <= 1) return lo;
  return lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
}

}  // namespace aflab
