#include <doctest.h>

#include <cmath>
#include <random>

#include "aflab/sobolev.hpp"

using namespace aflab;

TEST_CASE("every bubble realizes the optimal constant on flat space") {
  const auto flat = RadialMetric::flat();
  const double lam = euclidean_constant();
  for (double beta : {0.5, 1.0, 3.0, 10.0}) {
    BetaProfile bp(beta);
    const double q = sobolev_quotient(
        flat, [&bp](double r) { return bp.s(r); }, [&bp](double r) { return bp.ds(r); });
    CHECK(q == doctest::Approx(lam).epsilon(1e-8));
  }
}

TEST_CASE("quotient is invariant under simultaneous dilation") {
  const auto g = RadialMetric::smoothed_schwarzschild(0.3, 1.0);
  BetaProfile bp(2.0);
  const double q0 = sobolev_quotient(
      g, [&bp](double r) { return bp.s(r); }, [&bp](double r) { return bp.ds(r); });
  const double lam = 3.7;
  const auto gs = g.rescaled(lam);
  const double q1 = sobolev_quotient(
      gs, [&bp, lam](double r) { return bp.s(r / lam); },
      [&bp, lam](double r) { return bp.ds(r / lam) / lam; });
  CHECK(q1 == doctest::Approx(q0).epsilon(1e-10));
}

TEST_CASE("non-optimal profiles exceed the constant") {
  const auto flat = RadialMetric::flat();
  const double q = sobolev_quotient(
      flat, [](double r) { return std::exp(-r * r); },
      [](double r) { return -2.0 * r * std::exp(-r * r); });
  CHECK(q > euclidean_constant() + 0.1);
}

TEST_CASE("discrete gradient against central finite differences") {
  const auto g = RadialMetric::smoothed_schwarzschild(0.2, 1.0);
  std::vector<double> grid(64);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = 0.05 * std::pow(400.0, i / 63.0);
  }
  detail::DiscreteQuotient dq(g, grid);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = 1.0 / (1.0 + grid[i] * grid[i]) + 0.05 * std::sin(3.0 * i);
  }
  const auto an = dq.gradient(v);
  std::vector<double> fd(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double h = 1e-6 * std::max(std::abs(v[i]), 1e-3);
    auto vp = v;
    vp[i] += h;
    auto vm = v;
    vm[i] -= h;
    fd[i] = (dq.quotient(vp) - dq.quotient(vm)) / (2.0 * h);
  }
  double dot = 0.0, na = 0.0, nf = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    dot += an[i] * fd[i];
    na += an[i] * an[i];
    nf += fd[i] * fd[i];
  }
  CHECK(dot / std::sqrt(na * nf) > 0.999);
}

TEST_CASE("optimizer recovers the flat optimum") {
  const auto res = optimal_radial_constant(RadialMetric::flat(), 1024);
  CHECK(res.quotient == doctest::Approx(euclidean_constant()).epsilon(1e-5));
  CHECK(std::abs(res.deficit) < 1e-5);
  CHECK(res.residual <= 1e-6);
}

TEST_CASE("optimizer output never exceeds any seed") {
  const auto res = optimal_radial_constant(RadialMetric::smoothed_schwarzschild(0.1, 1.0), 1024);
  for (double sq : res.seed_quotients) {
    CHECK(res.quotient <= sq + 1e-9);
  }
  CHECK(res.residual <= 1e-6);
  CHECK(res.deficit > 0.0);
}

TEST_CASE("deficit shrinks with the mass") {
  const auto r3 = optimal_radial_constant(RadialMetric::smoothed_schwarzschild(0.3, 1.0), 1024);
  const auto r1 = optimal_radial_constant(RadialMetric::smoothed_schwarzschild(0.1, 1.0), 1024);
  CHECK(r3.deficit > r1.deficit);
  CHECK(r1.deficit > 0.0);
}

TEST_CASE("warped form is rejected by the optimizer") {
  const auto w = to_warped(RadialMetric::flat());
  CHECK_THROWS_AS((void)optimal_radial_constant(w), std::invalid_argument);
}
