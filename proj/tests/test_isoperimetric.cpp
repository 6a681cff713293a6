#include <doctest.h>

#include <cmath>

#include "aflab/isoperimetric.hpp"

using namespace aflab;

TEST_CASE("flat profile is exactly euclidean over many decades") {
  const auto prof = profile_centered(RadialMetric::flat());
  const double c = euclidean_iso_constant();
  REQUIRE(prof.vol.front() < 1e-5);
  REQUIRE(prof.vol.back() > 1e5);
  for (std::size_t i = 0; i < prof.x.size(); ++i) {
    CHECK(prof.area[i] ==
          doctest::Approx(c * std::pow(prof.vol[i], 2.0 / 3.0)).epsilon(1e-9));
  }
  CHECK(iso_constant(prof) == doctest::Approx(c).epsilon(1e-9));
  CHECK(prof.centered_ball_surrogate);
}

TEST_CASE("comparison solution satisfies its algebraic definition") {
  for (double eps : {0.0, 0.1, 0.4}) {
    for (double v : {1e-3, 1.0, 1e3}) {
      const double y = ode_comparison_solution(eps, v);
      CHECK(y * y * y ==
            doctest::Approx(36.0 * kPi * std::pow(1.0 - 2.0 * eps, 2.0) * v * v).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS((void)ode_comparison_solution(0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)ode_comparison_solution(-0.1, 1.0), std::domain_error);
}

TEST_CASE("smoothed family passes both comparisons") {
  const auto prof = profile_centered(RadialMetric::smoothed_schwarzschild(0.1, 1.0));
  const auto c1 = check_differential_inequality(prof, 0.1);
  const auto c2 = compare_euclidean(prof, 0.1);
  CHECK(c1.pass);
  CHECK(c1.margin > 0.0);
  CHECK(c2.pass);
  CHECK(c2.margin > 0.0);
  const double eta = iso_constant(prof) / euclidean_iso_constant();
  CHECK(eta > 0.97);
  CHECK(eta < 0.98);  // measured 0.9765 for (m, a) = (0.1, 1)
}

TEST_CASE("iso constant decreases with mass") {
  const auto p3 = profile_centered(RadialMetric::smoothed_schwarzschild(0.3, 1.0));
  const auto p1 = profile_centered(RadialMetric::smoothed_schwarzschild(0.1, 1.0));
  CHECK(iso_constant(p3) < iso_constant(p1));
  CHECK(iso_constant(p1) < euclidean_iso_constant());
}

TEST_CASE("negative fixture: pinched areas violate the euclidean comparison") {
  auto prof = profile_centered(RadialMetric::flat());
  // pinch the middle of the profile: areas below the comparison graph
  for (std::size_t i = prof.x.size() / 3; i < 2 * prof.x.size() / 3; ++i) {
    prof.area[i] *= 0.5;
  }
  const auto cert = compare_euclidean(prof, 0.0);
  CHECK_FALSE(cert.pass);
  CHECK(cert.margin < -0.1);
}

TEST_CASE("epsilon domain is enforced") {
  const auto prof = profile_centered(RadialMetric::flat());
  CHECK_THROWS_AS((void)check_differential_inequality(prof, 0.5), std::domain_error);
  CHECK_THROWS_AS((void)compare_euclidean(prof, -0.01), std::domain_error);
}
