#include <doctest.h>

#include <cmath>

#include "aflab/conformal.hpp"

using namespace aflab;

TEST_CASE("limit profile solves its PDE to roundoff") {
  const auto f = limit_profile_factor();
  const auto cert = check_pde(f);
  CHECK(cert.pass);
}

TEST_CASE("norms: sup 1, L6 mass equal to the round three-sphere volume") {
  const auto f = limit_profile_factor();
  const auto cert = check_norms(f);
  CHECK(cert.pass);
  // independent check of int w^6 = 2 pi^2
  const double l6 = integrate_to_inf(
      [&f](double rho) { return 4.0 * kPi * std::pow(f.w(rho), 6.0) * rho * rho; }, 0.0);
  CHECK(l6 == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-8));
  CHECK(f.w(0.0) == doctest::Approx(1.0));
}

TEST_CASE("sobolev equality of the limit object") {
  const auto cert = check_sobolev_equality(limit_profile_factor());
  CHECK(cert.pass);
}

TEST_CASE("conformal metric w^4 g_euc is the round sphere R = 6") {
  const auto cert = check_round_sphere(limit_profile_factor());
  CHECK(cert.pass);
}

TEST_CASE("dilation covariance of the equation") {
  const auto f = limit_profile_factor();
  for (double mu : {0.125, 0.5, 2.0, 8.0}) {
    const auto g = dilated(f, mu);
    CHECK(g.lambda == f.lambda);
    // the dilation maps the well-conditioned window [1e-3, 1e3] to
    // [1e-3/mu, 1e3/mu]; sampling there avoids the cancellation-dominated
    // far field where w'' + 2w'/rho loses ~rho^2/6 digits
    CHECK(check_pde(g, 1e-9, 1e-3 / mu, 1e3 / mu).pass);
    CHECK(check_round_sphere(g, 1e-8, 1e-3 / mu, 1e3 / mu).pass);
  }
  CHECK_THROWS_AS((void)dilated(f, 0.0), std::domain_error);
}

TEST_CASE("negative fixture: perturbed denominator breaks the PDE") {
  ConformalFactor f;
  f.lambda = 0.75;
  f.w = [](double r) { return std::sqrt(4.0 / (4.1 + r * r)); };
  f.dw = [](double r) { return -2.0 * r * std::pow(4.1 + r * r, -1.5); };
  f.ddw = [](double r) {
    const double q = 4.1 + r * r;
    return -2.0 * std::pow(q, -1.5) + 6.0 * r * r * std::pow(q, -2.5);
  };
  const auto cert = check_pde(f);
  CHECK_FALSE(cert.pass);
  CHECK(cert.margin < -1e-4);  // residual bounded away from zero
}
