#include <cmath>

#include "doctest.h"
#include "poswalk/brownian.hpp"
#include "poswalk/errors.hpp"

using namespace poswalk;

TEST_CASE("densities normalize to one") {
  const Quadrature g =
      integrate([](double x) { return gauss_density(x); }, -12.0, 12.0, 1e-12);
  CHECK(std::abs(g.value - 1.0) < 1e-10);

  const Quadrature m = integrate(
      [](double x) { return meander_end_density(x); }, 0.0, 14.0, 1e-12);
  CHECK(std::abs(m.value - 1.0) < 1e-10);

  for (double eps : {0.1, 0.25, 0.5, 0.9}) {
    const Quadrature e = integrate(
        [eps](double x) { return excursion_marginal(x, eps); }, 0.0, 10.0,
        1e-12);
    CHECK(std::abs(e.value - 1.0) < 1e-8);
  }

  for (double t : {0.25, 1.0, 3.0}) {
    const Quadrature b = integrate(
        [t](double x) { return bessel3_marginal(x, t); }, 0.0,
        10.0 * std::sqrt(t) + 5.0, 1e-12);
    CHECK(std::abs(b.value - 1.0) < 1e-8);
  }
}

TEST_CASE("excursion cdf differentiates back to the density") {
  const double eps = 0.3;
  CHECK(excursion_marginal_cdf(0.0, eps) == 0.0);
  CHECK(excursion_marginal_cdf(-1.0, eps) == 0.0);
  CHECK(excursion_marginal_cdf(50.0, eps) == doctest::Approx(1.0));
  for (double x : {0.2, 0.7, 1.3, 2.4}) {
    const Quadrature q = integrate(
        [eps](double u) { return excursion_marginal(u, eps); }, 0.0, x,
        1e-13);
    CHECK(excursion_marginal_cdf(x, eps) ==
          doctest::Approx(q.value).epsilon(1e-10));
  }
}

TEST_CASE("excursion marginal is symmetric in eps") {
  for (double x : {0.3, 1.1})
    CHECK(excursion_marginal(x, 0.2) ==
          doctest::Approx(excursion_marginal(x, 0.8)).epsilon(1e-14));
}

TEST_CASE("density ratio splices the bridge marginals") {
  // ratio(x, eps, 1) * bessel3(x, 1 - eps) rebuilds the excursion marginal
  for (double eps : {0.25, 0.5, 0.75}) {
    for (int i = 1; i <= 100; ++i) {
      const double x = 0.04 * i;
      const double lhs =
          density_ratio(x, eps, 1.0, 2.0) * bessel3_marginal(x, 1.0 - eps);
      CHECK(std::abs(lhs - excursion_marginal(x, eps)) < 1e-12);
    }
  }
}

TEST_CASE("density ratio at the origin is a pure power") {
  for (double alpha : {1.5, 2.0}) {
    const double want_half =
        std::pow(1.0 / 0.5, 1.0 + 1.0 / alpha);
    CHECK(density_ratio(0.0, 0.5, 1.0, alpha) == want_half);
    CHECK(density_ratio(0.0, 0.25, 2.0, alpha) ==
          std::pow(8.0, 1.0 + 1.0 / alpha));
  }
  // off the origin only the Gaussian case has a closed form
  CHECK_THROWS_AS(density_ratio(0.5, 0.25, 1.0, 1.5), UnsupportedAlpha);
}

TEST_CASE("meander endpoint density is the rayleigh law") {
  CHECK(meander_end_density(1.0) == doctest::Approx(std::exp(-0.5)));
  CHECK(meander_end_density(0.0) == 0.0);
  // mode at one
  CHECK(meander_end_density(1.0) > meander_end_density(0.9));
  CHECK(meander_end_density(1.0) > meander_end_density(1.1));
}

TEST_CASE("quadrature handles known integrals") {
  const Quadrature poly =
      integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0, 1e-12);
  CHECK(poly.value == doctest::Approx(8.0).epsilon(1e-12));
  const Quadrature osc = integrate([](double x) { return std::sin(x); }, 0.0,
                                   3.14159265358979323846, 1e-12);
  CHECK(osc.value == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(osc.abs_error < 1e-10);
  CHECK(osc.evaluations > 0);
}
