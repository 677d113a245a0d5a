#pragma once

#include <functional>

namespace poswalk {

// Standard normal density.
double gauss_density(double x);

// Density of the endpoint of the normalized Brownian meander on (0, inf):
// x exp(-x^2 / 2).
double meander_end_density(double x);

// Marginal density of the normalized Brownian excursion at interior time
// eps in (0, 1). Symmetric under eps <-> 1 - eps and integrates to one:
// sqrt(2/pi) x^2 s^-3 exp(-x^2 / (2 s^2)) with s^2 = eps (1 - eps).
double excursion_marginal(double x, double eps);

// Closed-form distribution function of the marginal above.
double excursion_marginal_cdf(double x, double eps);

// Endpoint density of the three-dimensional Bessel bridge run for time t
// from zero: sqrt(2 / (pi t)) (x^2 / t) exp(-x^2 / (2 t)).
double bessel3_marginal(double x, double t);

// Limiting density ratio tying the pinned walk at horizon t to its
// restriction at the earlier horizon eps. At the origin it is
// (t / eps)^(1 + 1/alpha) for any stable index alpha in (0, 2]; away from
// the origin a closed form exists only at alpha = 2, namely
// (t / eps)^(3/2) exp(-x^2 / (2 eps)), and other alpha throw DomainError.
double density_ratio(double x, double eps, double t, double alpha);

struct Quadrature {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod 7-15 integration of f over [a, b], bisecting until
// each segment's error estimate fits in its share of abs_tol.
Quadrature integrate(const std::function<double(double)>& f, double a,
                     double b, double abs_tol = 1e-10);

}  // namespace poswalk
