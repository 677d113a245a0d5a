#include "poswalk/brownian.hpp"

#include <cmath>

#include "poswalk/errors.hpp"

namespace poswalk {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_interior(double eps, double t) {
  if (!(t > 0.0)) throw DomainError("horizon must be positive");
  if (!(eps > 0.0) || !(eps < t))
    throw DomainError("interior time must lie strictly inside the horizon");
}

}  // namespace

double gauss_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double meander_end_density(double x) {
  if (x <= 0.0) return 0.0;
  return x * std::exp(-0.5 * x * x);
}

double excursion_marginal(double x, double eps) {
  check_interior(eps, 1.0);
  if (x <= 0.0) return 0.0;
  const double s2 = eps * (1.0 - eps);
  return std::sqrt(2.0 / kPi) * x * x / (s2 * std::sqrt(s2)) *
         std::exp(-0.5 * x * x / s2);
}

double excursion_marginal_cdf(double x, double eps) {
  check_interior(eps, 1.0);
  if (x <= 0.0) return 0.0;
  const double s = std::sqrt(eps * (1.0 - eps));
  const double u = x / s;
  return std::erf(u / std::sqrt(2.0)) -
         std::sqrt(2.0 / kPi) * u * std::exp(-0.5 * u * u);
}

double bessel3_marginal(double x, double t) {
  if (!(t > 0.0)) throw DomainError("bridge length must be positive");
  if (x <= 0.0) return 0.0;
  return std::sqrt(2.0 / (kPi * t)) * (x * x / t) * std::exp(-0.5 * x * x / t);
}

double density_ratio(double x, double eps, double t, double alpha) {
  if (!(alpha > 0.0) || alpha > 2.0)
    throw UnsupportedAlpha("stable index must lie in (0, 2]");
  check_interior(eps, t);
  if (x < 0.0) throw DomainError("the ratio lives on the positive half-line");
  if (x == 0.0) return std::pow(t / eps, 1.0 + 1.0 / alpha);
  if (alpha != 2.0)
    throw UnsupportedAlpha(
        "off the origin the ratio is explicit only for the Gaussian index");
  return std::pow(t / eps, 1.5) * std::exp(-0.5 * x * x / eps);
}

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767,
                           0.3818300505051189, 0.4179591836734694};

struct Segment {
  double kronrod;
  double err;
};

Segment gk15(const std::function<double(double)>& f, double a, double b,
             int& evals) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kXgk[i];
    double fsum;
    if (i == 7) {
      fsum = f(mid);
      evals += 1;
    } else {
      fsum = f(mid - dx) + f(mid + dx);
      evals += 2;
    }
    if (!std::isfinite(fsum))
      throw NonFinite("integrand returned a non-finite value");
    resk += kWgk[i] * fsum;
    // Odd Kronrod indices are the embedded Gauss-7 nodes (center included).
    if (i % 2 == 1) resg += kWg[i / 2] * fsum;
  }
  resk *= half;
  resg *= half;
  return {resk, std::abs(resk - resg)};
}

void refine(const std::function<double(double)>& f, double a, double b,
            double tol, int depth, Quadrature& acc) {
  const Segment s = gk15(f, a, b, acc.evaluations);
  if (s.err <= tol || depth >= 48) {
    acc.value += s.kronrod;
    acc.abs_error += s.err;
    return;
  }
  const double mid = 0.5 * (a + b);
  refine(f, a, mid, 0.5 * tol, depth + 1, acc);
  refine(f, mid, b, 0.5 * tol, depth + 1, acc);
}

}  // namespace

Quadrature integrate(const std::function<double(double)>& f, double a,
                     double b, double abs_tol) {
  Quadrature acc;
  if (a == b) return acc;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  refine(f, a, b, abs_tol, 0, acc);
  acc.value *= sign;
  return acc;
}

}  // namespace poswalk
