#include "poswalk/stone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "poswalk/errors.hpp"

namespace poswalk {

namespace {
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
}

double UnimodalDensity::range_min(double a, double b) const {
  if (a > b) std::swap(a, b);
  return std::min(pdf(a), pdf(b));
}

double UnimodalDensity::range_max(double a, double b) const {
  if (a > b) std::swap(a, b);
  if (a <= mode && mode <= b) return sup;
  return std::max(pdf(a), pdf(b));
}

UnimodalDensity gaussian_density(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("scale must be positive");
  UnimodalDensity d;
  d.name = "gaussian";
  const double inv = 1.0 / sigma;
  d.pdf = [inv](double u) {
    return kInvSqrt2Pi * inv * std::exp(-0.5 * u * u * inv * inv);
  };
  // erfc keeps the far tails accurate where 1 - erf would cancel to zero
  d.cdf = [inv](double u) {
    return 0.5 * std::erfc(-u * inv * 0.70710678118654752440);
  };
  d.mode = 0.0;
  d.sup = kInvSqrt2Pi * inv;
  return d;
}

UnimodalDensity pareto_tail_density(double beta) {
  if (!(beta > 0.0)) throw DomainError("tail exponent must be positive");
  UnimodalDensity d;
  d.name = "pareto-tail";
  d.pdf = [beta](double u) {
    return 0.5 * beta * std::pow(1.0 + std::abs(u), -(1.0 + beta));
  };
  d.cdf = [beta](double u) {
    const double t = 0.5 * std::pow(1.0 + std::abs(u), -beta);
    return u >= 0.0 ? 1.0 - t : t;
  };
  d.mode = 0.0;
  d.sup = 0.5 * beta;
  return d;
}

DensityGrid::DensityGrid(UnimodalDensity f, double length, double cell_width,
                         double max_enclosure_ratio)
    : f_(std::move(f)),
      length_(length),
      h_(cell_width),
      max_ratio_(max_enclosure_ratio) {
  if (!(length > 0.0) || !(cell_width > 0.0))
    throw DomainError("grid extent and cell width must be positive");
  if (!(max_enclosure_ratio >= 1.0))
    throw DomainError("enclosure ratio bound must be at least 1");
  const double count = 2.0 * length / cell_width;
  cells_ = static_cast<int>(std::llround(count));
  if (std::abs(count - cells_) > 1e-9 || cells_ % 2 != 0)
    throw DomainError("cell width must tile [-length, length] evenly");

  cell_lo_.resize(cells_);
  cell_hi_.resize(cells_);
  for (int j = 0; j < cells_; ++j) {
    const double a = left_edge(j);
    cell_lo_[j] = f_.range_min(a, a + h_);
    cell_hi_[j] = f_.range_max(a, a + h_);
  }
  pair_lo_.resize(2 * cells_ - 1);
  pair_hi_.resize(2 * cells_ - 1);
  for (int t = -(cells_ - 1); t <= cells_ - 1; ++t) {
    pair_lo_[t + cells_ - 1] = f_.range_min((t - 1) * h_, (t + 1) * h_);
    pair_hi_[t + cells_ - 1] = f_.range_max((t - 1) * h_, (t + 1) * h_);
  }
  tail_bound_ = 1.0 - f_.cdf(length_) + f_.cdf(-length_);

  double mass_lo = 0.0, mass_hi = 0.0;
  for (int j = 0; j < cells_; ++j) {
    mass_lo += cell_lo_[j];
    mass_hi += cell_hi_[j];
  }
  if (mass_lo * h_ > 1.0 + 1e-12 || mass_hi * h_ + tail_bound_ < 1.0 - 1e-12)
    throw ProbabilityMassError("cell enclosures do not bracket unit mass");
}

namespace {

// Pointwise density bounds for the walk killed at or below zero, held on
// the positive cells only, plus an upper bound on the alive mass that has
// drifted past the right edge of the grid.
struct BoundField {
  std::vector<double> lo, hi;
  double escaped = 0.0;
};

// Largest value the step density can take when the jump starts anywhere
// right of the grid and lands in cell j (arguments below edge - left_edge).
double return_from_right(const DensityGrid& g, int cell) {
  const double u = g.left_edge(cell) + g.cell_width() - g.length();
  return u >= g.density().mode ? g.density().sup : g.density().pdf(u);
}

double return_from_left(const DensityGrid& g, int cell) {
  const double u = g.left_edge(cell) + g.length();
  return u <= g.density().mode ? g.density().sup : g.density().pdf(u);
}

BoundField first_step(const DensityGrid& g, double x) {
  const int z = g.zero_cell();
  const int p = g.cells() - z;
  BoundField b;
  b.lo.resize(p);
  b.hi.resize(p);
  for (int i = 0; i < p; ++i) {
    const double a = g.left_edge(z + i) - x;
    b.lo[i] = g.density().range_min(a, a + g.cell_width());
    b.hi[i] = g.density().range_max(a, a + g.cell_width());
  }
  b.escaped = 1.0 - g.density().cdf(g.length() - x);
  return b;
}

BoundField killed_step(const DensityGrid& g, const BoundField& in) {
  const int z = g.zero_cell();
  const int p = g.cells() - z;
  const double h = g.cell_width();
  const double* plo = &in.lo[0];
  const double* phi = &in.hi[0];
  BoundField out;
  out.lo.resize(p);
  out.hi.resize(p);
  for (int i = 0; i < p; ++i) {
    double slo = 0.0, shi = 0.0;
    for (int j = 0; j < p; ++j) {
      slo += g.pair_lo(i - j) * plo[j];
      shi += g.pair_hi(i - j) * phi[j];
    }
    out.lo[i] = slo * h;
    out.hi[i] = shi * h + in.escaped * return_from_right(g, z + i);
  }
  double leak = 0.0;
  for (int j = 0; j < p; ++j) {
    const double edge = g.left_edge(z + j) + h;
    leak += phi[j] * (1.0 - g.density().cdf(g.length() - edge));
  }
  out.escaped = in.escaped + leak * h;
  return out;
}

BoundField forward_bounds(const DensityGrid& g, int steps, double x) {
  BoundField b = first_step(g, x);
  for (int s = 1; s < steps; ++s) b = killed_step(g, b);
  return b;
}

void check_start(const DensityGrid& g, double x) {
  if (!(x >= 0.0) || !(x < g.length()))
    throw DomainError("start point must lie in [0, grid length)");
}

}  // namespace

Enclosure interval_kernel(const DensityGrid& grid, int n, double x, double y,
                          double delta) {
  if (n < 1) throw DomainError("need at least one step");
  check_start(grid, x);
  Enclosure e;
  if (delta <= 0.0) return e;

  const BoundField b = forward_bounds(grid, n, x);
  const double h = grid.cell_width();
  double wl = std::max(y, 0.0);
  double wr = y + delta;
  if (wr > grid.length()) {
    e.upper += b.escaped;
    wr = grid.length();
  }
  if (wl < wr) {
    const int first = static_cast<int>(std::floor(wl / h));
    const int last =
        std::min(static_cast<int>(b.lo.size()) - 1,
                 static_cast<int>(std::floor((wr - 1e-15) / h)));
    for (int i = first; i <= last; ++i) {
      const double overlap =
          std::min(wr, (i + 1) * h) - std::max(wl, i * h);
      if (overlap <= 0.0) continue;
      e.lower += b.lo[i] * overlap;
      e.upper += b.hi[i] * overlap;
    }
  }
  if (e.lower > 0.0 && e.upper / e.lower > grid.max_enclosure_ratio())
    throw GridTooCoarse("enclosure ratio " +
                        std::to_string(e.upper / e.lower) +
                        " exceeds the configured bound");
  return e;
}

namespace {

// Pointwise bounds on the k-step killed density ending exactly at y, as a
// function of the start cell, plus a sup bound for starts past the grid.
struct BackwardField {
  std::vector<double> lo, hi;
  double out_sup = 0.0;
};

BackwardField backward_bounds(const DensityGrid& g, int steps, double y) {
  const int z = g.zero_cell();
  const int p = g.cells() - z;
  const double h = g.cell_width();
  const UnimodalDensity& f = g.density();

  BackwardField b;
  b.lo.resize(p);
  b.hi.resize(p);
  for (int i = 0; i < p; ++i) {
    const double a = g.left_edge(z + i);
    b.lo[i] = f.range_min(y - a - h, y - a);
    b.hi[i] = f.range_max(y - a - h, y - a);
  }
  const double u = y - g.length();
  b.out_sup = u <= f.mode ? f.pdf(u) : f.sup;

  for (int k = 1; k < steps; ++k) {
    BackwardField next;
    next.lo.resize(p);
    next.hi.resize(p);
    for (int i = 0; i < p; ++i) {
      double slo = 0.0, shi = 0.0;
      for (int j = 0; j < p; ++j) {
        slo += g.pair_lo(j - i) * b.lo[j];
        shi += g.pair_hi(j - i) * b.hi[j];
      }
      const double edge = g.left_edge(z + i) + h;
      const double esc = 1.0 - f.cdf(g.length() - edge);
      next.lo[i] = slo * h;
      // a killed density never exceeds the one-step sup, so cap the bound
      next.hi[i] = std::min(shi * h + b.out_sup * esc, f.sup);
    }
    double gate = 0.0;
    for (int j = 0; j < p; ++j)
      gate += return_from_right(g, z + j) * b.hi[j];
    next.out_sup = std::min(gate * h + b.out_sup, f.sup);
    b = std::move(next);
  }
  return b;
}

}  // namespace

Enclosure sandwich_bounds(const DensityGrid& grid, int n, int k_bar, double x,
                          double y, double delta) {
  if (k_bar < 1 || n <= k_bar) throw DomainError("need n > k_bar >= 1");
  check_start(grid, x);
  if (!(y >= 0.0) || !(y < grid.length()))
    throw DomainError("target point must lie in [0, grid length)");
  if (!(delta > 0.0)) throw DomainError("window width must be positive");

  const double h = grid.cell_width();
  const int dcells =
      std::max<int>(1, static_cast<int>(std::llround(delta / h)));

  const BoundField fwd = forward_bounds(grid, n - k_bar, x);
  const BackwardField bwd = backward_bounds(grid, k_bar, y);
  const int p = static_cast<int>(fwd.lo.size());

  Enclosure e;
  for (int w = 0; w < p; w += dcells) {
    const int end = std::min(w + dcells, p);
    double mass_lo = 0.0, mass_hi = 0.0;
    double g_min = std::numeric_limits<double>::infinity(), g_max = 0.0;
    for (int i = w; i < end; ++i) {
      mass_lo += fwd.lo[i];
      mass_hi += fwd.hi[i];
      g_min = std::min(g_min, bwd.lo[i]);
      g_max = std::max(g_max, bwd.hi[i]);
    }
    e.lower += mass_lo * h * g_min;
    e.upper += mass_hi * h * g_max;
  }
  e.upper += fwd.escaped * bwd.out_sup;

  if (e.lower > 0.0 && e.upper / e.lower > grid.max_enclosure_ratio())
    throw GridTooCoarse("enclosure ratio " +
                        std::to_string(e.upper / e.lower) +
                        " exceeds the configured bound");
  return e;
}

ThetaResult dri_theta(const DensityGrid& grid, int k_bar, double alpha_prime,
                      double delta, double alpha, double rho,
                      double mass_cutoff) {
  if (k_bar < 1) throw DomainError("need at least one step");
  if (!(alpha_prime > rho * alpha) || !(alpha_prime < alpha))
    throw DomainError("weight exponent must lie in (rho*alpha, alpha)");
  if (!(delta > 0.0)) throw DomainError("window width must be positive");

  const int c = grid.cells();
  const double h = grid.cell_width();
  const UnimodalDensity& f = grid.density();

  // Upper bounds on the free k_bar-fold convolution, cellwise, tracking
  // mass that leaves the grid on either side.
  std::vector<double> hi(c);
  for (int j = 0; j < c; ++j) hi[j] = grid.cell_hi(j);
  double escaped = grid.tail_bound();
  for (int k = 1; k < k_bar; ++k) {
    std::vector<double> next(c);
    for (int i = 0; i < c; ++i) {
      double s = 0.0;
      for (int j = 0; j < c; ++j) s += grid.pair_hi(i - j) * hi[j];
      const double ret =
          std::max(return_from_right(grid, i), return_from_left(grid, i));
      next[i] = s * h + escaped * ret;
    }
    double leak = 0.0;
    for (int j = 0; j < c; ++j) {
      const double a = grid.left_edge(j);
      leak += hi[j] * (1.0 - f.cdf(grid.length() - (a + h)) + f.cdf(-grid.length() - a));
    }
    escaped += leak * h;
    hi = std::move(next);
  }

  std::vector<double> weighted(c);
  for (int i = 0; i < c; ++i) {
    const double a = grid.left_edge(i);
    const double reach = std::max(std::abs(a), std::abs(a + h));
    weighted[i] = std::pow(1.0 + reach, alpha_prime) * hi[i];
  }

  // Windows of width dcells*h anchored at the origin so that halving the
  // width splits each window exactly in two.
  const int dcells =
      std::max<int>(1, static_cast<int>(std::llround(delta / h)));
  const double width = dcells * h;
  const int z = grid.zero_cell();
  const double boundary =
      escaped * std::pow(1.0 + grid.length(), alpha_prime);

  ThetaResult r;
  r.theta = boundary;
  r.tail = boundary;
  const auto add_window = [&](int begin, int end) {
    begin = std::max(begin, 0);
    end = std::min(end, c);
    if (begin >= end) return;
    double m = 0.0;
    for (int i = begin; i < end; ++i) m = std::max(m, weighted[i]);
    r.theta += width * m;
    const double lo_u = grid.left_edge(begin);
    const double hi_u = grid.left_edge(end - 1) + h;
    if (lo_u >= mass_cutoff || hi_u <= -mass_cutoff) r.tail += width * m;
  };
  for (int b = z; b < c; b += dcells) add_window(b, b + dcells);
  for (int b = z - dcells; b + dcells > 0; b -= dcells) add_window(b, b + dcells);

  if (!std::isfinite(r.theta)) throw NonFinite("weighted sum overflowed");
  return r;
}

void sandwich_trace_csv(const DensityGrid& grid, int n, int k_bar, double x,
                        double y, const std::vector<double>& deltas,
                        std::ostream& out) {
  out << "delta,lower,upper,width\n";
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (double d : deltas) {
    const Enclosure e = sandwich_bounds(grid, n, k_bar, x, y, d);
    out << d << ',' << e.lower << ',' << e.upper << ','
        << (e.upper - e.lower) << '\n';
  }
  out.precision(old);
}

}  // namespace poswalk
