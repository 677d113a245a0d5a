#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace poswalk {

// A bounded step density with a single peak and an analytic distribution
// function. Unimodality is what makes rigorous cell enclosures cheap: on
// any interval the extrema of the density sit at the endpoints or at the
// peak, so two or three evaluations pin inf and sup exactly.
struct UnimodalDensity {
  std::string name;
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  double mode = 0.0;
  double sup = 0.0;

  // Exact inf/sup of the density over [a, b] (endpoints or peak).
  double range_min(double a, double b) const;
  double range_max(double a, double b) const;
};

UnimodalDensity gaussian_density(double sigma = 1.0);

// Symmetric density with polynomial tails |u|^{-(1+beta)}; finite variance
// for beta > 2, so it stays in the Gaussian domain while stressing the
// weighted tail sums below.
UnimodalDensity pareto_tail_density(double beta = 2.5);

// Uniform cell decomposition of [-length, length] carrying per-cell
// enclosures of the step density plus the two-cell difference enclosures
// an interval convolution needs. All downstream bounds are built from
// these tables, so the grid is immutable once constructed.
class DensityGrid {
 public:
  DensityGrid(UnimodalDensity f, double length = 12.0,
              double cell_width = 1.0 / 256.0,
              double max_enclosure_ratio = 1e3);

  const UnimodalDensity& density() const { return f_; }
  double length() const { return length_; }
  double cell_width() const { return h_; }
  int cells() const { return cells_; }
  int zero_cell() const { return cells_ / 2; }
  double left_edge(int j) const { return -length_ + j * h_; }
  double tail_bound() const { return tail_bound_; }
  double max_enclosure_ratio() const { return max_ratio_; }

  double cell_lo(int j) const { return cell_lo_[j]; }
  double cell_hi(int j) const { return cell_hi_[j]; }

  // Enclosure of f over the open two-cell window ((t-1)h, (t+1)h), the
  // range of u - v when u and v each run over a cell with index gap t.
  double pair_lo(int t) const { return pair_lo_[t + cells_ - 1]; }
  double pair_hi(int t) const { return pair_hi_[t + cells_ - 1]; }

 private:
  UnimodalDensity f_;
  double length_;
  double h_;
  double max_ratio_;
  int cells_;
  double tail_bound_;
  std::vector<double> cell_lo_, cell_hi_;
  std::vector<double> pair_lo_, pair_hi_;
};

// A certified bracket: lower <= exact value <= upper.
struct Enclosure {
  double lower = 0.0;
  double upper = 0.0;
};

// Rigorous enclosure of the probability that a walk started at x stays
// positive for n - 1 steps and lands in [y, y+delta) at step n. The window
// is clipped to the positive half-line; delta <= 0 yields (0, 0). Throws
// GridTooCoarse when the enclosure ratio exceeds the grid's configured
// bound while the lower bound is positive.
Enclosure interval_kernel(const DensityGrid& grid, int n, double x, double y,
                          double delta);

// Riemann sandwich for the n-step positivity-constrained density at (x, y),
// split at k_bar steps from the end: windows of width delta collect the
// forward interval kernel, and the backward k_bar-step density contributes
// its per-window inf (lower) or sup (upper). Widths are non-increasing
// under delta-halving when delta is an even multiple of the cell width.
Enclosure sandwich_bounds(const DensityGrid& grid, int n, int k_bar, double x,
                          double y, double delta);

struct ThetaResult {
  double theta = 0.0;  // sup-Riemann sum of (1+|u|)^alpha_prime * f_kbar(u)
  double tail = 0.0;   // contribution from |u| >= mass_cutoff
};

// Weighted sup-Riemann sum certifying direct Riemann integrability of the
// k_bar-fold free convolution. alpha_prime must lie in (rho*alpha, alpha).
// theta(delta/2) <= theta(delta) holds exactly for delta an even multiple
// of the cell width. The reported tail adds a boundary term for mass that
// left the grid, weighted as if it sat at the grid edge; that term is a
// floor, not a certified bound, and is negligible for light-tailed steps.
ThetaResult dri_theta(const DensityGrid& grid, int k_bar, double alpha_prime,
                      double delta, double alpha = 2.0, double rho = 0.5,
                      double mass_cutoff = 10.0);

// CSV rows "delta,lower,upper,width" tracing a sandwich refinement at
// fixed (n, k_bar, x, y).
void sandwich_trace_csv(const DensityGrid& grid, int n, int k_bar, double x,
                        double y, const std::vector<double>& deltas,
                        std::ostream& out);

}  // namespace poswalk
