#pragma once

#include <vector>

#include "poswalk/kernels.hpp"
#include "poswalk/step_law.hpp"

namespace poswalk {

// Joint law of the first ladder epoch and ladder height.
//
// Descending weak:   tau = min{n : S_n <= 0},  height = -S_tau >= 0
// Descending strict: tau = min{n : S_n <  0},  height = -S_tau >= 1
// Ascending variants mirror these through the reflected walk, so the height
// is S_tau (weak: first entry into [0, inf) counting from below, etc).
//
// joint(t, h) covers t = 1..t_max. Heights never exceed the largest step
// toward the barrier, so h_max is small. Mass not placed by t_max shows up
// in defect; the height marginal additionally knows when a closed form makes
// it exact despite the finite horizon.
struct LadderLaw {
  Strictness strictness = Strictness::weak;
  bool descending = true;
  int t_max = 0;
  int h_max = 0;
  std::vector<double> joint;   // row-major over (t-1, h)
  double defect = 0.0;         // epoch mass beyond t_max (upper bound)
  std::vector<double> height;  // marginal over h = 0..h_max
  double height_defect = 0.0;  // 0 when the marginal is exact
  bool height_exact = false;

  double joint_at(int t, int h) const;
};

LadderLaw ladder_law(const StepLaw& law, Strictness s, bool descending,
                     int t_max);

// Probability that the first weak ladder height is zero, i.e. the walk
// re-enters the closed half-line exactly at the origin. The descending and
// ascending routes must agree; both are reported along with the truncation
// error of whichever value is returned.
struct ZetaEstimate {
  double value = 0.0;
  double error_bound = 0.0;
  double cross_gap = 0.0;
};

ZetaEstimate zeta(const StepLaw& law, int t_max = 4096);

// Renewal function of the weak ladder height chain on one side of the walk,
// with the strict variant obtained by the (1 - zeta) proportionality and the
// shifted variants used by kernels conditioned to stay strictly positive:
//
//   weak(x)          V(x)   = expected ladder points in [0, x]
//   strict(x)        (1 - zeta) V(x)
//   weak_under(x)    V(x-1) for x >= 1, 1 at x = 0
//   strict_under(x)  strict(x-1) for x >= 1, 1 - zeta at x = 0
//
// Construction needs the exact height marginal; when the finite-horizon
// marginal still carries more defect than defect_tol this throws
// DefectTooLarge rather than silently extrapolating.
struct RenewalTable {
  bool ascending = false;
  double zeta = 0.0;
  std::vector<double> weak_values;

  int x_max() const { return static_cast<int>(weak_values.size()) - 1; }
  double weak(int x) const;
  double strict(int x) const;
  double weak_under(int x) const;
  double strict_under(int x) const;
  // Linear interpolation at real arguments, for norming-scale evaluation.
  double strict_under_interp(double x) const;
};

RenewalTable renewal_table(const StepLaw& law, bool ascending, int x_max,
                           int t_max = 4096, double defect_tol = 1e-6);

// | sum_y q_n(x, y) V(y) - V(x) | / V(x) for the killed kernel of the given
// strictness, using the descending renewal table of the same law. The weak
// kernel pairs with weak(y), the strict kernel with weak_under(y).
double harmonic_residual(const StepLaw& law, Strictness s,
                         const RenewalTable& descending_table, int x, int n);

// Gap in the ladder-renewal identity: occupation of the set `targets` at
// time n by the ascending ladder point process versus the killed kernel from
// zero. Exact up to rounding, so the residual sits at machine scale.
double duality_residual(const StepLaw& law, Strictness s, int n,
                        const std::vector<int>& targets);

// Gap in the cycle rearrangement identity that splits an excursion pinned at
// zero around its first return: compares n * q-hat_n(0,0) with the sum over
// split points of products of dual strictly-positive kernels.
double alili_doney_residual(const StepLaw& law, int n);

// Gap between the weak diagonal kernel q_n(0,0) and the renewal sequence
// generated by the strict diagonal kernel acting as inter-arrival mass.
double renewal_mass_residual(const StepLaw& law, int n);

// r(n) = (1 - zeta) P(weak positivity holds through n) / P(strict positivity
// holds through n). The two survival exponents agree and the proportionality
// constant is exactly 1/(1 - zeta), so r converges to one.
std::vector<double> tail_ratio_sequence(const StepLaw& law,
                                        const std::vector<long long>& ns);

}  // namespace poswalk
