#include "poswalk/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poswalk/accum.hpp"
#include "poswalk/errors.hpp"

namespace poswalk {

namespace {

// The ladder DP runs on the walk pointed toward the barrier: descending
// ladders read the law as is, ascending ones through its reflection.
StepLaw working_law(const StepLaw& law, bool descending) {
  return descending ? law : reflect(law);
}

// A barrier overshoot cannot exceed the largest step toward it, because the
// path sits on the allowed side the moment before crossing.
int ladder_height_cap(const StepLaw& w) { return -w.min_offset(); }

}  // namespace

double LadderLaw::joint_at(int t, int h) const {
  if (t < 1 || t > t_max || h < 0 || h > h_max)
    throw DomainError("ladder table index out of range");
  return joint[static_cast<size_t>(t - 1) * (h_max + 1) + h];
}

LadderLaw ladder_law(const StepLaw& law, Strictness s, bool descending,
                     int t_max) {
  if (t_max < 1) throw DomainError("ladder horizon must be positive");
  const StepLaw w = working_law(law, descending);

  LadderLaw out;
  out.strictness = s;
  out.descending = descending;
  out.t_max = t_max;
  out.h_max = std::max(ladder_height_cap(w), 1);
  out.joint.assign(static_cast<size_t>(t_max) * (out.h_max + 1), 0.0);

  // Surviving paths for a weak ladder are the strictly positive ones and
  // vice versa: the epoch happens the first time the opposite constraint
  // fails. Hence the swapped strictness in the alive vector.
  const Strictness alive_mode =
      s == Strictness::weak ? Strictness::strict : Strictness::weak;
  const int h_min = s == Strictness::weak ? 0 : 1;

  WalkDP dp = WalkDP::constrained(w, alive_mode, 0, default_cap(w, t_max));
  NeumaierSum total;
  for (int t = 1; t <= t_max; ++t) {
    for (int h = h_min; h <= out.h_max; ++h) {
      const double v = dp.endpoint_value(-h);
      out.joint[static_cast<size_t>(t - 1) * (out.h_max + 1) + h] = v;
      total.add(v);
    }
    if (t < t_max) dp.step();
  }
  out.defect = std::max(0.0, 1.0 - total.value());

  out.height.assign(static_cast<size_t>(out.h_max) + 1, 0.0);
  const auto [mean, var] = moments(w);
  (void)var;
  if (w.min_offset() == -1 && mean <= 1e-12) {
    // Walks that step down by at most one cross the barrier without slack:
    // a weak ladder overshoots only when the very first step is the unit
    // drop, and a strict ladder lands exactly one below it.
    out.height_exact = true;
    out.height_defect = 0.0;
    if (s == Strictness::weak) {
      out.height[0] = 1.0 - w.p(-1);
      out.height[1] = w.p(-1);
    } else {
      out.height[1] = 1.0;
    }
  } else {
    for (int h = h_min; h <= out.h_max; ++h) {
      NeumaierSum col;
      for (int t = 1; t <= t_max; ++t)
        col.add(out.joint[static_cast<size_t>(t - 1) * (out.h_max + 1) + h]);
      out.height[static_cast<size_t>(h)] = col.value();
    }
    out.height_defect = out.defect;
  }
  return out;
}

ZetaEstimate zeta(const StepLaw& law, int t_max) {
  const LadderLaw down = ladder_law(law, Strictness::weak, true, t_max);
  const LadderLaw up = ladder_law(law, Strictness::weak, false, t_max);
  ZetaEstimate z;
  z.cross_gap = std::abs(down.height[0] - up.height[0]);
  if (down.height_defect <= up.height_defect) {
    z.value = down.height[0];
    z.error_bound = down.height_defect;
  } else {
    z.value = up.height[0];
    z.error_bound = up.height_defect;
  }
  return z;
}

double RenewalTable::weak(int x) const {
  if (x < 0 || x > x_max())
    throw RenewalRangeExceeded("renewal table holds x <= " +
                               std::to_string(x_max()) + ", asked for " +
                               std::to_string(x));
  return weak_values[static_cast<size_t>(x)];
}

double RenewalTable::strict(int x) const { return (1.0 - zeta) * weak(x); }

double RenewalTable::weak_under(int x) const {
  return x == 0 ? 1.0 : weak(x - 1);
}

double RenewalTable::strict_under(int x) const {
  return x == 0 ? 1.0 - zeta : strict(x - 1);
}

double RenewalTable::strict_under_interp(double x) const {
  if (x < 0.0) throw DomainError("renewal argument must be nonnegative");
  const int i = static_cast<int>(std::floor(x));
  if (i >= x_max()) throw RenewalRangeExceeded("interpolation past table end");
  const double frac = x - i;
  return (1.0 - frac) * strict_under(i) + frac * strict_under(i + 1);
}

RenewalTable renewal_table(const StepLaw& law, bool ascending, int x_max,
                           int t_max, double defect_tol) {
  const LadderLaw heights =
      ladder_law(law, Strictness::weak, /*descending=*/!ascending, t_max);
  if (heights.height_defect > defect_tol)
    throw DefectTooLarge("ladder height marginal is missing " +
                         std::to_string(heights.height_defect) +
                         " mass at horizon " + std::to_string(t_max));

  RenewalTable table;
  table.ascending = ascending;
  table.zeta = heights.height[0];
  if (table.zeta >= 1.0 - 1e-12)
    throw DegenerateLaw("ladder heights vanish almost surely");

  table.weak_values.assign(static_cast<size_t>(x_max) + 1, 0.0);
  const double inv = 1.0 / (1.0 - table.zeta);
  for (int x = 0; x <= x_max; ++x) {
    double acc = 1.0;
    const int h_hi = std::min(x, heights.h_max);
    for (int h = 1; h <= h_hi; ++h)
      acc += heights.height[static_cast<size_t>(h)] *
             table.weak_values[static_cast<size_t>(x - h)];
    table.weak_values[static_cast<size_t>(x)] = acc * inv;
  }
  return table;
}

double harmonic_residual(const StepLaw& law, Strictness s,
                         const RenewalTable& descending_table, int x, int n) {
  const int cap = x + n * law.max_offset();
  WalkDP dp = WalkDP::constrained(law, s, x, std::max(cap, x));
  dp.advance(n);

  NeumaierSum sum;
  const int y_lo = state_floor(s);
  for (int y = std::max(y_lo, dp.raw().lo); y <= dp.raw().hi(); ++y) {
    const double q = dp.alive_at(y);
    if (q == 0.0) continue;
    const double v = s == Strictness::weak ? descending_table.weak(y)
                                           : descending_table.weak_under(y);
    sum.add(q * v);
  }
  const double target = s == Strictness::weak ? descending_table.weak(x)
                                              : descending_table.weak_under(x);
  return std::abs(sum.value() - target) / target;
}

double duality_residual(const StepLaw& law, Strictness s, int n,
                        const std::vector<int>& targets) {
  if (n < 1) throw DomainError("duality check needs n >= 1");
  const LadderLaw lad = ladder_law(law, s, /*descending=*/false, n);

  // Occupation of the ascending ladder point process, built by convolving
  // the joint epoch/height law against itself over all renewal counts.
  const int h_cap = n * lad.h_max;
  std::vector<std::vector<double>> occ(
      static_cast<size_t>(n) + 1,
      std::vector<double>(static_cast<size_t>(h_cap) + 1, 0.0));
  occ[0][0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    for (int t = 1; t <= m; ++t) {
      for (int g = 0; g <= lad.h_max; ++g) {
        const double j = lad.joint_at(t, g);
        if (j == 0.0) continue;
        const auto& prev = occ[static_cast<size_t>(m - t)];
        auto& cur = occ[static_cast<size_t>(m)];
        for (int h = g; h <= h_cap; ++h) {
          const double p = prev[static_cast<size_t>(h - g)];
          if (p != 0.0) cur[static_cast<size_t>(h)] += j * p;
        }
      }
    }
  }

  WalkDP dp = WalkDP::constrained(law, s, 0, n * law.max_offset() + 1);
  dp.advance(n);

  NeumaierSum lhs, rhs;
  for (int y : targets) {
    if (y >= 0 && y <= h_cap) lhs.add(occ[static_cast<size_t>(n)][static_cast<size_t>(y)]);
    rhs.add(dp.alive_at(y));
  }
  return std::abs(lhs.value() - rhs.value());
}

double alili_doney_residual(const StepLaw& law, int n) {
  if (n < 1) throw DomainError("cycle identity needs n >= 1");
  const StepLaw refl = reflect(law);

  // Strictly positive alive vectors of both walks at every split time.
  std::vector<std::vector<double>> fwd(static_cast<size_t>(n));
  std::vector<std::vector<double>> bwd(static_cast<size_t>(n));
  std::vector<int> fwd_lo(static_cast<size_t>(n)), bwd_lo(static_cast<size_t>(n));

  const int cap = n * std::max(law.max_offset(), refl.max_offset()) + 1;
  WalkDP f = WalkDP::constrained(law, Strictness::strict, 0, cap);
  WalkDP b = WalkDP::constrained(refl, Strictness::strict, 0, cap);
  double qnn = 0.0;
  for (int i = 1; i <= n; ++i) {
    if (i == n) {
      qnn = f.endpoint_value(0);
      break;
    }
    f.step();
    b.step();
    fwd[static_cast<size_t>(i)].resize(f.raw().v.size());
    fwd_lo[static_cast<size_t>(i)] = f.raw().lo;
    for (size_t k = 0; k < f.raw().v.size(); ++k)
      fwd[static_cast<size_t>(i)][k] = f.raw().v[k] * f.scale();
    bwd[static_cast<size_t>(i)].resize(b.raw().v.size());
    bwd_lo[static_cast<size_t>(i)] = b.raw().lo;
    for (size_t k = 0; k < b.raw().v.size(); ++k)
      bwd[static_cast<size_t>(i)][k] = b.raw().v[k] * b.scale();
  }
  if (n == 1) qnn = law.p(0);

  NeumaierSum total;
  total.add(qnn);
  for (int i = 1; i <= n - 1; ++i) {
    const auto& r = bwd[static_cast<size_t>(i)];
    const auto& o = fwd[static_cast<size_t>(n - i)];
    const int rlo = bwd_lo[static_cast<size_t>(i)];
    const int olo = fwd_lo[static_cast<size_t>(n - i)];
    for (size_t k = 0; k < r.size(); ++k) {
      const int h = rlo + static_cast<int>(k);
      if (h < 1) continue;
      const int oi = h - olo;
      if (oi < 0 || oi >= static_cast<int>(o.size())) continue;
      total.add(r[k] * o[static_cast<size_t>(oi)]);
    }
  }
  return std::abs(qnn - total.value() / n);
}

double renewal_mass_residual(const StepLaw& law, int n) {
  if (n < 1) throw DomainError("renewal mass check needs n >= 1");
  const std::vector<double> k =
      kernel_diag_curve(law, Strictness::strict, n, 0, 0);
  const std::vector<double> q =
      kernel_diag_curve(law, Strictness::weak, n, 0, 0);

  std::vector<double> r(static_cast<size_t>(n) + 1, 0.0);
  r[0] = 1.0;
  for (int t = 1; t <= n; ++t) {
    NeumaierSum acc;
    for (int m = 1; m <= t; ++m)
      acc.add(k[static_cast<size_t>(m)] * r[static_cast<size_t>(t - m)]);
    r[static_cast<size_t>(t)] = acc.value();
  }
  return std::abs(q[static_cast<size_t>(n)] - r[static_cast<size_t>(n)]);
}

std::vector<double> tail_ratio_sequence(const StepLaw& law,
                                        const std::vector<long long>& ns) {
  if (ns.empty()) return {};
  const ZetaEstimate z = zeta(law);

  std::vector<double> out;
  out.reserve(ns.size());
  for (long long n : ns) {
    if (n < 1) throw DomainError("tail ratio times must be positive");
    const double weak_surv =
        positivity_survival(law, static_cast<int>(n), 0, Strictness::weak);
    const double strict_surv =
        positivity_survival(law, static_cast<int>(n), 0, Strictness::strict);
    out.push_back((1.0 - z.value) * weak_surv / strict_surv);
  }
  return out;
}

}  // namespace poswalk
