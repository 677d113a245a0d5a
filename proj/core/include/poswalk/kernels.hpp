#pragma once

#include <iosfwd>
#include <vector>

#include "poswalk/step_law.hpp"

namespace poswalk {

// Path constraint for the killed kernels: weak keeps S_i >= 0, strict keeps
// S_i > 0, applied to intermediate times only. Endpoints stay free, matching
// the convention q_1(x,y) = p(y-x) with no constraint at all.
enum class Strictness { weak, strict };

inline int state_floor(Strictness s) { return s == Strictness::weak ? 0 : 1; }

// Dense vector over the integer window [lo, lo + v.size()).
struct StateVec {
  int lo = 0;
  std::vector<double> v;

  int hi() const { return lo + static_cast<int>(v.size()) - 1; }
  double get(int s) const {
    if (s < lo || s > hi()) return 0.0;
    return v[static_cast<size_t>(s - lo)];
  }
};

// Forward dynamic program for one starting point.
//
// Maintains alive[w] = P_x(constraint holds at times 1..m, S_m = w) in linear
// space with a running log scale so deep kills cannot underflow. Mass that
// leaves the window over the cap (and, for the windowed variant, under the
// low edge) is accumulated as leak in true-probability units; mass killed by
// the positivity constraint is simply removed, that being the event.
class WalkDP {
 public:
  // Killed below state_floor(s), leaking above cap.
  static WalkDP constrained(const StepLaw& law, Strictness s, int start,
                            int cap);
  // Free walk restricted to [lo_cap, hi_cap], leaking on both sides.
  static WalkDP windowed(const StepLaw& law, int start, int lo_cap,
                         int hi_cap);

  void step();
  void advance(int steps);

  int time() const { return time_; }
  double leak() const { return leak_; }
  double mass() const;                  // surviving probability at time()
  double alive_at(int s) const;         // P(constrained to time(), S = s)
  const StateVec& raw() const { return state_; }
  double scale() const { return scale_; }

  // One free step off the current vector: q_{time()+1}(start, y) for any y,
  // including endpoints outside the constrained region.
  double endpoint_value(int y) const;

 private:
  WalkDP(const StepLaw& law, int start, int floor, int cap, bool kill_below);

  StepLaw law_;
  StateVec state_;
  int floor_;
  int cap_;
  bool kill_below_;
  int time_ = 0;
  double leak_ = 0.0;
  double scale_ = 1.0;  // true value = raw * scale_
};

// Window half-width that keeps the leak of an n-step run negligible
// (8.5 standard deviations plus a support-sized margin).
int default_cap(const StepLaw& law, long long n);

// Killed-kernel table q_n (weak) or q-hat_n (strict) over
// x in [0, x_max], y in [0, y_max], stored as logs with -inf for exact zero.
struct KernelTable {
  Strictness strictness = Strictness::weak;
  int n = 0;
  int x_max = 0;
  int y_max = 0;
  std::vector<double> log_values;  // row-major (x_max+1) x (y_max+1)
  std::vector<double> leak;        // per starting point

  double log_value(int x, int y) const;
  double value(int x, int y) const;
};

// Builds the table by one forward DP per row: n-1 constrained steps and a
// free endpoint step. Throws TruncationExceeded when a row's leak exceeds
// leak_tol relative to that row's surviving mass.
KernelTable q_plus(const StepLaw& law, int n, int x_max, int y_max,
                   Strictness strictness, double leak_tol = 1e-12);

// P_x(S_n = y), unconstrained walk; the internal window is grown until the
// leaked mass is below 1e-15.
double transition_pmf(const StepLaw& law, int n, int x, int y);

// P_x(all of S_1..S_n satisfy the constraint).
double positivity_survival(const StepLaw& law, int n, int x, Strictness s);

// survival[m] = P_x(constraint holds at 1..m) for m = 0..n_max.
std::vector<double> survival_curve(const StepLaw& law, Strictness s, int n_max,
                                   int x = 0);

// diag[m] = q_m(x,y) for m = 1..n_max (index 0 unused), one DP sweep.
std::vector<double> kernel_diag_curve(const StepLaw& law, Strictness s,
                                      int n_max, int x = 0, int y = 0);

// CSV rows "n,x,y,log_value" (header included).
void kernel_table_to_csv(const KernelTable& table, std::ostream& out);

}  // namespace poswalk
