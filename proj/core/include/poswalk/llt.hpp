#pragma once

#include <functional>
#include <vector>

#include "poswalk/fluctuation.hpp"
#include "poswalk/kernels.hpp"
#include "poswalk/report.hpp"
#include "poswalk/step_law.hpp"

namespace poswalk {

// One convergence probe: a ratio expected to approach 1 along n_list.
struct RatioDiagnostic {
  std::vector<long long> n_list;
  std::vector<double> observed;
  double target = 1.0;
  double final_gap = 0.0;  // |observed.back() - target|
  bool trend_ok = false;   // gap at the last entry <= gap one entry earlier

  void finish();  // fills final_gap and trend_ok from observed
};

// Picks the endpoint as a function of (n, a_n); used where the probe point
// scales with the walk's spread.
using YSelector = std::function<int(long long, double)>;

// a_n P_x(S_n = y) / g((y - x)/a_n), the pointwise Gaussian local limit.
RatioDiagnostic gnedenko_ratio(const StepLaw& law,
                               const std::vector<long long>& n_list, int x,
                               const YSelector& y_of_n);

// Fixed-endpoint kernel ratio against the product form
//   weak:   n a_n q_n(x,y)    / (g(0) strict_desc(x) weak_asc(y))
//   strict: n a_n q-hat_n(x,y) / (g(0) under_desc(x) under_strict_asc(y))
// where the renewal factors come from the descending and ascending tables of
// the law itself.
RatioDiagnostic llt_small_ratio(const StepLaw& law,
                                const std::vector<long long>& n_list, int x,
                                int y, Strictness s);

// Scaled-endpoint kernel ratio, y_n = round(c a_n):
//   strict: a_n q-hat_n(x,y_n) / (P(strict survival n) under_desc(x) m(c_n))
//   weak:   a_n q_n(x,y_n)     / (P(weak survival n) strict_desc(x) m(c_n))
// with m the Rayleigh density at c_n = y_n / a_n.
RatioDiagnostic llt_large_ratio(const StepLaw& law,
                                const std::vector<long long>& n_list, int x,
                                double c, Strictness s);

// Estimates the tail constant on each side through
// strict_under(round(a_n)) / (n P(opposite-side strict survival)) and
// compares with sqrt(2 pi); the two sides must also agree with each other.
DiagnosticReport constants_check(const StepLaw& law,
                                 const std::vector<long long>& n_list);

// CSV rows "check_name,n,observed,target,gap" for a set of diagnostics.
void ratios_to_csv(const std::vector<std::pair<std::string, RatioDiagnostic>>& diags,
                   std::ostream& out);

}  // namespace poswalk
