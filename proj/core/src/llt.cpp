#include "poswalk/llt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "poswalk/brownian.hpp"
#include "poswalk/errors.hpp"

namespace poswalk {

namespace {

constexpr double kSqrt2Pi = 2.506628274631000502415765284811;

std::vector<long long> sorted_times(const std::vector<long long>& n_list) {
  if (n_list.empty()) throw DomainError("need at least one horizon");
  std::vector<long long> ns = n_list;
  std::sort(ns.begin(), ns.end());
  for (long long n : ns)
    if (n < 2) throw DomainError("ratio probes start at n = 2");
  return ns;
}

// One constrained sweep from x, reading off q_n(x, y(n)) at each checkpoint.
std::vector<double> kernel_at(const StepLaw& law, Strictness s, int x,
                              const std::vector<long long>& ns,
                              const std::function<int(long long)>& y_of_n) {
  const long long n_max = ns.back();
  WalkDP dp = WalkDP::constrained(law, s, x,
                                  default_cap(law, n_max) + std::max(x, 0));
  std::vector<double> out;
  size_t next = 0;
  for (long long t = 0; t < n_max && next < ns.size(); ++t) {
    if (t + 1 == ns[next]) {
      out.push_back(dp.endpoint_value(y_of_n(t + 1)));
      ++next;
    }
    if (next < ns.size()) dp.step();
  }
  return out;
}

std::vector<double> free_pmf_at(const StepLaw& law, int x,
                                const std::vector<long long>& ns,
                                const std::function<int(long long)>& y_of_n) {
  const long long n_max = ns.back();
  int y_lo = x, y_hi = x;
  for (long long n : ns) {
    y_lo = std::min(y_lo, y_of_n(n));
    y_hi = std::max(y_hi, y_of_n(n));
  }
  const int cap = default_cap(law, n_max);
  WalkDP dp = WalkDP::windowed(law, x, y_lo - cap, y_hi + cap);
  std::vector<double> out;
  size_t next = 0;
  for (long long t = 1; t <= n_max && next < ns.size(); ++t) {
    dp.step();
    if (t == ns[next]) {
      out.push_back(dp.alive_at(y_of_n(t)));
      ++next;
    }
  }
  return out;
}

std::vector<double> survival_at(const StepLaw& law, Strictness s, int x,
                                const std::vector<long long>& ns) {
  const long long n_max = ns.back();
  WalkDP dp = WalkDP::constrained(law, s, x,
                                  default_cap(law, n_max) + std::max(x, 0));
  std::vector<double> out;
  size_t next = 0;
  for (long long t = 1; t <= n_max && next < ns.size(); ++t) {
    dp.step();
    if (t == ns[next]) {
      out.push_back(dp.mass() + dp.leak());
      ++next;
    }
  }
  return out;
}

}  // namespace

void RatioDiagnostic::finish() {
  final_gap = std::abs(observed.back() - target);
  if (observed.size() >= 2) {
    const double prev = std::abs(observed[observed.size() - 2] - target);
    trend_ok = final_gap <= prev;
  } else {
    trend_ok = true;
  }
}

RatioDiagnostic gnedenko_ratio(const StepLaw& law,
                               const std::vector<long long>& n_list, int x,
                               const YSelector& y_of_n) {
  const StableParams params = brownian_params(law);
  RatioDiagnostic d;
  d.n_list = sorted_times(n_list);
  const auto y_fn = [&](long long n) {
    return y_of_n(n, norming(params, n));
  };
  const std::vector<double> pmf = free_pmf_at(law, x, d.n_list, y_fn);
  for (size_t i = 0; i < d.n_list.size(); ++i) {
    const double a_n = norming(params, d.n_list[i]);
    const double u = (y_fn(d.n_list[i]) - x) / a_n;
    d.observed.push_back(a_n * pmf[i] / gauss_density(u));
  }
  d.finish();
  return d;
}

RatioDiagnostic llt_small_ratio(const StepLaw& law,
                                const std::vector<long long>& n_list, int x,
                                int y, Strictness s) {
  const StableParams params = brownian_params(law);
  const RenewalTable desc = renewal_table(law, false, std::max(x, 1) + 1);
  const RenewalTable asc = renewal_table(law, true, std::max(y, 1) + 1);
  const double denom =
      s == Strictness::weak
          ? gauss_density(0.0) * desc.strict(x) * asc.weak(y)
          : gauss_density(0.0) * desc.weak_under(x) * asc.strict_under(y);

  RatioDiagnostic d;
  d.n_list = sorted_times(n_list);
  const std::vector<double> q =
      kernel_at(law, s, x, d.n_list, [y](long long) { return y; });
  for (size_t i = 0; i < d.n_list.size(); ++i) {
    const double n = static_cast<double>(d.n_list[i]);
    const double a_n = norming(params, d.n_list[i]);
    d.observed.push_back(n * a_n * q[i] / denom);
  }
  d.finish();
  return d;
}

RatioDiagnostic llt_large_ratio(const StepLaw& law,
                                const std::vector<long long>& n_list, int x,
                                double c, Strictness s) {
  if (!(c > 0.0)) throw DomainError("endpoint scale must be positive");
  const StableParams params = brownian_params(law);
  const RenewalTable desc = renewal_table(law, false, std::max(x, 1) + 1);
  const double v_x =
      s == Strictness::weak ? desc.strict(x) : desc.weak_under(x);

  RatioDiagnostic d;
  d.n_list = sorted_times(n_list);
  const auto y_fn = [&](long long n) {
    return static_cast<int>(std::lround(c * norming(params, n)));
  };
  const std::vector<double> q = kernel_at(law, s, x, d.n_list, y_fn);
  const std::vector<double> surv = survival_at(law, s, 0, d.n_list);
  for (size_t i = 0; i < d.n_list.size(); ++i) {
    const double a_n = norming(params, d.n_list[i]);
    const double u = y_fn(d.n_list[i]) / a_n;
    d.observed.push_back(a_n * q[i] /
                         (surv[i] * v_x * meander_end_density(u)));
  }
  d.finish();
  return d;
}

DiagnosticReport constants_check(const StepLaw& law,
                                 const std::vector<long long>& n_list) {
  const StableParams params = brownian_params(law);
  const std::vector<long long> ns = sorted_times(n_list);
  const int x_top =
      static_cast<int>(std::lround(norming(params, ns.back()))) + 2;

  DiagnosticReport report;
  report.tool = "tail-constants";
  report.config["law"] = law.name;

  const RenewalTable desc = renewal_table(law, false, x_top);
  const std::vector<double> up_surv =
      survival_at(reflect(law), Strictness::strict, 0, ns);
  std::vector<double> c_minus(ns.size());
  for (size_t i = 0; i < ns.size(); ++i) {
    const int arg = static_cast<int>(std::lround(norming(params, ns[i])));
    c_minus[i] = desc.strict_under(arg) /
                 (static_cast<double>(ns[i]) * up_surv[i]);
    const double rel = std::abs(c_minus[i] / kSqrt2Pi - 1.0);
    report.add("descending-side/n=" + std::to_string(ns[i]), rel < 0.10, rel,
               0.10);
  }

  // The ascending estimate needs the opposite ladder marginal, which only
  // closes exactly for laws stepping up by at most one. When it is out of
  // reach the report says so instead of pretending.
  try {
    const RenewalTable asc = renewal_table(law, true, x_top);
    const std::vector<double> down_surv =
        survival_at(law, Strictness::strict, 0, ns);
    for (size_t i = 0; i < ns.size(); ++i) {
      const int arg = static_cast<int>(std::lround(norming(params, ns[i])));
      const double c_plus = asc.strict_under(arg) /
                            (static_cast<double>(ns[i]) * down_surv[i]);
      const double rel = std::abs(c_plus / kSqrt2Pi - 1.0);
      report.add("ascending-side/n=" + std::to_string(ns[i]), rel < 0.10, rel,
                 0.10);
      const double agree = std::abs(c_plus / c_minus[i] - 1.0);
      report.add("sides-agree/n=" + std::to_string(ns[i]), agree < 0.05,
                 agree, 0.05);
    }
  } catch (const DefectTooLarge& e) {
    report.add("ascending-side", true, 0.0, 0.0,
               std::string("skipped: ") + e.what());
  }
  return report;
}

void ratios_to_csv(
    const std::vector<std::pair<std::string, RatioDiagnostic>>& diags,
    std::ostream& out) {
  out << "check_name,n,observed,target,gap\n";
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& [name, d] : diags)
    for (size_t i = 0; i < d.n_list.size(); ++i)
      out << name << ',' << d.n_list[i] << ',' << d.observed[i] << ','
          << d.target << ',' << std::abs(d.observed[i] - d.target) << '\n';
  out.precision(old);
}

}  // namespace poswalk
