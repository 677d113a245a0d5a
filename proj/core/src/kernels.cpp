#include "poswalk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "poswalk/accum.hpp"
#include "poswalk/errors.hpp"

namespace poswalk {

namespace {
constexpr double kRescaleBelow = 1e-140;
}  // namespace

WalkDP::WalkDP(const StepLaw& law, int start, int floor, int cap,
               bool kill_below)
    : law_(law), floor_(floor), cap_(cap), kill_below_(kill_below) {
  if (cap_ < floor_) throw DomainError("walk window is empty");
  state_.lo = start;
  state_.v.assign(1, 1.0);
}

WalkDP WalkDP::constrained(const StepLaw& law, Strictness s, int start,
                           int cap) {
  return WalkDP(law, start, state_floor(s), cap, /*kill_below=*/true);
}

WalkDP WalkDP::windowed(const StepLaw& law, int start, int lo_cap,
                        int hi_cap) {
  if (start < lo_cap || start > hi_cap)
    throw DomainError("walk starts outside its window");
  return WalkDP(law, start, lo_cap, hi_cap, /*kill_below=*/false);
}

void WalkDP::step() {
  const int lo_in = state_.lo;
  const int n_in = static_cast<int>(state_.v.size());
  const int lo_out = std::max(floor_, lo_in + law_.min_offset());
  const int hi_out = std::min(cap_, lo_in + n_in - 1 + law_.max_offset());

  std::vector<double> out;
  if (hi_out >= lo_out) out.assign(static_cast<size_t>(hi_out - lo_out + 1), 0.0);

  double dropped = 0.0;
  const int kmin = law_.min_offset();
  const int kmax = law_.max_offset();
  for (int i = 0; i < n_in; ++i) {
    const double val = state_.v[static_cast<size_t>(i)];
    if (val == 0.0) continue;
    const int w = lo_in + i;
    for (int k = kmin; k <= kmax; ++k) {
      const double pk = law_.dense[static_cast<size_t>(k - kmin)];
      if (pk == 0.0) continue;
      const int z = w + k;
      if (z < floor_) {
        if (!kill_below_) dropped += val * pk;
        continue;
      }
      if (z > cap_) {
        dropped += val * pk;
        continue;
      }
      out[static_cast<size_t>(z - lo_out)] += val * pk;
    }
  }

  leak_ += dropped * scale_;
  state_.lo = lo_out;
  state_.v = std::move(out);
  ++time_;

  double mx = 0.0;
  for (double x : state_.v) mx = std::max(mx, x);
  if (mx > 0.0 && mx < kRescaleBelow) {
    scale_ *= mx;
    const double inv = 1.0 / mx;
    for (double& x : state_.v) x *= inv;
  }
}

void WalkDP::advance(int steps) {
  for (int i = 0; i < steps; ++i) step();
}

double WalkDP::mass() const { return compensated_sum(state_.v) * scale_; }

double WalkDP::alive_at(int s) const { return state_.get(s) * scale_; }

double WalkDP::endpoint_value(int y) const {
  const int kmin = law_.min_offset();
  const int kmax = law_.max_offset();
  double acc = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double pk = law_.dense[static_cast<size_t>(k - kmin)];
    if (pk == 0.0) continue;
    acc += state_.get(y - k) * pk;
  }
  return acc * scale_;
}

int default_cap(const StepLaw& law, long long n) {
  const auto [mean, var] = moments(law);
  (void)mean;
  const double sd = std::sqrt(std::max(var, 1.0));
  const double reach = 8.5 * sd * std::sqrt(static_cast<double>(std::max<long long>(n, 1)));
  return static_cast<int>(std::ceil(reach)) + 4 * law.span() + 16;
}

double KernelTable::log_value(int x, int y) const {
  if (x < 0 || x > x_max || y < 0 || y > y_max)
    throw DomainError("kernel table index out of range");
  return log_values[static_cast<size_t>(x) * (y_max + 1) + y];
}

double KernelTable::value(int x, int y) const {
  const double lv = log_value(x, y);
  return lv == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(lv);
}

KernelTable q_plus(const StepLaw& law, int n, int x_max, int y_max,
                   Strictness strictness, double leak_tol) {
  if (n < 1) throw DomainError("kernel tables need at least one step");
  if (x_max < 0 || y_max < 0) throw DomainError("kernel table range is empty");

  KernelTable table;
  table.strictness = strictness;
  table.n = n;
  table.x_max = x_max;
  table.y_max = y_max;
  table.log_values.assign(static_cast<size_t>(x_max + 1) * (y_max + 1),
                          -std::numeric_limits<double>::infinity());
  table.leak.assign(static_cast<size_t>(x_max + 1), 0.0);

  const int cap = std::max(default_cap(law, n), y_max + law.span() + 1);
  for (int x = 0; x <= x_max; ++x) {
    WalkDP dp = WalkDP::constrained(law, strictness, x, cap);
    dp.advance(n - 1);

    // Endpoint step is free; mass pushed past y_max counts as leak, mass
    // landing below zero is simply outside the table's domain.
    double row_mass = 0.0;
    for (int y = 0; y <= y_max; ++y) {
      const double v = dp.endpoint_value(y);
      row_mass += v;
      if (v > 0.0)
        table.log_values[static_cast<size_t>(x) * (y_max + 1) + y] =
            std::log(v);
    }
    double overflow = 0.0;
    for (int y = y_max + 1; y <= dp.raw().hi() + law.max_offset(); ++y)
      overflow += dp.endpoint_value(y);
    table.leak[static_cast<size_t>(x)] = dp.leak() + overflow;

    // The tolerance guards silent precision loss at the DP cap. Mass past a
    // deliberately small y_max is measured exactly and only reported.
    if (row_mass > 0.0 && dp.leak() > leak_tol * row_mass) {
      throw TruncationExceeded(
          "kernel row leak " + std::to_string(dp.leak()) +
          " exceeds tolerance at x=" + std::to_string(x));
    }
  }
  return table;
}

double transition_pmf(const StepLaw& law, int n, int x, int y) {
  if (n == 0) return x == y ? 1.0 : 0.0;
  int half = default_cap(law, n);
  for (int attempt = 0; attempt < 4; ++attempt) {
    const int lo = std::min(x, y) - half;
    const int hi = std::max(x, y) + half;
    WalkDP dp = WalkDP::windowed(law, x, lo, hi);
    dp.advance(n);
    if (dp.leak() < 1e-15) return dp.alive_at(y);
    half *= 2;
  }
  throw TruncationExceeded("transition pmf window kept leaking");
}

double positivity_survival(const StepLaw& law, int n, int x, Strictness s) {
  if (n == 0) return 1.0;
  WalkDP dp = WalkDP::constrained(law, s, x, default_cap(law, n) + std::max(x, 0));
  dp.advance(n);
  return dp.mass() + dp.leak();
}

std::vector<double> survival_curve(const StepLaw& law, Strictness s, int n_max,
                                   int x) {
  std::vector<double> out(static_cast<size_t>(n_max) + 1, 1.0);
  if (n_max == 0) return out;
  WalkDP dp = WalkDP::constrained(law, s, x, default_cap(law, n_max) + std::max(x, 0));
  for (int m = 1; m <= n_max; ++m) {
    dp.step();
    out[static_cast<size_t>(m)] = dp.mass() + dp.leak();
  }
  return out;
}

std::vector<double> kernel_diag_curve(const StepLaw& law, Strictness s,
                                      int n_max, int x, int y) {
  std::vector<double> out(static_cast<size_t>(n_max) + 1, 0.0);
  WalkDP dp = WalkDP::constrained(law, s, x, default_cap(law, n_max) + std::max(x, 0));
  for (int m = 1; m <= n_max; ++m) {
    out[static_cast<size_t>(m)] = dp.endpoint_value(y);
    if (m < n_max) dp.step();
  }
  return out;
}

void kernel_table_to_csv(const KernelTable& table, std::ostream& out) {
  out << "n,x,y,log_value\n";
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (int x = 0; x <= table.x_max; ++x)
    for (int y = 0; y <= table.y_max; ++y)
      out << table.n << ',' << x << ',' << y << ','
          << table.log_value(x, y) << '\n';
  out.precision(old);
}

}  // namespace poswalk
