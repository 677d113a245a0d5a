#include "poswalk/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "poswalk/brownian.hpp"
#include "poswalk/errors.hpp"
#include "poswalk/kernels.hpp"

namespace poswalk {

double RescaledPath::value_at(double t) const {
  if (!(t >= 0.0) || !(t <= 1.0))
    throw DomainError("time must lie in [0, 1]");
  const size_t n = values.size() - 1;
  if (mode == Mode::cadlag) {
    size_t k = static_cast<size_t>(std::floor(t * static_cast<double>(n)));
    return values[std::min(k, n)];
  }
  const double pos = t * static_cast<double>(n);
  const size_t k = static_cast<size_t>(std::floor(pos));
  if (k >= n) return values[n];
  const double frac = pos - static_cast<double>(k);
  return values[k] * (1.0 - frac) + values[k + 1] * frac;
}

RescaledPath rescale(const PathSample& path, double a_n,
                     RescaledPath::Mode mode) {
  if (!(a_n > 0.0)) throw DomainError("norming constant must be positive");
  if (path.states.empty()) throw DomainError("cannot rescale an empty path");
  RescaledPath r;
  r.mode = mode;
  const size_t count = path.states.size();
  r.t_grid.resize(count);
  r.values.resize(count);
  const double n = static_cast<double>(count - 1);
  for (size_t k = 0; k < count; ++k) {
    r.t_grid[k] = count == 1 ? 0.0 : static_cast<double>(k) / n;
    r.values[k] = path.states[k] / a_n;
  }
  return r;
}

namespace {

// Number of steps between the comparison time floor((1-eps)n) and the end.
long long tail_steps(long long n, double eps) {
  if (n < 2) throw DomainError("need a bridge of at least two steps");
  if (!(eps > 0.0) || !(eps < 1.0))
    throw DomainError("split fraction must lie in (0, 1)");
  const long long m =
      static_cast<long long>(std::floor((1.0 - eps) * static_cast<double>(n)));
  if (m < 1 || m > n - 1)
    throw DomainError("split fraction leaves no room on one side");
  return n - m;
}

}  // namespace

std::vector<double> radon_nikodym_batch(const StepLaw& law,
                                        const RenewalTable& descending,
                                        long long n, double eps, int x_n,
                                        int y_n,
                                        const std::vector<double>& z_grid) {
  if (x_n < 0 || y_n < 0) throw DomainError("endpoints must be nonnegative");
  if (n > std::numeric_limits<int>::max())
    throw DomainError("horizon too large");
  const long long eps_steps = tail_steps(n, eps);
  const double a_n = norming(brownian_params(law), n);

  int w_top = y_n;
  for (double z : z_grid) {
    if (!(z >= 0.0)) throw DomainError("z must be nonnegative");
    const double w = z * a_n;
    if (w > 1e9) throw DomainError("z out of representable state range");
    w_top = std::max(w_top, static_cast<int>(std::floor(w)));
  }

  WalkDP fwd = WalkDP::constrained(
      law, Strictness::strict, x_n,
      default_cap(law, n) + std::max(x_n, y_n));
  fwd.advance(static_cast<int>(n) - 1);
  const double q_bridge = fwd.endpoint_value(y_n);
  if (q_bridge <= 0.0)
    throw ZeroBridgeProbability("bridge endpoint has zero probability");

  // Path reversal: the tail kernel into y_n, as a function of where the
  // tail starts, is one reflected run out of y_n.
  WalkDP rev = WalkDP::constrained(
      reflect(law), Strictness::strict, y_n,
      default_cap(law, eps_steps) + std::max(w_top, y_n));
  rev.advance(static_cast<int>(eps_steps) - 1);

  const double v_start = descending.weak_under(x_n);
  std::vector<double> out(z_grid.size());
  for (size_t i = 0; i < z_grid.size(); ++i) {
    const int w = static_cast<int>(std::floor(z_grid[i] * a_n));
    out[i] =
        (v_start / q_bridge) * (rev.endpoint_value(w) / descending.weak_under(w));
  }
  return out;
}

double radon_nikodym_fn(const StepLaw& law, const RenewalTable& descending,
                        long long n, double eps, int x_n, int y_n, double z) {
  return radon_nikodym_batch(law, descending, n, eps, x_n, y_n, {z})[0];
}

std::vector<std::pair<long long, double>> uniff_gap(
    const StepLaw& law, const RenewalTable& descending,
    const std::vector<long long>& n_list, double eps,
    const std::vector<double>& z_grid) {
  if (z_grid.empty()) throw DomainError("need at least one z value");
  std::vector<std::pair<long long, double>> out;
  out.reserve(n_list.size());
  for (long long n : n_list) {
    const std::vector<double> fn =
        radon_nikodym_batch(law, descending, n, eps, 0, 0, z_grid);
    double sup = 0.0;
    for (size_t i = 0; i < z_grid.size(); ++i) {
      const double limit = density_ratio(z_grid[i], eps, 1.0, 2.0);
      sup = std::max(sup, std::abs(fn[i] - limit));
    }
    out.emplace_back(n, sup);
  }
  return out;
}

FitReport excursion_marginal_fit(const StepLaw& law, long long n, double eps,
                                 long long n_samples, std::uint64_t seed,
                                 int workers, bool conditioned,
                                 double threshold, std::vector<int>* marginal) {
  if (n_samples < 1) throw DomainError("need at least one sample");
  if (n > std::numeric_limits<int>::max() ||
      n_samples > std::numeric_limits<int>::max())
    throw DomainError("size out of range");
  const long long eps_steps = tail_steps(n, eps);
  const int m_star = static_cast<int>(n - eps_steps);
  const double a_n = norming(brownian_params(law), n);

  const BridgeTable table = bridge_transition_table(
      law, Strictness::strict, static_cast<int>(n), 0, conditioned);
  const BridgeBatch batch =
      sample_bridge_batch(table, 0, m_star, static_cast<int>(n_samples), seed,
                          workers);

  std::map<int, long long> hist;
  for (int w : batch.state_at_mstar) ++hist[w];
  if (marginal != nullptr) *marginal = batch.state_at_mstar;

  // The empirical law lives on the lattice; reading the continuous CDF at
  // half-lattice midpoints removes the bin-width offset that would
  // otherwise dominate the statistic at this resolution.
  double ks = 0.0;
  long long cum = 0;
  const double total = static_cast<double>(n_samples);
  for (const auto& [w, count] : hist) {
    const double below = excursion_marginal_cdf((w - 0.5) / a_n, eps);
    ks = std::max(ks, std::abs(cum / total - below));
    cum += count;
    const double above = excursion_marginal_cdf((w + 0.5) / a_n, eps);
    ks = std::max(ks, std::abs(cum / total - above));
  }

  FitReport report;
  report.statistic = conditioned ? "ks" : "ks-negative-control";
  report.value = ks;
  report.threshold = threshold;
  report.n_samples = n_samples;
  report.seed = seed;
  report.passed = conditioned ? ks < threshold : ks > threshold;
  return report;
}

std::vector<TightnessRow> tightness_diagnostic(
    const std::vector<RescaledPath>& samples,
    const std::vector<double>& delta_list, double eta) {
  if (samples.empty()) throw DomainError("need at least one path");
  if (!(eta > 0.0)) throw DomainError("oscillation level must be positive");
  for (double d : delta_list)
    if (!(d > 0.0) || !(d <= 1.0))
      throw DomainError("window fraction must lie in (0, 1]");

  std::vector<long long> exceed(delta_list.size(), 0);
  std::vector<double> suffix_max, suffix_min;
  for (const RescaledPath& path : samples) {
    const std::vector<double>& v = path.values;
    const size_t count = v.size();
    suffix_max.assign(count, 0.0);
    suffix_min.assign(count, 0.0);
    suffix_max[count - 1] = suffix_min[count - 1] = v[count - 1];
    for (size_t k = count - 1; k-- > 0;) {
      suffix_max[k] = std::max(v[k], suffix_max[k + 1]);
      suffix_min[k] = std::min(v[k], suffix_min[k + 1]);
    }
    const double n = static_cast<double>(count - 1);
    for (size_t d = 0; d < delta_list.size(); ++d) {
      const size_t k0 =
          static_cast<size_t>(std::floor((1.0 - delta_list[d]) * n));
      if (suffix_max[k0] - suffix_min[k0] > eta) ++exceed[d];
    }
  }

  std::vector<TightnessRow> rows(delta_list.size());
  for (size_t d = 0; d < delta_list.size(); ++d) {
    rows[d].delta = delta_list[d];
    rows[d].tail_prob =
        static_cast<double>(exceed[d]) / static_cast<double>(samples.size());
  }
  return rows;
}

}  // namespace poswalk
