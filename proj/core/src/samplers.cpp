#include "poswalk/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "poswalk/accum.hpp"
#include "poswalk/errors.hpp"

namespace poswalk {

PathSample sample_up_walk(const StepLaw& law, const RenewalTable& descending,
                          Strictness s, int x, int n, PhiloxRng& rng) {
  const auto [mean, var] = moments(law);
  (void)var;
  if (mean < -1e-12)
    throw DomainError("conditioning to stay positive needs nonnegative drift");
  const int floor = state_floor(s);
  if (x < 0) throw DomainError("start must be nonnegative");
  if (x + n * law.max_offset() > descending.x_max())
    throw RenewalRangeExceeded("renewal table too small for horizon " +
                               std::to_string(n) + " from " +
                               std::to_string(x));

  if (law.span() >= 64)
    throw DomainError("sampler row buffer caps the step support at 64");

  const auto h = [&](int z) {
    return s == Strictness::weak ? descending.weak(z)
                                 : descending.weak_under(z);
  };

  PathSample path;
  path.states.assign(static_cast<size_t>(n) + 1, 0);
  path.states[0] = x;
  int z = x;
  for (int m = 0; m < n; ++m) {
    const int z_lo = std::max(floor, z + law.min_offset());
    const int z_hi = z + law.max_offset();
    double row[64];
    double row_sum = 0.0;
    for (int zp = z_lo; zp <= z_hi; ++zp) {
      const double w = law.p(zp - z) * h(zp);
      row[zp - z_lo] = w;
      row_sum += w;
    }
    double u = rng.uniform() * row_sum;
    int pick = z_hi;
    for (int zp = z_lo; zp <= z_hi; ++zp) {
      u -= row[zp - z_lo];
      if (u <= 0.0) {
        pick = zp;
        break;
      }
    }
    z = pick;
    path.states[static_cast<size_t>(m) + 1] = z;
  }
  return path;
}

BridgeTable bridge_transition_table(const StepLaw& law, Strictness s, int n,
                                    int y, bool conditioned) {
  if (n < 1) throw DomainError("bridges need at least one step");
  BridgeTable table;
  table.law = law;
  table.strictness = s;
  table.conditioned = conditioned;
  table.n = n;
  table.y = y;
  table.slices.resize(static_cast<size_t>(n));
  table.log_offsets.assign(static_cast<size_t>(n), 0.0);
  if (n == 1) return table;

  // Reversing a pinned path swaps its endpoints and reflects its increments,
  // so the backward endpoint functions come from one forward sweep of the
  // reflected walk started at y.
  const StepLaw refl = reflect(law);
  const int cap = default_cap(refl, n);
  WalkDP dp = conditioned
                  ? WalkDP::constrained(refl, s, y, y + cap)
                  : WalkDP::windowed(refl, y, y - cap, y + cap);
  for (int j = 1; j <= n - 1; ++j) {
    dp.step();
    const int m = n - j;
    StateVec slice = dp.raw();
    double mx = 0.0;
    for (double v : slice.v) mx = std::max(mx, v);
    if (mx == 0.0)
      throw ZeroBridgeProbability("no path of length " + std::to_string(j) +
                                  " reaches " + std::to_string(y));
    const double inv = 1.0 / mx;
    for (double& v : slice.v) v *= inv;
    table.log_offsets[static_cast<size_t>(m)] =
        std::log(mx) + std::log(dp.scale());
    table.slices[static_cast<size_t>(m)] = std::move(slice);
  }
  return table;
}

PathSample sample_bridge(const BridgeTable& table, int x, PhiloxRng& rng,
                         double* max_renorm_gap) {
  const StepLaw& law = table.law;
  if (law.span() >= 64)
    throw DomainError("sampler row buffer caps the step support at 64");
  const int n = table.n;
  PathSample path;
  path.states.assign(static_cast<size_t>(n) + 1, 0);
  path.states[0] = x;
  path.states[static_cast<size_t>(n)] = table.y;
  if (n == 1) {
    if (law.p(table.y - x) == 0.0)
      throw ZeroBridgeProbability("single step cannot bridge the endpoints");
    return path;
  }

  int z = x;
  for (int m = 0; m + 1 <= n - 1; ++m) {
    const StateVec& next = table.slices[static_cast<size_t>(m) + 1];
    const int z_lo = std::max(next.lo, z + law.min_offset());
    const int z_hi = std::min(next.hi(), z + law.max_offset());
    double row[64];
    double row_sum = 0.0;
    for (int zp = z_lo; zp <= z_hi; ++zp) {
      const double w = law.p(zp - z) * next.get(zp);
      row[zp - z_lo] = w;
      row_sum += w;
    }
    if (row_sum <= 0.0) {
      if (m == 0)
        throw ZeroBridgeProbability("endpoints are not connected in " +
                                    std::to_string(n) + " steps");
      throw NonFinite("bridge transition row vanished mid-path");
    }
    if (max_renorm_gap != nullptr && m >= 1) {
      // In exact arithmetic row_sum * exp(L_{m+1} - L_m) equals the current
      // slice value; the deviation measures accumulated rounding.
      const double expected =
          table.slices[static_cast<size_t>(m)].get(z) *
          std::exp(table.log_offsets[static_cast<size_t>(m)] -
                   table.log_offsets[static_cast<size_t>(m) + 1]);
      if (expected > 0.0)
        *max_renorm_gap =
            std::max(*max_renorm_gap, std::abs(row_sum / expected - 1.0));
    }
    double u = rng.uniform() * row_sum;
    int pick = -1;
    for (int zp = z_lo; zp <= z_hi; ++zp) {
      const double w = row[zp - z_lo];
      if (w == 0.0) continue;
      pick = zp;
      u -= w;
      if (u <= 0.0) break;
    }
    z = pick;
    path.states[static_cast<size_t>(m) + 1] = z;
  }
  if (law.p(table.y - z) == 0.0)
    throw NonFinite("bridge final step is impossible; table is inconsistent");
  return path;
}

BridgeBatch sample_bridge_batch(const BridgeTable& table, int x, int m_star,
                                int n_samples, uint64_t seed, int workers) {
  if (m_star < 0 || m_star > table.n)
    throw DomainError("marginal time outside the bridge horizon");
  BridgeBatch out;
  out.state_at_mstar.assign(static_cast<size_t>(n_samples), 0);
  out.path_min.assign(static_cast<size_t>(n_samples), 0);
  out.path_max.assign(static_cast<size_t>(n_samples), 0);

  workers = std::max(1, workers);
  std::vector<double> gaps(static_cast<size_t>(workers), 0.0);
  std::vector<std::thread> pool;
  const int chunk = (n_samples + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int first = w * chunk;
    const int last = std::min(n_samples, first + chunk);
    if (first >= last) break;
    pool.emplace_back([&, w, first, last] {
      for (int i = first; i < last; ++i) {
        PhiloxRng rng(seed, static_cast<uint64_t>(i));
        const PathSample path =
            sample_bridge(table, x, rng, &gaps[static_cast<size_t>(w)]);
        out.state_at_mstar[static_cast<size_t>(i)] =
            path.states[static_cast<size_t>(m_star)];
        const auto [lo, hi] =
            std::minmax_element(path.states.begin(), path.states.end());
        out.path_min[static_cast<size_t>(i)] = *lo;
        out.path_max[static_cast<size_t>(i)] = *hi;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (double g : gaps) out.max_renorm_gap = std::max(out.max_renorm_gap, g);
  return out;
}

namespace {

void enumerate_paths(const StepLaw& law, Strictness s, int n, int y,
                     std::vector<int>& prefix, long double mass,
                     std::map<std::vector<int>, long double>& out) {
  const int t = static_cast<int>(prefix.size()) - 1;
  if (t == n) {
    if (prefix.back() == y) out[prefix] = mass;
    return;
  }
  const int z = prefix.back();
  const int floor = state_floor(s);
  for (size_t a = 0; a < law.offsets.size(); ++a) {
    const int zp = z + law.offsets[a];
    if (t + 1 < n && zp < floor) continue;   // interior states are constrained
    if (zp > y + (n - t - 1) * (-law.min_offset())) continue;
    if (zp < y - (n - t - 1) * law.max_offset()) continue;
    prefix.push_back(zp);
    enumerate_paths(law, s, n, y, prefix, mass * law.probs[a], out);
    prefix.pop_back();
  }
}

}  // namespace

std::map<std::vector<int>, double> bridge_pmf_exact(const StepLaw& law,
                                                    Strictness s, int n, int x,
                                                    int y,
                                                    double* total_mass) {
  double branches = 1.0;
  for (int i = 0; i < n; ++i) {
    branches *= static_cast<double>(law.offsets.size());
    if (branches > 1e7)
      throw ExplosionGuard("path enumeration would exceed the branch budget");
  }

  std::map<std::vector<int>, long double> raw;
  std::vector<int> prefix{x};
  enumerate_paths(law, s, n, y, prefix, 1.0L, raw);

  long double total = 0.0L;
  for (const auto& [path, mass] : raw) total += mass;
  if (total_mass != nullptr) *total_mass = static_cast<double>(total);

  std::map<std::vector<int>, double> pmf;
  if (total > 0.0L)
    for (const auto& [path, mass] : raw)
      pmf[path] = static_cast<double>(mass / total);
  return pmf;
}

double time_reversal_residual(const StepLaw& law, Strictness s, int n, int x,
                              int y) {
  auto fwd = bridge_pmf_exact(law, s, n, x, y);
  auto bwd = bridge_pmf_exact(reflect(law), s, n, y, x);

  long double acc = 0.0L;
  for (const auto& [path, p] : fwd) {
    std::vector<int> rev(path.rbegin(), path.rend());
    const auto it = bwd.find(rev);
    if (it == bwd.end()) {
      acc += std::abs(static_cast<long double>(p));
    } else {
      acc += std::abs(static_cast<long double>(p) - it->second);
      bwd.erase(it);
    }
  }
  for (const auto& [path, q] : bwd) acc += std::abs(static_cast<long double>(q));
  return static_cast<double>(0.5L * acc);
}

void paths_to_csv(const std::vector<PathSample>& paths, std::ostream& out) {
  out << "sample_id,t,state\n";
  for (size_t i = 0; i < paths.size(); ++i)
    for (size_t t = 0; t < paths[i].states.size(); ++t)
      out << i << ',' << t << ',' << paths[i].states[t] << '\n';
}

}  // namespace poswalk
