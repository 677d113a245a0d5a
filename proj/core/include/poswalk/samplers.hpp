#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "poswalk/fluctuation.hpp"
#include "poswalk/kernels.hpp"
#include "poswalk/rng.hpp"
#include "poswalk/step_law.hpp"

namespace poswalk {

// One trajectory S_0..S_n.
struct PathSample {
  std::vector<int> states;
};

// One step of the conditioned-to-stay-positive walk: the step law reweighted
// by the renewal function of the descending ladder heights, which is exactly
// harmonic for the killed kernel. Requires a nonnegative drift (the harmonic
// reweighting below that describes a different conditioning) and a table
// covering x + n * max_offset states.
PathSample sample_up_walk(const StepLaw& law, const RenewalTable& descending,
                          Strictness s, int x, int n, PhiloxRng& rng);

// Backward endpoint tables for exact bridge sampling: slice m holds
// h_m(z) = q_{n-m}(z, y) up to a per-slice log offset, computed by running
// the reflected walk forward from y (path reversal swaps the roles of the
// two endpoints but keeps the positivity constraint). With conditioned set
// to false the table instead describes the plain walk pinned at y, with no
// positivity constraint; that variant exists as a control.
struct BridgeTable {
  StepLaw law;
  Strictness strictness = Strictness::strict;
  bool conditioned = true;
  int n = 0;
  int y = 0;
  std::vector<StateVec> slices;      // index m = 1..n-1
  std::vector<double> log_offsets;   // log h_m = log(slice value) + offset
};

BridgeTable bridge_transition_table(const StepLaw& law, Strictness s, int n,
                                    int y, bool conditioned = true);

// Draws S_0 = x, .., S_n = y by the sequential decomposition
// P(S_{m+1} = z' | S_m = z) = p(z' - z) h_{m+1}(z') / h_m(z). Throws
// ZeroBridgeProbability when no admissible path links x to y. The per-step
// normalizing sums are recomputed on the fly; their largest relative
// deviation from one is tracked in max_renorm_gap when given.
PathSample sample_bridge(const BridgeTable& table, int x, PhiloxRng& rng,
                         double* max_renorm_gap = nullptr);

// Batched sampling that keeps only per-path summaries: the state at time
// m_star, plus the path extremes. Streams are indexed by sample so the
// result does not depend on the worker count.
struct BridgeBatch {
  std::vector<int> state_at_mstar;
  std::vector<int> path_min;
  std::vector<int> path_max;
  double max_renorm_gap = 0.0;
};

BridgeBatch sample_bridge_batch(const BridgeTable& table, int x, int m_star,
                                int n_samples, uint64_t seed, int workers = 1);

// Exhaustive conditional path law of the pinned constrained walk, normalized
// over paths from x to y. Accumulation runs in extended precision; the total
// unnormalized mass (the kernel value) is returned through total_mass when
// asked for. Throws ExplosionGuard when the enumeration would exceed roughly
// ten million branches.
std::map<std::vector<int>, double> bridge_pmf_exact(
    const StepLaw& law, Strictness s, int n, int x, int y,
    double* total_mass = nullptr);

// Total variation distance between the reversed conditioned bridge from x to
// y and the reflected walk's conditioned bridge from y to x. Zero in exact
// arithmetic.
double time_reversal_residual(const StepLaw& law, Strictness s, int n, int x,
                              int y);

// CSV rows "sample_id,t,state" for a set of sampled paths.
void paths_to_csv(const std::vector<PathSample>& paths, std::ostream& out);

}  // namespace poswalk
