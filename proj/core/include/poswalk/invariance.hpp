#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "poswalk/fluctuation.hpp"
#include "poswalk/samplers.hpp"
#include "poswalk/step_law.hpp"

namespace poswalk {

// A lattice path mapped into C[0,1]-like coordinates: time k/N, value
// S_k/a_N. Two readout modes: piecewise-constant (right-continuous steps)
// and piecewise-linear between the grid nodes.
struct RescaledPath {
  enum class Mode { cadlag, linear };

  std::vector<double> t_grid;
  std::vector<double> values;
  Mode mode = Mode::cadlag;

  // Value of the rescaled path at t in [0, 1] under the chosen mode.
  double value_at(double t) const;
};

RescaledPath rescale(const PathSample& path, double a_n,
                     RescaledPath::Mode mode);

// Change-of-measure density between the bridge of length N and the
// up-conditioned walk, evaluated at the rescaled point z >= 0. eps sets
// the split time: the density compares laws at step floor((1-eps)N).
// Throws ZeroBridgeProbability when the bridge endpoint is unreachable.
double radon_nikodym_fn(const StepLaw& law, const RenewalTable& descending,
                        long long n, double eps, int x_n, int y_n, double z);

// Same density on a whole grid of z values, sharing the two dynamic
// programs across evaluations.
std::vector<double> radon_nikodym_batch(const StepLaw& law,
                                        const RenewalTable& descending,
                                        long long n, double eps, int x_n,
                                        int y_n,
                                        const std::vector<double>& z_grid);

// Sup distance between the discrete change-of-measure density and its
// scaling limit over z_grid, one entry per horizon in n_list.
std::vector<std::pair<long long, double>> uniff_gap(
    const StepLaw& law, const RenewalTable& descending,
    const std::vector<long long>& n_list, double eps,
    const std::vector<double>& z_grid);

struct FitReport {
  std::string statistic;
  double value = 0.0;
  double threshold = 0.0;
  long long n_samples = 0;
  std::uint64_t seed = 0;
  bool passed = false;
};

// Samples bridges from 0 to 0, rescales, and compares the marginal at
// time 1-eps against the closed-form excursion marginal by KS distance.
// The theoretical CDF is read at half-lattice midpoints so the lattice
// discretization does not register as distribution error. conditioned =
// false samples the free bridge instead; that fit is expected to FAIL,
// and the report's passed flag then asserts value > threshold.
FitReport excursion_marginal_fit(const StepLaw& law, long long n, double eps,
                                 long long n_samples, std::uint64_t seed,
                                 int workers = 1, bool conditioned = true,
                                 double threshold = 0.02,
                                 std::vector<int>* marginal = nullptr);

struct TightnessRow {
  double delta = 0.0;
  double tail_prob = 0.0;
};

// Empirical probability that the rescaled path oscillates by more than
// eta over the trailing window [1-delta, 1], one row per delta.
std::vector<TightnessRow> tightness_diagnostic(
    const std::vector<RescaledPath>& samples,
    const std::vector<double>& delta_list, double eta);

}  // namespace poswalk
