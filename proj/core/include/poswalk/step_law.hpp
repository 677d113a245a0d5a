#pragma once

#include <string>
#include <utility>
#include <vector>

namespace poswalk {

// Aperiodic zero-mean lattice step law with finite support.
//
// Offsets are kept sorted; `dense` mirrors the pmf over the full window
// [min_offset, max_offset] (zeros where the support has holes) because the
// kernel recursions index steps by offset in a tight loop.
struct StepLaw {
  std::string name;
  std::vector<int> offsets;
  std::vector<double> probs;
  std::vector<double> dense;
  int min_off = 0;
  int max_off = 0;
  bool aperiodic = true;

  int min_offset() const { return min_off; }
  int max_offset() const { return max_off; }
  int span() const { return max_off - min_off; }

  // pmf at offset k, zero off support
  double p(int k) const {
    if (k < min_off || k > max_off) return 0.0;
    return dense[static_cast<size_t>(k - min_off)];
  }
};

// Presets: "lazy" {-1:1/4, 0:1/2, +1:1/4}, "trinomial" {-1,0,+1 each 1/3},
// "skew" {-1:1/2, 0:1/4, +2:1/4} (asymmetric, aperiodic, zero mean),
// "geom-diff" (symmetric truncated two-sided geometric, ratio 1/2).
StepLaw make_step_law(const std::string& preset);

// Explicit pmf. Rejects unnormalized mass (ProbabilityMassError), single-atom
// support (DegenerateLaw) and periodic support (PeriodicSupport) unless
// allow_periodic is set; the bypass exists for test laws such as the simple
// +-1 walk, whose exact fluctuation identities are still well defined.
StepLaw make_step_law(const std::vector<std::pair<int, double>>& pmf,
                      const std::string& name = "custom",
                      bool allow_periodic = false);

// Reflected walk: steps negated. Ascending objects of the original law are
// descending objects of the reflection.
StepLaw reflect(const StepLaw& law);

// (mean, variance), exact finite sums.
std::pair<double, double> moments(const StepLaw& law);

// Limit-law parameters. alpha=2 forces rho=1/2; for alpha in (1,2] rho must
// satisfy 1 - 1/alpha <= rho <= 1/alpha.
struct StableParams {
  double alpha;
  double rho;
  double sigma;

  StableParams(double alpha, double rho, double sigma);
};

// Parameters under which the rescaled presets converge to standard Brownian
// motion: alpha = 2, rho = 1/2, sigma = sqrt(variance).
StableParams brownian_params(const StepLaw& law);

// Norming sequence a_n. For alpha = 2 this is sigma * sqrt(n), which makes
// the density limit the standard normal. Other alphas are refused
// (UnsupportedAlpha): every lattice preset here has finite variance.
double norming(const StableParams& params, long long n);

std::string step_law_to_json(const StepLaw& law);
StepLaw step_law_from_json(const std::string& text);

}  // namespace poswalk
