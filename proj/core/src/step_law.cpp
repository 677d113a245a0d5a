#include "poswalk/step_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "poswalk/errors.hpp"
#include "json.hpp"

namespace poswalk {

namespace {

StepLaw finalize(std::vector<std::pair<int, double>> pmf, std::string name,
                 bool allow_periodic) {
  if (pmf.empty()) throw DegenerateLaw("empty support");
  std::sort(pmf.begin(), pmf.end());
  for (size_t i = 1; i < pmf.size(); ++i) {
    if (pmf[i].first == pmf[i - 1].first)
      throw DomainError("duplicate offset " + std::to_string(pmf[i].first));
  }
  if (pmf.size() < 2) throw DegenerateLaw("single-atom support");

  double total = 0.0;
  for (auto& [k, p] : pmf) {
    if (!(p > 0.0) || p > 1.0)
      throw ProbabilityMassError("probability out of (0,1] at offset " +
                                 std::to_string(k));
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-14)
    throw ProbabilityMassError("probabilities sum to " + std::to_string(total));

  // support in aZ+b with a >= 2 <=> gcd of pairwise offset differences > 1
  int g = 0;
  for (size_t i = 1; i < pmf.size(); ++i)
    g = std::gcd(g, pmf[i].first - pmf[0].first);
  bool aperiodic = (g == 1);
  if (!aperiodic && !allow_periodic)
    throw PeriodicSupport("support is contained in " + std::to_string(g) +
                          "Z + " + std::to_string(pmf[0].first));

  StepLaw law;
  law.name = std::move(name);
  law.aperiodic = aperiodic;
  law.min_off = pmf.front().first;
  law.max_off = pmf.back().first;
  law.dense.assign(static_cast<size_t>(law.max_off - law.min_off + 1), 0.0);
  for (auto& [k, p] : pmf) {
    law.offsets.push_back(k);
    law.probs.push_back(p);
    law.dense[static_cast<size_t>(k - law.min_off)] = p;
  }
  return law;
}

StepLaw geom_diff() {
  // Two-sided geometric with ratio 1/2, truncated at |k| = 30 and the cut
  // mass folded back into the origin atom so the law sums to 1 exactly.
  const int cut = 30;
  std::vector<std::pair<int, double>> pmf;
  double c = 1.0 / 3.0;  // normalizer of sum_k (1/2)^|k|
  double off_origin = 0.0;
  for (int k = 1; k <= cut; ++k) {
    double p = c * std::ldexp(1.0, -k);
    pmf.push_back({k, p});
    pmf.push_back({-k, p});
    off_origin += 2.0 * p;
  }
  pmf.push_back({0, 1.0 - off_origin});
  return finalize(std::move(pmf), "geom-diff", false);
}

}  // namespace

StepLaw make_step_law(const std::string& preset) {
  if (preset == "lazy")
    return finalize({{-1, 0.25}, {0, 0.5}, {1, 0.25}}, "lazy", false);
  if (preset == "trinomial")
    return finalize({{-1, 1.0 / 3.0}, {0, 1.0 / 3.0}, {1, 1.0 / 3.0}},
                    "trinomial", false);
  if (preset == "skew")
    return finalize({{-1, 0.5}, {0, 0.25}, {2, 0.25}}, "skew", false);
  if (preset == "geom-diff") return geom_diff();
  throw DomainError("unknown preset '" + preset + "'");
}

StepLaw make_step_law(const std::vector<std::pair<int, double>>& pmf,
                      const std::string& name, bool allow_periodic) {
  return finalize(pmf, name, allow_periodic);
}

StepLaw reflect(const StepLaw& law) {
  std::vector<std::pair<int, double>> pmf;
  for (size_t i = 0; i < law.offsets.size(); ++i)
    pmf.push_back({-law.offsets[i], law.probs[i]});
  StepLaw out = finalize(std::move(pmf), law.name + "-reflected", true);
  return out;
}

std::pair<double, double> moments(const StepLaw& law) {
  double mean = 0.0;
  for (size_t i = 0; i < law.offsets.size(); ++i)
    mean += law.probs[i] * law.offsets[i];
  double var = 0.0;
  for (size_t i = 0; i < law.offsets.size(); ++i) {
    double d = law.offsets[i] - mean;
    var += law.probs[i] * d * d;
  }
  return {mean, var};
}

StableParams::StableParams(double alpha_, double rho_, double sigma_)
    : alpha(alpha_), rho(rho_), sigma(sigma_) {
  if (!(alpha > 0.0) || alpha > 2.0)
    throw DomainError("alpha must lie in (0,2]");
  if (!(rho > 0.0) || !(rho < 1.0)) throw DomainError("rho must lie in (0,1)");
  if (alpha == 2.0 && rho != 0.5) throw DomainError("alpha=2 forces rho=1/2");
  if (alpha > 1.0) {
    double lo = 1.0 - 1.0 / alpha, hi = 1.0 / alpha;
    if (rho < lo - 1e-12 || rho > hi + 1e-12)
      throw DomainError("rho outside [1-1/alpha, 1/alpha]");
  }
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
}

StableParams brownian_params(const StepLaw& law) {
  auto [mean, var] = moments(law);
  (void)mean;
  if (!(var > 0.0)) throw DegenerateLaw("zero variance");
  return StableParams(2.0, 0.5, std::sqrt(var));
}

double norming(const StableParams& params, long long n) {
  if (n <= 0) throw DomainError("n must be positive");
  if (params.alpha != 2.0)
    throw UnsupportedAlpha(
        "only alpha=2 norming is available for finite-variance lattice laws");
  return params.sigma * std::sqrt(static_cast<double>(n));
}

std::string step_law_to_json(const StepLaw& law) {
  nlohmann::json j;
  j["name"] = law.name;
  j["offsets"] = law.offsets;
  j["probs"] = law.probs;
  return j.dump();
}

StepLaw step_law_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto offsets = j.at("offsets").get<std::vector<int>>();
  auto probs = j.at("probs").get<std::vector<double>>();
  if (offsets.size() != probs.size())
    throw DomainError("offsets and probs length mismatch");
  std::vector<std::pair<int, double>> pmf;
  for (size_t i = 0; i < offsets.size(); ++i)
    pmf.push_back({offsets[i], probs[i]});
  std::string name = j.value("name", std::string("custom"));
  return make_step_law(pmf, name, false);
}

}  // namespace poswalk
