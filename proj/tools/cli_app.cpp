#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "poswalk/accum.hpp"
#include "poswalk/brownian.hpp"
#include "poswalk/errors.hpp"
#include "poswalk/fluctuation.hpp"
#include "poswalk/invariance.hpp"
#include "poswalk/kernels.hpp"
#include "poswalk/llt.hpp"
#include "poswalk/report.hpp"
#include "poswalk/rng.hpp"
#include "poswalk/samplers.hpp"
#include "poswalk/step_law.hpp"
#include "poswalk/stone.hpp"

namespace poswalk::cli {
namespace {

// Configuration-level problems exit 2; they never indicate a numerical
// guard, which is what exit 3 is reserved for.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Relative output paths land under POSWALK_OUT when that is set. This is
// the single environment knob: everything else must come from flags or the
// config file so reports stay reproducible from their embedded config.
std::string resolve_out(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* base = std::getenv("POSWALK_OUT");
  if (base == nullptr || *base == '\0') return path;
  std::string full(base);
  if (full.back() != '/') full += '/';
  return full + path;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(resolve_out(path));
  if (!f) throw UsageError("cannot open output file " + resolve_out(path));
  return f;
}

// A law spec is either a preset name or a path to a JSON pmf file. A bad
// spec is the user's configuration problem, so anything thrown while
// loading is downgraded from guard to usage error.
StepLaw load_law(const std::string& spec) {
  try {
    if (spec.find(".json") == std::string::npos) return make_step_law(spec);
    std::ifstream f(spec);
    if (!f) throw UsageError("cannot read law file " + spec);
    std::ostringstream buf;
    buf << f.rdbuf();
    return step_law_from_json(buf.str());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Strictness parse_strictness(const std::string& s) {
  return s == "weak" ? Strictness::weak : Strictness::strict;
}

std::string num(double v) {
  char b[40];
  std::snprintf(b, sizeof(b), "%.6g", v);
  return b;
}

std::string num_full(double v) {
  char b[48];
  std::snprintf(b, sizeof(b), "%.17g", v);
  return b;
}

void print_report(const DiagnosticReport& report, std::ostream& out) {
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS" : "FAIL") << "  " << c.name
        << "  observed=" << num(c.observed) << "  bound=" << num(c.bound);
    if (!c.details.empty()) out << "  [" << c.details << "]";
    out << "\n";
  }
}

// Writes the JSON report, prints the human summary, and maps the verdict to
// the exit code contract (0 pass, 1 any check failed).
int finish(const DiagnosticReport& report, const std::string& json_path,
           std::ostream& out) {
  {
    std::ofstream f = open_out(json_path);
    write_report_json(report, f);
  }
  print_report(report, out);
  size_t failed = 0;
  for (const auto& c : report.checks)
    if (!c.passed) ++failed;
  if (failed == 0) {
    out << report.checks.size() << " checks passed; report written to "
        << resolve_out(json_path) << "\n";
  } else {
    out << failed << " of " << report.checks.size()
        << " checks FAILED; report written to " << resolve_out(json_path)
        << "\n";
  }
  return report.all_passed() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// kernel: dump one killed-kernel table.

struct KernelOpts {
  std::string law = "lazy";
  int n = 16;
  int x_max = 10;
  int y_max = 20;
  std::string strictness = "weak";
  std::string csv = "kernel.csv";
  std::string json = "kernel.json";
};

int run_kernel(const KernelOpts& o, std::ostream& out) {
  const StepLaw law = load_law(o.law);
  const KernelTable table =
      q_plus(law, o.n, o.x_max, o.y_max, parse_strictness(o.strictness));
  {
    std::ofstream f = open_out(o.csv);
    kernel_table_to_csv(table, f);
  }

  DiagnosticReport report;
  report.tool = "kernel";
  report.config = {{"law", o.law},
                   {"n", std::to_string(o.n)},
                   {"xmax", std::to_string(o.x_max)},
                   {"ymax", std::to_string(o.y_max)},
                   {"strictness", o.strictness},
                   {"out", o.csv}};
  const double worst_leak =
      *std::max_element(table.leak.begin(), table.leak.end());
  report.add("rows-written", true,
             static_cast<double>((o.x_max + 1) * (o.y_max + 1)), 0.0,
             resolve_out(o.csv));
  report.add("max-row-leak", true, worst_leak, 0.0,
             "cap leak plus measured mass beyond ymax, informational");
  return finish(report, o.json, out);
}

// ---------------------------------------------------------------------------
// renewal: dump one renewal-function table.

struct RenewalOpts {
  std::string law = "lazy";
  int x_max = 30;
  bool ascending = false;
  int t_max = 4096;
  std::string csv = "renewal.csv";
  std::string json = "renewal.json";
};

int run_renewal(const RenewalOpts& o, std::ostream& out) {
  const StepLaw law = load_law(o.law);
  const RenewalTable table = renewal_table(law, o.ascending, o.x_max, o.t_max);

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(o.x_max) + 1);
  for (int x = 0; x <= o.x_max; ++x)
    rows.push_back({static_cast<double>(x), table.weak(x), table.strict(x),
                    table.weak_under(x), table.strict_under(x)});
  {
    std::ofstream f = open_out(o.csv);
    write_csv_table({"x", "weak", "strict", "weak_under", "strict_under"},
                    rows, f);
  }

  DiagnosticReport report;
  report.tool = "renewal";
  report.config = {{"law", o.law},
                   {"xmax", std::to_string(o.x_max)},
                   {"ascending", o.ascending ? "true" : "false"},
                   {"tmax", std::to_string(o.t_max)},
                   {"out", o.csv}};
  report.add("zeta", true, table.zeta, 0.0, "informational");
  report.add("rows-written", true, static_cast<double>(o.x_max + 1), 0.0,
             resolve_out(o.csv));
  return finish(report, o.json, out);
}

// ---------------------------------------------------------------------------
// identities: the exact-identity suite. Every residual is measured against
// the same bound; ranges follow the documented acceptance envelope.

struct IdentityOpts {
  std::string law = "lazy";
  int n_max = 30;
  std::string json = "identities.json";
};

int run_identities(const IdentityOpts& o, std::ostream& out) {
  const StepLaw law = load_law(o.law);
  const double bound = 1e-10;

  DiagnosticReport report;
  report.tool = "identities";
  report.config = {{"law", o.law}, {"nmax", std::to_string(o.n_max)}};

  const int x_top = 20;
  const int n_harm = std::min(o.n_max, 15);
  const RenewalTable desc = renewal_table(
      law, /*ascending=*/false, x_top + n_harm * law.max_offset() + 8);

  for (Strictness s : {Strictness::weak, Strictness::strict}) {
    double worst = 0.0;
    for (int n = 1; n <= n_harm; ++n)
      for (int x = 0; x <= x_top; ++x)
        worst = std::max(worst, harmonic_residual(law, s, desc, x, n));
    report.add(
        s == Strictness::weak ? "harmonicity-weak" : "harmonicity-strict",
        worst <= bound, worst, bound,
        "max over x <= 20, n <= " + std::to_string(n_harm));
  }

  const std::vector<int> targets{0, 1, 2, 3, 4, 5, 6, 7, 8};
  const int n_dual = std::min(o.n_max, 20);
  for (Strictness s : {Strictness::weak, Strictness::strict}) {
    double worst = 0.0;
    for (int n = 1; n <= n_dual; ++n)
      worst = std::max(worst, duality_residual(law, s, n, targets));
    report.add(s == Strictness::weak ? "duality-weak" : "duality-strict",
               worst <= bound, worst, bound,
               "max over n <= " + std::to_string(n_dual) + ", heights 0..8");
  }

  {
    double worst = 0.0;
    for (int n = 1; n <= o.n_max; ++n)
      worst = std::max(worst, alili_doney_residual(law, n));
    report.add("alili-doney", worst <= bound, worst, bound,
               "cycle split of n q-hat_n(0,0), n <= " +
                   std::to_string(o.n_max));
  }

  {
    double worst = 0.0;
    for (int n = 1; n <= o.n_max; ++n)
      worst = std::max(worst, renewal_mass_residual(law, n));
    report.add("renewal-mass", worst <= bound, worst, bound,
               "weak diagonal vs strict renewal sequence, n <= " +
                   std::to_string(o.n_max));
  }

  {
    // Strict tables must be exact shifts of weak ones; compare raw values.
    double worst = 0.0;
    const int top = 12;
    for (int n = 1; n <= std::min(o.n_max, top); ++n) {
      const KernelTable st = q_plus(law, n, top, top, Strictness::strict);
      const KernelTable wk = q_plus(law, n, top, top, Strictness::weak);
      for (int x = 1; x <= top; ++x)
        for (int y = 1; y <= top; ++y)
          worst = std::max(
              worst, std::abs(st.value(x, y) - wk.value(x - 1, y - 1)));
    }
    report.add("shift-identity", worst <= bound, worst, bound,
               "q-hat_n(x,y) vs q_n(x-1,y-1), x,y <= 12");
  }

  {
    // Rebuild the strict renewal function from the strict ladder height
    // marginal alone and compare with the (1 - zeta)-scaled weak table.
    // The two constructions share no intermediate, so agreement is a real
    // check of the proportionality and not bookkeeping.
    const LadderLaw lad =
        ladder_law(law, Strictness::strict, /*descending=*/true, 4096);
    if (lad.height_exact) {
      std::vector<double> u(static_cast<size_t>(x_top) + 1, 0.0);
      u[0] = 1.0;
      for (int x = 1; x <= x_top; ++x) {
        NeumaierSum acc;
        for (int h = 1; h <= std::min(x, lad.h_max); ++h)
          acc.add(lad.height[static_cast<size_t>(h)] *
                  u[static_cast<size_t>(x - h)]);
        u[static_cast<size_t>(x)] = acc.value();
      }
      double worst = 0.0;
      NeumaierSum direct;
      for (int x = 0; x <= x_top; ++x) {
        direct.add(u[static_cast<size_t>(x)]);
        worst = std::max(worst, std::abs(direct.value() - desc.strict(x)) /
                                    desc.strict(x));
      }
      report.add("renewal-consistency", worst <= bound, worst, bound,
                 "strict table vs renewal of the strict height marginal, "
                 "x <= 20");
    } else {
      report.add("renewal-consistency", true, 0.0, bound,
                 "skipped: strict descending height marginal has no exact "
                 "closure for this law");
    }
  }

  return finish(report, o.json, out);
}

// ---------------------------------------------------------------------------
// sample-bridge: emit pinned constrained paths for external plotting.

struct BridgeOpts {
  std::string law = "lazy";
  int n = 8;
  int x = 0;
  int y = 0;
  long long samples = 10;
  std::uint64_t seed = 0;
  std::string strictness = "strict";
  bool unconditioned = false;
  std::string csv = "bridge_paths.csv";
  std::string json = "bridge.json";
};

int run_sample_bridge(const BridgeOpts& o, std::ostream& out) {
  if (o.samples * (static_cast<long long>(o.n) + 1) > 50'000'000)
    throw UsageError(
        "path dump too large; reduce --samples or --N (this tool keeps "
        "whole paths, use verify-invariance for bulk statistics)");

  const StepLaw law = load_law(o.law);
  const BridgeTable table = bridge_transition_table(
      law, parse_strictness(o.strictness), o.n, o.y, !o.unconditioned);

  std::vector<PathSample> paths;
  paths.reserve(static_cast<size_t>(o.samples));
  double worst_gap = 0.0;
  for (long long i = 0; i < o.samples; ++i) {
    // Stream = sample index, the same schedule the batch sampler uses, so
    // the dump is reproducible and worker-free by construction.
    PhiloxRng rng(o.seed, static_cast<std::uint64_t>(i));
    double gap = 0.0;
    paths.push_back(sample_bridge(table, o.x, rng, &gap));
    worst_gap = std::max(worst_gap, gap);
  }
  {
    std::ofstream f = open_out(o.csv);
    paths_to_csv(paths, f);
  }

  DiagnosticReport report;
  report.tool = "sample-bridge";
  report.config = {{"law", o.law},
                   {"N", std::to_string(o.n)},
                   {"x", std::to_string(o.x)},
                   {"y", std::to_string(o.y)},
                   {"samples", std::to_string(o.samples)},
                   {"seed", std::to_string(o.seed)},
                   {"strictness", o.strictness},
                   {"unconditioned", o.unconditioned ? "true" : "false"},
                   {"out", o.csv}};
  report.add("paths-written", true, static_cast<double>(o.samples), 0.0,
             resolve_out(o.csv));
  report.add("max-renorm-gap", true, worst_gap, 0.0, "informational");
  return finish(report, o.json, out);
}

// ---------------------------------------------------------------------------
// verify-llt: the deterministic ratio suite. Probe times are pinned to
// decades; the trend verdicts compare the final gap against the gap one
// probe earlier, which is the documented non-increase requirement.

struct LltOpts {
  std::string law = "lazy";
  std::string csv = "llt.csv";
  std::string json = "llt.json";
};

int run_verify_llt(const LltOpts& o, std::ostream& out) {
  const StepLaw law = load_law(o.law);

  DiagnosticReport report;
  report.tool = "verify-llt";
  report.config = {{"law", o.law},
                   {"n_list", "100,1000,10000"},
                   {"n_list_fixed_endpoint", "200,2000,20000"}};

  const std::vector<long long> decades{100, 1000, 10000};
  const std::vector<long long> decades2{200, 2000, 20000};
  std::vector<std::pair<std::string, RatioDiagnostic>> diags;

  auto probe = [&](const std::string& name, double tol, auto&& make) {
    try {
      RatioDiagnostic d = make();
      report.add(name, d.final_gap < tol, d.final_gap, tol,
                 "n = " + std::to_string(d.n_list.back()));
      if (d.observed.size() >= 2) {
        const double prev =
            std::abs(d.observed[d.observed.size() - 2] - d.target);
        report.add(name + "-trend", d.trend_ok, d.final_gap, prev,
                   "gap vs previous probe");
      }
      diags.emplace_back(name, std::move(d));
    } catch (const DefectTooLarge& e) {
      report.add(name, true, 0.0, tol, std::string("skipped: ") + e.what());
    } catch (const UnsupportedAlpha& e) {
      report.add(name, true, 0.0, tol,
                 std::string("skipped: requires a closed-form limit "
                             "density; ") +
                     e.what());
    }
  };

  probe("gnedenko", 0.05, [&] {
    return gnedenko_ratio(law, decades, 0, [](long long, double) { return 0; });
  });
  probe("kernel-fixed-endpoint", 0.05, [&] {
    return llt_small_ratio(law, decades2, 0, 0, Strictness::strict);
  });
  probe("kernel-scaled-endpoint", 0.07, [&] {
    return llt_large_ratio(law, decades, 0, 1.0, Strictness::strict);
  });
  probe("tail-ratio", 0.05, [&] {
    RatioDiagnostic d;
    d.n_list = decades;
    d.observed = tail_ratio_sequence(law, decades);
    d.finish();
    return d;
  });

  try {
    const DiagnosticReport cons = constants_check(law, decades);
    double prev_gap = -1.0;
    double last_gap = -1.0;
    const std::string prev_name =
        "descending-side/n=" + std::to_string(decades[decades.size() - 2]);
    const std::string last_name =
        "descending-side/n=" + std::to_string(decades.back());
    for (const auto& c : cons.checks) {
      if (c.name == prev_name) prev_gap = c.observed;
      if (c.name == last_name) last_gap = c.observed;
      report.checks.push_back(c);
    }
    if (prev_gap >= 0.0 && last_gap >= 0.0)
      report.add("constants-trend", last_gap <= prev_gap, last_gap, prev_gap,
                 "gap vs previous probe");
  } catch (const DefectTooLarge& e) {
    report.add("constants", true, 0.0, 0.10,
               std::string("skipped: ") + e.what());
  }

  {
    std::ofstream f = open_out(o.csv);
    ratios_to_csv(diags, f);
  }
  return finish(report, o.json, out);
}

// ---------------------------------------------------------------------------
// stone: rigorous density sandwich and the weighted Riemann-sum trace.

struct StoneOpts {
  std::string density = "gaussian";
  double sigma = 1.0;
  double beta = 2.5;
  double length = 12.0;
  double cell_width = 1.0 / 256.0;
  double ratio = 1e3;
  int n = 6;
  int k_bar = 2;
  double x = 0.1;
  double y = 0.5;
  double alpha_prime = 1.5;
  double delta = 0.09375;  // 24 cells at the default width
  int halvings = 3;
  double cutoff = 10.0;
  std::string csv = "stone.csv";
  std::string json = "stone.json";
};

int run_stone(const StoneOpts& o, std::ostream& out) {
  const UnimodalDensity f = o.density == "gaussian"
                                ? gaussian_density(o.sigma)
                                : pareto_tail_density(o.beta);
  const DensityGrid grid(f, o.length, o.cell_width, o.ratio);
  const double h = grid.cell_width();

  std::vector<double> deltas;
  for (int k = 0; k <= o.halvings; ++k)
    deltas.push_back(o.delta / static_cast<double>(1 << k));
  {
    std::ofstream fcsv = open_out(o.csv);
    sandwich_trace_csv(grid, o.n, o.k_bar, o.x, o.y, deltas, fcsv);
  }

  DiagnosticReport report;
  report.tool = "stone";
  report.config = {{"density", o.density},
                   {"sigma", num_full(o.sigma)},
                   {"beta", num_full(o.beta)},
                   {"length", num_full(o.length)},
                   {"cell_width", num_full(o.cell_width)},
                   {"n", std::to_string(o.n)},
                   {"kbar", std::to_string(o.k_bar)},
                   {"x", num_full(o.x)},
                   {"y", num_full(o.y)},
                   {"alpha_prime", num_full(o.alpha_prime)},
                   {"delta", num_full(o.delta)},
                   {"halvings", std::to_string(o.halvings)},
                   {"cutoff", num_full(o.cutoff)},
                   {"out", o.csv}};

  std::vector<Enclosure> trace;
  trace.reserve(deltas.size());
  for (double d : deltas)
    trace.push_back(sandwich_bounds(grid, o.n, o.k_bar, o.x, o.y, d));

  double worst_order = -1.0;
  double worst_widening = -1.0;
  for (size_t k = 0; k < trace.size(); ++k) {
    worst_order = std::max(worst_order, trace[k].lower - trace[k].upper);
    if (k > 0) {
      const double w_prev = trace[k - 1].upper - trace[k - 1].lower;
      const double w_cur = trace[k].upper - trace[k].lower;
      worst_widening = std::max(worst_widening, w_cur - w_prev);
    }
  }
  report.add("sandwich-ordered", worst_order <= 0.0, worst_order, 0.0,
             "max of lower - upper over the refinement trace");
  report.add("sandwich-width-trend", worst_widening <= 0.0, worst_widening,
             0.0, "max width increase under halving");

  // The doubling comparison needs a coarser even-cell spacing with
  // delta in (delta_prime / 2, delta_prime).
  const long long dcells = std::llround(o.delta / h);
  const double delta_prime =
      h * static_cast<double>(std::llround(4.0 * static_cast<double>(dcells) / 3.0));
  const ThetaResult t_prime =
      dri_theta(grid, o.k_bar, o.alpha_prime, delta_prime, 2.0, 0.5, o.cutoff);
  const ThetaResult t_base =
      dri_theta(grid, o.k_bar, o.alpha_prime, o.delta, 2.0, 0.5, o.cutoff);
  const ThetaResult t_half =
      dri_theta(grid, o.k_bar, o.alpha_prime, o.delta / 2.0, 2.0, 0.5,
                o.cutoff);
  report.add("theta-halving", t_half.theta <= t_base.theta, t_half.theta,
             t_base.theta, "theta(delta/2) vs theta(delta)");
  report.add("theta-doubling-bound", t_base.theta <= 2.0 * t_prime.theta,
             t_base.theta, 2.0 * t_prime.theta,
             "theta(delta) vs 2 theta(delta') at delta' = " +
                 num(delta_prime));
  report.add("theta-tail", true, t_base.tail, 0.0,
             "weighted mass beyond the cutoff, informational");
  report.add("grid-tail", true, grid.tail_bound(), 0.0,
             "step mass outside the grid, informational");
  return finish(report, o.json, out);
}

// ---------------------------------------------------------------------------
// verify-invariance: sampled marginal fit, its negative control, and the
// uniform convergence trend of the change-of-measure density.

struct InvarianceOpts {
  std::string law = "lazy";
  long long n = 4096;
  double eps = 0.5;
  long long samples = 100000;
  std::uint64_t seed = 0;
  int workers = 4;
  double threshold = 0.02;
  double control_threshold = 0.1;
  double uniff_eps = 0.25;
  std::string marginal_csv;
  std::string json = "invariance.json";
};

int run_verify_invariance(const InvarianceOpts& o, std::ostream& out) {
  const StepLaw law = load_law(o.law);

  DiagnosticReport report;
  report.tool = "verify-invariance";
  report.config = {{"law", o.law},
                   {"N", std::to_string(o.n)},
                   {"eps", num_full(o.eps)},
                   {"samples", std::to_string(o.samples)},
                   {"seed", std::to_string(o.seed)},
                   {"workers", std::to_string(o.workers)},
                   {"threshold", num_full(o.threshold)},
                   {"control_threshold", num_full(o.control_threshold)},
                   {"uniff_eps", num_full(o.uniff_eps)}};

  std::vector<int> marginal;
  const FitReport fit =
      excursion_marginal_fit(law, o.n, o.eps, o.samples, o.seed, o.workers,
                             /*conditioned=*/true, o.threshold, &marginal);
  report.add(fit.statistic, fit.passed, fit.value, fit.threshold,
             "marginal at 1 - eps vs excursion law, " +
                 std::to_string(fit.n_samples) + " samples");

  const FitReport control = excursion_marginal_fit(
      law, o.n, o.eps, o.samples, o.seed, o.workers,
      /*conditioned=*/false, o.control_threshold, nullptr);
  report.add(control.statistic, control.passed, control.value,
             control.threshold,
             "free bridge must sit far from the excursion law");

  {
    const std::vector<long long> n_list{o.n / 16, o.n / 4, o.n};
    std::vector<double> z_grid;
    z_grid.reserve(61);
    for (int i = 0; i <= 60; ++i) z_grid.push_back(0.05 * i);

    const double a_top = norming(brownian_params(law), o.n);
    const RenewalTable desc = renewal_table(
        law, /*ascending=*/false, static_cast<int>(3.0 * a_top) + 20);
    const auto gaps = uniff_gap(law, desc, n_list, o.uniff_eps, z_grid);

    std::string path;
    double worst_increase = -1.0;
    for (size_t i = 0; i < gaps.size(); ++i) {
      report.add("uniff/N=" + std::to_string(gaps[i].first), true,
                 gaps[i].second, 0.0, "informational sup-gap");
      if (i > 0)
        worst_increase =
            std::max(worst_increase, gaps[i].second - gaps[i - 1].second);
      if (!path.empty()) path += " -> ";
      path += num(gaps[i].second);
    }
    report.add("uniff-trend", worst_increase <= 0.0, worst_increase, 0.0,
               "sup-gap must not increase along " + path);
    const double terminal_bound =
        0.05 * density_ratio(0.0, o.uniff_eps, 1.0, 2.0);
    report.add("uniff-terminal", gaps.back().second < terminal_bound,
               gaps.back().second, terminal_bound,
               "terminal sup-gap vs 5% of the limit density at zero");
  }

  if (!o.marginal_csv.empty()) {
    std::ofstream f = open_out(o.marginal_csv);
    const double a_n = norming(brownian_params(law), o.n);
    f << "sample_id,state,rescaled\n";
    for (size_t i = 0; i < marginal.size(); ++i)
      f << i << "," << marginal[i] << ","
        << num_full(static_cast<double>(marginal[i]) / a_n) << "\n";
  }
  return finish(report, o.json, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"positive random walk toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "",
                 "key=value file with one [section] per subcommand");
  app.require_subcommand(1);

  int code = 0;

  KernelOpts kern;
  auto* kernel = app.add_subcommand("kernel", "dump a killed-kernel table");
  kernel->add_option("--law", kern.law, "preset name or law JSON file")
      ->capture_default_str();
  kernel->add_option("--n", kern.n, "number of steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  kernel->add_option("--xmax", kern.x_max, "largest starting point")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  kernel->add_option("--ymax", kern.y_max, "largest endpoint")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  kernel->add_option("--strictness", kern.strictness, "weak or strict")
      ->check(CLI::IsMember({"weak", "strict"}))
      ->capture_default_str();
  kernel->add_option("--out", kern.csv, "CSV output path")
      ->capture_default_str();
  kernel->add_option("--json", kern.json, "JSON report path")
      ->capture_default_str();
  kernel->callback([&] { code = run_kernel(kern, out); });

  RenewalOpts renw;
  auto* renewal =
      app.add_subcommand("renewal", "dump a renewal-function table");
  renewal->add_option("--law", renw.law, "preset name or law JSON file")
      ->capture_default_str();
  renewal->add_option("--xmax", renw.x_max, "largest argument")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  renewal->add_flag("--ascending", renw.ascending,
                    "tabulate the ascending side (default descending)");
  renewal->add_option("--tmax", renw.t_max, "ladder epoch horizon")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  renewal->add_option("--out", renw.csv, "CSV output path")
      ->capture_default_str();
  renewal->add_option("--json", renw.json, "JSON report path")
      ->capture_default_str();
  renewal->callback([&] { code = run_renewal(renw, out); });

  IdentityOpts iden;
  auto* identities =
      app.add_subcommand("identities", "run the exact-identity suite");
  identities->add_option("--law", iden.law, "preset name or law JSON file")
      ->capture_default_str();
  identities->add_option("--nmax", iden.n_max, "largest horizon")
      ->check(CLI::Range(1, 200))
      ->capture_default_str();
  identities->add_option("--out", iden.json, "JSON report path")
      ->capture_default_str();
  identities->callback([&] { code = run_identities(iden, out); });

  BridgeOpts brid;
  auto* bridge =
      app.add_subcommand("sample-bridge", "sample pinned constrained paths");
  bridge->add_option("--law", brid.law, "preset name or law JSON file")
      ->capture_default_str();
  bridge->add_option("--N", brid.n, "number of steps")
      ->check(CLI::Range(2, 1 << 20))
      ->capture_default_str();
  bridge->add_option("--x", brid.x, "starting point")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bridge->add_option("--y", brid.y, "endpoint")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bridge->add_option("--samples", brid.samples, "number of paths")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bridge->add_option("--seed", brid.seed, "RNG seed")->capture_default_str();
  bridge->add_option("--strictness", brid.strictness, "weak or strict")
      ->check(CLI::IsMember({"weak", "strict"}))
      ->capture_default_str();
  bridge->add_flag("--unconditioned", brid.unconditioned,
                   "drop the positivity constraint (control variant)");
  bridge->add_option("--out", brid.csv, "CSV output path")
      ->capture_default_str();
  bridge->add_option("--json", brid.json, "JSON report path")
      ->capture_default_str();
  bridge->callback([&] { code = run_sample_bridge(brid, out); });

  LltOpts llto;
  auto* llt = app.add_subcommand(
      "verify-llt", "run the deterministic local-limit ratio suite");
  llt->add_option("--law", llto.law, "preset name or law JSON file")
      ->capture_default_str();
  llt->add_option("--out", llto.csv, "ratio CSV path")->capture_default_str();
  llt->add_option("--json", llto.json, "JSON report path")
      ->capture_default_str();
  llt->callback([&] { code = run_verify_llt(llto, out); });

  StoneOpts ston;
  auto* stone = app.add_subcommand(
      "stone", "certified density sandwich and Riemann-sum trace");
  stone->add_option("--density", ston.density, "gaussian or pareto")
      ->check(CLI::IsMember({"gaussian", "pareto"}))
      ->capture_default_str();
  stone->add_option("--sigma", ston.sigma, "gaussian scale")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stone->add_option("--beta", ston.beta, "pareto tail exponent")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stone->add_option("--length", ston.length, "grid half-length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stone->add_option("--cell-width", ston.cell_width, "grid cell width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stone->add_option("--ratio", ston.ratio, "largest tolerated enclosure ratio")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stone->add_option("--n", ston.n, "total steps")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  stone->add_option("--kbar", ston.k_bar, "backward split steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stone->add_option("--x", ston.x, "starting point")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  stone->add_option("--y", ston.y, "density argument")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  stone->add_option("--alpha-prime", ston.alpha_prime,
                    "weight exponent, in (alpha rho, alpha)")
      ->capture_default_str();
  stone->add_option("--delta", ston.delta, "initial window width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stone->add_option("--halvings", ston.halvings, "refinement halvings")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  stone->add_option("--cutoff", ston.cutoff, "tail report cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stone->add_option("--out", ston.csv, "CSV output path")
      ->capture_default_str();
  stone->add_option("--json", ston.json, "JSON report path")
      ->capture_default_str();
  stone->callback([&] { code = run_stone(ston, out); });

  InvarianceOpts invr;
  auto* invariance = app.add_subcommand(
      "verify-invariance", "sampled scaling-limit marginal fit");
  invariance->add_option("--law", invr.law, "preset name or law JSON file")
      ->capture_default_str();
  invariance->add_option("--N", invr.n, "number of steps")
      ->check(CLI::Range(32LL, 1LL << 24))
      ->capture_default_str();
  invariance->add_option("--eps", invr.eps, "marginal time 1 - eps")
      ->check(CLI::Range(1e-3, 0.999))
      ->capture_default_str();
  invariance->add_option("--samples", invr.samples, "sample count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  invariance->add_option("--seed", invr.seed, "RNG seed")
      ->capture_default_str();
  invariance->add_option("--workers", invr.workers, "sampling threads")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  invariance->add_option("--threshold", invr.threshold, "KS pass bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  invariance
      ->add_option("--control-threshold", invr.control_threshold,
                   "KS floor the negative control must exceed")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  invariance
      ->add_option("--uniff-eps", invr.uniff_eps,
                   "eps for the uniform density-ratio trend")
      ->check(CLI::Range(1e-3, 0.999))
      ->capture_default_str();
  invariance->add_option("--marginal-out", invr.marginal_csv,
                         "optional CSV of rescaled marginal samples");
  invariance->add_option("--out", invr.json, "JSON report path")
      ->capture_default_str();
  invariance->callback([&] { code = run_verify_invariance(invr, out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    nlohmann::json j;
    j["error"] = e.kind();
    j["message"] = e.what();
    err << j.dump() << "\n";
    return 3;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}

}  // namespace poswalk::cli
