#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "poswalk/errors.hpp"
#include "poswalk/kernels.hpp"
#include "poswalk/step_law.hpp"

using namespace poswalk;

namespace {

double rel_gap(double got, long double want) {
  const double w = static_cast<double>(want);
  if (w == 0.0) return std::abs(got);
  return std::abs(got - w) / w;
}

}  // namespace

TEST_CASE("killed kernels match path enumeration") {
  for (const char* name : {"lazy", "skew"}) {
    const StepLaw law = make_step_law(name);
    for (Strictness s : {Strictness::weak, Strictness::strict}) {
      for (int n : {1, 2, 5, 9}) {
        const KernelTable table = q_plus(law, n, 6, 8, s);
        for (int x = 0; x <= 6; ++x)
          for (int y = 0; y <= 8; ++y)
            CHECK(rel_gap(table.value(x, y),
                          testutil::enum_kernel(law, s, n, x, y)) < 1e-13);
      }
    }
  }
}

TEST_CASE("one step is the free pmf, endpoints unconstrained") {
  const StepLaw law = make_step_law("skew");
  const KernelTable weak = q_plus(law, 1, 4, 6, Strictness::weak);
  const KernelTable strict = q_plus(law, 1, 4, 6, Strictness::strict);
  for (int x = 0; x <= 4; ++x)
    for (int y = 0; y <= 6; ++y) {
      CHECK(weak.value(x, y) == law.p(y - x));
      CHECK(strict.value(x, y) == law.p(y - x));
    }
  // the diagonal strict atom exists because only intermediates are killed
  WalkDP dp = WalkDP::constrained(law, Strictness::strict, 0, 16);
  CHECK(dp.endpoint_value(0) == law.p(0));
}

TEST_CASE("strict tables are shifted weak tables") {
  for (const char* name : {"lazy", "skew", "geom-diff"}) {
    const StepLaw law = make_step_law(name);
    for (int n : {2, 4, 7}) {
      const KernelTable st = q_plus(law, n, 10, 10, Strictness::strict);
      const KernelTable wk = q_plus(law, n, 10, 10, Strictness::weak);
      for (int x = 1; x <= 10; ++x)
        for (int y = 1; y <= 10; ++y)
          CHECK(st.value(x, y) == wk.value(x - 1, y - 1));
    }
  }
}

TEST_CASE("survival matches enumeration") {
  for (const char* name : {"lazy", "skew"}) {
    const StepLaw law = make_step_law(name);
    for (Strictness s : {Strictness::weak, Strictness::strict})
      for (int n : {1, 3, 8})
        for (int x : {0, 1, 3})
          CHECK(rel_gap(positivity_survival(law, n, x, s),
                        testutil::enum_survival(law, s, n, x)) < 1e-13);
  }
}

TEST_CASE("survival curve is the per-step survival sequence") {
  const StepLaw law = make_step_law("lazy");
  const auto curve = survival_curve(law, Strictness::strict, 9);
  REQUIRE(curve.size() == 10);
  CHECK(curve[0] == 1.0);
  for (int m = 1; m <= 9; ++m) {
    CHECK(rel_gap(curve[static_cast<size_t>(m)],
                  testutil::enum_survival(law, Strictness::strict, m, 0)) <
          1e-13);
    CHECK(curve[static_cast<size_t>(m)] <= curve[static_cast<size_t>(m - 1)]);
  }
}

TEST_CASE("free transition pmf agrees with far-from-boundary enumeration") {
  const StepLaw law = make_step_law("lazy");
  // started at 50 the weak kill cannot trigger within four steps, so this
  // enumeration is the unconstrained pmf of the displacement
  const long double free4 =
      testutil::enum_kernel(law, Strictness::weak, 4, 50, 52);
  const double direct = transition_pmf(law, 4, 0, 2);
  CHECK(rel_gap(direct, free4) < 1e-13);
  CHECK(transition_pmf(law, 4, -3, -1) == direct);  // translation invariant
}

TEST_CASE("diagonal curve matches per-n tables") {
  const StepLaw law = make_step_law("skew");
  const auto diag = kernel_diag_curve(law, Strictness::strict, 8);
  for (int n : {1, 4, 8}) {
    const KernelTable t = q_plus(law, n, 0, 0, Strictness::strict);
    CHECK(diag[static_cast<size_t>(n)] ==
          doctest::Approx(t.value(0, 0)).epsilon(1e-14));
  }
}

TEST_CASE("deep horizons survive via rescaling") {
  // At n = 20000 the surviving mass is far below any naive product of
  // per-step factors; the running scale keeps values representable.
  const StepLaw law = make_step_law("lazy");
  WalkDP dp = WalkDP::constrained(law, Strictness::strict, 1,
                                  default_cap(law, 20000));
  dp.advance(20000);
  const double m = dp.mass();
  CHECK(m > 0.0);
  CHECK(std::isfinite(m));
  CHECK(m < 1e-2);
  CHECK(dp.leak() < 1e-12 * m);
}

TEST_CASE("table rejects bad geometry") {
  const StepLaw law = make_step_law("lazy");
  CHECK_THROWS_AS(q_plus(law, 0, 3, 3, Strictness::weak), DomainError);
  CHECK_THROWS_AS(q_plus(law, 2, -1, 3, Strictness::weak), DomainError);
}
