#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "poswalk/errors.hpp"
#include "poswalk/llt.hpp"
#include "poswalk/step_law.hpp"

using namespace poswalk;

TEST_CASE("ratio diagnostic bookkeeping") {
  RatioDiagnostic d;
  d.n_list = {10, 100, 1000};
  d.observed = {1.3, 1.1, 1.02};
  d.finish();
  CHECK(d.final_gap == doctest::Approx(0.02));
  CHECK(d.trend_ok);

  d.observed = {1.01, 1.002, 1.08};
  d.finish();
  CHECK_FALSE(d.trend_ok);
}

TEST_CASE("pointwise free-walk ratio approaches one") {
  const StepLaw law = make_step_law("lazy");
  const auto d = gnedenko_ratio(law, {400, 1600}, 0,
                                [](long long, double) { return 0; });
  REQUIRE(d.observed.size() == 2);
  CHECK(std::abs(d.observed[0] - 1.0) < 0.01);
  CHECK(d.final_gap < 0.003);
  CHECK(d.trend_ok);
}

TEST_CASE("pointwise ratio tracks a moving endpoint") {
  // probe one norming unit away from the start so the gaussian factor is
  // exercised off its peak
  const StepLaw law = make_step_law("skew");
  const auto d = gnedenko_ratio(law, {500, 2000}, 2, [](long long, double a) {
    return static_cast<int>(std::lround(a));
  });
  CHECK(d.final_gap < 0.02);
}

TEST_CASE("fixed-endpoint kernel ratio approaches one on both strictness") {
  const StepLaw law = make_step_law("lazy");
  for (Strictness s : {Strictness::weak, Strictness::strict}) {
    const auto d = llt_small_ratio(law, {500, 2000}, 1, 2, s);
    CHECK(std::abs(d.observed[0] - 1.0) < 0.05);
    CHECK(d.final_gap < 0.02);
    CHECK(d.trend_ok);
  }
}

TEST_CASE("scaled-endpoint kernel ratio approaches one") {
  const StepLaw law = make_step_law("lazy");
  for (Strictness s : {Strictness::weak, Strictness::strict}) {
    const auto d = llt_large_ratio(law, {500, 2000}, 0, 1.0, s);
    CHECK(d.final_gap < 0.02);
    CHECK(d.trend_ok);
  }
}

TEST_CASE("ratio probes below two steps are refused") {
  const StepLaw law = make_step_law("lazy");
  CHECK_THROWS_AS(llt_large_ratio(law, {1, 100}, 0, 1.0, Strictness::strict),
                  DomainError);
}

TEST_CASE("tail constant estimates bracket the gaussian value") {
  const DiagnosticReport report =
      constants_check(make_step_law("lazy"), {100, 1000});
  CHECK(report.all_passed());
  bool saw_desc = false;
  bool saw_agree = false;
  for (const auto& c : report.checks) {
    if (c.name.rfind("descending-side/", 0) == 0) {
      saw_desc = true;
      CHECK(c.observed < 0.10);
    }
    if (c.name.rfind("sides-agree/", 0) == 0) saw_agree = true;
  }
  CHECK(saw_desc);
  CHECK(saw_agree);
}

TEST_CASE("asymmetric ascending side is skipped, not faked") {
  const DiagnosticReport report =
      constants_check(make_step_law("skew"), {100, 1000});
  CHECK(report.all_passed());
  bool skipped = false;
  for (const auto& c : report.checks)
    if (c.name == "ascending-side" &&
        c.details.rfind("skipped", 0) == 0)
      skipped = true;
  CHECK(skipped);
}

TEST_CASE("ratio csv has the documented schema") {
  RatioDiagnostic d;
  d.n_list = {10, 20};
  d.observed = {1.5, 1.25};
  d.finish();
  std::ostringstream out;
  ratios_to_csv({{"demo", d}}, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "check_name,n,observed,target,gap");
  std::string row;
  std::getline(in, row);
  CHECK(row.rfind("demo,10,1.5,1,0.5", 0) == 0);
}
