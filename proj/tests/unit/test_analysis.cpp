#include <algorithm>
#include <random>

#include "doctest.h"
#include "random_problems.hpp"
#include "rideshare/analysis.hpp"
#include "rideshare/fixtures.hpp"
#include "rideshare/generator.hpp"
#include "rideshare/report.hpp"
#include "rideshare/rtv.hpp"

using namespace rideshare;

TEST_CASE("PoF at zero is exactly one and ratios are at least one") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = testing::random_problem(rng, {2, 4, 2, 0.6});
    const auto at0 = pof(p, 0.0);
    REQUIRE(at0.defined());
    CHECK(at0.value == doctest::Approx(1.0).epsilon(1e-12));
    const auto fairest = max_fairness(p);
    const auto mid = pof(p, 0.5 * fairest.theta0);
    const auto worst = spof(p, 0.5 * fairest.theta0);
    REQUIRE(mid.defined());
    REQUIRE(worst.defined());
    CHECK(mid.value >= 1.0 - 1e-9);
    CHECK(worst.value >= mid.value - 1e-9);
    const auto stab = pos(p);
    if (stab.defined()) CHECK(stab.value >= 1.0 - 1e-9);
  }
}

TEST_CASE("ratios report undefined and not computed states") {
  const auto p = fixtures::pof_worst_case();
  CHECK(pof(p, 1.0).defined());
  std::mt19937_64 rng(2);
  const auto big = testing::random_problem(rng, {4, 8, 1, 0.5});
  CHECK(spof(big, 0.1).status == RatioStatus::kNotComputed);
  CHECK(to_string(spof(big, 0.1)) == "not computed");
}

TEST_CASE("worst-case PoS fixture") {
  const auto p = fixtures::pos_worst_case(100.0, 1e-3);
  const auto r = pos(p);
  REQUIRE(r.defined());
  CHECK(r.value == doctest::Approx(1e5).epsilon(1e-9));
}

TEST_CASE("a problem with a unique matching has PoS one") {
  MatchingProblem p;
  p.drivers.push_back({"d", 10, 0, 0, 1});
  p.riders.push_back({"r", 10, 5, 1});
  Candidate c;
  c.driver = 0;
  c.riders = {0};
  c.rider_costs = {1};
  c.driver_cost = 2;
  c.cost = 3;
  p.candidates.push_back(c);
  CHECK(pos(p).value == doctest::Approx(1.0));
}

TEST_CASE("matching enumeration counts and limit") {
  std::mt19937_64 rng(3);
  const auto p = testing::random_problem(rng, {1, 3, 1, 1.0});
  CHECK(enumerate_matchings(p).size() == 4);  // alone or one of three riders
  CHECK_THROWS_AS(enumerate_matchings(p, {}, 2), LimitError);
}

TEST_CASE("csv outputs") {
  ParetoFrontier empty;
  CHECK(frontier_csv(empty) == "theta,cost,slope\n");
  CHECK(runs_csv({}) == "config,seed,drivers,riders,cost,matched,reduced_travel_time,runtime_s\n");
  std::vector<RunRecord> runs{{"rush", 1, 2, 3, 10, 1, 5, 0.1}, {"rush", 2, 2, 3, 20, 2, 7, 0.3}};
  const auto rows = runs_csv(runs);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 3);
  const auto summary = runs_summary_csv(runs);
  CHECK(summary.find("rush,2,15,1.5,6,0.2") != std::string::npos);
  CHECK(csv_field("a,b") == "\"a,b\"");
}

TEST_CASE("reduced travel time is recomputed from schedules") {
  const auto inst = gen_rush_hour(testing::small_rush(5, 12, {1, 2}));
  const auto p = build_rtv(inst, build_rv(inst));
  const auto m = solve_matching(p).matching;
  double expect = 0.0;
  for (const auto& d : inst.drivers) expect += inst.direct_time(d);
  for (int r = 0; r < static_cast<int>(inst.riders.size()); ++r) {
    if (m.matched[r]) expect += inst.direct_time(inst.riders[r]);
  }
  for (int ci : m.assignment) {
    const auto& t = p.candidates[ci].schedule->times;
    expect -= t.back() - t.front();
  }
  CHECK(reduced_travel_time(p, m) == doctest::Approx(expect));
  // Driving alone at the direct time saves nothing.
  std::vector<int> alone;
  for (int d = 0; d < static_cast<int>(p.drivers.size()); ++d) alone.push_back(p.find(d, {}));
  CHECK(reduced_travel_time(p, make_matching(p, alone)) == doctest::Approx(0.0).epsilon(1e-9));
}
