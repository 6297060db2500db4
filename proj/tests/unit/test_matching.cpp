#include <cmath>
#include <random>

#include "doctest.h"
#include "random_problems.hpp"
#include "rideshare/analysis.hpp"
#include "rideshare/fixtures.hpp"
#include "rideshare/matching.hpp"
#include "rideshare/rtv.hpp"

using namespace rideshare;

namespace {

void check_against_oracle(const MatchingProblem& p, const MatchOptions& o) {
  const auto res = solve_matching(p, o);
  const auto ref = oracle_matching(p, o);
  REQUIRE(res.optimal() == ref.has_value());
  if (!ref) return;
  CHECK(matching_objective(p, res.matching, o) == doctest::Approx(matching_objective(p, *ref, o)).epsilon(1e-9));
  CHECK(res.objective == doctest::Approx(matching_objective(p, res.matching, o)).epsilon(1e-9));
  if (o.require_stability) {
    for (int ci : blocking_pairs(p, res.matching)) CHECK_FALSE(candidate_allowed(p, p.candidates[ci], o));
  }
  if (o.require_ir) {
    for (int ci : res.matching.assignment) {
      if (ci >= 0) CHECK(candidate_ir(p, p.candidates[ci]));
    }
  }
}

}  // namespace

TEST_CASE("matching equals brute force under every flag combination") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const testing::ProblemShape shape{testing::pick(rng, 1, 3), testing::pick(rng, 1, 6), testing::pick(rng, 1, 3),
                                      testing::uniform(rng, 0.3, 0.9)};
    const auto p = testing::random_problem(rng, shape);
    for (int flags = 0; flags < 8; ++flags) {
      MatchOptions o;
      o.require_ir = flags & 1;
      o.require_stability = flags & 2;
      o.objective = (flags & 4) ? ObjectiveMode::kWelfare : ObjectiveMode::kCost;
      check_against_oracle(p, o);
    }
  }
}

TEST_CASE("weights and zero costs are priced like the oracle") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_problem(rng, {2, 5, 2, 0.6});
    MatchOptions o;
    o.rider_weights.resize(p.riders.size());
    for (auto& w : o.rider_weights) w = testing::uniform(rng, 0, 20);
    o.zero_costs = trial % 2 == 0;
    check_against_oracle(p, o);
  }
}

TEST_CASE("decomposed and monolithic programs agree") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 15; ++trial) {
    const auto p = testing::random_problem(rng, {3, 6, 2, 0.4});
    MatchOptions whole;
    whole.decompose = false;
    const auto a = solve_matching(p);
    const auto b = solve_matching(p, whole);
    CHECK(a.matching.cost == doctest::Approx(b.matching.cost).epsilon(1e-12));
  }
}

TEST_CASE("role flexibility: a driver either drives or rides") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing::random_problem(rng, {2, 4, 2, 0.7});
    // Rider 0 mirrors driver 0; drop candidates of driver 0 that serve it.
    MatchOptions o;
    o.role_flex = {{0, 0}};
    const auto res = solve_matching(p, o);
    const auto ref = oracle_matching(p, o);
    REQUIRE(res.optimal() == ref.has_value());
    if (!ref) continue;
    CHECK(matching_objective(p, res.matching, o) == doctest::Approx(matching_objective(p, *ref, o)));
    CHECK((res.matching.assignment[0] < 0) == static_cast<bool>(res.matching.matched[0]));
  }
  auto p = testing::random_problem(rng, {1, 2, 1, 1.0});
  MatchOptions bad;
  bad.role_flex = {{0, 0}, {0, 1}};
  CHECK_THROWS_AS(solve_matching(p, bad), ValidationError);
}

TEST_CASE("greedy baseline never beats the optimum") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_problem(rng, {3, 6, 2, 0.6});
    const auto opt = solve_matching(p);
    const auto g = greedy_baseline(p, 99);
    CHECK(g.restarts == 9);
    CHECK(g.best.cost >= opt.matching.cost - 1e-9);
    CHECK(g.worst.cost >= g.best.cost - 1e-12);
  }
  const auto single = testing::random_problem(rng, {1, 3, 1, 1.0});
  // One driver and singleton sets: the greedy pick is the optimum.
  CHECK(greedy_baseline(single, 1).best.cost == doctest::Approx(solve_matching(single).matching.cost));
}

TEST_CASE("utilities of unmatched users and IR") {
  std::mt19937_64 rng(4);
  const auto p = testing::random_problem(rng, {2, 3, 1, 1.0});
  std::vector<int> assignment{p.find(0, {}), p.find(1, {})};
  const auto m = make_matching(p, assignment);
  const auto u = utilities(p, m);
  for (int r = 0; r < 3; ++r) CHECK(u.riders[r] == doctest::Approx(p.riders[r].value - p.riders[r].lambda));
  CHECK(u.drivers[0] == doctest::Approx(p.drivers[0].ir_threshold));
  CHECK(is_ir(p, m));
}

TEST_CASE("a single matched pair with nothing else is stable") {
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
  MatchOptions o;
  o.require_stability = true;
  const auto res = solve_matching(p, o);
  REQUIRE(res.optimal());
  CHECK(blocking_pairs(p, res.matching).empty());
}
