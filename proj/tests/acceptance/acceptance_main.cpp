// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
// Run a subset with the criterion numbers as arguments, e.g. `3 4 5`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "random_problems.hpp"
#include "rideshare/analysis.hpp"
#include "rideshare/fairness.hpp"
#include "rideshare/fixtures.hpp"
#include "rideshare/generator.hpp"
#include "rideshare/matching.hpp"
#include "rideshare/rtv.hpp"

using namespace rideshare;

namespace {

struct Outcome {
  bool pass = true;
  int failures = 0;
  std::string detail;

  // Records a failed check; the first few messages are kept.
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures;
    if (pass || std::count(detail.begin(), detail.end(), ';') < 4) detail += (detail.empty() ? "" : "; ") + what;
    pass = false;
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

Outcome trip_oracle() {
  Outcome out;
  std::mt19937_64 rng(1001);
  int pairs = 0, by_size[4] = {0, 0, 0, 0}, feasible = 0;
  for (std::uint64_t seed = 1; pairs < 200; ++seed) {
    const auto inst = gen_rush_hour(testing::small_rush(seed, 16, {1, 3}));
    const auto rv = build_rv(inst);
    for (int d = 0; d < static_cast<int>(inst.drivers.size()) && pairs < 200; ++d) {
      auto pool = rv.driver_riders[d];
      if (pool.empty()) continue;
      std::shuffle(pool.begin(), pool.end(), rng);
      const int size = std::min(static_cast<int>(pool.size()), testing::pick(rng, 1, 3));
      std::vector<int> riders(pool.begin(), pool.begin() + size);
      std::sort(riders.begin(), riders.end());
      ++pairs;
      ++by_size[size];
      const auto fast = trip_cost(inst, d, riders);
      const auto exact = oracle_trip_cost(inst, d, riders, OracleTiming::kExact);
      const std::string tag = "seed " + std::to_string(seed) + " d" + std::to_string(d);
      out.expect(fast.feasible() == exact.feasible(), tag + ": feasibility differs from order oracle");
      if (fast.feasible() && exact.feasible()) {
        ++feasible;
        out.expect(std::abs(fast.cost - exact.cost) <= 1e-6,
                   tag + fmt(": trip %.9g vs order oracle %.9g", fast.cost, exact.cost));
      }
      if (size <= 2) {
        const auto grid = oracle_trip_cost(inst, d, riders, OracleTiming::kGrid);
        out.expect(fast.feasible() == grid.feasible(), tag + ": feasibility differs from wait grid");
        if (fast.feasible() && grid.feasible()) {
          out.expect(fast.cost <= grid.cost + 1e-6 && grid.cost - fast.cost <= 0.2,
                     tag + fmt(": trip %.9g vs wait grid %.9g", fast.cost, grid.cost));
        }
      }
    }
  }
  if (out.pass) {
    out.detail = std::to_string(pairs) + " pairs (|S| = 0/1/2/3: " + std::to_string(by_size[0]) + "/" +
                 std::to_string(by_size[1]) + "/" + std::to_string(by_size[2]) + "/" + std::to_string(by_size[3]) +
                 "), " + std::to_string(feasible) + " feasible";
  }
  return out;
}

Outcome matching_oracle() {
  Outcome out;
  int checks = 0;
  const std::vector<std::optional<int>> caps{1, 2, std::nullopt};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = gen_rush_hour(testing::small_rush(2000 + seed, 9, {1, 2}));
    const auto rv = build_rv(inst);
    for (const auto& cap : caps) {
      RtvOptions ro;
      ro.max_trip_size = cap;
      const auto p = build_rtv(inst, rv, ro);
      for (int flags = 0; flags < 4; ++flags) {
        MatchOptions o;
        o.require_ir = flags & 1;
        o.require_stability = flags & 2;
        const auto res = solve_matching(p, o);
        const auto ref = oracle_matching(p, o);
        ++checks;
        const std::string tag = "seed " + std::to_string(seed) + " cap " + (cap ? std::to_string(*cap) : "none") +
                                " flags " + std::to_string(flags);
        out.expect(res.optimal() == ref.has_value(), tag + ": feasibility differs");
        if (res.optimal() && ref) {
          const double a = matching_objective(p, res.matching, o), b = matching_objective(p, *ref, o);
          out.expect(close_rel(a, b, 1e-9), tag + fmt(": %.9g vs oracle %.9g", a, b));
        }
      }
    }
  }
  if (out.pass) out.detail = std::to_string(checks) + " solves agree";
  return out;
}

Outcome nonstable_fixture() {
  Outcome out;
  const auto inst = fixtures::nonstable_instance();
  const auto p = build_rtv(inst, build_rv(inst));

  // Shared trips (d_i, {r_i, r_j}): 63 for r_i, 57 for r_j, driver cost 108.
  int shared = 0;
  for (const auto& c : p.candidates) {
    if (c.riders.size() != 2) continue;
    const int own = c.driver;
    if (c.riders[0] != own && c.riders[1] != own) continue;
    ++shared;
    const int other = c.riders[0] == own ? c.riders[1] : c.riders[0];
    const double u_own = p.rider_utility_in(c, own), u_other = p.rider_utility_in(c, other);
    out.expect(std::abs(u_own - 63.0) <= 1e-9, fmt("own rider utility %.9g, expected 63", u_own));
    out.expect(std::abs(u_other - 57.0) <= 1e-9, fmt("second rider utility %.9g, expected 57", u_other));
    out.expect(std::abs(c.driver_cost - 108.0) <= 1e-9, fmt("driver trip cost %.9g, expected 108", c.driver_cost));
  }
  out.expect(shared > 0, "no shared trip (d_i, {r_i, r_j}) in the table");

  // The one-shared-trip matching (d1, {r1, r2}), d2 and d3 alone, r3 unmatched is
  // blocked by (d2, {r2, r3}).
  const int shared12 = p.find(0, {0, 1}), block23 = p.find(1, {1, 2});
  out.expect(shared12 >= 0 && block23 >= 0, "shared pairs missing from the table");
  if (shared12 >= 0 && block23 >= 0) {
    const auto m = make_matching(p, {shared12, p.find(1, {}), p.find(2, {})});
    const auto blocks = blocking_pairs(p, m);
    out.expect(std::count(blocks.begin(), blocks.end(), block23) == 1,
               "(d2, {r2, r3}) does not block (d1, {r1, r2})");
  }

  MatchOptions stable;
  stable.require_stability = true;
  const auto st = solve_matching(p, stable);
  out.expect(!st.optimal(), fmt("a stable matching exists (cost %.9g)", st.matching.cost));

  // Unconstrained optimum: expected to be one shared trip with a blocking pair
  // (d_j, {r_j, r_k}).
  const auto free = solve_matching(p);
  int sharing_drivers = 0, alone = 0;
  for (int ci : free.matching.assignment) {
    const auto n = p.candidates[ci].riders.size();
    sharing_drivers += n == 2;
    alone += n == 0;
  }
  const bool one_shared_trip = sharing_drivers == 1 && alone == 2;
  out.expect(one_shared_trip, fmt("unconstrained optimum (cost %.9g) is not of the form (d_i, {r_i, r_j}) + two "
                                "drivers alone; %.0f blocking pairs",
                                free.matching.cost, static_cast<double>(blocking_pairs(p, free.matching).size())));
  if (one_shared_trip) {
    bool found = false;
    for (int ci : blocking_pairs(p, free.matching)) {
      const auto& c = p.candidates[ci];
      found |= c.riders.size() == 2 && std::count(c.riders.begin(), c.riders.end(), c.driver) == 1;
    }
    out.expect(found, "no (d_j, {r_j, r_k}) blocking pair on the unconstrained optimum");
  }
  if (out.pass) out.detail = "no stable matching; 63/57/108 on " + std::to_string(shared) + " shared trips";
  return out;
}

Outcome pof_fixture() {
  Outcome out;
  const auto p = fixtures::pof_worst_case(10.0, 1e-3);
  const double base = min_cost(p);
  out.expect(std::abs(base - 1.0) <= 1e-6, fmt("min cost %.9g, expected 1", base));
  const auto half = min_cost_fair(p, 0.5);
  out.expect(half.optimal() && std::abs(half.cost - 5.5) <= 1e-6, fmt("F(0.5) = %.9g, expected 5.5", half.cost));
  const auto ratio = pof(p, 0.5);
  out.expect(ratio.defined() && std::abs(ratio.value - 5.5) <= 1e-6, "PoF(0.5) = " + to_string(ratio));
  const auto f = pareto_frontier(p);
  std::string slopes;
  for (double s : f.slopes) slopes += (slopes.empty() ? "" : ", ") + fmt("%.9g", s);
  out.expect(f.slopes.size() == 1, "frontier has " + std::to_string(f.slopes.size()) + " segments (slopes " +
                                       slopes + "), expected one");
  if (!f.slopes.empty()) {
    out.expect(std::abs(f.slopes.front() - 9.0) <= 1e-6, fmt("first slope %.9g, expected 9", f.slopes.front()));
  }
  if (out.pass) out.detail = "min cost 1, F(0.5) = 5.5, slope 9";
  return out;
}

Outcome pos_fixture() {
  Outcome out;
  const auto r = pos(fixtures::pos_worst_case(100.0, 1e-3));
  out.expect(r.defined() && std::abs(r.value - 1e5) <= 1.0, "PoS = " + to_string(r));
  if (out.pass) out.detail = "PoS = " + to_string(r);
  return out;
}

Outcome fairness_stability_fixture() {
  Outcome out;
  const auto p = fixtures::fairness_vs_stability(5, 100.0, 1e-3);
  const auto fairest = max_fairness(p);
  const auto fair = min_cost_fair(p, 0.2, {}, &fairest);
  out.expect(fair.optimal(), "0.2-fair lottery infeasible");
  if (fair.optimal()) {
    const auto rep = check_ex_post_stability(p, fair.matching);
    out.expect(!rep.stable(), "0.2-fair lottery reported ex-post stable");
    bool r1 = false;
    for (const auto& blocks : rep.blocking) {
      for (int ci : blocks) {
        const auto& rs = p.candidates[ci].riders;
        r1 |= std::count(rs.begin(), rs.end(), 0) == 1;
      }
    }
    out.expect(r1, "no blocking pair contains r1");
  }
  const auto zero = min_cost_fair(p, 0.0, {}, &fairest);
  out.expect(zero.optimal() && check_ex_post_stability(p, zero.matching).stable(), "0-fair lottery not clean");
  if (out.pass) out.detail = fmt("theta0 = %.9g; 0.2 flagged, 0 clean", fairest.theta0);
  return out;
}

Outcome bounds_dominance() {
  Outcome out;
  int instances = 0, spof_checked = 0, pof_checked = 0;
  for (std::uint64_t seed = 1; instances < 100; ++seed) {
    const auto inst = gen_rush_hour(testing::small_rush(3000 + seed, 8, {1, 2}));
    const auto p = build_rtv(inst, build_rv(inst));
    ++instances;
    const std::string tag = "seed " + std::to_string(3000 + seed);
    const auto at0 = pof(p, 0.0);
    out.expect(at0.defined() && at0.value == 1.0, tag + ": PoF(0) = " + to_string(at0));
    const auto stats = driver_stats(p, min_cost_sets(p));
    std::size_t widest = 1;
    for (const auto& s : stats.reachable) widest = std::max(widest, s.size());
    for (double frac : {0.5, 1.0}) {
      const double theta = frac / static_cast<double>(widest);
      const auto pb = pof_bound(stats, theta);
      const auto sb = spof_bound(stats, theta);
      const auto measured = pof(p, theta);
      if (pb && measured.defined()) {
        ++pof_checked;
        out.expect(measured.value <= *pb + 1e-9, tag + fmt(": PoF %.9g above bound %.9g", measured.value, *pb));
      }
      const auto worst = spof(p, theta);
      if (sb && worst.defined()) {
        ++spof_checked;
        out.expect(worst.value <= *sb + 1e-9, tag + fmt(": SPoF %.9g above bound %.9g", worst.value, *sb));
      }
    }
  }
  if (out.pass) {
    out.detail = std::to_string(instances) + " instances, " + std::to_string(pof_checked) + " PoF and " +
                 std::to_string(spof_checked) + " SPoF comparisons";
  }
  return out;
}

void check_lottery(Outcome& out, const MatchingProblem& p, const ProbabilisticMatching& pm, double theta,
                   const std::string& tag) {
  double total = 0.0;
  for (double x : pm.probability) total += x;
  out.expect(std::abs(total - 1.0) <= 1e-9, tag + fmt(": probabilities sum to %.12g", total));
  for (int r : p.feasible_riders()) {
    out.expect(pm.phi[r] >= theta - 1e-9, tag + fmt(": phi %.9g below theta %.9g", pm.phi[r], theta));
  }
}

Outcome fairness_vs_enumeration() {
  Outcome out;
  std::mt19937_64 rng(4004);
  int instances = 0, solves = 0;
  for (int trial = 0; trial < 400 && instances < 100; ++trial) {
    const auto p = testing::random_problem(rng, {testing::pick(rng, 1, 3), testing::pick(rng, 2, 5), 2, 0.5});
    const auto all = enumerate_matchings(p);
    if (all.size() > 20) continue;
    ++instances;
    const std::string tag = "trial " + std::to_string(trial);
    const auto fairest = max_fairness(p);
    const double theta0 = enumerated_theta0(p, all);
    out.expect(fairest.status == SolveStatus::kOptimal && std::abs(fairest.theta0 - theta0) <= 1e-6,
               tag + fmt(": theta0 %.9g vs enumeration %.9g", fairest.theta0, theta0));
    check_lottery(out, p, fairest.matching, fairest.theta0 - 1e-9, tag + " max-fairness");
    for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double theta = frac * theta0;
      const auto res = min_cost_fair(p, theta, {}, &fairest);
      const auto ref = enumerated_fair_cost(p, all, theta);
      ++solves;
      out.expect(res.optimal() == ref.has_value(), tag + fmt(": feasibility differs at theta %.9g", theta));
      if (!res.optimal() || !ref) continue;
      out.expect(close_rel(res.cost, *ref, 1e-6), tag + fmt(": cost %.9g vs enumeration %.9g", res.cost, *ref));
      check_lottery(out, p, res.matching, theta, tag);
    }
  }
  if (out.pass) out.detail = std::to_string(instances) + " instances, " + std::to_string(solves) + " fair solves";
  return out;
}

Outcome frontier_sweep() {
  Outcome out;
  std::mt19937_64 rng(5005);
  int points = 0, segments = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_problem(rng, {testing::pick(rng, 1, 3), testing::pick(rng, 2, 5), 2, 0.6});
    const std::string tag = "trial " + std::to_string(trial);
    const auto f = pareto_frontier(p);
    out.expect(!f.approximate, tag + ": frontier approximate");
    segments += static_cast<int>(f.slopes.size());
    const auto fairest = max_fairness(p);
    for (int k = 0; k * 0.01 <= f.theta0 + 1e-12; ++k) {
      const double theta = std::min(k * 0.01, f.theta0);
      const auto ref = min_cost_fair(p, theta, {}, &fairest);
      const auto got = f.evaluate(theta);
      ++points;
      out.expect(ref.optimal() && got.has_value(), tag + fmt(": no value at theta %.9g", theta));
      if (ref.optimal() && got) {
        out.expect(close_rel(*got, ref.cost, 1e-6), tag + fmt(": frontier %.9g vs sweep %.9g", *got, ref.cost));
      }
    }
    for (std::size_t i = 0; i < f.slopes.size(); ++i) {
      out.expect(f.slopes[i] >= -1e-9, tag + fmt(": negative slope %.9g", f.slopes[i]));
      if (i > 0) out.expect(f.slopes[i] >= f.slopes[i - 1] - 1e-6, tag + ": slopes decrease");
    }
    for (std::size_t i = 1; i < f.breakpoints.size(); ++i) {
      out.expect(f.breakpoints[i].cost >= f.breakpoints[i - 1].cost - 1e-9, tag + ": cost decreases");
    }
  }
  if (out.pass) out.detail = std::to_string(points) + " grid points, " + std::to_string(segments) + " segments";
  return out;
}

Outcome rider_ir() {
  Outcome out;
  int matched = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = gen_rush_hour(testing::small_rush(6000 + seed, 16, {1, 2}));
    const auto p = build_rtv(inst, build_rv(inst));
    const auto m = solve_matching(p).matching;
    const auto u = utilities(p, m);
    for (int r = 0; r < static_cast<int>(p.riders.size()); ++r) {
      if (!m.matched[r]) continue;
      ++matched;
      out.expect(u.riders[r] >= p.unmatched_utility(r) - 1e-9,
                 "seed " + std::to_string(6000 + seed) + fmt(": rider utility %.9g below %.9g", u.riders[r],
                                                              p.unmatched_utility(r)));
    }
  }
  if (out.pass) out.detail = std::to_string(matched) + " matched riders checked";
  return out;
}

Outcome neutrality() {
  Outcome out;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto inst = gen_rush_hour(testing::small_rush(7000 + seed, 20, {1, 2}));
    const auto rv = build_rv(inst);
    RtvOptions plain;
    plain.decompose = false;
    plain.warm_start = false;
    MatchOptions whole;
    whole.decompose = false;
    const double a = solve_matching(build_rtv(inst, rv)).matching.cost;
    const double b = solve_matching(build_rtv(inst, rv, plain), whole).matching.cost;
    out.expect(std::abs(a - b) <= 1e-9, "seed " + std::to_string(7000 + seed) + fmt(": %.12g vs %.12g", a, b));
  }
  const auto inst = testing::two_clusters();
  const auto groups = decompose(build_rv(inst), static_cast<int>(inst.riders.size())).groups.size();
  out.expect(groups >= 2, "two-cluster instance gives " + std::to_string(groups) + " group(s)");
  if (out.pass) out.detail = "50 instances agree; two-cluster instance gives " + std::to_string(groups) + " groups";
  return out;
}

Outcome cost_ordering() {
  Outcome out;
  int instances = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = gen_rush_hour(testing::small_rush(8000 + seed, 24, {1, 2}));
    const auto rv = build_rv(inst);
    std::vector<double> costs;
    for (const std::optional<int>& cap : {std::optional<int>{}, std::optional<int>{3}, std::optional<int>{2},
                                          std::optional<int>{1}}) {
      RtvOptions ro;
      ro.max_trip_size = cap;
      costs.push_back(solve_matching(build_rtv(inst, rv, ro)).matching.cost);
    }
    costs.push_back(greedy_baseline(build_rtv(inst, rv), seed).best.cost);
    ++instances;
    static const char* names[] = {"full", "cap 3", "cap 2", "cap 1", "greedy"};
    for (std::size_t i = 1; i < costs.size(); ++i) {
      out.expect(costs[i - 1] <= costs[i] + 1e-9, "seed " + std::to_string(8000 + seed) + ": " + names[i - 1] +
                                                      fmt(" %.9g above ", costs[i - 1]) + names[i] +
                                                      fmt(" %.9g", costs[i]));
    }
  }
  if (out.pass) out.detail = std::to_string(instances) + " instances ordered";
  return out;
}

Outcome generator_fidelity() {
  Outcome out;
  RushHourConfig big;
  big.users = 10000;
  big.seed = 13;
  const auto types = rush_hour_types(big);
  std::string shares;
  for (int t = 0; t < kUserTypes; ++t) {
    const double share = static_cast<double>(std::count(types.begin(), types.end(), t)) / types.size();
    shares += (t ? "/" : "") + fmt("%.3f", share);
    out.expect(std::abs(share - big.mix[t]) <= 0.02, fmt("type %.0f share %.4f", t, share));
  }
  int validated = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (const char* ratio : {"1:1", "1:2", "1:4"}) {
      RushHourConfig r;
      r.users = 60;
      r.ratio = parse_ratio(ratio);
      r.seed = seed;
      UniformConfig u;
      u.users = 60;
      u.ratio = r.ratio;
      u.seed = seed;
      for (const auto& inst : {gen_rush_hour(r), gen_uniform(u)}) {
        const auto issues = validate(inst);
        ++validated;
        out.expect(issues.empty(), "seed " + std::to_string(seed) + ": " + (issues.empty() ? "" : issues.front()));
      }
    }
  }
  auto full = big;
  full.users = 10000;
  out.expect(validate(gen_rush_hour(full)).empty(), "10000-user instance fails validation");
  if (out.pass) out.detail = "shares " + shares + "; " + std::to_string(validated + 1) + " instances validate";
  return out;
}

Outcome smoke() {
  Outcome out;
  RushHourConfig c;
  c.users = 50;
  c.ratio = {1, 1};
  c.seed = 1;
  const auto inst = gen_rush_hour(c);
  const auto p = build_rtv(inst, build_rv(inst));
  const auto m = solve_matching(p);
  out.expect(m.optimal(), "matching not optimal");
  const auto fairest = max_fairness(p);
  out.expect(fairest.status == SolveStatus::kOptimal, "max fairness not optimal");
  const auto fair = min_cost_fair(p, 0.5 * fairest.theta0, {}, &fairest);
  out.expect(fair.optimal(), "half-fair lottery infeasible");
  if (out.pass) {
    out.detail = std::to_string(p.candidates.size()) + " candidates, cost " + fmt("%.6g", m.matching.cost) +
                 fmt(", theta0 %.6g, fair cost %.6g", fairest.theta0, fair.cost);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "trip oracle equivalence", 300, trip_oracle},
      {2, "matching oracle equivalence", 300, matching_oracle},
      {3, "non-stable fixture", 60, nonstable_fixture},
      {4, "fairness cost fixture", 60, pof_fixture},
      {5, "stability cost fixture", 60, pos_fixture},
      {6, "fairness breaks ex-post stability", 60, fairness_stability_fixture},
      {7, "fairness cost bounds dominate", 600, bounds_dominance},
      {8, "fairness vs enumeration", 600, fairness_vs_enumeration},
      {9, "frontier vs dense sweep", 600, frontier_sweep},
      {10, "matched riders are individually rational", 600, rider_ir},
      {11, "decomposition and warm-start neutrality", 600, neutrality},
      {12, "cost ordering full <= caps <= greedy", 600, cost_ordering},
      {13, "generator fidelity", 600, generator_fidelity},
      {14, "50-user smoke pipeline", 600, smoke},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_seconds) {
      o.pass = false;
      o.detail += fmt("; %.1f s over the %.0f s budget", secs, c.budget_seconds);
    }
    if (o.failures > 1) o.detail = std::to_string(o.failures) + " failed checks: " + o.detail;
    failed += !o.pass;
    std::printf("%s %2d %-42s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
