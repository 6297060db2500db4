#include "rideshare/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "rideshare/rtv.hpp"

namespace rideshare {

namespace {

struct OracleStop {
  int loc;
  int user;  // -1 for the driver
  bool pickup;
};

// Pickup/dropoff interleavings built without the trip module's helpers.
void interleave(const Instance& inst, const std::vector<int>& riders, int capacity, std::vector<int>& state,
                std::vector<OracleStop>& prefix, int onboard, std::vector<std::vector<OracleStop>>& out) {
  bool done = true;
  for (std::size_t i = 0; i < riders.size(); ++i) {
    const Rider& r = inst.riders[riders[i]];
    if (state[i] == 0) {
      done = false;
      if (onboard >= capacity) continue;
      state[i] = 1;
      prefix.push_back({r.origin, static_cast<int>(i), true});
      interleave(inst, riders, capacity, state, prefix, onboard + 1, out);
      prefix.pop_back();
      state[i] = 0;
    } else if (state[i] == 1) {
      done = false;
      state[i] = 2;
      prefix.push_back({r.destination, static_cast<int>(i), false});
      interleave(inst, riders, capacity, state, prefix, onboard - 1, out);
      prefix.pop_back();
      state[i] = 1;
    }
  }
  if (done) out.push_back(prefix);
}

Route to_route(int driver, const std::vector<int>& riders, const std::vector<OracleStop>& middle) {
  Route route{driver, {{StopKind::kStart, -1}}};
  for (const auto& s : middle) {
    route.stops.push_back({s.pickup ? StopKind::kPickup : StopKind::kDropoff, riders[s.user]});
  }
  route.stops.push_back({StopKind::kEnd, -1});
  return route;
}

struct GridBest {
  double cost = kInfinity;
  std::vector<double> times;
};

// Times are t0 + offset once the waits are fixed, so the start time is a
// one-dimensional weighted-|.| minimisation over an interval.
void grid_time(const Instance& inst, int driver, const std::vector<int>& riders, const std::vector<OracleStop>& middle,
               double step, GridBest& best) {
  const Driver& d = inst.drivers[driver];
  std::vector<int> locs{d.origin};
  for (const auto& s : middle) locs.push_back(s.loc);
  locs.push_back(d.destination);
  const int k = static_cast<int>(locs.size());
  std::vector<double> leg(k, 0.0);
  double length = 0.0;
  for (int p = 1; p < k; ++p) {
    leg[p] = inst.time(locs[p - 1], locs[p]);
    length += leg[p];
  }
  int prefix = 1;
  while (prefix < k - 1 && inst.time(locs[0], locs[prefix]) == 0.0) {
    if (leg[prefix] > 0.0) return;
    ++prefix;
  }
  const double slack = d.max_detour - length;
  if (slack < -1e-9) return;

  const int n = static_cast<int>(riders.size());
  std::vector<int> pick(n), drop(n);
  std::vector<int> free_pickups;
  for (int p = 1; p + 1 < k; ++p) {
    const auto& s = middle[p - 1];
    (s.pickup ? pick : drop)[s.user] = p;
    if (s.pickup && p >= prefix) free_pickups.push_back(p);
  }
  std::vector<double> wait(k, 0.0);
  std::vector<double> off(k, 0.0);

  const auto evaluate = [&] {
    for (int p = 1; p < k; ++p) off[p] = off[p - 1] + leg[p] + wait[p];
    if (off[k - 1] > d.max_detour + 1e-9) return;
    double lo = d.window.earliest;
    double hi = d.window.latest - off[k - 1];
    for (int i = 0; i < n; ++i) {
      const Rider& r = inst.riders[riders[i]];
      if (off[drop[i]] - off[pick[i]] > r.max_detour + 1e-9) return;
      lo = std::max(lo, r.window.earliest - off[pick[i]]);
      hi = std::min(hi, r.window.latest - off[drop[i]]);
    }
    if (lo > hi + 1e-9) return;
    hi = std::max(lo, hi);
    const auto cost_at = [&](double t0) {
      double c = user_trip_cost(d, t0, t0 + off[k - 1]);
      for (int i = 0; i < n; ++i) c += user_trip_cost(inst.riders[riders[i]], t0 + off[pick[i]], t0 + off[drop[i]]);
      return c;
    };
    std::vector<double> cands{lo, hi, std::clamp(d.preferred, lo, hi)};
    for (int i = 0; i < n; ++i) cands.push_back(std::clamp(inst.riders[riders[i]].preferred - off[pick[i]], lo, hi));
    for (double t0 : cands) {
      const double c = cost_at(t0);
      if (c < best.cost - 1e-12) {
        best.cost = c;
        best.times.resize(k);
        for (int p = 0; p < k; ++p) best.times[p] = t0 + off[p];
      }
    }
  };

  const auto recurse = [&](const auto& self, std::size_t idx, double left) -> void {
    if (idx == free_pickups.size()) {
      evaluate();
      return;
    }
    const int steps = static_cast<int>(std::floor((left + 1e-9) / step));
    for (int j = 0; j <= steps; ++j) {
      wait[free_pickups[idx]] = j * step;
      self(self, idx + 1, left - j * step);
    }
    wait[free_pickups[idx]] = 0.0;
  };
  recurse(recurse, 0, std::max(slack, 0.0));
}

TripResult costs_from(const Instance& inst, const Route& route, const std::vector<double>& times) {
  TripResult res;
  const auto riders = riders_of(route);
  const int k = static_cast<int>(route.stops.size());
  res.driver_cost = user_trip_cost(inst.drivers[route.driver], times[0], times[k - 1]);
  res.cost = res.driver_cost;
  for (int r : riders) {
    double t_pick = 0.0, t_drop = 0.0;
    for (int p = 1; p + 1 < k; ++p) {
      if (route.stops[p].rider != r) continue;
      (route.stops[p].kind == StopKind::kPickup ? t_pick : t_drop) = times[p];
    }
    const double c = user_trip_cost(inst.riders[r], t_pick, t_drop);
    res.rider_costs.push_back(c);
    res.cost += c;
  }
  res.schedule = DriverSchedule{route, times};
  return res;
}

}  // namespace

TripResult oracle_trip_cost(const Instance& inst, int driver, const std::vector<int>& riders_in, OracleTiming timing,
                            double grid_step) {
  if (riders_in.size() > 3) throw ValidationError("trip oracle handles at most three riders");
  if (!(grid_step > 0.0)) throw ValidationError("grid step must be positive");
  auto riders = riders_in;
  std::sort(riders.begin(), riders.end());
  std::vector<std::vector<OracleStop>> orders;
  std::vector<int> state(riders.size(), 0);
  std::vector<OracleStop> prefix;
  interleave(inst, riders, inst.drivers[driver].capacity, state, prefix, 0, orders);

  TripResult best;
  for (const auto& middle : orders) {
    const Route route = to_route(driver, riders, middle);
    TripResult res;
    if (timing == OracleTiming::kGrid && riders.size() <= 2) {
      GridBest g;
      grid_time(inst, driver, riders, middle, grid_step, g);
      if (g.cost == kInfinity) continue;
      res = costs_from(inst, route, g.times);
    } else {
      res = solve_timing(inst, route);
      if (!res.feasible()) continue;
    }
    if (res.cost < best.cost - 1e-12) best = std::move(res);
  }
  return best;
}

std::vector<DeterministicMatching> enumerate_matchings(const MatchingProblem& p,
                                                       const std::vector<std::pair<int, int>>& role_flex,
                                                       std::int64_t limit) {
  p.validate();
  MatchOptions o;
  o.role_flex = role_flex;
  check_options(p, o);
  const int nd = static_cast<int>(p.drivers.size());
  const auto by_driver = p.by_driver();
  std::vector<int> flex_mirror(nd, -1);
  for (const auto& [d, r] : role_flex) flex_mirror[d] = r;

  std::vector<DeterministicMatching> out;
  std::vector<int> assignment(nd, -1);
  std::vector<char> used(p.riders.size(), 0);
  const auto recurse = [&](const auto& self, int d) -> void {
    if (d == nd) {
      for (const auto& [fd, fr] : role_flex) {
        if ((assignment[fd] < 0) != static_cast<bool>(used[fr])) return;
      }
      if (static_cast<std::int64_t>(out.size()) >= limit) {
        throw LimitError("more than " + std::to_string(limit) + " matchings");
      }
      out.push_back(make_matching(p, assignment, role_flex));
      return;
    }
    for (int ci : by_driver[d]) {
      const auto& c = p.candidates[ci];
      if (!candidate_allowed(p, c, o)) continue;
      if (std::any_of(c.riders.begin(), c.riders.end(), [&](int r) { return used[r]; })) continue;
      for (int r : c.riders) used[r] = 1;
      assignment[d] = ci;
      self(self, d + 1);
      assignment[d] = -1;
      for (int r : c.riders) used[r] = 0;
    }
    if (flex_mirror[d] >= 0) self(self, d + 1);
  };
  recurse(recurse, 0);
  return out;
}

double matching_objective(const MatchingProblem& p, const DeterministicMatching& m, const MatchOptions& o) {
  double total = 0.0;
  for (int ci : m.assignment) {
    if (ci >= 0) total += candidate_coefficient(p, p.candidates[ci], o);
  }
  for (int r = 0; r < static_cast<int>(p.riders.size()); ++r) {
    if (!m.matched[r]) total += unmatched_coefficient(p, r, o);
  }
  return total;
}

std::optional<DeterministicMatching> oracle_matching(const MatchingProblem& p, const MatchOptions& o,
                                                     std::int64_t limit) {
  check_options(p, o);
  std::optional<DeterministicMatching> best;
  double best_obj = kInfinity;
  for (auto& m : enumerate_matchings(p, o.role_flex, limit)) {
    if (o.require_ir) {
      const bool ok = std::all_of(m.assignment.begin(), m.assignment.end(),
                                  [&](int ci) { return ci < 0 || candidate_ir(p, p.candidates[ci]); });
      if (!ok) continue;
    }
    if (o.require_stability) {
      const auto blocks = blocking_pairs(p, m);
      if (std::any_of(blocks.begin(), blocks.end(),
                      [&](int ci) { return candidate_allowed(p, p.candidates[ci], o); })) {
        continue;
      }
    }
    const double obj = matching_objective(p, m, o);
    if (obj < best_obj - 1e-9) {
      best_obj = obj;
      best = std::move(m);
    }
  }
  return best;
}

namespace {

LinearProgram lottery_lp(const MatchingProblem& p, const std::vector<DeterministicMatching>& all, double theta,
                         bool slack) {
  LinearProgram lp;
  for (const auto& m : all) lp.add_variable(slack ? 0.0 : m.cost);
  const int z = slack ? lp.add_variable(-1.0, -kInfinity, 1.0) : -1;
  for (int r : p.feasible_riders()) {
    std::vector<Term> row;
    for (int j = 0; j < static_cast<int>(all.size()); ++j) {
      if (all[j].matched[r]) row.push_back({j, 1.0});
    }
    if (z >= 0) row.push_back({z, -1.0});
    lp.add_constraint(std::move(row), Comparator::kGreaterEqual, slack ? 0.0 : theta);
  }
  std::vector<Term> sum;
  for (int j = 0; j < static_cast<int>(all.size()); ++j) sum.push_back({j, 1.0});
  lp.add_constraint(std::move(sum), Comparator::kEqual, 1.0);
  return lp;
}

}  // namespace

double enumerated_theta0(const MatchingProblem& p, const std::vector<DeterministicMatching>& all) {
  if (all.empty()) throw ValidationError("no matchings to choose from");
  if (p.feasible_riders().empty()) return 0.0;
  const auto sol = solve_lp(lottery_lp(p, all, 0.0, true));
  if (!sol.optimal()) throw ValidationError("fairness LP over enumerated matchings failed");
  return std::min(1.0, -sol.objective);
}

std::optional<double> enumerated_fair_cost(const MatchingProblem& p, const std::vector<DeterministicMatching>& all,
                                           double theta, Sense sense) {
  if (all.empty()) return std::nullopt;
  auto lp = lottery_lp(p, all, theta, false);
  lp.sense = sense;
  const auto sol = solve_lp(lp);
  if (!sol.optimal()) return std::nullopt;
  return sol.objective;
}

std::string to_string(const CostRatio& r) {
  switch (r.status) {
    case RatioStatus::kDefined: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.9g", r.value);
      return buf;
    }
    case RatioStatus::kUndefined:
      return "undefined";
    case RatioStatus::kNotComputed:
      return "not computed";
    case RatioStatus::kNoStableMatching:
      return "no stable matching";
  }
  return "undefined";
}

namespace {

MatchOptions plain(MatchOptions o) {
  o.objective = ObjectiveMode::kCost;
  o.rider_weights.clear();
  o.driver_weights.clear();
  o.zero_costs = false;
  o.require_stability = false;
  return o;
}

CostRatio ratio_of(double num, double den) {
  if (!(den > 0.0) || !std::isfinite(num)) return {};
  return {RatioStatus::kDefined, num / den};
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

double min_cost(const MatchingProblem& p, const MatchOptions& base) {
  const auto r = solve_matching(p, plain(base));
  return r.optimal() ? r.matching.cost : std::nan("");
}

std::vector<std::vector<int>> min_cost_sets(const MatchingProblem& p) {
  const auto r = solve_matching(p);
  std::vector<std::vector<int>> sets(p.drivers.size());
  if (!r.optimal()) return sets;
  for (std::size_t d = 0; d < p.drivers.size(); ++d) {
    if (r.matching.assignment[d] >= 0) sets[d] = p.candidates[r.matching.assignment[d]].riders;
  }
  return sets;
}

CostRatio pof(const MatchingProblem& p, double theta, const FairnessOptions& options) {
  const double mc = min_cost(p, options.match);
  const auto fair = min_cost_fair(p, theta, options);
  if (!fair.optimal()) return {};
  return ratio_of(fair.cost, mc);
}

CostRatio spof(const MatchingProblem& p, double theta, const SpofLimits& limits) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > 1.0) throw ValidationError("fairness level must lie in [0, 1]");
  if (static_cast<int>(p.drivers.size() + p.riders.size()) > limits.max_users) {
    return {RatioStatus::kNotComputed, std::nan("")};
  }
  std::vector<DeterministicMatching> all;
  try {
    all = enumerate_matchings(p, {}, limits.max_matchings);
  } catch (const LimitError&) {
    return {RatioStatus::kNotComputed, std::nan("")};
  }
  const auto worst = enumerated_fair_cost(p, all, theta, Sense::kMaximize);
  if (!worst) return {};
  return ratio_of(*worst, min_cost(p));
}

CostRatio pos(const MatchingProblem& p, const MatchOptions& base) {
  MatchOptions o = plain(base);
  const double mc = min_cost(p, o);
  o.require_stability = true;
  const auto stable = solve_matching(p, o);
  if (!stable.optimal()) return {RatioStatus::kNoStableMatching, std::nan("")};
  return ratio_of(stable.matching.cost, mc);
}

TradeoffReport tradeoff_report(const MatchingProblem& p, const std::vector<double>& thetas,
                               const FairnessOptions& options, const SpofLimits& limits) {
  TradeoffReport rep;
  auto t = std::chrono::steady_clock::now();
  const auto base = solve_matching(p, plain(options.match));
  rep.min_cost = base.optimal() ? base.matching.cost : std::nan("");
  rep.seconds_matching = seconds_since(t);

  t = std::chrono::steady_clock::now();
  MatchOptions so = plain(options.match);
  so.require_stability = true;
  const auto stable = solve_matching(p, so);
  if (stable.optimal()) {
    rep.stable_cost = stable.matching.cost;
    rep.pos = ratio_of(stable.matching.cost, rep.min_cost);
  } else {
    rep.pos = {RatioStatus::kNoStableMatching, std::nan("")};
  }
  rep.seconds_stability = seconds_since(t);

  t = std::chrono::steady_clock::now();
  std::vector<std::vector<int>> sets(p.drivers.size());
  if (base.optimal()) {
    for (std::size_t d = 0; d < p.drivers.size(); ++d) {
      if (base.matching.assignment[d] >= 0) sets[d] = p.candidates[base.matching.assignment[d]].riders;
    }
  }
  const DriverStats stats = driver_stats(p, sets);
  const auto fairest = max_fairness(p, options);
  rep.theta0 = fairest.theta0;
  rep.no_feasible_riders = fairest.no_feasible_riders;
  rep.thetas = thetas;
  for (double th : thetas) {
    const auto fair = min_cost_fair(p, th, options, &fairest);
    rep.fair_costs.push_back(fair.optimal() ? std::optional<double>(fair.cost) : std::nullopt);
    rep.pof.push_back(fair.optimal() ? ratio_of(fair.cost, rep.min_cost) : CostRatio{});
    rep.spof.push_back(spof(p, th, limits));
    rep.pof_bound.push_back(pof_bound(stats, th));
    rep.spof_bound.push_back(spof_bound(stats, th));
  }
  rep.seconds_fairness = seconds_since(t);
  return rep;
}

}  // namespace rideshare
