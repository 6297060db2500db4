#include "rideshare/rtv.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace rideshare {

namespace {

bool individually_rational(const Instance& inst, int d, int r, const TripResult& res) {
  const Driver& drv = inst.drivers[d];
  const Rider& rider = inst.riders[r];
  const double u_r = rider.value - res.rider_costs.at(0);
  const double u_d = drv.value - res.driver_cost + drv.rho * u_r;
  const double tol = 1e-9;
  return u_r >= rider.value - rider.lambda - tol && u_d >= drv.value - solo_cost(inst, drv) - tol;
}

}  // namespace

bool riders_compatible(const Instance& inst, int a, int b) {
  // Stop order over {pickup a, dropoff a, pickup b, dropoff b}; 0/1 = a, 2/3 = b.
  static constexpr std::array<std::array<int, 4>, 6> kOrders{{
      {0, 1, 2, 3}, {0, 2, 1, 3}, {0, 2, 3, 1}, {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 3, 0, 1},
  }};
  const Rider* users[2] = {&inst.riders[a], &inst.riders[b]};
  const auto loc = [&](int stop) { return stop % 2 == 0 ? users[stop / 2]->origin : users[stop / 2]->destination; };
  for (const auto& order : kOrders) {
    LinearProgram lp;
    for (int s = 0; s < 4; ++s) lp.add_variable(0.0, 0.0);
    for (int p = 0; p + 1 < 4; ++p) {
      lp.add_constraint({{order[p + 1], 1.0}, {order[p], -1.0}}, Comparator::kGreaterEqual,
                        inst.time(loc(order[p]), loc(order[p + 1])));
    }
    for (int u = 0; u < 2; ++u) {
      const int o = 2 * u;
      const int q = 2 * u + 1;
      lp.add_constraint({{o, 1.0}}, Comparator::kGreaterEqual, users[u]->window.earliest);
      lp.add_constraint({{q, 1.0}}, Comparator::kLessEqual, users[u]->window.latest);
      lp.add_constraint({{q, 1.0}, {o, -1.0}}, Comparator::kLessEqual, users[u]->max_detour);
    }
    if (solve_lp(lp).optimal()) return true;
  }
  return false;
}

RvGraph build_rv(const Instance& inst, bool ir_screen, const TripOptions& trip) {
  RvGraph rv;
  const int nd = static_cast<int>(inst.drivers.size());
  const int nr = static_cast<int>(inst.riders.size());
  rv.driver_riders.resize(nd);
  rv.singleton.resize(nd);
  for (int d = 0; d < nd; ++d) {
    for (int r = 0; r < nr; ++r) {
      auto res = trip_cost(inst, d, {r}, std::nullopt, trip);
      if (!res.feasible()) continue;
      if (ir_screen && !individually_rational(inst, d, r, res)) continue;
      rv.driver_riders[d].push_back(r);
      rv.singleton[d].push_back(std::move(res));
    }
  }
  for (int a = 0; a < nr; ++a) {
    for (int b = a + 1; b < nr; ++b) {
      if (riders_compatible(inst, a, b)) rv.rider_pairs.emplace_back(a, b);
    }
  }
  return rv;
}

Decomposition decompose(const RvGraph& rv, int n_riders) {
  const int nd = static_cast<int>(rv.driver_riders.size());
  std::vector<int> parent(nd);
  std::iota(parent.begin(), parent.end(), 0);
  const auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> owner(n_riders, -1);
  for (int d = 0; d < nd; ++d) {
    for (int r : rv.driver_riders[d]) {
      if (owner[r] < 0) {
        owner[r] = d;
      } else {
        const int a = root(owner[r]);
        const int b = root(d);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  Decomposition out;
  std::map<int, int> group_of_root;
  for (int d = 0; d < nd; ++d) {
    const int g = root(d);
    auto [it, inserted] = group_of_root.emplace(g, static_cast<int>(out.groups.size()));
    if (inserted) out.groups.emplace_back();
    out.groups[it->second].drivers.push_back(d);
  }
  for (int r = 0; r < n_riders; ++r) {
    if (owner[r] < 0) {
      out.isolated_riders.push_back(r);
    } else {
      out.groups[group_of_root.at(root(owner[r]))].riders.push_back(r);
    }
  }
  return out;
}

MatchingProblem problem_header(const Instance& inst) {
  MatchingProblem p;
  for (const auto& d : inst.drivers) {
    p.drivers.push_back({d.id, d.value, d.rho, d.value - solo_cost(inst, d), inst.direct_time(d)});
  }
  for (const auto& r : inst.riders) p.riders.push_back({r.id, r.value, r.lambda, inst.direct_time(r)});
  return p;
}

namespace {

Candidate make_candidate(int d, const std::vector<int>& riders, TripResult&& res) {
  Candidate c;
  c.driver = d;
  c.riders = riders;
  c.cost = res.cost;
  c.driver_cost = res.driver_cost;
  c.rider_costs = std::move(res.rider_costs);
  c.schedule = std::move(res.schedule);
  return c;
}

// Optimal routes found so far keyed by rider set, for cross-driver reuse.
class RouteMemo {
 public:
  void put(const std::vector<int>& riders, const Route& route) {
    std::lock_guard<std::mutex> lock(mu_);
    table_[riders].push_back(route);
  }
  std::optional<Route> near(const Instance& inst, int driver, const std::vector<int>& riders) const {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = table_.find(riders);
    if (it == table_.end()) return std::nullopt;
    for (const auto& r : it->second) {
      if (r.driver != driver && drivers_close(inst, driver, r.driver)) return r;
    }
    return std::nullopt;
  }

 private:
  mutable std::mutex mu_;
  std::map<std::vector<int>, std::vector<Route>> table_;
};

std::vector<Candidate> enumerate_driver(const Instance& inst, const RvGraph& rv, int d, const RtvOptions& opt,
                                        RouteMemo& memo, RtvStats& stats) {
  std::vector<Candidate> out;
  const int cap = std::min(inst.drivers[d].capacity, opt.max_trip_size.value_or(inst.drivers[d].capacity));
  {
    auto alone = trip_cost(inst, d, {}, std::nullopt, opt.trip, &stats.trip);
    ++stats.trip_calls;
    if (!alone.feasible()) return out;  // the direct trip itself breaks the driver's limits
    out.push_back(make_candidate(d, {}, std::move(alone)));
  }
  const auto& compatible = rv.driver_riders[d];
  std::map<std::vector<int>, int> index;  // rider set -> candidate position
  std::vector<int> level;
  for (std::size_t k = 0; k < compatible.size() && cap >= 1; ++k) {
    TripResult res = rv.singleton[d][k];
    if (opt.warm_start && res.schedule) memo.put({compatible[k]}, res.schedule->route);
    index[{compatible[k]}] = static_cast<int>(out.size());
    level.push_back(static_cast<int>(out.size()));
    out.push_back(make_candidate(d, {compatible[k]}, std::move(res)));
  }
  for (int h = 2; h <= cap; ++h) {
    std::vector<int> next;
    for (int base : level) {
      const std::vector<int> prev = out[base].riders;
      for (int r : compatible) {
        if (r <= prev.back()) continue;
        std::vector<int> set = prev;
        set.push_back(r);
        std::vector<Route> parents;
        bool closed = true;
        for (std::size_t drop = 0; drop < set.size() && closed; ++drop) {
          std::vector<int> sub = set;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          const auto it = index.find(sub);
          if (it == index.end()) {
            closed = false;
          } else if (out[it->second].schedule) {
            parents.push_back(out[it->second].schedule->route);
          }
        }
        if (!closed) continue;
        std::optional<Route> warm;
        if (opt.warm_start) {
          WarmStartSources src;
          src.subsets = std::move(parents);
          src.other_driver = memo.near(inst, d, set);
          warm = warm_start_from(inst, d, set, src, kReuseRadius, &stats.trip);
          if (warm) ++stats.warm_starts_used;
        }
        auto res = trip_cost(inst, d, set, warm, opt.trip, &stats.trip);
        ++stats.trip_calls;
        if (!res.feasible()) continue;
        if (opt.warm_start) memo.put(set, res.schedule->route);
        index[set] = static_cast<int>(out.size());
        next.push_back(static_cast<int>(out.size()));
        out.push_back(make_candidate(d, set, std::move(res)));
      }
    }
    level = std::move(next);
    if (level.empty()) break;
  }
  return out;
}

}  // namespace

MatchingProblem build_rtv(const Instance& inst, const RvGraph& rv, const RtvOptions& opt, RtvStats* stats) {
  MatchingProblem p = problem_header(inst);
  const int nd = static_cast<int>(inst.drivers.size());
  std::vector<int> order;
  if (opt.decompose) {
    for (const auto& g : decompose(rv, static_cast<int>(inst.riders.size())).groups) {
      order.insert(order.end(), g.drivers.begin(), g.drivers.end());
    }
  } else {
    order.resize(nd);
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<std::vector<Candidate>> per_driver(nd);
  std::vector<RtvStats> per_stats(nd);
  RouteMemo memo;
  const int jobs = std::max(1, std::min(opt.jobs, nd));
  if (jobs == 1) {
    for (int d : order) per_driver[d] = enumerate_driver(inst, rv, d, opt, memo, per_stats[d]);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::mutex err_mu;
    std::exception_ptr err;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < nd; i = next++) {
          try {
            per_driver[order[i]] = enumerate_driver(inst, rv, order[i], opt, memo, per_stats[order[i]]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!err) err = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  for (int d = 0; d < nd; ++d) {
    for (auto& c : per_driver[d]) p.candidates.push_back(std::move(c));
    if (stats != nullptr) {
      stats->trip.nodes += per_stats[d].trip.nodes;
      stats->trip.timing_lps += per_stats[d].trip.timing_lps;
      stats->trip_calls += per_stats[d].trip_calls;
      stats->warm_starts_used += per_stats[d].warm_starts_used;
    }
  }
  return p;
}

DriverStats driver_stats(const MatchingProblem& p, const std::vector<std::vector<int>>& min_cost_sets) {
  const int nd = static_cast<int>(p.drivers.size());
  DriverStats s;
  s.reachable.resize(nd);
  s.assigned = min_cost_sets;
  s.assigned.resize(nd);
  s.cost_ratio.assign(nd, 1.0);
  std::vector<double> worst(nd, 0.0);
  std::vector<std::set<int>> reach(nd);
  for (const auto& c : p.candidates) {
    worst[c.driver] = std::max(worst[c.driver], c.cost);
    reach[c.driver].insert(c.riders.begin(), c.riders.end());
  }
  for (int d = 0; d < nd; ++d) {
    s.reachable[d].assign(reach[d].begin(), reach[d].end());
    const int at = p.find(d, s.assigned[d]);
    const double base = at >= 0 ? p.candidates[at].cost : 0.0;
    if (base > 0.0) {
      s.cost_ratio[d] = std::max(1.0, worst[d] / base);
    } else {
      s.cost_ratio[d] = worst[d] > 0.0 ? kInfinity : 1.0;
    }
  }
  return s;
}

namespace {

bool bound_applicable(const DriverStats& s, double theta) {
  if (theta < 0.0) return false;
  for (std::size_t d = 0; d < s.reachable.size(); ++d) {
    const auto n = s.reachable[d].size();
    if (n > 0 && theta > 1.0 / static_cast<double>(n) + 1e-12) return false;
  }
  return true;
}

}  // namespace

std::optional<double> pof_bound(const DriverStats& s, double theta) {
  if (!bound_applicable(s, theta)) return std::nullopt;
  double bound = 1.0;
  for (std::size_t d = 0; d < s.reachable.size(); ++d) {
    const double n = static_cast<double>(s.reachable[d].size());
    const double excess = s.cost_ratio[d] - 1.0;
    if (n == 0.0 || excess == 0.0 || theta == 0.0) continue;
    if (excess == kInfinity) return std::nullopt;
    const double span = s.assigned[d].empty() ? n : n - 1.0;
    bound = std::max(bound, theta * span * excess + 1.0);
  }
  return bound;
}

std::optional<double> spof_bound(const DriverStats& s, double theta) {
  if (!bound_applicable(s, theta)) return std::nullopt;
  double bound = 1.0;
  for (std::size_t d = 0; d < s.reachable.size(); ++d) {
    const double n = static_cast<double>(s.reachable[d].size());
    const double excess = s.cost_ratio[d] - 1.0;
    if (n == 0.0 || excess == 0.0) continue;
    if (excess == kInfinity) return std::nullopt;
    bound = std::max(bound, s.assigned[d].empty() ? s.cost_ratio[d] : (n - 1.0) * excess / n + 1.0);
  }
  return bound;
}

}  // namespace rideshare
