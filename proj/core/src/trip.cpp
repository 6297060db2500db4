#include "rideshare/trip.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <random>

namespace rideshare {

namespace {

int stop_key(const Stop& s) {
  switch (s.kind) {
    case StopKind::kStart:
      return 0;
    case StopKind::kPickup:
      return 1 + 2 * s.rider;
    case StopKind::kDropoff:
      return 2 + 2 * s.rider;
    case StopKind::kEnd:
      return INT_MAX;
  }
  return INT_MAX;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

constexpr double kFeasTol = 1e-7;

}  // namespace

int location_of(const Instance& inst, int driver, const Stop& stop) {
  switch (stop.kind) {
    case StopKind::kStart:
      return inst.drivers[driver].origin;
    case StopKind::kEnd:
      return inst.drivers[driver].destination;
    case StopKind::kPickup:
      return inst.riders[stop.rider].origin;
    case StopKind::kDropoff:
      return inst.riders[stop.rider].destination;
  }
  return -1;
}

std::vector<int> riders_of(const Route& route) {
  std::vector<int> out;
  for (const auto& s : route.stops) {
    if (s.kind == StopKind::kPickup) out.push_back(s.rider);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool route_less(const Route& a, const Route& b) {
  return std::lexicographical_compare(a.stops.begin(), a.stops.end(), b.stops.begin(), b.stops.end(),
                                      [](const Stop& x, const Stop& y) { return stop_key(x) < stop_key(y); });
}

void check_route(const Instance& inst, const Route& route) {
  if (route.driver < 0 || route.driver >= static_cast<int>(inst.drivers.size())) {
    throw ValidationError("route names an unknown driver");
  }
  const auto& st = route.stops;
  if (st.size() < 2 || st.front().kind != StopKind::kStart || st.back().kind != StopKind::kEnd) {
    throw ValidationError("route must start at the driver's origin and end at its destination");
  }
  const int n_riders = static_cast<int>(inst.riders.size());
  std::vector<int> state(n_riders, 0);  // 0 unseen, 1 picked, 2 dropped
  int onboard = 0;
  for (std::size_t i = 1; i + 1 < st.size(); ++i) {
    const auto& s = st[i];
    if (s.rider < 0 || s.rider >= n_riders) throw ValidationError("route names an unknown rider");
    if (s.kind == StopKind::kPickup) {
      if (state[s.rider] != 0) throw ValidationError("rider picked up twice");
      state[s.rider] = 1;
      if (++onboard > inst.drivers[route.driver].capacity) throw ValidationError("route exceeds capacity");
    } else if (s.kind == StopKind::kDropoff) {
      if (state[s.rider] != 1) throw ValidationError("rider dropped off before pickup");
      state[s.rider] = 2;
      --onboard;
    } else {
      throw ValidationError("driver endpoints inside the route");
    }
  }
  if (onboard != 0) throw ValidationError("rider never dropped off");
}

TripResult solve_timing(const Instance& inst, const Route& route, TripStats* stats) {
  check_route(inst, route);
  if (stats != nullptr) ++stats->timing_lps;
  const auto& st = route.stops;
  const int k = static_cast<int>(st.size());
  const Driver& drv = inst.drivers[route.driver];
  const auto riders = riders_of(route);
  const int n = static_cast<int>(riders.size());
  std::vector<int> pick(n), drop(n);
  for (int p = 1; p + 1 < k; ++p) {
    const int slot = static_cast<int>(std::lower_bound(riders.begin(), riders.end(), st[p].rider) - riders.begin());
    (st[p].kind == StopKind::kPickup ? pick : drop)[slot] = p;
  }

  LinearProgram lp;
  for (int p = 0; p < k; ++p) lp.add_variable(0.0, 0.0);
  std::vector<int> locs(k);
  for (int p = 0; p < k; ++p) locs[p] = location_of(inst, route.driver, st[p]);

  // One user: its pickup/dropoff variable positions and the deviation auxiliary.
  const auto add_user = [&](const User& u, int from, int to) {
    lp.objective[from] -= u.c_trl;
    lp.objective[to] += u.c_trl;
    const int aux = lp.add_variable(u.c_dev, 0.0);
    lp.add_constraint({{aux, 1.0}, {from, -1.0}}, Comparator::kGreaterEqual, -u.preferred);
    lp.add_constraint({{aux, 1.0}, {from, 1.0}}, Comparator::kGreaterEqual, u.preferred);
    lp.add_constraint({{from, 1.0}}, Comparator::kGreaterEqual, u.window.earliest);
    lp.add_constraint({{to, 1.0}}, Comparator::kLessEqual, u.window.latest);
    lp.add_constraint({{to, 1.0}, {from, -1.0}}, Comparator::kLessEqual, u.max_detour);
  };
  add_user(drv, 0, k - 1);
  for (int i = 0; i < n; ++i) add_user(inst.riders[riders[i]], pick[i], drop[i]);
  for (int p = 0; p + 1 < k; ++p) {
    lp.add_constraint({{p + 1, 1.0}, {p, -1.0}}, Comparator::kGreaterEqual, inst.time(locs[p], locs[p + 1]));
  }
  for (int p = 1; p + 1 < k && inst.time(locs[0], locs[p]) == 0.0; ++p) {
    lp.add_constraint({{p, 1.0}, {0, -1.0}}, Comparator::kEqual, 0.0);
  }

  const auto sol = solve_lp(lp);
  TripResult res;
  if (!sol.optimal()) return res;
  DriverSchedule sched{route, std::vector<double>(sol.primal.begin(), sol.primal.begin() + k)};
  for (int p = 1; p < k; ++p) sched.times[p] = std::max(sched.times[p], sched.times[p - 1]);
  res.driver_cost = user_trip_cost(drv, sched.times[0], sched.times[k - 1]);
  res.cost = res.driver_cost;
  for (int i = 0; i < n; ++i) {
    const double c = user_trip_cost(inst.riders[riders[i]], sched.times[pick[i]], sched.times[drop[i]]);
    res.rider_costs.push_back(c);
    res.cost += c;
  }
  res.schedule = std::move(sched);
  return res;
}

std::vector<std::string> check_schedule(const Instance& inst, const DriverSchedule& sched, double tol) {
  std::vector<std::string> out;
  try {
    check_route(inst, sched.route);
  } catch (const ValidationError& e) {
    out.emplace_back(e.what());
    return out;
  }
  const auto& st = sched.route.stops;
  const auto& t = sched.times;
  if (t.size() != st.size()) {
    out.emplace_back("schedule has the wrong number of times");
    return out;
  }
  const int d = sched.route.driver;
  for (std::size_t p = 0; p + 1 < st.size(); ++p) {
    const double leg = inst.time(location_of(inst, d, st[p]), location_of(inst, d, st[p + 1]));
    if (t[p] + leg > t[p + 1] + tol) out.push_back("stop " + std::to_string(p + 1) + " reached too early");
  }
  const auto check_user = [&](const User& u, double depart, double arrive) {
    if (depart < u.window.earliest - tol) out.push_back(u.id + " departs before its window");
    if (arrive > u.window.latest + tol) out.push_back(u.id + " arrives after its window");
    if (arrive - depart > u.max_detour + tol) out.push_back(u.id + " exceeds its detour limit");
  };
  check_user(inst.drivers[d], t.front(), t.back());
  for (std::size_t p = 1; p + 1 < st.size(); ++p) {
    if (st[p].kind != StopKind::kPickup) continue;
    for (std::size_t q = p + 1; q + 1 < st.size(); ++q) {
      if (st[q].kind == StopKind::kDropoff && st[q].rider == st[p].rider) {
        check_user(inst.riders[st[p].rider], t[p], t[q]);
        break;
      }
    }
  }
  return out;
}

namespace {

void enumerate_routes(const Instance& inst, int driver, const std::vector<int>& riders, std::vector<Stop>& prefix,
                      std::vector<int>& state, int onboard, std::vector<Route>& out) {
  const int n = static_cast<int>(riders.size());
  bool done = true;
  for (int i = 0; i < n; ++i) {
    if (state[i] == 0 && onboard < inst.drivers[driver].capacity) {
      state[i] = 1;
      prefix.push_back({StopKind::kPickup, riders[i]});
      enumerate_routes(inst, driver, riders, prefix, state, onboard + 1, out);
      prefix.pop_back();
      state[i] = 0;
    } else if (state[i] == 1) {
      state[i] = 2;
      prefix.push_back({StopKind::kDropoff, riders[i]});
      enumerate_routes(inst, driver, riders, prefix, state, onboard - 1, out);
      prefix.pop_back();
      state[i] = 1;
    }
    done = done && state[i] == 2;
  }
  if (done) {
    Route r{driver, prefix};
    r.stops.push_back({StopKind::kEnd, -1});
    out.push_back(std::move(r));
  }
}

// Depth-first search over stop orders with the incumbent, capacity, window
// and detour pruning rules.
class TreeSearch {
 public:
  TreeSearch(const Instance& inst, int driver, const std::vector<int>& riders, const TripOptions& opts,
             TripStats* stats)
      : inst_(inst), d_(driver), riders_(riders), opts_(opts), stats_(stats), n_(static_cast<int>(riders.size())) {}

  void offer(const Route& route) {
    TripResult res = solve_timing(inst_, route, stats_);
    consider(std::move(res));
  }

  void run() {
    Route prefix{d_, {{StopKind::kStart, -1}}};
    std::vector<double> consumed(n_, 0.0);
    std::vector<int> state(n_, 0);
    const Driver& drv = inst_.drivers[d_];
    dfs(prefix, drv.origin, drv.window.earliest, 0.0, 0.0, consumed, state, 0);
  }

  TripResult best;

 private:
  void consider(TripResult res) {
    if (!res.feasible()) return;
    if (!best.feasible() || res.cost < best.cost - opts_.tie_tol ||
        (res.cost <= best.cost + opts_.tie_tol && route_less(res.schedule->route, best.schedule->route))) {
      best = std::move(res);
    }
  }

  [[nodiscard]] double bound() const { return best.feasible() ? best.cost + opts_.tie_tol : kInfinity; }

  void dfs(Route& prefix, int last, double tau, double lb, double driver_used, std::vector<double>& consumed,
           std::vector<int>& state, int onboard) {
    if (stats_ != nullptr) ++stats_->nodes;
    const Driver& drv = inst_.drivers[d_];
    struct Child {
      double leg;
      Stop stop;
      int slot;
    };
    std::vector<Child> children;
    bool all_dropped = true;
    for (int i = 0; i < n_; ++i) {
      all_dropped = all_dropped && state[i] == 2;
      if (state[i] == 0 && onboard < drv.capacity) {
        const Stop s{StopKind::kPickup, riders_[i]};
        children.push_back({inst_.time(last, location_of(inst_, d_, s)), s, i});
      } else if (state[i] == 1) {
        const Stop s{StopKind::kDropoff, riders_[i]};
        children.push_back({inst_.time(last, location_of(inst_, d_, s)), s, i});
      }
    }
    if (all_dropped) {
      const Stop s{StopKind::kEnd, -1};
      const double leg = inst_.time(last, drv.destination);
      const double lb2 = lb + leg * drv.c_trl;
      if (lb2 > bound()) return;
      if (tau + leg > drv.window.latest + kFeasTol || driver_used + leg > drv.max_detour + kFeasTol) return;
      prefix.stops.push_back(s);
      consider(solve_timing(inst_, prefix, stats_));
      prefix.stops.pop_back();
      return;
    }
    std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
      if (a.leg != b.leg) return a.leg < b.leg;
      return stop_key(a.stop) < stop_key(b.stop);
    });

    double rate = drv.c_trl;
    for (int i = 0; i < n_; ++i) {
      if (state[i] == 1) rate += inst_.riders[riders_[i]].c_trl;
    }
    for (const auto& ch : children) {
      const double lb2 = lb + ch.leg * rate;
      if (lb2 > bound()) continue;
      const Rider& r = inst_.riders[riders_[ch.slot]];
      double tau2 = tau + ch.leg;
      if (ch.stop.kind == StopKind::kPickup) tau2 = std::max(tau2, r.window.earliest);
      // Earliest reach vs every latest arrival on board, driver included.
      double min_latest = drv.window.latest;
      for (int i = 0; i < n_; ++i) {
        if (state[i] == 1 || i == ch.slot) min_latest = std::min(min_latest, inst_.riders[riders_[i]].window.latest);
      }
      if (tau2 > min_latest + kFeasTol) continue;
      if (driver_used + ch.leg > drv.max_detour + kFeasTol) continue;
      bool detour_ok = true;
      for (int i = 0; i < n_ && detour_ok; ++i) {
        if (state[i] == 1 && consumed[i] + ch.leg > inst_.riders[riders_[i]].max_detour + kFeasTol) detour_ok = false;
      }
      if (!detour_ok) continue;

      const int old_state = state[ch.slot];
      std::vector<double> saved = consumed;
      for (int i = 0; i < n_; ++i) {
        if (state[i] == 1) consumed[i] += ch.leg;
      }
      state[ch.slot] = ch.stop.kind == StopKind::kPickup ? 1 : 2;
      if (ch.stop.kind == StopKind::kPickup) consumed[ch.slot] = 0.0;
      prefix.stops.push_back(ch.stop);
      dfs(prefix, location_of(inst_, d_, ch.stop), tau2, lb2, driver_used + ch.leg, consumed, state,
          onboard + (ch.stop.kind == StopKind::kPickup ? 1 : -1));
      prefix.stops.pop_back();
      state[ch.slot] = old_state;
      consumed = std::move(saved);
    }
  }

  const Instance& inst_;
  int d_;
  const std::vector<int>& riders_;
  const TripOptions& opts_;
  TripStats* stats_;
  int n_;
};

Route random_route(const Instance& inst, int driver, const std::vector<int>& riders, std::mt19937_64& rng) {
  const int n = static_cast<int>(riders.size());
  Route r{driver, {{StopKind::kStart, -1}}};
  std::vector<int> state(n, 0);
  int onboard = 0;
  std::vector<Stop> options;
  for (;;) {
    options.clear();
    for (int i = 0; i < n; ++i) {
      if (state[i] == 0 && onboard < inst.drivers[driver].capacity) options.push_back({StopKind::kPickup, i});
      if (state[i] == 1) options.push_back({StopKind::kDropoff, i});
    }
    if (options.empty()) break;
    const auto pick = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    state[pick.rider] = pick.kind == StopKind::kPickup ? 1 : 2;
    onboard += pick.kind == StopKind::kPickup ? 1 : -1;
    r.stops.push_back({pick.kind, riders[pick.rider]});
  }
  r.stops.push_back({StopKind::kEnd, -1});
  return r;
}

}  // namespace

std::vector<Route> all_routes(const Instance& inst, int driver, const std::vector<int>& riders) {
  std::vector<Route> out;
  std::vector<Stop> prefix{{StopKind::kStart, -1}};
  std::vector<int> state(riders.size(), 0);
  enumerate_routes(inst, driver, riders, prefix, state, 0, out);
  return out;
}

TripResult trip_cost(const Instance& inst, int driver, const std::vector<int>& riders, const std::optional<Route>& warm,
                     const TripOptions& options, TripStats* stats) {
  if (riders.empty()) return solve_timing(inst, Route{driver, {{StopKind::kStart, -1}, {StopKind::kEnd, -1}}}, stats);
  if (static_cast<int>(riders.size()) > inst.drivers[driver].capacity) return {};
  TreeSearch search(inst, driver, riders, options, stats);
  std::uint64_t h = mix(0x5eed, static_cast<std::uint64_t>(driver));
  for (int r : riders) h = mix(h, static_cast<std::uint64_t>(r));
  std::mt19937_64 rng(h);
  for (int i = 0; i < options.shuffle_tries; ++i) search.offer(random_route(inst, driver, riders, rng));
  if (warm && warm->driver == driver && riders_of(*warm) == riders) search.offer(*warm);
  search.run();
  return std::move(search.best);
}

bool drivers_close(const Instance& inst, int a, int b, double radius) {
  if (inst.metric != Metric::kEuclidean) return false;
  const auto linf = [&](int u, int v) {
    const auto& p = inst.locations[u];
    const auto& q = inst.locations[v];
    return std::max(std::abs(p.x - q.x), std::abs(p.y - q.y));
  };
  const auto& da = inst.drivers[a];
  const auto& db = inst.drivers[b];
  return std::max(linf(da.origin, db.origin), linf(da.destination, db.destination)) <= radius;
}

namespace {

int onboard_peak(const std::vector<Stop>& stops) {
  int onboard = 0;
  int peak = 0;
  for (const auto& s : stops) {
    if (s.kind == StopKind::kPickup) peak = std::max(peak, ++onboard);
    if (s.kind == StopKind::kDropoff) --onboard;
  }
  return peak;
}

double route_length(const Instance& inst, int driver, const std::vector<Stop>& stops) {
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < stops.size(); ++p) {
    total += inst.time(location_of(inst, driver, stops[p]), location_of(inst, driver, stops[p + 1]));
  }
  return total;
}

// Candidate routes inserting `rider` into `base`, cheapest added distance first.
std::vector<Route> insertions(const Instance& inst, int driver, const Route& base, int rider, std::size_t keep) {
  const auto& st = base.stops;
  const double base_len = route_length(inst, driver, st);
  std::vector<std::pair<double, Route>> cands;
  for (std::size_t i = 1; i < st.size(); ++i) {
    for (std::size_t j = i; j < st.size(); ++j) {
      std::vector<Stop> s(st.begin(), st.begin() + static_cast<std::ptrdiff_t>(i));
      s.push_back({StopKind::kPickup, rider});
      s.insert(s.end(), st.begin() + static_cast<std::ptrdiff_t>(i), st.begin() + static_cast<std::ptrdiff_t>(j));
      s.push_back({StopKind::kDropoff, rider});
      s.insert(s.end(), st.begin() + static_cast<std::ptrdiff_t>(j), st.end());
      if (onboard_peak(s) > inst.drivers[driver].capacity) continue;
      const double added = route_length(inst, driver, s) - base_len;
      cands.emplace_back(added, Route{driver, std::move(s)});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return route_less(a.second, b.second);
  });
  std::vector<Route> out;
  for (std::size_t i = 0; i < cands.size() && i < keep; ++i) out.push_back(std::move(cands[i].second));
  return out;
}

std::vector<Stop> projection(const std::vector<Stop>& stops, const std::vector<int>& keep) {
  std::vector<Stop> out;
  for (const auto& s : stops) {
    if (s.kind == StopKind::kStart || s.kind == StopKind::kEnd ||
        std::binary_search(keep.begin(), keep.end(), s.rider)) {
      out.push_back(s);
    }
  }
  return out;
}

// Extends r1 (missing rider a) with a's stops placed after the same common
// stops they follow in r2.
std::optional<Route> merge(const Route& r1, const Route& r2, int a, const std::vector<int>& common) {
  if (projection(r1.stops, common) != projection(r2.stops, common)) return std::nullopt;
  std::vector<Stop> out = r1.stops;
  Stop anchor{StopKind::kStart, -1};
  for (const auto& s : r2.stops) {
    if (s.kind == StopKind::kPickup && s.rider == a) {
      const auto it = std::find(out.begin(), out.end(), anchor);
      out.insert(it + 1, s);
      anchor = s;
    } else if (s.kind == StopKind::kDropoff && s.rider == a) {
      const auto it = std::find(out.begin(), out.end(), anchor);
      out.insert(it + 1, s);
      break;
    } else if (s.kind != StopKind::kEnd) {
      if (s.kind == StopKind::kStart || std::binary_search(common.begin(), common.end(), s.rider)) anchor = s;
    }
  }
  return Route{r1.driver, std::move(out)};
}

}  // namespace

std::optional<Route> warm_start_from(const Instance& inst, int driver, const std::vector<int>& riders,
                                     const WarmStartSources& sources, double reuse_radius, TripStats* stats) {
  std::vector<Route> cands;
  std::vector<int> missing;
  for (const auto& base : sources.subsets) {
    const auto have = riders_of(base);
    int extra = -1;
    for (int r : riders) {
      if (!std::binary_search(have.begin(), have.end(), r)) extra = r;
    }
    missing.push_back(extra);
    if (extra < 0 || have.size() + 1 != riders.size()) continue;
    for (auto& r : insertions(inst, driver, Route{driver, base.stops}, extra, 3)) cands.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < sources.subsets.size(); ++i) {
    for (std::size_t j = 0; j < sources.subsets.size(); ++j) {
      if (i == j || missing[i] < 0 || missing[j] < 0 || missing[i] == missing[j]) continue;
      std::vector<int> common;
      for (int r : riders) {
        if (r != missing[i] && r != missing[j]) common.push_back(r);
      }
      // subsets[i] lacks missing[i]; subsets[j] holds it.
      auto m = merge(sources.subsets[i], sources.subsets[j], missing[i], common);
      if (m && onboard_peak(m->stops) <= inst.drivers[driver].capacity) cands.push_back(std::move(*m));
    }
  }
  if (sources.other_driver && drivers_close(inst, driver, sources.other_driver->driver, reuse_radius) &&
      riders_of(*sources.other_driver) == riders) {
    cands.push_back(Route{driver, sources.other_driver->stops});
  }
  std::optional<Route> best;
  double best_cost = kInfinity;
  for (const auto& r : cands) {
    const auto res = solve_timing(inst, r, stats);
    if (res.feasible() && (res.cost < best_cost || (res.cost == best_cost && route_less(r, *best)))) {
      best_cost = res.cost;
      best = r;
    }
  }
  return best;
}

}  // namespace rideshare
