#include "rideshare/matching.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace rideshare {

namespace {

int mirror_of(const std::vector<std::pair<int, int>>& flex, int driver) {
  for (const auto& [d, r] : flex) {
    if (d == driver) return r;
  }
  return -1;
}

bool is_mirror(const std::vector<std::pair<int, int>>& flex, int rider) {
  return std::any_of(flex.begin(), flex.end(), [&](const auto& p) { return p.second == rider; });
}

}  // namespace

double matching_cost(const MatchingProblem& p, const DeterministicMatching& m,
                     const std::vector<std::pair<int, int>>& flex) {
  double cost = 0.0;
  for (int c : m.assignment) {
    if (c >= 0) cost += p.candidates[c].cost;
  }
  for (int r = 0; r < static_cast<int>(p.riders.size()); ++r) {
    if (!m.matched[r] && !is_mirror(flex, r)) cost += p.riders[r].lambda;
  }
  return cost;
}

DeterministicMatching make_matching(const MatchingProblem& p, std::vector<int> assignment,
                                    const std::vector<std::pair<int, int>>& flex) {
  DeterministicMatching m;
  m.assignment = std::move(assignment);
  m.matched.assign(p.riders.size(), 0);
  for (int c : m.assignment) {
    if (c < 0) continue;
    for (int r : p.candidates[c].riders) m.matched[r] = 1;
  }
  m.cost = matching_cost(p, m, flex);
  return m;
}

void check_options(const MatchingProblem& p, const MatchOptions& o) {
  const auto nd = p.drivers.size();
  const auto nr = p.riders.size();
  if (!o.rider_weights.empty() && o.rider_weights.size() != nr) throw ValidationError("rider weight count mismatch");
  if (!o.driver_weights.empty() && o.driver_weights.size() != nd) throw ValidationError("driver weight count mismatch");
  for (double w : o.rider_weights) {
    if (!std::isfinite(w)) throw ValidationError("rider weights must be finite");
  }
  for (double w : o.driver_weights) {
    if (!std::isfinite(w)) throw ValidationError("driver weights must be finite");
  }
  std::vector<char> seen_d(nd, 0), seen_r(nr, 0);
  for (const auto& [d, r] : o.role_flex) {
    if (d < 0 || d >= static_cast<int>(nd) || r < 0 || r >= static_cast<int>(nr)) {
      throw ValidationError("role-flex pair names a missing driver or mirror rider");
    }
    if (seen_d[d]++ || seen_r[r]++) throw ValidationError("role-flex pairs must be one-to-one");
  }
}

bool candidate_allowed(const MatchingProblem&, const Candidate& c, const MatchOptions& o) {
  const int mirror = mirror_of(o.role_flex, c.driver);
  return mirror < 0 || !std::binary_search(c.riders.begin(), c.riders.end(), mirror);
}

double candidate_coefficient(const MatchingProblem& p, const Candidate& c, const MatchOptions& o) {
  double coef = 0.0;
  if (!o.zero_costs) {
    if (o.objective == ObjectiveMode::kCost) {
      coef = c.cost;
    } else {
      const double rho = p.drivers[c.driver].rho;
      coef = c.driver_cost;
      for (std::size_t s = 0; s < c.riders.size(); ++s) {
        coef += (1.0 + rho) * c.rider_costs[s] - rho * p.riders[c.riders[s]].value;
      }
    }
  }
  if (!o.driver_weights.empty()) coef -= o.driver_weights[c.driver];
  if (!o.rider_weights.empty()) {
    for (int r : c.riders) coef -= o.rider_weights[r];
  }
  return coef;
}

double unmatched_coefficient(const MatchingProblem& p, int rider, const MatchOptions& o) {
  if (o.zero_costs || is_mirror(o.role_flex, rider)) return 0.0;
  return p.riders[rider].lambda;
}

bool candidate_ir(const MatchingProblem& p, const Candidate& c, double tol) {
  if (p.driver_utility(c) < p.drivers[c.driver].ir_threshold - tol) return false;
  for (std::size_t s = 0; s < c.riders.size(); ++s) {
    if (p.rider_utility(c, s) < p.unmatched_utility(c.riders[s]) - tol) return false;
  }
  return true;
}

namespace {

constexpr double kTieTol = 1e-9;

struct Component {
  std::vector<int> drivers;
  std::vector<int> riders;
  std::vector<int> candidates;
};

std::vector<Component> components(const MatchingProblem& p, const MatchOptions& o, bool split) {
  const int nd = static_cast<int>(p.drivers.size());
  const int nr = static_cast<int>(p.riders.size());
  std::vector<int> parent(nd + nr);
  std::iota(parent.begin(), parent.end(), 0);
  const auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const auto unite = [&](int a, int b) {
    a = root(a);
    b = root(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  std::vector<int> allowed;
  for (int i = 0; i < static_cast<int>(p.candidates.size()); ++i) {
    const auto& c = p.candidates[i];
    if (!candidate_allowed(p, c, o)) continue;
    allowed.push_back(i);
    for (int r : c.riders) unite(c.driver, nd + r);
  }
  for (const auto& [d, r] : o.role_flex) unite(d, nd + r);
  if (!split) {
    for (int x = 1; x < nd + nr; ++x) unite(0, x);
  }
  std::vector<int> index(nd + nr, -1);
  std::vector<Component> out;
  const auto comp = [&](int x) -> Component& {
    const int r = root(x);
    if (index[r] < 0) {
      index[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    return out[index[r]];
  };
  for (int d = 0; d < nd; ++d) comp(d).drivers.push_back(d);
  for (int r = 0; r < nr; ++r) comp(nd + r).riders.push_back(r);
  for (int i : allowed) comp(p.candidates[i].driver).candidates.push_back(i);
  return out;
}

struct ComponentResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<std::pair<int, int>> chosen;  // (driver, candidate)
  double objective = 0.0;
  std::int64_t nodes = 0;
};

ComponentResult solve_component(const MatchingProblem& p, const MatchOptions& o, const Component& comp) {
  ComponentResult out;
  BinaryIntegerProgram bip;
  const int nc = static_cast<int>(comp.candidates.size());
  std::vector<int> x(nc);
  for (int k = 0; k < nc; ++k) x[k] = bip.add_variable(candidate_coefficient(p, p.candidates[comp.candidates[k]], o));
  std::vector<int> y_of(p.riders.size(), -1);
  for (int r : comp.riders) y_of[r] = bip.add_variable(unmatched_coefficient(p, r, o));

  std::vector<std::vector<Term>> rider_rows(p.riders.size());
  std::vector<std::vector<Term>> driver_rows(p.drivers.size());
  for (int k = 0; k < nc; ++k) {
    const auto& c = p.candidates[comp.candidates[k]];
    driver_rows[c.driver].push_back({x[k], 1.0});
    for (int r : c.riders) rider_rows[r].push_back({x[k], 1.0});
  }
  for (int r : comp.riders) {
    auto row = rider_rows[r];
    row.push_back({y_of[r], 1.0});
    bip.add_constraint(std::move(row), Comparator::kEqual, 1.0);
  }
  for (int d : comp.drivers) {
    auto row = driver_rows[d];
    const int mirror = mirror_of(o.role_flex, d);
    if (mirror >= 0) {
      row.push_back({y_of[mirror], -1.0});
      bip.add_constraint(std::move(row), Comparator::kEqual, 0.0);
    } else {
      bip.add_constraint(std::move(row), Comparator::kEqual, 1.0);
    }
  }
  if (o.require_ir) {
    for (int k = 0; k < nc; ++k) {
      const auto& c = p.candidates[comp.candidates[k]];
      const double gap_d = p.driver_utility(c) - p.drivers[c.driver].ir_threshold;
      if (gap_d < -kTieTol) bip.add_constraint({{x[k], gap_d}}, Comparator::kGreaterEqual, 0.0);
      for (std::size_t s = 0; s < c.riders.size(); ++s) {
        const double gap_r = p.rider_utility(c, s) - p.unmatched_utility(c.riders[s]);
        if (gap_r < -kTieTol) bip.add_constraint({{x[k], gap_r}}, Comparator::kGreaterEqual, 0.0);
      }
    }
  }
  if (o.require_stability) {
    // Row per (d,S): someone in it already does at least as well, or it is chosen.
    std::vector<double> util_d(nc);
    for (int k = 0; k < nc; ++k) util_d[k] = p.driver_utility(p.candidates[comp.candidates[k]]);
    for (int k = 0; k < nc; ++k) {
      const auto& c = p.candidates[comp.candidates[k]];
      std::vector<Term> row{{x[k], 1.0}};
      for (int j = 0; j < nc; ++j) {
        if (j == k) continue;
        const auto& other = p.candidates[comp.candidates[j]];
        if (other.driver == c.driver && util_d[j] >= util_d[k] - kTieTol) row.push_back({x[j], 1.0});
      }
      for (std::size_t s = 0; s < c.riders.size(); ++s) {
        const int r = c.riders[s];
        const double here = p.rider_utility(c, s);
        for (int j = 0; j < nc; ++j) {
          if (j == k) continue;
          const auto& other = p.candidates[comp.candidates[j]];
          const auto it = std::lower_bound(other.riders.begin(), other.riders.end(), r);
          if (it == other.riders.end() || *it != r) continue;
          const auto slot = static_cast<std::size_t>(it - other.riders.begin());
          if (p.rider_utility(other, slot) >= here - kTieTol) row.push_back({x[j], 1.0});
        }
        if (p.unmatched_utility(r) >= here - kTieTol) row.push_back({y_of[r], 1.0});
      }
      bip.add_constraint(std::move(row), Comparator::kGreaterEqual, 1.0);
    }
  }
  const auto sol = solve_bip(bip, o.bnb);
  out.nodes = sol.nodes;
  out.status = sol.status;
  if (!sol.optimal()) return out;
  out.objective = sol.objective;
  for (int k = 0; k < nc; ++k) {
    if (sol.values[x[k]]) out.chosen.emplace_back(p.candidates[comp.candidates[k]].driver, comp.candidates[k]);
  }
  return out;
}

}  // namespace

MatchResult solve_matching(const MatchingProblem& p, const MatchOptions& o) {
  p.validate();
  check_options(p, o);
  const auto comps = components(p, o, o.decompose);
  std::vector<ComponentResult> results(comps.size());
  const int jobs = std::max(1, std::min<int>(o.jobs, static_cast<int>(comps.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < comps.size(); ++i) results[i] = solve_component(p, o, comps[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::mutex mu;
    std::exception_ptr err;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < comps.size(); i = next++) {
          try {
            results[i] = solve_component(p, o, comps[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!err) err = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  MatchResult res;
  res.components = static_cast<int>(comps.size());
  std::vector<int> assignment(p.drivers.size(), -1);
  for (const auto& r : results) {
    res.nodes += r.nodes;
    if (r.status != SolveStatus::kOptimal) {
      res.status = r.status;
      return res;
    }
    res.objective += r.objective;
    for (const auto& [d, c] : r.chosen) assignment[d] = c;
  }
  res.status = SolveStatus::kOptimal;
  res.matching = make_matching(p, std::move(assignment), o.role_flex);
  return res;
}

GreedyResult greedy_baseline(const MatchingProblem& p, std::uint64_t seed, std::optional<int> restarts) {
  p.validate();
  const int nd = static_cast<int>(p.drivers.size());
  GreedyResult out;
  out.restarts = std::max(1, restarts.value_or(nd * nd));
  const auto lists = p.by_driver();
  std::mt19937_64 rng(seed);
  std::vector<int> order(nd);
  for (int t = 0; t < out.restarts; ++t) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> taken(p.riders.size(), 0);
    std::vector<int> assignment(nd, -1);
    for (int d : order) {
      int best = -1;
      double best_val = kInfinity;
      for (int ci : lists[d]) {
        const auto& c = p.candidates[ci];
        bool free = true;
        double val = c.cost;
        for (int r : c.riders) {
          free = free && !taken[r];
          val -= p.riders[r].lambda;
        }
        if (free && val < best_val - kTieTol) {
          best = ci;
          best_val = val;
        }
      }
      assignment[d] = best;
      if (best >= 0) {
        for (int r : p.candidates[best].riders) taken[r] = 1;
      }
    }
    auto m = make_matching(p, std::move(assignment));
    if (t == 0 || m.cost < out.best.cost) out.best = m;
    if (t == 0 || m.cost > out.worst.cost) out.worst = m;
  }
  return out;
}

UserUtilities utilities(const MatchingProblem& p, const DeterministicMatching& m) {
  UserUtilities u;
  u.drivers.assign(p.drivers.size(), std::nan(""));
  u.riders.resize(p.riders.size());
  for (int r = 0; r < static_cast<int>(p.riders.size()); ++r) u.riders[r] = p.unmatched_utility(r);
  for (int d = 0; d < static_cast<int>(p.drivers.size()); ++d) {
    const int ci = m.assignment[d];
    if (ci < 0) continue;
    const auto& c = p.candidates[ci];
    u.drivers[d] = p.driver_utility(c);
    for (std::size_t s = 0; s < c.riders.size(); ++s) u.riders[c.riders[s]] = p.rider_utility(c, s);
  }
  return u;
}

bool is_ir(const MatchingProblem& p, const DeterministicMatching& m, double tol) {
  const auto u = utilities(p, m);
  for (int d = 0; d < static_cast<int>(p.drivers.size()); ++d) {
    if (m.assignment[d] >= 0 && u.drivers[d] < p.drivers[d].ir_threshold - tol) return false;
  }
  for (int r = 0; r < static_cast<int>(p.riders.size()); ++r) {
    if (u.riders[r] < p.unmatched_utility(r) - tol) return false;
  }
  return true;
}

std::vector<int> blocking_pairs(const MatchingProblem& p, const DeterministicMatching& m, double tol) {
  const auto u = utilities(p, m);
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(p.candidates.size()); ++i) {
    const auto& c = p.candidates[i];
    if (m.assignment[c.driver] == i) continue;
    const double current = m.assignment[c.driver] >= 0 ? u.drivers[c.driver] : -kInfinity;
    if (!(p.driver_utility(c) > current + tol)) continue;
    bool all = true;
    for (std::size_t s = 0; s < c.riders.size() && all; ++s) all = p.rider_utility(c, s) > u.riders[c.riders[s]] + tol;
    if (all) out.push_back(i);
  }
  return out;
}

}  // namespace rideshare
