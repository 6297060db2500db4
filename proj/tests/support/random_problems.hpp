#pragma once

// Hand-rolled generators for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "rideshare/generator.hpp"
#include "rideshare/matching_problem.hpp"

namespace rideshare::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct ProblemShape {
  int drivers = 2;
  int riders = 4;
  int max_set = 2;
  /// Chance that a random rider set is listed for a driver.
  double density = 0.5;
};

/// A subset-closed cost table; every driver can drive alone.
inline MatchingProblem random_problem(std::mt19937_64& rng, const ProblemShape& shape) {
  MatchingProblem p;
  for (int d = 0; d < shape.drivers; ++d) {
    p.drivers.push_back({"d" + std::to_string(d), uniform(rng, 20, 60), uniform(rng, 0, 1.5), 0.0, 10.0});
  }
  for (int r = 0; r < shape.riders; ++r) {
    const double v = uniform(rng, 10, 40);
    p.riders.push_back({"r" + std::to_string(r), v, uniform(rng, 2, v), 10.0});
  }
  for (int d = 0; d < shape.drivers; ++d) {
    std::vector<std::vector<int>> sets{{}};
    for (int size = 1; size <= shape.max_set; ++size) {
      std::vector<std::vector<int>> next;
      for (const auto& base : sets) {
        if (static_cast<int>(base.size()) != size - 1) continue;
        const int from = base.empty() ? 0 : base.back() + 1;
        for (int r = from; r < shape.riders; ++r) {
          auto s = base;
          s.push_back(r);
          // Closure: every one-smaller subset must already be listed.
          bool closed = true;
          for (std::size_t k = 0; k < s.size() && closed; ++k) {
            auto sub = s;
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(k));
            closed = std::find(sets.begin(), sets.end(), sub) != sets.end();
          }
          if (closed && uniform(rng, 0, 1) < shape.density) next.push_back(s);
        }
      }
      sets.insert(sets.end(), next.begin(), next.end());
    }
    for (const auto& s : sets) {
      Candidate c;
      c.driver = d;
      c.riders = s;
      c.driver_cost = uniform(rng, 5, 15) + 3.0 * static_cast<double>(s.size());
      for (std::size_t k = 0; k < s.size(); ++k) c.rider_costs.push_back(uniform(rng, 0, 8));
      c.cost = c.driver_cost;
      for (double rc : c.rider_costs) c.cost += rc;
      p.candidates.push_back(std::move(c));
    }
  }
  for (int d = 0; d < shape.drivers; ++d) {
    p.drivers[d].ir_threshold = p.driver_base_utility(p.candidates[p.find(d, {})]);
  }
  return p;
}

inline RushHourConfig small_rush(std::uint64_t seed, int users, Ratio ratio = {1, 2}) {
  RushHourConfig c;
  c.users = users;
  c.ratio = ratio;
  c.seed = seed;
  return c;
}

// Two far-apart clusters of users sharing nothing.
inline Instance two_clusters() {
  auto a = gen_rush_hour(small_rush(41, 8, {1, 1}));
  auto b = gen_rush_hour(small_rush(42, 8, {1, 1}));
  Instance inst = a;
  const int shift = static_cast<int>(inst.locations.size());
  for (auto loc : b.locations) {
    loc.id += "_far";
    loc.x += 1000;
    loc.y += 1000;
    inst.locations.push_back(loc);
  }
  for (auto d : b.drivers) {
    d.id += "_far";
    d.origin += shift;
    d.destination += shift;
    inst.drivers.push_back(d);
  }
  for (auto r : b.riders) {
    r.id += "_far";
    r.origin += shift;
    r.destination += shift;
    inst.riders.push_back(r);
  }
  return inst;
}

}  // namespace rideshare::testing
