#pragma once

// Enumeration of feasible (driver, rider set) pairs: the RV graph, the
// decomposition into independent groups, and level-by-level RTV building.

#include <optional>
#include <utility>
#include <vector>

#include "rideshare/matching_problem.hpp"
#include "rideshare/model.hpp"
#include "rideshare/trip.hpp"

namespace rideshare {

struct RvGraph {
  /// Per driver, ascending riders it can serve alone.
  std::vector<std::vector<int>> driver_riders;
  /// Rider pairs (i < j) that some pickup/dropoff interleaving can serve together.
  std::vector<std::pair<int, int>> rider_pairs;
  /// Per driver and compatible rider, the singleton trip result.
  std::vector<std::vector<TripResult>> singleton;
};

/// With `ir_screen`, a driver-rider edge also requires the singleton trip to
/// leave both users at least as well off as their outside options.
RvGraph build_rv(const Instance& inst, bool ir_screen = false, const TripOptions& trip = {});

/// Whether two riders can share a vehicle ignoring any driver: some
/// interleaving of their stops meets both windows and detour limits.
bool riders_compatible(const Instance& inst, int a, int b);

struct Group {
  std::vector<int> drivers;
  std::vector<int> riders;
};

struct Decomposition {
  std::vector<Group> groups;
  /// Riders no driver can serve.
  std::vector<int> isolated_riders;
};

/// Union-find over drivers sharing a compatible rider.
Decomposition decompose(const RvGraph& rv, int n_riders);

struct RtvOptions {
  std::optional<int> max_trip_size;
  bool warm_start = true;
  bool decompose = true;
  int jobs = 1;
  TripOptions trip;
};

struct RtvStats {
  TripStats trip;
  std::int64_t trip_calls = 0;
  std::int64_t warm_starts_used = 0;
};

/// Problem header (drivers, riders, outside options) without candidates.
MatchingProblem problem_header(const Instance& inst);

MatchingProblem build_rtv(const Instance& inst, const RvGraph& rv, const RtvOptions& options = {},
                          RtvStats* stats = nullptr);

/// Per-driver quantities for the fairness cost bounds.
struct DriverStats {
  /// Riders appearing in any candidate of the driver.
  std::vector<std::vector<int>> reachable;
  /// Riders assigned to the driver in the min-cost matching.
  std::vector<std::vector<int>> assigned;
  /// max_S c_dS / c_{d, assigned}; infinity when the denominator is 0.
  std::vector<double> cost_ratio;
};

DriverStats driver_stats(const MatchingProblem& problem, const std::vector<std::vector<int>>& min_cost_sets);

/// Cost-of-fairness upper bounds; nullopt outside θ ∈ [0, min 1/|S_d|] or
/// when a ratio is undefined.
std::optional<double> pof_bound(const DriverStats& stats, double theta);
std::optional<double> spof_bound(const DriverStats& stats, double theta);

}  // namespace rideshare
