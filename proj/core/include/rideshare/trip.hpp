#pragma once

// Optimal single-driver schedules: LP timing of a fixed stop order and a
// pruned tree search over stop orders.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rideshare/model.hpp"
#include "rideshare/solver.hpp"

namespace rideshare {

enum class StopKind { kStart, kPickup, kDropoff, kEnd };

struct Stop {
  StopKind kind = StopKind::kStart;
  int rider = -1;  // rider index for pickups and dropoffs

  friend bool operator==(const Stop&, const Stop&) = default;
};

/// Stop order for one driver, from the driver's origin to its destination.
struct Route {
  int driver = -1;
  std::vector<Stop> stops;

  friend bool operator==(const Route&, const Route&) = default;
};

/// A route with the departure time of every stop.
struct DriverSchedule {
  Route route;
  std::vector<double> times;
};

struct TripResult {
  double cost = kInfinity;
  std::optional<DriverSchedule> schedule;
  double driver_cost = 0.0;
  /// Per rider, aligned with riders_of(route) (ascending rider index).
  std::vector<double> rider_costs;

  [[nodiscard]] bool feasible() const { return cost < kInfinity; }
};

struct TripStats {
  std::int64_t nodes = 0;
  std::int64_t timing_lps = 0;
};

int location_of(const Instance& inst, int driver, const Stop& stop);

/// Ascending rider indices visited by the route.
std::vector<int> riders_of(const Route& route);

/// Orders routes by their stop-key sequence; used to break cost ties.
bool route_less(const Route& a, const Route& b);

/// Throws ValidationError when the route breaks a structural invariant:
/// endpoints, one pickup before one dropoff per rider, capacity.
void check_route(const Instance& inst, const Route& route);

/// Optimal departure times for a fixed route. Infeasible routes return the
/// infinite-cost sentinel. A driver whose first pickups share its origin
/// departs together with those pickups.
TripResult solve_timing(const Instance& inst, const Route& route, TripStats* stats = nullptr);

/// Violations of sequencing, windows and detour limits for a schedule,
/// checked independently of the LP. Empty when the schedule is valid.
std::vector<std::string> check_schedule(const Instance& inst, const DriverSchedule& schedule, double tol = 1e-6);

/// Every pickup/dropoff interleaving of `riders` that respects capacity.
std::vector<Route> all_routes(const Instance& inst, int driver, const std::vector<int>& riders);

struct TripOptions {
  int shuffle_tries = 5;
  /// Absolute tolerance for cost comparisons inside the search.
  double tie_tol = 1e-9;
};

/// Globally optimal schedule for driver d serving `riders` (any order).
/// `warm` seeds the incumbent when it is cheaper than the shuffled routes.
TripResult trip_cost(const Instance& inst, int driver, const std::vector<int>& riders,
                     const std::optional<Route>& warm = std::nullopt, const TripOptions& options = {},
                     TripStats* stats = nullptr);

/// Known optimal routes from which a warm start can be derived.
struct WarmStartSources {
  /// Optimal routes of the same driver for subsets missing one rider.
  std::vector<Route> subsets;
  /// Optimal route of another driver for the same rider set.
  std::optional<Route> other_driver;
};

inline constexpr double kReuseRadius = 2.0;

/// Best timed candidate among best-position insertion into each subset
/// route, merging two subset routes that agree on their common riders, and
/// reusing another nearby driver's stop order. Nullopt when no candidate is
/// feasible.
std::optional<Route> warm_start_from(const Instance& inst, int driver, const std::vector<int>& riders,
                                     const WarmStartSources& sources, double reuse_radius = kReuseRadius,
                                     TripStats* stats = nullptr);

/// True when the two drivers' origins and destinations are within `radius`
/// in the L-infinity norm (Euclidean instances only).
bool drivers_close(const Instance& inst, int a, int b, double radius = kReuseRadius);

}  // namespace rideshare
