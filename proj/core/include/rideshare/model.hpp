#pragma once

// Users, instances and the per-user trip cost.

#include <string>
#include <vector>

namespace rideshare {

/// A pickup or dropoff point. Coordinates are grid units and are ignored for
/// matrix-backed instances.
struct Location {
  std::string id;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Location&, const Location&) = default;
};

enum class Metric { kEuclidean, kMatrix };

struct TimeWindow {
  double earliest = 0.0;  // τe: earliest departure
  double latest = 0.0;    // τl: latest arrival

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

struct User {
  std::string id;
  int origin = -1;       // index into Instance::locations
  int destination = -1;
  TimeWindow window;
  double preferred = 0.0;  // τ*
  double max_detour = 0.0;
  double value = 0.0;      // ν
  double c_dev = 0.0;
  double c_trl = 0.0;

  friend bool operator==(const User&, const User&) = default;
};

struct Rider : User {
  double lambda = 0.0;  // cost of the alternative transport

  friend bool operator==(const Rider&, const Rider&) = default;
};

struct Driver : User {
  int capacity = 1;
  double rho = 0.0;

  friend bool operator==(const Driver&, const Driver&) = default;
};

struct Instance {
  double horizon = 0.0;
  Metric metric = Metric::kEuclidean;
  /// Minutes per grid unit for the Euclidean metric.
  double scale = 1.0;
  std::vector<Location> locations;
  /// Travel minutes between location indices for the matrix metric.
  std::vector<std::vector<double>> matrix;
  std::vector<Rider> riders;
  std::vector<Driver> drivers;

  [[nodiscard]] double time(int from, int to) const;
  [[nodiscard]] double direct_time(const User& u) const { return time(u.origin, u.destination); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// c_dev·|t − τ*| + c_trl·(t' − t). Throws std::invalid_argument if t > t'.
double user_trip_cost(const User& user, double depart, double arrive);

/// Cost of travelling alone at the preferred time.
inline double solo_cost(const Instance& inst, const User& user) {
  return user.c_trl * inst.direct_time(user);
}

/// One human-readable message per violated invariant; empty when valid.
std::vector<std::string> validate(const Instance& instance);

}  // namespace rideshare
