#pragma once

// Seeded synthetic instances on a square grid. Time 0 is 7:00 and one grid
// diagonal takes 60 minutes.

#include <array>
#include <cstdint>
#include <string>

#include "rideshare/model.hpp"

namespace rideshare {

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

/// Drivers per riders, e.g. {1, 4} for "1:4".
struct Ratio {
  int drivers = 1;
  int riders = 1;
};

/// Parses "a:b" with positive integers; throws ValidationError otherwise.
Ratio parse_ratio(const std::string& text);

/// Number of drivers among `users` for the given ratio (rounded to nearest).
int driver_count(int users, Ratio ratio);

inline constexpr int kUserTypes = 5;

struct RushHourConfig {
  int users = 50;
  Ratio ratio;
  std::uint64_t seed = 1;
  double grid = 50.0;
  /// Shares of types A..E.
  std::array<double, kUserTypes> mix{0.4, 0.2, 0.1, 0.2, 0.1};
  Rect origin{22.727, 23.333, 28.909, 35.333};
  std::array<Rect, kUserTypes> destinations{{
      {0.0, 0.0, 14.364, 19.333},
      {36.364, 30.0, 50.0, 50.0},
      {20.0, 0.0, 36.364, 14.667},
      {14.182, 20.667, 28.182, 36.667},
      {0.0, 0.0, 50.0, 50.0},
  }};
  /// Latest departure anchor per type in minutes after 7:00.
  std::array<double, kUserTypes> latest{12.0, 20.0, 40.0, 60.0, 60.0};
  double horizon = 120.0;
  double c_dev = 1.0;
  double c_trl = 3.0;
  double window_stretch = 1.3;
  double detour_ratio = 1.3;
  int capacity = 4;
  double rho = 1.2;
};

struct UniformConfig {
  int users = 50;
  Ratio ratio;
  std::uint64_t seed = 1;
  double grid = 50.0;
  double flexibility = 1.3;
  double detour_fraction = 0.2;
  double horizon = 120.0;
  double departure_horizon = 60.0;
  double c_dev = 1.0;
  double c_trl = 3.0;
  int capacity = 4;
};

/// Minutes per grid unit so that the grid diagonal takes 60 minutes.
double minutes_per_unit(double grid);

Instance gen_rush_hour(const RushHourConfig& config);
Instance gen_uniform(const UniformConfig& config);

/// Type index (0 = A) of every user in the order drivers then riders, as
/// drawn by gen_rush_hour. Exposed for frequency checks.
std::vector<int> rush_hour_types(const RushHourConfig& config);

}  // namespace rideshare
