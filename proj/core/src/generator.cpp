#include "rideshare/generator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "rideshare/errors.hpp"

namespace rideshare {

Ratio parse_ratio(const std::string& text) {
  const auto colon = text.find(':');
  Ratio r;
  const auto parse = [&](std::string_view part, int& out) {
    const auto* end = part.data() + part.size();
    const auto res = std::from_chars(part.data(), end, out);
    return res.ec == std::errc{} && res.ptr == end && out > 0;
  };
  if (colon == std::string::npos || !parse(std::string_view(text).substr(0, colon), r.drivers) ||
      !parse(std::string_view(text).substr(colon + 1), r.riders)) {
    throw ValidationError("ratio must look like 1:4, got '" + text + "'");
  }
  return r;
}

int driver_count(int users, Ratio ratio) {
  return static_cast<int>(std::lround(static_cast<double>(users) * ratio.drivers / (ratio.drivers + ratio.riders)));
}

double minutes_per_unit(double grid) { return 60.0 / (grid * std::sqrt(2.0)); }

namespace {

// Independent stream per user so that adding users leaves earlier ones intact.
std::mt19937_64 user_stream(std::uint64_t seed, int user, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(user), static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void check_rect(const Rect& r, double grid, const char* what) {
  if (!(r.x0 <= r.x1 && r.y0 <= r.y1 && r.x0 >= 0 && r.y0 >= 0 && r.x1 <= grid && r.y1 <= grid)) {
    throw ValidationError(std::string(what) + " rectangle is not inside the grid");
  }
}

int draw_type(std::mt19937_64& rng, const std::array<double, kUserTypes>& mix) {
  const double u = uniform(rng, 0.0, 1.0);
  double acc = 0.0;
  for (int t = 0; t < kUserTypes; ++t) {
    acc += mix[t];
    if (u < acc) return t;
  }
  return kUserTypes - 1;
}

void validate_counts(int users, Ratio ratio) {
  if (users < 0) throw ValidationError("user count must be nonnegative");
  if (ratio.drivers <= 0 || ratio.riders <= 0) throw ValidationError("ratio parts must be positive");
}

struct Draft {
  Location origin;
  Location destination;
  User user;
};

void append(Instance& inst, Draft draft, bool driver, int index, int capacity, double rho) {
  const std::string id = (driver ? "d" : "r") + std::to_string(index);
  draft.origin.id = "o_" + id;
  draft.destination.id = "q_" + id;
  draft.user.id = id;
  draft.user.origin = static_cast<int>(inst.locations.size());
  inst.locations.push_back(draft.origin);
  draft.user.destination = static_cast<int>(inst.locations.size());
  inst.locations.push_back(draft.destination);
  if (driver) {
    Driver d;
    static_cast<User&>(d) = draft.user;
    d.capacity = capacity;
    d.rho = rho;
    inst.drivers.push_back(std::move(d));
  } else {
    Rider r;
    static_cast<User&>(r) = draft.user;
    r.lambda = r.value;
    inst.riders.push_back(std::move(r));
  }
}

}  // namespace

std::vector<int> rush_hour_types(const RushHourConfig& c) {
  std::vector<int> types;
  types.reserve(c.users);
  for (int i = 0; i < c.users; ++i) {
    auto rng = user_stream(c.seed, i, 0x7479);
    types.push_back(draw_type(rng, c.mix));
  }
  return types;
}

Instance gen_rush_hour(const RushHourConfig& c) {
  validate_counts(c.users, c.ratio);
  double total = 0.0;
  for (double p : c.mix) {
    if (p < 0.0) throw ValidationError("type proportions must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("type proportions must sum to 1");
  check_rect(c.origin, c.grid, "origin");
  for (const auto& r : c.destinations) check_rect(r, c.grid, "destination");

  Instance inst;
  inst.horizon = c.horizon;
  inst.metric = Metric::kEuclidean;
  inst.scale = minutes_per_unit(c.grid);
  const int n_drivers = driver_count(c.users, c.ratio);
  const auto types = rush_hour_types(c);
  const double last = c.horizon - 1.0;
  for (int i = 0; i < c.users; ++i) {
    auto rng = user_stream(c.seed, i, 0x6c6f63);
    const int type = types[i];
    Draft dr;
    dr.origin.x = uniform(rng, c.origin.x0, c.origin.x1);
    dr.origin.y = uniform(rng, c.origin.y0, c.origin.y1);
    const auto& box = c.destinations[type];
    dr.destination.x = uniform(rng, box.x0, box.x1);
    dr.destination.y = uniform(rng, box.y0, box.y1);
    const double time = std::hypot(dr.origin.x - dr.destination.x, dr.origin.y - dr.destination.y) * inst.scale;
    const double anchor = c.latest[type];

    double earliest = 0.0;
    double preferred = 0.0;
    double latest = 0.0;
    if (type == 0) {
      earliest = uniform(rng, 0.0, anchor);
      preferred = uniform(rng, earliest, anchor);
      latest = anchor + time;
    } else {
      double slack = 0.0;
      if (type == 1) {
        earliest = uniform(rng, 0.0, anchor);
        slack = uniform(rng, 0.0, 0.5) * c.grid;
        latest = std::min(anchor + c.window_stretch * time, last);
      } else if (type == 2) {
        earliest = uniform(rng, 0.0, anchor);
        slack = uniform(rng, 0.0, 1.0) * c.grid;
        latest = std::min(earliest + slack + c.window_stretch * time, last);
      } else {
        earliest = uniform(rng, 0.0, std::max(anchor - 2.0 - time, 1.0));
        slack = uniform(rng, 0.0, 1.0) * c.grid;
        latest = std::min(earliest + slack + c.window_stretch * time, last);
      }
      preferred = earliest + slack / 2.0;
    }
    latest = std::max(latest, earliest + time);
    preferred = std::clamp(preferred, earliest, latest - time);

    dr.user.window = {earliest, latest};
    dr.user.preferred = preferred;
    dr.user.max_detour = c.detour_ratio * time;
    dr.user.c_dev = c.c_dev;
    dr.user.c_trl = c.c_trl;
    dr.user.value = c.c_trl * time * uniform(rng, 1.0, 2.5);
    const bool driver = i < n_drivers;
    append(inst, dr, driver, driver ? i : i - n_drivers, c.capacity, c.rho);
  }
  return inst;
}

Instance gen_uniform(const UniformConfig& c) {
  validate_counts(c.users, c.ratio);
  if (c.flexibility < 1.0) throw ValidationError("window flexibility ratio must be at least 1");
  Instance inst;
  inst.horizon = c.horizon;
  inst.metric = Metric::kEuclidean;
  inst.scale = minutes_per_unit(c.grid);
  const int n_drivers = driver_count(c.users, c.ratio);
  for (int i = 0; i < c.users; ++i) {
    auto rng = user_stream(c.seed, i, 0x756e69);
    Draft dr;
    dr.origin.x = uniform(rng, 0.0, c.grid);
    dr.origin.y = uniform(rng, 0.0, c.grid);
    dr.destination.x = uniform(rng, 0.0, c.grid);
    dr.destination.y = uniform(rng, 0.0, c.grid);
    const double time = std::hypot(dr.origin.x - dr.destination.x, dr.origin.y - dr.destination.y) * inst.scale;
    const double earliest = uniform(rng, 0.0, std::max(c.departure_horizon - c.flexibility * time, 0.0));
    const double latest = std::min(earliest + c.flexibility * time, c.horizon);
    dr.user.window = {earliest, latest};
    dr.user.preferred = std::min(earliest + uniform(rng, 0.0, 0.1 * time), latest - time);
    dr.user.max_detour = (1.0 + c.detour_fraction) * time;
    dr.user.c_dev = c.c_dev;
    dr.user.c_trl = c.c_trl;
    dr.user.value = c.c_trl * time * uniform(rng, 1.0, 2.5);
    const bool driver = i < n_drivers;
    append(inst, dr, driver, driver ? i : i - n_drivers, c.capacity, 0.0);
  }
  return inst;
}

}  // namespace rideshare
