#include "rideshare/model.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace rideshare {

double Instance::time(int from, int to) const {
  if (from == to) return 0.0;
  if (metric == Metric::kMatrix) return matrix[from][to];
  const auto& a = locations[from];
  const auto& b = locations[to];
  return std::hypot(a.x - b.x, a.y - b.y) * scale;
}

double user_trip_cost(const User& user, double depart, double arrive) {
  if (depart > arrive) throw std::invalid_argument("departure after arrival for user " + user.id);
  return user.c_dev * std::abs(depart - user.preferred) + user.c_trl * (arrive - depart);
}

namespace {

constexpr double kSlack = 1e-9;

void check_user(const Instance& inst, const User& u, const std::string& kind, std::vector<std::string>& out) {
  const auto n = static_cast<int>(inst.locations.size());
  const std::string who = kind + " " + u.id + ": ";
  if (u.origin < 0 || u.origin >= n || u.destination < 0 || u.destination >= n) {
    out.push_back(who + "origin or destination does not resolve to a location");
    return;
  }
  const auto& w = u.window;
  if (!(w.earliest >= -kSlack)) out.push_back(who + "window starts before 0");
  if (!(w.earliest <= w.latest)) out.push_back(who + "earliest departure after latest arrival");
  if (!(w.latest <= inst.horizon + kSlack)) out.push_back(who + "window ends after the horizon");
  const double direct = inst.direct_time(u);
  if (!(w.earliest + direct <= w.latest + kSlack)) out.push_back(who + "window does not admit the direct trip");
  if (!(u.preferred >= w.earliest - kSlack && u.preferred <= w.latest - direct + kSlack)) {
    out.push_back(who + "preferred departure outside [earliest, latest - direct time]");
  }
  if (!(u.max_detour >= 0.0)) out.push_back(who + "negative max detour");
  if (!(u.c_dev >= 0.0) || !(u.c_trl >= 0.0)) out.push_back(who + "negative cost rate");
  if (!std::isfinite(u.value)) out.push_back(who + "non-finite value");
}

}  // namespace

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  if (!(inst.horizon >= 0.0)) out.push_back("horizon must be nonnegative");
  const auto n = inst.locations.size();
  std::unordered_set<std::string> loc_ids;
  for (const auto& loc : inst.locations) {
    if (!loc_ids.insert(loc.id).second) out.push_back("duplicate location id " + loc.id);
  }
  if (inst.metric == Metric::kMatrix) {
    if (inst.matrix.size() != n) {
      out.push_back("travel-time matrix size does not match the location count");
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (inst.matrix[i].size() != n) {
          out.push_back("travel-time matrix row " + std::to_string(i) + " has the wrong length");
          continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double t = inst.matrix[i][j];
          if (!(t >= 0.0) || !std::isfinite(t)) {
            out.push_back("travel time " + inst.locations[i].id + " -> " + inst.locations[j].id + " is invalid");
          }
        }
        if (inst.matrix[i][i] != 0.0) out.push_back("travel time from " + inst.locations[i].id + " to itself is not 0");
      }
    }
    if (!out.empty()) return out;
  } else if (!(inst.scale > 0.0)) {
    out.push_back("euclidean scale must be positive");
  }

  std::unordered_set<std::string> user_ids;
  for (const auto& r : inst.riders) {
    if (!user_ids.insert(r.id).second) out.push_back("duplicate user id " + r.id);
    check_user(inst, r, "rider", out);
    if (r.lambda > r.value + kSlack) out.push_back("rider " + r.id + ": alternative cost exceeds trip value");
    if (r.lambda < solo_cost(inst, r) - kSlack) {
      out.push_back("rider " + r.id + ": alternative cost below the cost of a direct ride");
    }
  }
  for (const auto& d : inst.drivers) {
    if (!user_ids.insert(d.id).second) out.push_back("duplicate user id " + d.id);
    check_user(inst, d, "driver", out);
    if (d.capacity < 1) out.push_back("driver " + d.id + ": capacity below 1");
    if (!(d.rho >= 0.0)) out.push_back("driver " + d.id + ": negative extra-utility factor");
  }
  return out;
}

}  // namespace rideshare
