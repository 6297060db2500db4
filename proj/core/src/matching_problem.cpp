#include "rideshare/matching_problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json_util.hpp"
#include "rideshare/instance_io.hpp"

namespace rideshare {

using detail::json;

std::vector<std::vector<int>> MatchingProblem::by_driver() const {
  std::vector<std::vector<int>> out(drivers.size());
  for (int i = 0; i < static_cast<int>(candidates.size()); ++i) out[candidates[i].driver].push_back(i);
  return out;
}

std::vector<int> MatchingProblem::feasible_riders() const {
  std::vector<char> seen(riders.size(), 0);
  for (const auto& c : candidates) {
    for (int r : c.riders) seen[r] = 1;
  }
  std::vector<int> out;
  for (int r = 0; r < static_cast<int>(riders.size()); ++r) {
    if (seen[r]) out.push_back(r);
  }
  return out;
}

int MatchingProblem::find(int driver, const std::vector<int>& set) const {
  for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
    if (candidates[i].driver == driver && candidates[i].riders == set) return i;
  }
  return -1;
}

double MatchingProblem::rider_utility_in(const Candidate& c, int rider) const {
  for (std::size_t s = 0; s < c.riders.size(); ++s) {
    if (c.riders[s] == rider) return rider_utility(c, s);
  }
  return unmatched_utility(rider);
}

double MatchingProblem::driver_utility(const Candidate& c) const {
  double extra = 0.0;
  for (std::size_t s = 0; s < c.riders.size(); ++s) extra += rider_utility(c, s);
  return driver_base_utility(c) + drivers[c.driver].rho * extra;
}

void MatchingProblem::validate() const {
  std::set<std::pair<int, std::vector<int>>> seen;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    const std::string where = "candidate " + std::to_string(i) + ": ";
    if (c.driver < 0 || c.driver >= static_cast<int>(drivers.size())) throw ValidationError(where + "unknown driver");
    if (!std::is_sorted(c.riders.begin(), c.riders.end()) ||
        std::adjacent_find(c.riders.begin(), c.riders.end()) != c.riders.end()) {
      throw ValidationError(where + "rider set must be strictly ascending");
    }
    for (int r : c.riders) {
      if (r < 0 || r >= static_cast<int>(riders.size())) throw ValidationError(where + "unknown rider");
    }
    if (c.rider_costs.size() != c.riders.size()) throw ValidationError(where + "rider cost count mismatch");
    if (!seen.emplace(c.driver, c.riders).second) throw ValidationError(where + "duplicate pair");
  }
}

std::vector<int> closure_violations(const MatchingProblem& p) {
  std::set<std::pair<int, std::vector<int>>> listed;
  for (const auto& c : p.candidates) listed.emplace(c.driver, c.riders);
  std::vector<int> bad;
  for (int i = 0; i < static_cast<int>(p.candidates.size()); ++i) {
    const auto& c = p.candidates[i];
    for (std::size_t k = 0; k < c.riders.size(); ++k) {
      auto sub = c.riders;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(k));
      if (!listed.count({c.driver, sub})) {
        bad.push_back(i);
        break;
      }
    }
  }
  return bad;
}

MatchingProblem parse_matching_problem(const std::string& source) {
  const json doc = detail::parse_document(source);
  MatchingProblem p;
  std::map<std::string, int> driver_index;
  std::map<std::string, int> rider_index;
  const auto& drivers = detail::array(doc, "drivers", "$");
  for (std::size_t i = 0; i < drivers.size(); ++i) {
    const std::string path = "$.drivers[" + std::to_string(i) + "]";
    ProblemDriver d;
    d.id = detail::text(drivers[i], "id", path);
    d.value = detail::number(drivers[i], "value", path);
    d.rho = detail::number(drivers[i], "rho", path);
    d.ir_threshold = drivers[i].contains("ir_threshold") ? detail::number(drivers[i], "ir_threshold", path) : kInfinity;
    if (drivers[i].contains("direct_time")) d.direct_time = detail::number(drivers[i], "direct_time", path);
    if (!driver_index.emplace(d.id, static_cast<int>(i)).second) throw ParseError(path + ".id: duplicate driver");
    p.drivers.push_back(std::move(d));
  }
  const auto& riders = detail::array(doc, "riders", "$");
  for (std::size_t i = 0; i < riders.size(); ++i) {
    const std::string path = "$.riders[" + std::to_string(i) + "]";
    ProblemRider r;
    r.id = detail::text(riders[i], "id", path);
    r.value = detail::number(riders[i], "value", path);
    r.lambda = detail::number(riders[i], "lambda", path);
    if (riders[i].contains("direct_time")) r.direct_time = detail::number(riders[i], "direct_time", path);
    if (!rider_index.emplace(r.id, static_cast<int>(i)).second) throw ParseError(path + ".id: duplicate rider");
    p.riders.push_back(std::move(r));
  }
  const auto& pairs = detail::array(doc, "pairs", "$");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string path = "$.pairs[" + std::to_string(i) + "]";
    Candidate c;
    const auto did = detail::text(pairs[i], "driver", path);
    const auto dit = driver_index.find(did);
    if (dit == driver_index.end()) throw ParseError(path + ".driver: unknown driver '" + did + "'");
    c.driver = dit->second;
    const auto& rs = detail::array(pairs[i], "riders", path);
    const auto& costs = detail::array(pairs[i], "rider_costs", path);
    if (rs.size() != costs.size()) throw ParseError(path + ".rider_costs: length differs from riders");
    std::vector<std::pair<int, double>> members;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      if (!rs[k].is_string() || !costs[k].is_number()) throw ParseError(path + ": malformed rider entry");
      const auto rit = rider_index.find(rs[k].get<std::string>());
      if (rit == rider_index.end()) throw ParseError(path + ".riders: unknown rider '" + rs[k].get<std::string>() + "'");
      members.emplace_back(rit->second, costs[k].get<double>());
    }
    std::sort(members.begin(), members.end());
    for (const auto& [r, cost] : members) {
      c.riders.push_back(r);
      c.rider_costs.push_back(cost);
    }
    c.driver_cost = detail::number(pairs[i], "driver_cost", path);
    c.cost = c.driver_cost;
    for (double rc : c.rider_costs) c.cost += rc;
    p.candidates.push_back(std::move(c));
  }
  // Without an explicit threshold a driver's outside option is driving alone.
  for (int d = 0; d < static_cast<int>(p.drivers.size()); ++d) {
    if (p.drivers[d].ir_threshold != kInfinity) continue;
    const int alone = p.find(d, {});
    p.drivers[d].ir_threshold = alone >= 0 ? p.driver_base_utility(p.candidates[alone]) : -kInfinity;
  }
  p.validate();
  return p;
}

MatchingProblem load_matching_problem(const std::string& path) {
  try {
    return parse_matching_problem(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string dump_matching_problem(const MatchingProblem& p) {
  json doc;
  json drivers = json::array();
  for (const auto& d : p.drivers) {
    json j{{"id", d.id}, {"value", d.value}, {"rho", d.rho}, {"direct_time", d.direct_time}};
    if (std::isfinite(d.ir_threshold)) j["ir_threshold"] = d.ir_threshold;
    drivers.push_back(std::move(j));
  }
  json riders = json::array();
  for (const auto& r : p.riders) {
    riders.push_back({{"id", r.id}, {"value", r.value}, {"lambda", r.lambda}, {"direct_time", r.direct_time}});
  }
  json pairs = json::array();
  for (const auto& c : p.candidates) {
    json ids = json::array();
    for (int r : c.riders) ids.push_back(p.riders[r].id);
    pairs.push_back({{"driver", p.drivers[c.driver].id},
                     {"riders", std::move(ids)},
                     {"driver_cost", c.driver_cost},
                     {"rider_costs", c.rider_costs}});
  }
  doc["drivers"] = std::move(drivers);
  doc["riders"] = std::move(riders);
  doc["pairs"] = std::move(pairs);
  return doc.dump(2) + "\n";
}

}  // namespace rideshare
