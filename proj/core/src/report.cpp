#include "rideshare/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace rideshare {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

std::string rider_ids(const MatchingProblem& p, const std::vector<int>& riders) {
  std::string out;
  for (int r : riders) {
    if (!out.empty()) out += ';';
    out += p.riders[r].id;
  }
  return out;
}

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

std::string matching_csv(const MatchingProblem& p, const DeterministicMatching& m) {
  std::ostringstream os;
  os << "driver,riders,cost,driver_utility,rider_utilities\n";
  for (std::size_t d = 0; d < p.drivers.size(); ++d) {
    os << csv_field(p.drivers[d].id) << ',';
    const int ci = m.assignment[d];
    if (ci < 0) {
      os << "riding,,,\n";
      continue;
    }
    const auto& c = p.candidates[ci];
    std::string utils;
    for (std::size_t s = 0; s < c.riders.size(); ++s) {
      if (s) utils += ';';
      utils += format_number(p.rider_utility(c, s));
    }
    os << csv_field(rider_ids(p, c.riders)) << ',' << format_number(c.cost) << ','
       << format_number(p.driver_utility(c)) << ',' << utils << '\n';
  }
  return os.str();
}

std::string matching_summary_csv(const MatchingProblem& p, const DeterministicMatching& m, double seconds) {
  int matched = 0;
  for (auto f : m.matched) matched += f;
  std::ostringstream os;
  os << "total_cost,matched_riders,riders,drivers,runtime_s\n"
     << format_number(m.cost) << ',' << matched << ',' << p.riders.size() << ',' << p.drivers.size() << ','
     << format_number(seconds) << '\n';
  return os.str();
}

std::string lottery_csv(const MatchingProblem& p, const ProbabilisticMatching& pm) {
  std::ostringstream os;
  os << "support,probability,driver,riders,cost\n";
  for (std::size_t j = 0; j < pm.support.size(); ++j) {
    const auto& m = pm.support[j];
    for (std::size_t d = 0; d < p.drivers.size(); ++d) {
      os << j << ',' << format_number(pm.probability[j]) << ',' << csv_field(p.drivers[d].id) << ',';
      const int ci = m.assignment[d];
      if (ci < 0) {
        os << "riding,\n";
      } else {
        os << csv_field(rider_ids(p, p.candidates[ci].riders)) << ',' << format_number(p.candidates[ci].cost) << '\n';
      }
    }
  }
  return os.str();
}

std::string frontier_csv(const ParetoFrontier& f) {
  std::ostringstream os;
  os << "theta,cost,slope\n";
  for (std::size_t i = 0; i < f.breakpoints.size(); ++i) {
    os << format_number(f.breakpoints[i].theta) << ',' << format_number(f.breakpoints[i].cost) << ',';
    if (i < f.slopes.size()) os << format_number(f.slopes[i]);
    os << '\n';
  }
  return os.str();
}

std::string tradeoff_csv(const TradeoffReport& r) {
  std::ostringstream os;
  os << "theta,min_cost,fair_cost,pof,spof,pof_bound,spof_bound,stable_cost,pos,theta0,"
        "seconds_matching,seconds_fairness,seconds_stability\n";
  const auto row = [&](std::size_t i, bool has_theta) {
    if (has_theta) {
      os << format_number(r.thetas[i]) << ',' << format_number(r.min_cost) << ',' << optional_number(r.fair_costs[i])
         << ',' << csv_field(to_string(r.pof[i])) << ',' << csv_field(to_string(r.spof[i])) << ','
         << optional_number(r.pof_bound[i]) << ',' << optional_number(r.spof_bound[i]) << ',';
    } else {
      os << ',' << format_number(r.min_cost) << ",,,,,,";
    }
    os << optional_number(r.stable_cost) << ',' << csv_field(to_string(r.pos)) << ','
       << (r.no_feasible_riders ? std::string("no feasible riders") : format_number(r.theta0)) << ','
       << format_number(r.seconds_matching) << ',' << format_number(r.seconds_fairness) << ','
       << format_number(r.seconds_stability) << '\n';
  };
  if (r.thetas.empty()) row(0, false);
  for (std::size_t i = 0; i < r.thetas.size(); ++i) row(i, true);
  return os.str();
}

double reduced_travel_time(const MatchingProblem& p, const DeterministicMatching& m) {
  double saved = 0.0;
  for (const auto& d : p.drivers) saved += d.direct_time;
  for (std::size_t r = 0; r < p.riders.size(); ++r) {
    if (m.matched[r]) saved += p.riders[r].direct_time;
  }
  for (std::size_t d = 0; d < p.drivers.size(); ++d) {
    const int ci = m.assignment[d];
    if (ci < 0) continue;
    const auto& sched = p.candidates[ci].schedule;
    saved -= sched ? sched->times.back() - sched->times.front() : p.drivers[d].direct_time;
  }
  return saved;
}

std::string runs_csv(const std::vector<RunRecord>& runs) {
  std::ostringstream os;
  os << "config,seed,drivers,riders,cost,matched,reduced_travel_time,runtime_s\n";
  for (const auto& r : runs) {
    os << csv_field(r.config) << ',' << r.seed << ',' << r.drivers << ',' << r.riders << ',' << format_number(r.cost)
       << ',' << r.matched << ',' << format_number(r.reduced_travel_time) << ',' << format_number(r.seconds) << '\n';
  }
  return os.str();
}

std::string runs_summary_csv(const std::vector<RunRecord>& runs) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord*>> groups;
  for (const auto& r : runs) {
    auto& g = groups[r.config];
    if (g.empty()) order.push_back(r.config);
    g.push_back(&r);
  }
  std::ostringstream os;
  os << "config,runs,mean_cost,mean_matched,mean_reduced_travel_time,mean_runtime_s\n";
  for (const auto& name : order) {
    const auto& g = groups[name];
    double cost = 0, matched = 0, saved = 0, secs = 0;
    for (const auto* r : g) {
      cost += r->cost;
      matched += r->matched;
      saved += r->reduced_travel_time;
      secs += r->seconds;
    }
    const double n = static_cast<double>(g.size());
    os << csv_field(name) << ',' << g.size() << ',' << format_number(cost / n) << ',' << format_number(matched / n)
       << ',' << format_number(saved / n) << ',' << format_number(secs / n) << '\n';
  }
  return os.str();
}

}  // namespace rideshare
