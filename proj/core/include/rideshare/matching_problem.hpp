#pragma once

// The cost table over feasible (driver, rider set) pairs. Produced by RTV
// enumeration or injected directly; consumed by matching and fairness.

#include <optional>
#include <string>
#include <vector>

#include "rideshare/trip.hpp"

namespace rideshare {

struct Candidate {
  int driver = -1;
  /// Ascending rider indices of the problem.
  std::vector<int> riders;
  double cost = 0.0;  // c_dS
  double driver_cost = 0.0;
  /// Aligned with `riders`.
  std::vector<double> rider_costs;
  std::optional<DriverSchedule> schedule;
};

struct ProblemDriver {
  std::string id;
  double value = 0.0;
  double rho = 0.0;
  /// Utility of driving alone; individual rationality compares against it.
  double ir_threshold = 0.0;
  /// Travel minutes of the direct trip, for reporting.
  double direct_time = 0.0;
};

struct ProblemRider {
  std::string id;
  double value = 0.0;
  double lambda = 0.0;
  double direct_time = 0.0;
};

struct MatchingProblem {
  std::vector<ProblemDriver> drivers;
  std::vector<ProblemRider> riders;
  std::vector<Candidate> candidates;

  /// Candidate indices per driver, in table order.
  [[nodiscard]] std::vector<std::vector<int>> by_driver() const;
  /// Riders appearing in at least one candidate.
  [[nodiscard]] std::vector<int> feasible_riders() const;
  /// Index of (driver, riders) or -1.
  [[nodiscard]] int find(int driver, const std::vector<int>& riders) const;

  [[nodiscard]] double rider_utility(const Candidate& c, std::size_t slot) const {
    return riders[c.riders[slot]].value - c.rider_costs[slot];
  }
  [[nodiscard]] double rider_utility_in(const Candidate& c, int rider) const;
  [[nodiscard]] double unmatched_utility(int rider) const { return riders[rider].value - riders[rider].lambda; }
  /// ν_d − C^d, before the extra utility from riders.
  [[nodiscard]] double driver_base_utility(const Candidate& c) const {
    return drivers[c.driver].value - c.driver_cost;
  }
  /// ν_d − C^d + ρ_d Σ U_r.
  [[nodiscard]] double driver_utility(const Candidate& c) const;

  /// Throws ValidationError on dangling indices, unsorted rider sets,
  /// duplicate pairs, or cost vectors of the wrong length.
  void validate() const;
};

/// Subset closure: every subset missing one rider is also listed. Returns
/// the offending candidate indices.
std::vector<int> closure_violations(const MatchingProblem& problem);

MatchingProblem parse_matching_problem(const std::string& text);
MatchingProblem load_matching_problem(const std::string& path);
std::string dump_matching_problem(const MatchingProblem& problem);

}  // namespace rideshare
