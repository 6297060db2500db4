#pragma once

// Cost ratios of fairness and stability, plus brute-force oracles used to
// cross-check the optimisation pipeline on small inputs.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rideshare/fairness.hpp"
#include "rideshare/matching.hpp"
#include "rideshare/model.hpp"
#include "rideshare/trip.hpp"

namespace rideshare {

enum class OracleTiming { kGrid, kExact };

/// Exhaustive trip search: every capacity-respecting interleaving. With
/// kGrid, routes with at most two riders are timed by a grid over pickup
/// waits plus an exact search over the start time; everything else is timed
/// by solve_timing. Throws ValidationError for more than three riders.
TripResult oracle_trip_cost(const Instance& inst, int driver, const std::vector<int>& riders,
                            OracleTiming timing = OracleTiming::kGrid, double grid_step = 0.05);

inline constexpr std::int64_t kMatchingEnumerationLimit = 1'000'000;

/// Every deterministic matching: one allowed candidate per driver with
/// disjoint riders (a flexible driver may instead ride). Throws LimitError
/// past `limit` matchings.
std::vector<DeterministicMatching> enumerate_matchings(const MatchingProblem& problem,
                                                       const std::vector<std::pair<int, int>>& role_flex = {},
                                                       std::int64_t limit = kMatchingEnumerationLimit);

/// Objective of a matching under the options (weights included).
double matching_objective(const MatchingProblem& problem, const DeterministicMatching& m, const MatchOptions& opts);

/// Best matching by enumeration under the same flags as solve_matching;
/// nullopt when none qualifies.
std::optional<DeterministicMatching> oracle_matching(const MatchingProblem& problem, const MatchOptions& opts = {},
                                                     std::int64_t limit = kMatchingEnumerationLimit);

/// Maximum fairness level over an explicit matching list.
double enumerated_theta0(const MatchingProblem& problem, const std::vector<DeterministicMatching>& all);

/// Min (or max) expected cost of a θ-fair lottery over an explicit list;
/// nullopt when infeasible.
std::optional<double> enumerated_fair_cost(const MatchingProblem& problem, const std::vector<DeterministicMatching>& all,
                                           double theta, Sense sense = Sense::kMinimize);

enum class RatioStatus { kDefined, kUndefined, kNotComputed, kNoStableMatching };

struct CostRatio {
  RatioStatus status = RatioStatus::kUndefined;
  double value = std::numeric_limits<double>::quiet_NaN();

  [[nodiscard]] bool defined() const { return status == RatioStatus::kDefined; }
};

std::string to_string(const CostRatio& r);

/// Unconstrained minimum cost.
double min_cost(const MatchingProblem& problem, const MatchOptions& base = {});

/// Per-driver rider sets of the unconstrained min-cost matching.
std::vector<std::vector<int>> min_cost_sets(const MatchingProblem& problem);

CostRatio pof(const MatchingProblem& problem, double theta, const FairnessOptions& options = {});

struct SpofLimits {
  /// Drivers plus riders.
  int max_users = 10;
  std::int64_t max_matchings = 100'000;
};

CostRatio spof(const MatchingProblem& problem, double theta, const SpofLimits& limits = {});

CostRatio pos(const MatchingProblem& problem, const MatchOptions& base = {});

struct TradeoffReport {
  double min_cost = 0.0;
  std::optional<double> stable_cost;
  double theta0 = 0.0;
  bool no_feasible_riders = false;
  std::vector<double> thetas;
  std::vector<std::optional<double>> fair_costs;
  std::vector<CostRatio> pof;
  std::vector<CostRatio> spof;
  std::vector<std::optional<double>> pof_bound;
  std::vector<std::optional<double>> spof_bound;
  CostRatio pos;
  double seconds_matching = 0.0;
  double seconds_fairness = 0.0;
  double seconds_stability = 0.0;
};

TradeoffReport tradeoff_report(const MatchingProblem& problem, const std::vector<double>& thetas,
                               const FairnessOptions& options = {}, const SpofLimits& limits = {});

}  // namespace rideshare
