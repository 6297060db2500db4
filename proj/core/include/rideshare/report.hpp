#pragma once

// CSV emission. Column orders are fixed; see README for the schemas.

#include <cstdint>
#include <string>
#include <vector>

#include "rideshare/analysis.hpp"
#include "rideshare/fairness.hpp"
#include "rideshare/matching.hpp"

namespace rideshare {

std::string csv_field(const std::string& s);
std::string format_number(double v);

/// One row per driver: driver,riders,cost,driver_utility,rider_utilities.
/// Riders are ';'-separated ids; a riding flexible driver shows "riding".
std::string matching_csv(const MatchingProblem& problem, const DeterministicMatching& m);

std::string matching_summary_csv(const MatchingProblem& problem, const DeterministicMatching& m, double seconds);

/// support,probability,driver,riders,cost
std::string lottery_csv(const MatchingProblem& problem, const ProbabilisticMatching& pm);

/// theta,cost,slope; the slope belongs to the segment starting at the row.
std::string frontier_csv(const ParetoFrontier& frontier);

std::string tradeoff_csv(const TradeoffReport& report);

/// Vehicle minutes saved against everyone travelling alone: direct times of
/// all users minus driver schedule durations and unmatched riders' direct
/// times. Candidates without a schedule count their driver's direct time.
double reduced_travel_time(const MatchingProblem& problem, const DeterministicMatching& m);

struct RunRecord {
  std::string config;
  std::uint64_t seed = 0;
  int drivers = 0;
  int riders = 0;
  double cost = 0.0;
  int matched = 0;
  double reduced_travel_time = 0.0;
  double seconds = 0.0;
};

std::string runs_csv(const std::vector<RunRecord>& runs);

/// Means per config over seeds, configs in first-seen order.
std::string runs_summary_csv(const std::vector<RunRecord>& runs);

}  // namespace rideshare
