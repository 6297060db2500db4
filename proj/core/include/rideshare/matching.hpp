#pragma once

// Deterministic matchings over a cost table: the set-partitioning BIP with
// optional individual-rationality, stability and role-flexibility rows, a
// greedy baseline, and the blocking-pair audit.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rideshare/matching_problem.hpp"
#include "rideshare/solver.hpp"

namespace rideshare {

struct DeterministicMatching {
  /// Chosen candidate per driver; -1 for a flexible driver riding as a rider.
  std::vector<int> assignment;
  /// Per rider, 1 when some chosen candidate contains it.
  std::vector<std::uint8_t> matched;
  double cost = 0.0;

  friend bool operator==(const DeterministicMatching&, const DeterministicMatching&) = default;
};

enum class ObjectiveMode { kCost, kWelfare };

struct MatchOptions {
  bool require_ir = false;
  bool require_stability = false;
  /// (driver, mirror rider) pairs: the user either drives or rides.
  std::vector<std::pair<int, int>> role_flex;
  /// Per-rider weights subtracted from the cost of candidates serving them.
  std::vector<double> rider_weights;
  /// Per-driver weights subtracted from every candidate of the driver.
  std::vector<double> driver_weights;
  ObjectiveMode objective = ObjectiveMode::kCost;
  /// Drop trip and alternative costs, leaving only the weights.
  bool zero_costs = false;
  /// Solve connected driver/rider components as separate programs.
  bool decompose = true;
  int jobs = 1;
  BranchAndBoundOptions bnb;
};

struct MatchResult {
  SolveStatus status = SolveStatus::kInfeasible;
  DeterministicMatching matching;
  /// Value of the solved objective, weights included.
  double objective = 0.0;
  std::int64_t nodes = 0;
  int components = 0;

  [[nodiscard]] bool optimal() const { return status == SolveStatus::kOptimal; }
};

/// Total cost: chosen trip costs plus alternative costs of unmatched riders
/// (mirror riders of flexible drivers excluded).
double matching_cost(const MatchingProblem& problem, const DeterministicMatching& m,
                     const std::vector<std::pair<int, int>>& role_flex = {});

/// Builds a matching from one chosen candidate per driver.
DeterministicMatching make_matching(const MatchingProblem& problem, std::vector<int> assignment,
                                    const std::vector<std::pair<int, int>>& role_flex = {});

/// Throws ValidationError on bad weights or role-flex pairs.
void check_options(const MatchingProblem& problem, const MatchOptions& opts);

/// Whether a candidate may appear under the options (role-flex exclusions).
bool candidate_allowed(const MatchingProblem& problem, const Candidate& c, const MatchOptions& opts);

/// Objective coefficient of a candidate and of leaving a rider unmatched.
double candidate_coefficient(const MatchingProblem& problem, const Candidate& c, const MatchOptions& opts);
double unmatched_coefficient(const MatchingProblem& problem, int rider, const MatchOptions& opts);

/// Whether every user in the candidate meets its outside option.
bool candidate_ir(const MatchingProblem& problem, const Candidate& c, double tol = 1e-9);

MatchResult solve_matching(const MatchingProblem& problem, const MatchOptions& opts = {});

struct GreedyResult {
  DeterministicMatching best;
  DeterministicMatching worst;
  int restarts = 0;
};

/// Random driver orders; each driver takes the candidate among unmatched
/// riders minimising c_dS − Σ λ_r. Restarts default to |D|².
GreedyResult greedy_baseline(const MatchingProblem& problem, std::uint64_t seed,
                             std::optional<int> restarts = std::nullopt);

struct UserUtilities {
  std::vector<double> drivers;
  std::vector<double> riders;
};

UserUtilities utilities(const MatchingProblem& problem, const DeterministicMatching& m);
bool is_ir(const MatchingProblem& problem, const DeterministicMatching& m, double tol = 1e-9);

/// Candidates outside the matching whose driver and every rider strictly
/// gain over their current utilities.
std::vector<int> blocking_pairs(const MatchingProblem& problem, const DeterministicMatching& m, double tol = 1e-9);

}  // namespace rideshare
