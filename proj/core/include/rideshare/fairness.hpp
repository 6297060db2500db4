#pragma once

// θ-fair probabilistic matchings by column generation and the exact
// cost/fairness Pareto frontier.

#include <optional>
#include <vector>

#include "rideshare/matching.hpp"

namespace rideshare {

inline constexpr double kProbabilityCutoff = 1e-9;

struct ProbabilisticMatching {
  std::vector<DeterministicMatching> support;
  std::vector<double> probability;
  /// Matched probability per rider (all riders of the problem).
  std::vector<double> phi;
  double expected_cost = 0.0;
};

struct FairnessOptions {
  /// Base options for pricing; weights and cost flags are overwritten.
  MatchOptions match;
  int max_iterations = 20000;
};

struct MaxFairnessResult {
  /// Infeasible only when no deterministic matching meets the pricing rows.
  SolveStatus status = SolveStatus::kOptimal;
  /// Set when no rider appears in any candidate; theta0 is then meaningless.
  bool no_feasible_riders = false;
  double theta0 = 0.0;
  ProbabilisticMatching matching;
  int iterations = 0;
};

MaxFairnessResult max_fairness(const MatchingProblem& problem, const FairnessOptions& options = {});

struct FairResult {
  SolveStatus status = SolveStatus::kInfeasible;
  ProbabilisticMatching matching;
  double cost = 0.0;
  /// Sum of the fairness-row duals: a subgradient of cost in θ.
  double slope = 0.0;
  int iterations = 0;

  [[nodiscard]] bool optimal() const { return status == SolveStatus::kOptimal; }
};

/// Minimum expected cost with every feasible rider matched with probability
/// at least θ. Infeasible beyond the maximum fairness level. Pass a
/// precomputed max_fairness result to skip recomputing it.
FairResult min_cost_fair(const MatchingProblem& problem, double theta, const FairnessOptions& options = {},
                         const MaxFairnessResult* fairest = nullptr);

/// Per-rider thresholds (indexed like problem.riders; entries for riders
/// without candidates are ignored).
FairResult min_cost_fair_hetero(const MatchingProblem& problem, const std::vector<double>& thetas,
                                const FairnessOptions& options = {});

struct FrontierPoint {
  double theta = 0.0;
  double cost = 0.0;
};

struct ParetoFrontier {
  std::vector<FrontierPoint> breakpoints;
  /// slopes[i] belongs to the segment between breakpoints i and i+1.
  std::vector<double> slopes;
  double theta0 = 0.0;
  bool approximate = false;
  bool no_feasible_riders = false;
  int probes = 0;

  /// Piecewise-linear interpolation; nullopt outside [0, θ⁰].
  [[nodiscard]] std::optional<double> evaluate(double theta) const;
};

ParetoFrontier pareto_frontier(const MatchingProblem& problem, int max_iters = 200,
                               const FairnessOptions& options = {});

struct ExPostReport {
  /// Support indices with at least one blocking pair, and those pairs.
  std::vector<int> unstable;
  std::vector<std::vector<int>> blocking;

  [[nodiscard]] bool stable() const { return unstable.empty(); }
};

ExPostReport check_ex_post_stability(const MatchingProblem& problem, const ProbabilisticMatching& pm);

}  // namespace rideshare
