#pragma once

// Dense-tableau simplex and 0/1 branch-and-bound used by every optimisation
// layer in the library (trip timing, matching, fairness master problems).

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rideshare/errors.hpp"

namespace rideshare {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace tolerance {
inline constexpr double kFeasibility = 1e-7;
inline constexpr double kObjective = 1e-6;
inline constexpr double kIntegrality = 1e-6;
inline constexpr double kPivot = 1e-9;
}  // namespace tolerance

enum class Sense { kMinimize, kMaximize };
enum class Comparator { kLessEqual, kEqual, kGreaterEqual };
enum class SolveStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(SolveStatus status);

struct Term {
  int var;
  double coef;
};

struct Constraint {
  std::vector<Term> terms;
  Comparator cmp = Comparator::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

struct LinearProgram {
  Sense sense = Sense::kMinimize;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> names;
  std::vector<Constraint> rows;

  int add_variable(double cost, double lo = 0.0, double hi = kInfinity, std::string name = {});
  int add_constraint(std::vector<Term> terms, Comparator cmp, double rhs, std::string name = {});

  [[nodiscard]] int num_vars() const { return static_cast<int>(objective.size()); }
  [[nodiscard]] int num_rows() const { return static_cast<int>(rows.size()); }

  /// Throws ValidationError describing the first malformed element.
  void validate() const;
};

/// Dual values follow the sensitivity convention: duals[i] is the rate of
/// change of the optimal objective per unit increase of rows[i].rhs. For a
/// minimisation, >= rows therefore carry nonnegative duals and <= rows
/// nonpositive ones. reduced_costs[j] = c_j - sum_i duals[i] * a_ij.
struct LpSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> primal;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  std::int64_t pivots = 0;

  [[nodiscard]] bool optimal() const { return status == SolveStatus::kOptimal; }
};

struct SimplexOptions {
  std::int64_t max_pivots = 5'000'000;
};

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// A linear program whose variables are all restricted to {0, 1}.
struct BinaryIntegerProgram {
  LinearProgram relaxation;

  /// Adds a binary variable; bounds are fixed at [0, 1].
  int add_variable(double cost, std::string name = {}) {
    return relaxation.add_variable(cost, 0.0, 1.0, std::move(name));
  }
  int add_constraint(std::vector<Term> terms, Comparator cmp, double rhs, std::string name = {}) {
    return relaxation.add_constraint(std::move(terms), cmp, rhs, std::move(name));
  }
  void validate() const;
};

struct BipSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<std::uint8_t> values;
  double objective = 0.0;
  std::int64_t nodes = 0;

  [[nodiscard]] bool optimal() const { return status == SolveStatus::kOptimal; }
};

struct BranchAndBoundOptions {
  std::int64_t max_nodes = 2'000'000;
  SimplexOptions simplex;
};

BipSolution solve_bip(const BinaryIntegerProgram& bip, const BranchAndBoundOptions& options = {});

/// Human-readable LP-format dump for manual inspection.
std::string to_lp_text(const LinearProgram& lp);

}  // namespace rideshare
