#include "rideshare/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rideshare {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

int LinearProgram::add_variable(double cost, double lo, double hi, std::string name) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(std::move(name));
  return num_vars() - 1;
}

int LinearProgram::add_constraint(std::vector<Term> terms, Comparator cmp, double rhs, std::string name) {
  rows.push_back(Constraint{std::move(terms), cmp, rhs, std::move(name)});
  return num_rows() - 1;
}

void LinearProgram::validate() const {
  const auto n = objective.size();
  if (lower.size() != n || upper.size() != n) {
    throw ValidationError("variable bound arrays do not match the objective length");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) {
      throw ValidationError("objective coefficient of variable " + std::to_string(j) + " is not finite");
    }
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInfinity || upper[j] == -kInfinity) {
      throw ValidationError("variable " + std::to_string(j) + " has unusable bounds");
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (!std::isfinite(row.rhs)) {
      throw ValidationError("row " + std::to_string(i) + " has a non-finite right-hand side");
    }
    for (const auto& t : row.terms) {
      if (t.var < 0 || static_cast<std::size_t>(t.var) >= n) {
        throw ValidationError("row " + std::to_string(i) + " references undeclared variable " +
                              std::to_string(t.var));
      }
      if (!std::isfinite(t.coef)) {
        throw ValidationError("row " + std::to_string(i) + " has a non-finite coefficient");
      }
    }
  }
}

void BinaryIntegerProgram::validate() const {
  relaxation.validate();
  for (int j = 0; j < relaxation.num_vars(); ++j) {
    if (relaxation.lower[j] != 0.0 || relaxation.upper[j] != 1.0) {
      throw ValidationError("variable " + std::to_string(j) + " of a binary program must have bounds [0, 1]");
    }
  }
}

namespace {

// How an original variable maps onto nonnegative internal columns.
enum class VarMap { kShift, kNegate, kSplit };

struct Mapping {
  VarMap kind = VarMap::kShift;
  int col = -1;   // primary internal column
  int col2 = -1;  // negative part for split variables
  double offset = 0.0;
};

// Bounded-variable primal simplex on a dense tableau with Bland's rule.
// Internal form: min c'x s.t. Ax = b (b >= 0), 0 <= x <= ub.
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), t_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * n_ + j]; }
  [[nodiscard]] double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * n_ + j]; }

  int m_;
  int n_;
  std::vector<double> t_;
  std::vector<double> beta;      // values of basic variables per row
  std::vector<int> basis;        // basic column per row
  std::vector<double> ub;        // upper bound per column
  std::vector<char> at_upper;    // nonbasic-at-upper flag per column
  std::vector<char> is_basic;
  std::vector<double> d;         // reduced costs
  std::int64_t pivots = 0;

  void compute_reduced_costs(const std::vector<double>& cost) {
    d = cost;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[static_cast<std::size_t>(i) * n_];
      for (int j = 0; j < n_; ++j) d[j] -= cb * row[j];
    }
  }

  void pivot(int r, int q) {
    double* prow = &t_[static_cast<std::size_t>(r) * n_];
    const double inv = 1.0 / prow[q];
    for (int j = 0; j < n_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[static_cast<std::size_t>(i) * n_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (int j = 0; j < n_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double f = d[q];
    if (f != 0.0) {
      for (int j = 0; j < n_; ++j) d[j] -= f * prow[j];
      d[q] = 0.0;
    }
    is_basic[basis[r]] = 0;
    basis[r] = q;
    is_basic[q] = 1;
    at_upper[q] = 0;
    ++pivots;
  }

  // Runs primal simplex iterations until optimal; returns false when unbounded.
  bool optimize(double dj_tol, std::int64_t max_pivots) {
    for (;;) {
      if (pivots > max_pivots) throw LimitError("simplex pivot limit exceeded");
      int q = -1;
      int dir = 0;
      for (int j = 0; j < n_; ++j) {
        if (is_basic[j] || ub[j] <= 0.0) continue;
        if (!at_upper[j] && d[j] < -dj_tol) {
          q = j;
          dir = 1;
          break;
        }
        if (at_upper[j] && d[j] > dj_tol) {
          q = j;
          dir = -1;
          break;
        }
      }
      if (q < 0) return true;

      double best = ub[q];
      int leave = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double a = dir * at(i, q);
        const int b = basis[i];
        double ratio;
        bool to_upper;
        if (a > tolerance::kPivot) {
          ratio = std::max(beta[i], 0.0) / a;
          to_upper = false;
        } else if (a < -tolerance::kPivot && ub[b] < kInfinity) {
          ratio = std::max(ub[b] - beta[i], 0.0) / -a;
          to_upper = true;
        } else {
          continue;
        }
        if (ratio < best || (ratio == best && leave >= 0 && b < basis[leave])) {
          best = ratio;
          leave = i;
          leave_to_upper = to_upper;
        }
      }
      if (leave < 0 && best == kInfinity) return false;

      const double step = best;
      for (int i = 0; i < m_; ++i) beta[i] -= dir * step * at(i, q);
      if (leave < 0) {
        at_upper[q] = dir > 0 ? 1 : 0;
        ++pivots;
        continue;
      }
      const double entering_value = (at_upper[q] ? ub[q] : 0.0) + dir * step;
      const int out = basis[leave];
      pivot(leave, q);
      beta[leave] = entering_value;
      at_upper[out] = leave_to_upper ? 1 : 0;
    }
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  LpSolution sol;
  const int n = lp.num_vars();
  const int m = lp.num_rows();

  for (int j = 0; j < n; ++j) {
    if (lp.lower[j] > lp.upper[j] + tolerance::kFeasibility) {
      sol.status = SolveStatus::kInfeasible;
      return sol;
    }
  }

  const double sense_sign = lp.sense == Sense::kMaximize ? -1.0 : 1.0;

  // Structural column layout.
  std::vector<Mapping> map(n);
  std::vector<double> cost;
  std::vector<double> ub;
  for (int j = 0; j < n; ++j) {
    const double c = sense_sign * lp.objective[j];
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    auto& mp = map[j];
    if (lo > -kInfinity) {
      mp.kind = VarMap::kShift;
      mp.offset = lo;
      mp.col = static_cast<int>(cost.size());
      cost.push_back(c);
      ub.push_back(hi == kInfinity ? kInfinity : std::max(hi - lo, 0.0));
    } else if (hi < kInfinity) {
      mp.kind = VarMap::kNegate;
      mp.offset = hi;
      mp.col = static_cast<int>(cost.size());
      cost.push_back(-c);
      ub.push_back(kInfinity);
    } else {
      mp.kind = VarMap::kSplit;
      mp.col = static_cast<int>(cost.size());
      cost.push_back(c);
      ub.push_back(kInfinity);
      mp.col2 = static_cast<int>(cost.size());
      cost.push_back(-c);
      ub.push_back(kInfinity);
    }
  }
  const int n_struct = static_cast<int>(cost.size());

  // Row data after substitution, before sign normalisation.
  std::vector<double> rhs(m);
  std::vector<double> row_sign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    double b = lp.rows[i].rhs;
    for (const auto& t : lp.rows[i].terms) {
      const auto& mp = map[t.var];
      if (mp.kind != VarMap::kSplit) b -= t.coef * mp.offset;
    }
    rhs[i] = b;
    if (b < 0.0) row_sign[i] = -1.0;
  }

  // Slack and artificial columns; init_col[i] has coefficient +1 in normalised row i.
  std::vector<int> slack_col(m, -1);
  std::vector<double> slack_coef(m, 0.0);
  std::vector<int> init_col(m, -1);
  int next_col = n_struct;
  for (int i = 0; i < m; ++i) {
    const auto cmp = lp.rows[i].cmp;
    if (cmp == Comparator::kEqual) continue;
    slack_col[i] = next_col++;
    slack_coef[i] = (cmp == Comparator::kLessEqual ? 1.0 : -1.0) * row_sign[i];
    if (slack_coef[i] > 0.0) init_col[i] = slack_col[i];
  }
  std::vector<char> is_artificial;
  const int n_before_art = next_col;
  for (int i = 0; i < m; ++i) {
    if (init_col[i] < 0) init_col[i] = next_col++;
  }
  const int total = next_col;
  cost.resize(total, 0.0);
  ub.resize(total, kInfinity);
  is_artificial.assign(total, 0);
  for (int j = n_before_art; j < total; ++j) is_artificial[j] = 1;

  Tableau tab(m, total);
  tab.ub = ub;
  tab.at_upper.assign(total, 0);
  tab.is_basic.assign(total, 0);
  tab.basis.assign(m, -1);
  tab.beta.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const double s = row_sign[i];
    for (const auto& t : lp.rows[i].terms) {
      const auto& mp = map[t.var];
      switch (mp.kind) {
        case VarMap::kShift:
          tab.at(i, mp.col) += s * t.coef;
          break;
        case VarMap::kNegate:
          tab.at(i, mp.col) -= s * t.coef;
          break;
        case VarMap::kSplit:
          tab.at(i, mp.col) += s * t.coef;
          tab.at(i, mp.col2) -= s * t.coef;
          break;
      }
    }
    if (slack_col[i] >= 0) tab.at(i, slack_col[i]) = slack_coef[i];
    tab.at(i, init_col[i]) = 1.0;
    tab.basis[i] = init_col[i];
    tab.is_basic[init_col[i]] = 1;
    tab.beta[i] = s * rhs[i];
  }

  double cost_scale = 1.0;
  for (double c : cost) cost_scale = std::max(cost_scale, std::abs(c));
  const double dj_tol = 1e-9 * cost_scale;

  // Phase 1.
  bool has_artificial = false;
  for (int i = 0; i < m; ++i) has_artificial = has_artificial || is_artificial[init_col[i]];
  if (has_artificial) {
    std::vector<double> phase1(total, 0.0);
    for (int j = 0; j < total; ++j) phase1[j] = is_artificial[j] ? 1.0 : 0.0;
    tab.compute_reduced_costs(phase1);
    tab.optimize(1e-11, options.max_pivots);
    double infeas = 0.0;
    double b_scale = 1.0;
    for (int i = 0; i < m; ++i) {
      b_scale = std::max(b_scale, std::abs(rhs[i]));
      if (is_artificial[tab.basis[i]]) infeas += std::max(tab.beta[i], 0.0);
    }
    if (infeas > tolerance::kFeasibility * b_scale) {
      sol.status = SolveStatus::kInfeasible;
      sol.pivots = tab.pivots;
      return sol;
    }
    for (int j = 0; j < total; ++j) {
      if (is_artificial[j]) tab.ub[j] = 0.0;
    }
    // Drive remaining artificials out of the basis with degenerate pivots.
    for (int i = 0; i < m; ++i) {
      if (!is_artificial[tab.basis[i]]) continue;
      int q = -1;
      double best = tolerance::kPivot;
      for (int j = 0; j < total; ++j) {
        if (is_artificial[j] || tab.is_basic[j]) continue;
        if (std::abs(tab.at(i, j)) > best) {
          best = std::abs(tab.at(i, j));
          q = j;
        }
      }
      if (q < 0) {
        tab.beta[i] = 0.0;
        continue;  // redundant row; artificial stays basic at zero
      }
      const double value = tab.at_upper[q] ? tab.ub[q] : 0.0;
      const double diff = tab.beta[i];
      // Keep every other basic value consistent with the pivot.
      for (int r = 0; r < m; ++r) {
        if (r == i) continue;
        tab.beta[r] -= tab.at(r, q) * (diff / tab.at(i, q));
      }
      const int out = tab.basis[i];
      tab.d.assign(total, 0.0);
      tab.pivot(i, q);
      tab.beta[i] = value + diff / tab.at(i, q);
      tab.at_upper[out] = 0;
    }
  }

  // Phase 2.
  tab.compute_reduced_costs(cost);
  if (!tab.optimize(dj_tol, options.max_pivots)) {
    sol.status = SolveStatus::kUnbounded;
    sol.pivots = tab.pivots;
    return sol;
  }

  std::vector<double> x(total, 0.0);
  for (int j = 0; j < total; ++j) {
    if (!tab.is_basic[j] && tab.at_upper[j]) x[j] = tab.ub[j];
  }
  for (int i = 0; i < m; ++i) x[tab.basis[i]] = tab.beta[i];

  sol.status = SolveStatus::kOptimal;
  sol.pivots = tab.pivots;
  sol.primal.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const auto& mp = map[j];
    double v = 0.0;
    switch (mp.kind) {
      case VarMap::kShift:
        v = mp.offset + x[mp.col];
        break;
      case VarMap::kNegate:
        v = mp.offset - x[mp.col];
        break;
      case VarMap::kSplit:
        v = x[mp.col] - x[mp.col2];
        break;
    }
    sol.primal[j] = std::clamp(v, lp.lower[j], lp.upper[j]);
  }
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.primal[j];

  // y_i = c_init - d_init on the normalised row; undo normalisation and sense.
  sol.duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const int c = init_col[i];
    const double y_norm = cost[c] - tab.d[c];
    sol.duals[i] = sense_sign * row_sign[i] * y_norm;
  }
  sol.reduced_costs.assign(lp.objective.begin(), lp.objective.end());
  for (int i = 0; i < m; ++i) {
    for (const auto& t : lp.rows[i].terms) sol.reduced_costs[t.var] -= sol.duals[i] * t.coef;
  }
  return sol;
}

namespace {

struct BbNode {
  std::vector<std::pair<int, std::uint8_t>> fixed;
};

}  // namespace

BipSolution solve_bip(const BinaryIntegerProgram& bip, const BranchAndBoundOptions& options) {
  bip.validate();
  const auto& base = bip.relaxation;
  const int n = base.num_vars();
  const double sense_sign = base.sense == Sense::kMaximize ? -1.0 : 1.0;

  BipSolution best;
  double incumbent = kInfinity;  // in minimisation terms

  std::vector<BbNode> stack;
  stack.push_back({});
  LinearProgram lp = base;
  while (!stack.empty()) {
    if (best.nodes >= options.max_nodes) throw LimitError("branch-and-bound node limit exceeded");
    BbNode node = std::move(stack.back());
    stack.pop_back();
    ++best.nodes;

    lp.lower = base.lower;
    lp.upper = base.upper;
    for (const auto& [var, value] : node.fixed) {
      lp.lower[var] = value;
      lp.upper[var] = value;
    }
    const LpSolution rel = solve_lp(lp, options.simplex);
    if (rel.status == SolveStatus::kInfeasible) continue;
    if (rel.status == SolveStatus::kUnbounded) {
      // Cannot happen with [0,1] bounds.
      throw LimitError("binary relaxation reported unbounded");
    }
    const double bound = sense_sign * rel.objective;
    if (bound >= incumbent - tolerance::kObjective * std::max(1.0, std::abs(incumbent))) continue;

    int branch = -1;
    double most = tolerance::kIntegrality;
    for (int j = 0; j < n; ++j) {
      const double frac = std::abs(rel.primal[j] - std::round(rel.primal[j]));
      if (frac > most + 1e-12) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      std::vector<std::uint8_t> values(n);
      for (int j = 0; j < n; ++j) values[j] = rel.primal[j] > 0.5 ? 1 : 0;
      // Integral within tolerance: confirm exact feasibility of the rounded point.
      bool feasible = true;
      for (const auto& row : base.rows) {
        double lhs = 0.0;
        double scale = std::max(1.0, std::abs(row.rhs));
        for (const auto& t : row.terms) {
          lhs += t.coef * values[t.var];
          scale = std::max(scale, std::abs(t.coef));
        }
        const double tol = 1e-9 * scale;
        if ((row.cmp == Comparator::kLessEqual && lhs > row.rhs + tol) ||
            (row.cmp == Comparator::kGreaterEqual && lhs < row.rhs - tol) ||
            (row.cmp == Comparator::kEqual && std::abs(lhs - row.rhs) > tol)) {
          feasible = false;
          break;
        }
      }
      if (!feasible) {
        // Fall back to branching on the first unfixed variable whose rounding broke a row.
        for (int j = 0; j < n && branch < 0; ++j) {
          if (lp.lower[j] != lp.upper[j]) branch = j;
        }
        if (branch < 0) continue;
      } else {
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += base.objective[j] * values[j];
        const double cmp_obj = sense_sign * obj;
        if (cmp_obj < incumbent) {
          incumbent = cmp_obj;
          best.values = std::move(values);
          best.objective = obj;
          best.status = SolveStatus::kOptimal;
        }
        continue;
      }
    }
    BbNode zero = node;
    zero.fixed.emplace_back(branch, 0);
    BbNode one = std::move(node);
    one.fixed.emplace_back(branch, 1);
    stack.push_back(std::move(zero));
    stack.push_back(std::move(one));
  }
  return best;
}

}  // namespace rideshare
