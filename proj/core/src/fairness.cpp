#include "rideshare/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rideshare {

namespace {

constexpr double kPricingTol = 1e-6;

enum class Master { kMinCost, kMaxSlack };

struct ColumnGenResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<DeterministicMatching> columns;
  std::vector<double> p;
  std::vector<double> duals;  // per feasible rider
  double objective = 0.0;
  int iterations = 0;
};

bool contains(const std::vector<DeterministicMatching>& cols, const DeterministicMatching& m) {
  return std::any_of(cols.begin(), cols.end(),
                     [&](const DeterministicMatching& c) { return c.assignment == m.assignment; });
}

// Restricted master over the current columns, re-solved from scratch each
// round; pricing is a weighted deterministic matching.
ColumnGenResult column_generation(const MatchingProblem& prob, const std::vector<int>& feasible,
                                  const std::vector<double>& rhs, Master mode,
                                  std::vector<DeterministicMatching> columns, const FairnessOptions& opt) {
  ColumnGenResult out;
  MatchOptions pricing = opt.match;
  pricing.objective = ObjectiveMode::kCost;
  pricing.driver_weights.clear();
  pricing.zero_costs = mode == Master::kMaxSlack;
  pricing.rider_weights.assign(prob.riders.size(), 0.0);

  for (int iter = 0;; ++iter) {
    if (iter >= opt.max_iterations) throw LimitError("column generation exceeded " + std::to_string(opt.max_iterations) + " rounds");
    LinearProgram lp;
    const int n = static_cast<int>(columns.size());
    for (int j = 0; j < n; ++j) lp.add_variable(mode == Master::kMinCost ? columns[j].cost : 0.0);
    int z = -1;
    if (mode == Master::kMaxSlack) z = lp.add_variable(-1.0, -kInfinity, kInfinity, "z");
    for (std::size_t i = 0; i < feasible.size(); ++i) {
      std::vector<Term> terms;
      for (int j = 0; j < n; ++j) {
        if (columns[j].matched[feasible[i]]) terms.push_back({j, 1.0});
      }
      if (z >= 0) terms.push_back({z, -1.0});
      lp.add_constraint(std::move(terms), Comparator::kGreaterEqual, rhs[i]);
    }
    std::vector<Term> convex;
    for (int j = 0; j < n; ++j) convex.push_back({j, 1.0});
    lp.add_constraint(std::move(convex), Comparator::kEqual, 1.0);

    const LpSolution sol = solve_lp(lp);
    out.iterations = iter + 1;
    if (!sol.optimal()) {
      out.status = sol.status;
      return out;
    }
    const double alpha = sol.duals.back();
    for (std::size_t i = 0; i < feasible.size(); ++i) pricing.rider_weights[feasible[i]] = sol.duals[i];
    const MatchResult priced = solve_matching(prob, pricing);
    if (!priced.optimal()) {
      out.status = priced.status;
      return out;
    }
    const double reduced = priced.objective - alpha;
    // A duplicate column with negative reduced cost only happens through
    // round-off in the master; stop rather than cycle.
    if (reduced < -kPricingTol && !contains(columns, priced.matching)) {
      columns.push_back(priced.matching);
      continue;
    }
    out.status = SolveStatus::kOptimal;
    out.objective = mode == Master::kMaxSlack ? sol.primal[z] : sol.objective;
    out.p.assign(sol.primal.begin(), sol.primal.begin() + n);
    out.duals.assign(sol.duals.begin(), sol.duals.begin() + static_cast<std::ptrdiff_t>(feasible.size()));
    out.columns = std::move(columns);
    return out;
  }
}

ProbabilisticMatching cleanup(const MatchingProblem& prob, const std::vector<DeterministicMatching>& cols,
                              const std::vector<double>& p) {
  ProbabilisticMatching pm;
  double total = 0.0;
  for (double v : p) total += std::max(v, 0.0);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const double v = std::max(p[j], 0.0) / total;
    if (v <= kProbabilityCutoff) continue;
    pm.support.push_back(cols[j]);
    pm.probability.push_back(v);
  }
  total = 0.0;
  for (double v : pm.probability) total += v;
  for (double& v : pm.probability) v /= total;
  pm.phi.assign(prob.riders.size(), 0.0);
  for (std::size_t j = 0; j < pm.support.size(); ++j) {
    pm.expected_cost += pm.probability[j] * pm.support[j].cost;
    for (std::size_t r = 0; r < prob.riders.size(); ++r) {
      if (pm.support[j].matched[r]) pm.phi[r] += pm.probability[j];
    }
  }
  return pm;
}

ProbabilisticMatching point_mass(const MatchingProblem& prob, const DeterministicMatching& m) {
  return cleanup(prob, {m}, {1.0});
}

MatchResult base_matching(const MatchingProblem& prob, const FairnessOptions& opt) {
  MatchOptions o = opt.match;
  o.objective = ObjectiveMode::kCost;
  o.driver_weights.clear();
  o.rider_weights.clear();
  o.zero_costs = false;
  return solve_matching(prob, o);
}

double theta_floor(const ProbabilisticMatching& pm, const std::vector<int>& feasible) {
  double t = 1.0;
  for (int r : feasible) t = std::min(t, pm.phi[r]);
  return t;
}

void check_theta(double theta) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > 1.0) {
    throw ValidationError("fairness level must lie in [0, 1], got " + std::to_string(theta));
  }
}

}  // namespace

MaxFairnessResult max_fairness(const MatchingProblem& prob, const FairnessOptions& opt) {
  prob.validate();
  MaxFairnessResult res;
  const MatchResult base = base_matching(prob, opt);
  if (!base.optimal()) {
    res.status = base.status;
    return res;
  }
  const auto feasible = prob.feasible_riders();
  if (feasible.empty()) {
    res.no_feasible_riders = true;
    res.matching = point_mass(prob, base.matching);
    return res;
  }
  const std::vector<double> rhs(feasible.size(), 0.0);
  const auto cg = column_generation(prob, feasible, rhs, Master::kMaxSlack, {base.matching}, opt);
  res.iterations = cg.iterations;
  if (cg.status != SolveStatus::kOptimal) {
    res.status = cg.status;
    return res;
  }
  res.matching = cleanup(prob, cg.columns, cg.p);
  res.theta0 = theta_floor(res.matching, feasible);
  return res;
}

FairResult min_cost_fair(const MatchingProblem& prob, double theta, const FairnessOptions& opt,
                         const MaxFairnessResult* fairest) {
  check_theta(theta);
  MaxFairnessResult own;
  if (fairest == nullptr) {
    own = max_fairness(prob, opt);
    fairest = &own;
  }
  FairResult res;
  if (fairest->status != SolveStatus::kOptimal) {
    res.status = fairest->status;
    return res;
  }
  const auto feasible = prob.feasible_riders();
  const MatchResult base = base_matching(prob, opt);
  if (feasible.empty()) {
    res.status = SolveStatus::kOptimal;
    res.matching = point_mass(prob, base.matching);
    res.cost = res.matching.expected_cost;
    return res;
  }
  if (theta > fairest->theta0 + 1e-9) return res;
  theta = std::min(theta, fairest->theta0);

  std::vector<DeterministicMatching> seed = fairest->matching.support;
  if (!contains(seed, base.matching)) seed.push_back(base.matching);
  const std::vector<double> rhs(feasible.size(), theta);
  const auto cg = column_generation(prob, feasible, rhs, Master::kMinCost, std::move(seed), opt);
  res.status = cg.status;
  res.iterations = cg.iterations;
  if (cg.status != SolveStatus::kOptimal) return res;
  res.matching = cleanup(prob, cg.columns, cg.p);
  res.cost = cg.objective;
  for (double w : cg.duals) res.slope += w;
  return res;
}

FairResult min_cost_fair_hetero(const MatchingProblem& prob, const std::vector<double>& thetas,
                                const FairnessOptions& opt) {
  prob.validate();
  if (thetas.size() != prob.riders.size()) throw ValidationError("one fairness level per rider is required");
  for (double t : thetas) check_theta(t);
  FairResult res;
  const MatchResult base = base_matching(prob, opt);
  if (!base.optimal()) {
    res.status = base.status;
    return res;
  }
  const auto feasible = prob.feasible_riders();
  if (feasible.empty()) {
    res.status = SolveStatus::kOptimal;
    res.matching = point_mass(prob, base.matching);
    res.cost = res.matching.expected_cost;
    return res;
  }
  std::vector<double> rhs;
  for (int r : feasible) rhs.push_back(thetas[r]);

  // Largest uniform slack above the thresholds; they are attainable iff it
  // is nonnegative.
  const auto boot = column_generation(prob, feasible, rhs, Master::kMaxSlack, {base.matching}, opt);
  res.iterations = boot.iterations;
  if (boot.status != SolveStatus::kOptimal) {
    res.status = boot.status;
    return res;
  }
  if (boot.objective < -tolerance::kFeasibility) {
    res.status = SolveStatus::kInfeasible;
    return res;
  }
  std::vector<DeterministicMatching> seed = boot.columns;
  const auto cg = column_generation(prob, feasible, rhs, Master::kMinCost, std::move(seed), opt);
  res.status = cg.status;
  res.iterations += cg.iterations;
  if (cg.status != SolveStatus::kOptimal) return res;
  res.matching = cleanup(prob, cg.columns, cg.p);
  res.cost = cg.objective;
  for (double w : cg.duals) res.slope += w;
  return res;
}

std::optional<double> ParetoFrontier::evaluate(double theta) const {
  if (breakpoints.empty()) return std::nullopt;
  if (theta < breakpoints.front().theta - 1e-12 || theta > breakpoints.back().theta + 1e-12) return std::nullopt;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (theta <= breakpoints[i + 1].theta) {
      return breakpoints[i].cost + slopes[i] * (std::max(theta, breakpoints[i].theta) - breakpoints[i].theta);
    }
  }
  return breakpoints.back().cost;
}

namespace {

struct Probe {
  double theta;
  double cost;
  double slope;
};

bool close(double a, double b) { return std::abs(a - b) <= 1e-6 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

ParetoFrontier pareto_frontier(const MatchingProblem& prob, int max_iters, const FairnessOptions& opt) {
  ParetoFrontier out;
  const MaxFairnessResult fairest = max_fairness(prob, opt);
  if (fairest.status != SolveStatus::kOptimal) throw ValidationError("no matching satisfies the pricing constraints");
  auto probe = [&](double theta) {
    ++out.probes;
    const FairResult r = min_cost_fair(prob, theta, opt, &fairest);
    if (!r.optimal()) throw LimitError("frontier probe failed at theta " + std::to_string(theta));
    return Probe{theta, r.cost, r.slope};
  };
  if (fairest.no_feasible_riders) {
    out.no_feasible_riders = true;
    const Probe a = probe(0.0);
    out.breakpoints = {{0.0, a.cost}};
    return out;
  }
  out.theta0 = fairest.theta0;
  const Probe lo = probe(0.0);
  if (out.theta0 <= 1e-12) {
    out.breakpoints = {{0.0, lo.cost}};
    return out;
  }
  const Probe hi = probe(out.theta0);

  // Interval refinement on the convex frontier: each interval is closed as
  // soon as the chord agrees with a supporting line at either end, or the two
  // supporting lines meet on the frontier itself.
  std::vector<Probe> points{lo};
  std::vector<std::pair<Probe, Probe>> stack{{lo, hi}};
  std::vector<Probe> accepted;
  int iters = 0;
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    const double chord = (b.cost - a.cost) / (b.theta - a.theta);
    if (close(a.slope, chord) || close(b.slope, chord) || b.theta - a.theta <= 1e-9) {
      accepted.push_back(b);
      continue;
    }
    // Where the supporting lines at the two ends meet.
    const double den = a.slope - b.slope;
    const double t = den == 0.0 ? 0.5 * (a.theta + b.theta)
                                : (b.cost - b.slope * b.theta - a.cost + a.slope * a.theta) / den;
    if (!(t > a.theta + 1e-9 && t < b.theta - 1e-9)) {
      accepted.push_back(b);
      continue;
    }
    if (++iters > max_iters) {
      out.approximate = true;
      accepted.push_back(b);
      continue;
    }
    const Probe m = probe(t);
    const double line = a.cost + a.slope * (t - a.theta);
    if (std::abs(m.cost - line) <= 1e-6 * std::max(1.0, std::abs(m.cost))) {
      accepted.push_back(m);
      accepted.push_back(b);
      continue;
    }
    // Right half is processed after the left one, so push it first.
    stack.emplace_back(m, b);
    stack.emplace_back(a, m);
  }
  for (const auto& p : accepted) points.push_back(p);
  std::sort(points.begin(), points.end(), [](const Probe& x, const Probe& y) { return x.theta < y.theta; });

  // Chord slopes, then merge collinear neighbours.
  out.breakpoints.push_back({points.front().theta, points.front().cost});
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].theta - out.breakpoints.back().theta <= 1e-12) continue;
    const FrontierPoint next{points[i].theta, points[i].cost};
    const double s = (next.cost - out.breakpoints.back().cost) / (next.theta - out.breakpoints.back().theta);
    if (!out.slopes.empty() && close(out.slopes.back(), s)) {
      out.breakpoints.back() = next;
      const auto& prev = out.breakpoints[out.breakpoints.size() - 2];
      out.slopes.back() = (next.cost - prev.cost) / (next.theta - prev.theta);
    } else {
      out.breakpoints.push_back(next);
      out.slopes.push_back(s);
    }
  }
  return out;
}

ExPostReport check_ex_post_stability(const MatchingProblem& prob, const ProbabilisticMatching& pm) {
  ExPostReport rep;
  for (std::size_t j = 0; j < pm.support.size(); ++j) {
    if (pm.probability[j] <= kProbabilityCutoff) continue;
    auto blocks = blocking_pairs(prob, pm.support[j]);
    if (blocks.empty()) continue;
    rep.unstable.push_back(static_cast<int>(j));
    rep.blocking.push_back(std::move(blocks));
  }
  return rep;
}

}  // namespace rideshare
