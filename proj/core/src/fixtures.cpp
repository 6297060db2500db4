#include "rideshare/fixtures.hpp"

#include <algorithm>
#include <string>

#include "rideshare/errors.hpp"

namespace rideshare::fixtures {

Instance nonstable_instance() {
  Instance inst;
  inst.horizon = 10.0;
  inst.metric = Metric::kMatrix;
  // o_a, o_b, o_c, q_a, q_b, q_c, q
  for (const char* id : {"o_a", "o_b", "o_c", "q_a", "q_b", "q_c", "q"}) inst.locations.push_back({id, 0.0, 0.0});
  const int n = 7;
  const double inf = 1e9;
  std::vector<std::vector<double>> g(n, std::vector<double>(n, inf));
  for (int i = 0; i < n; ++i) g[i][i] = 0.0;
  const auto edge = [&](int a, int b, double w) { g[a][b] = g[b][a] = w; };
  for (int i = 0; i < 3; ++i) {
    edge(i, 3 + i, 3.0);
    edge(3 + i, 6, 1.0);
    for (int j = i + 1; j < 3; ++j) {
      edge(i, j, 2.0);
      edge(3 + i, 3 + j, 2.0);
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g[i][j] = std::min(g[i][j], g[i][k] + g[k][j]);
    }
  }
  inst.matrix = g;

  for (int i = 0; i < 3; ++i) {
    const std::string tag(1, static_cast<char>('1' + i));
    Driver d;
    d.id = "d" + tag;
    d.origin = i;
    d.destination = 6;
    d.window = {0.0, 10.0};
    d.preferred = 0.0;
    d.max_detour = 10.0;
    d.value = 1000.0;
    d.c_dev = 100.0;
    d.c_trl = 1.0;
    d.capacity = 2;
    d.rho = 1.0;
    inst.drivers.push_back(d);

    Rider r;
    r.id = "r" + tag;
    r.origin = i;
    r.destination = 3 + i;
    r.window = {1.0, 8.0};
    r.preferred = 1.0;
    r.max_detour = 7.0;
    r.value = 70.0;
    r.c_dev = 5.0;
    r.c_trl = 1.0;
    r.lambda = 70.0;
    inst.riders.push_back(r);
  }
  return inst;
}

namespace {

void add_candidate(MatchingProblem& p, int driver, std::vector<int> riders, double driver_cost,
                   std::vector<double> rider_costs) {
  Candidate c;
  c.driver = driver;
  c.riders = std::move(riders);
  c.rider_costs = std::move(rider_costs);
  c.driver_cost = driver_cost;
  c.cost = driver_cost;
  for (double rc : c.rider_costs) c.cost += rc;
  p.candidates.push_back(std::move(c));
}

void set_thresholds(MatchingProblem& p) {
  for (int d = 0; d < static_cast<int>(p.drivers.size()); ++d) {
    const int alone = p.find(d, {});
    p.drivers[d].ir_threshold = alone >= 0 ? p.driver_base_utility(p.candidates[alone]) : -kInfinity;
  }
}

}  // namespace

MatchingProblem pof_worst_case(double big, double eps) {
  if (big < 1.0 || eps <= 0.0 || eps >= 1.0) throw ValidationError("need big >= 1 and 0 < eps < 1");
  MatchingProblem p;
  p.drivers.push_back({"d", big + 2.0, 1.0, 0.0, 1.0});
  p.riders.push_back({"r1", 1.0, eps, 1.0});
  p.riders.push_back({"r2", 1.0, eps, 1.0});
  add_candidate(p, 0, {}, 1.0 - eps, {});
  add_candidate(p, 0, {0}, 1.0 - eps, {0.0});
  add_candidate(p, 0, {1}, big - eps, {0.0});
  add_candidate(p, 0, {0, 1}, big + 1.0, {0.0, 0.0});
  set_thresholds(p);
  return p;
}

MatchingProblem pos_worst_case(double q, double eps) {
  if (q <= 0.0 || eps <= 0.0) throw ValidationError("need positive q and eps");
  MatchingProblem p;
  p.drivers.push_back({"d", 2.0 * q, 0.0, 0.0, 1.0});
  p.drivers.push_back({"d'", 2.0 * q, 0.0, 0.0, 1.0});
  p.riders.push_back({"r", 2.0 * q, q, 1.0});
  p.riders.push_back({"r'", 2.0 * q, q, 1.0});
  add_candidate(p, 0, {}, q, {});
  add_candidate(p, 1, {}, q, {});
  add_candidate(p, 0, {0}, 0.0, {0.0});
  add_candidate(p, 0, {1}, eps / 2.0, {eps / 2.0});
  add_candidate(p, 1, {0}, eps / 2.0, {eps / 2.0});
  set_thresholds(p);
  return p;
}

MatchingProblem fairness_vs_stability(int m, double q, double eps) {
  if (m < 3) throw ValidationError("need at least three riders");
  MatchingProblem p;
  p.drivers.push_back({"d", q + 1.0, 0.0, 0.0, 1.0});
  for (int i = 1; i <= m; ++i) p.riders.push_back({"r" + std::to_string(i), 1.0, eps, 1.0});
  add_candidate(p, 0, {}, q, {});
  add_candidate(p, 0, {0}, eps, {0.0});
  add_candidate(p, 0, {1}, q, {0.0});
  add_candidate(p, 0, {0, 1}, q, {0.0, 0.0});
  for (int i = 2; i < m; ++i) add_candidate(p, 0, {i}, q, {0.0});
  set_thresholds(p);
  return p;
}

}  // namespace rideshare::fixtures
