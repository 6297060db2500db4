#pragma once

// Small hand-built inputs whose optimal matchings are known in closed form.

#include "rideshare/matching_problem.hpp"
#include "rideshare/model.hpp"

namespace rideshare::fixtures {

/// Three drivers and three riders on a seven-location road graph, with
/// per-pair costs chosen so that the shared trips cycle through blocking
/// pairs.
Instance nonstable_instance();

/// One altruistic driver and two riders: serving r1 is as cheap as driving
/// alone, serving r2 costs `big`, both together big + 1.
MatchingProblem pof_worst_case(double big = 10.0, double eps = 1e-3);

/// Two drivers and two riders where the only stable matching pays the
/// alternative costs Q while the optimum pays 2ε.
MatchingProblem pos_worst_case(double q = 100.0, double eps = 1e-3);

/// One capacity-2 driver and `m` riders (m ≥ 3): riders 1 and 2 can share,
/// the rest are served alone at cost Q, and serving r1 alone costs ε.
MatchingProblem fairness_vs_stability(int m = 5, double q = 100.0, double eps = 1e-3);

}  // namespace rideshare::fixtures
