#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "random_problems.hpp"
#include "rideshare/fixtures.hpp"
#include "rideshare/generator.hpp"
#include "rideshare/instance_io.hpp"
#include "rideshare/model.hpp"

using namespace rideshare;

namespace {

Instance tiny() {
  Instance inst;
  inst.horizon = 100;
  inst.scale = 2.0;
  inst.locations = {{"a", 0, 0}, {"b", 3, 4}, {"c", 6, 8}};
  Driver d;
  d.id = "d";
  d.origin = 0;
  d.destination = 2;
  d.window = {0, 60};
  d.preferred = 5;
  d.max_detour = 30;
  d.value = 100;
  d.c_dev = 1;
  d.c_trl = 2;
  d.capacity = 2;
  d.rho = 0.5;
  inst.drivers.push_back(d);
  Rider r;
  r.id = "r";
  r.origin = 0;
  r.destination = 1;
  r.window = {0, 40};
  r.preferred = 0;
  r.max_detour = 15;
  r.value = 50;
  r.c_dev = 1;
  r.c_trl = 2;
  r.lambda = 30;
  inst.riders.push_back(r);
  return inst;
}

}  // namespace

TEST_CASE("euclidean travel time scales the distance") {
  const auto inst = tiny();
  CHECK(inst.time(0, 1) == doctest::Approx(10.0));
  CHECK(inst.time(1, 1) == 0.0);
  CHECK(inst.direct_time(inst.drivers[0]) == doctest::Approx(20.0));
}

TEST_CASE("user trip cost adds deviation and travel") {
  User u;
  u.preferred = 10;
  u.c_dev = 2;
  u.c_trl = 3;
  CHECK(user_trip_cost(u, 12, 20) == doctest::Approx(2 * 2 + 3 * 8));
  CHECK(user_trip_cost(u, 7, 7) == doctest::Approx(6));
  CHECK_THROWS_AS(user_trip_cost(u, 5, 4), std::invalid_argument);
}

TEST_CASE("validate accepts a clean instance and reports each violation") {
  auto inst = tiny();
  CHECK(validate(inst).empty());
  inst.riders[0].window.latest = 5;      // direct trip no longer fits
  inst.drivers[0].capacity = 0;
  inst.riders[0].lambda = 60;            // above value
  const auto problems = validate(inst);
  CHECK(problems.size() >= 3);
}

TEST_CASE("instance JSON round-trips exactly") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto inst = gen_rush_hour(testing::small_rush(seed, 12));
    CHECK(parse_instance(dump_instance(inst)) == inst);
  }
  const auto matrix = fixtures::nonstable_instance();
  CHECK(parse_instance(dump_instance(matrix)) == matrix);
}

TEST_CASE("parse errors name the offending field") {
  auto text = dump_instance(tiny());
  const auto pos = text.find("\"c_trl\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 7, "\"c_trx\"");
  try {
    parse_instance(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("c_trl") != std::string::npos);
  }
  try {
    parse_instance("{\n  \"horizon\": 1,\n  oops\n}");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("a rider alternative above its value is clamped with a warning") {
  auto inst = tiny();
  inst.riders[0].lambda = 70;
  std::vector<std::string> warnings;
  const auto back = parse_instance(dump_instance(inst), &warnings);
  CHECK(back.riders[0].lambda == doctest::Approx(50));
  CHECK(warnings.size() == 1);
}

TEST_CASE("matching problem JSON round-trips") {
  std::mt19937_64 rng(5);
  const auto p = testing::random_problem(rng, {2, 4, 2, 0.6});
  const auto back = parse_matching_problem(dump_matching_problem(p));
  REQUIRE(back.candidates.size() == p.candidates.size());
  for (std::size_t i = 0; i < p.candidates.size(); ++i) {
    CHECK(back.candidates[i].riders == p.candidates[i].riders);
    CHECK(back.candidates[i].cost == doctest::Approx(p.candidates[i].cost));
  }
  CHECK(back.drivers[1].ir_threshold == doctest::Approx(p.drivers[1].ir_threshold));
  CHECK_THROWS_AS(parse_matching_problem(R"({"drivers":[],"riders":[],"pairs":[{"driver":"x"}]})"), ParseError);
}
