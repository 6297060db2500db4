#include <array>

#include "doctest.h"
#include "random_problems.hpp"
#include "rideshare/generator.hpp"
#include "rideshare/model.hpp"

using namespace rideshare;

TEST_CASE("ratio parsing") {
  CHECK(parse_ratio("1:4").drivers == 1);
  CHECK(parse_ratio("1:4").riders == 4);
  CHECK_THROWS_AS(parse_ratio("1-4"), ValidationError);
  CHECK_THROWS_AS(parse_ratio("0:4"), ValidationError);
  CHECK_THROWS_AS(parse_ratio("a:b"), ValidationError);
  CHECK(driver_count(50, {1, 4}) == 10);
  CHECK(driver_count(600, {1, 1}) == 300);
}

TEST_CASE("rush-hour instances are deterministic and valid") {
  const auto a = gen_rush_hour(testing::small_rush(7, 40, {1, 4}));
  const auto b = gen_rush_hour(testing::small_rush(7, 40, {1, 4}));
  CHECK(a == b);
  CHECK(a.drivers.size() == 8);
  CHECK(a.riders.size() == 32);
  CHECK(validate(a).empty());
  CHECK_FALSE(a == gen_rush_hour(testing::small_rush(8, 40, {1, 4})));
}

TEST_CASE("adding users leaves earlier users unchanged") {
  RushHourConfig small = testing::small_rush(3, 10, {1, 1});
  RushHourConfig big = small;
  big.users = 20;
  big.ratio = {1, 3};  // drivers 0..4 are users 0..4 in both
  const auto a = gen_rush_hour(small);
  const auto b = gen_rush_hour(big);
  for (int i = 0; i < 5; ++i) {
    CHECK(a.drivers[i].window == b.drivers[i].window);
    CHECK(a.locations[a.drivers[i].origin] == b.locations[b.drivers[i].origin]);
  }
}

TEST_CASE("rush-hour users start in the origin rectangle and follow type timing") {
  const RushHourConfig cfg = testing::small_rush(11, 300, {1, 2});
  const auto inst = gen_rush_hour(cfg);
  const auto types = rush_hour_types(cfg);
  std::vector<const User*> users;
  for (const auto& d : inst.drivers) users.push_back(&d);
  for (const auto& r : inst.riders) users.push_back(&r);
  REQUIRE(types.size() == users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    const User& u = *users[i];
    const auto& o = inst.locations[u.origin];
    CHECK(o.x >= cfg.origin.x0);
    CHECK(o.x <= cfg.origin.x1);
    CHECK(o.y >= cfg.origin.y0);
    CHECK(o.y <= cfg.origin.y1);
    const auto& q = inst.locations[u.destination];
    const Rect& box = cfg.destinations[types[i]];
    CHECK(q.x >= box.x0);
    CHECK(q.x <= box.x1);
    if (types[i] == 0) {
      CHECK(u.window.earliest <= 12.0);
      CHECK(u.preferred <= 12.0 + 1e-9);
      CHECK(u.window.latest == doctest::Approx(12.0 + inst.direct_time(u)));
    }
    CHECK(u.max_detour == doctest::Approx(1.3 * inst.direct_time(u)));
  }
}

TEST_CASE("uniform instances validate") {
  UniformConfig cfg;
  cfg.users = 600;
  cfg.seed = 4;
  const auto inst = gen_uniform(cfg);
  CHECK(inst.drivers.size() == 300);
  CHECK(validate(inst).empty());
  for (const auto& d : inst.drivers) CHECK(d.rho == 0.0);
}
