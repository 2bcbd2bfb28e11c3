#include <cmath>

#include "doctest.h"
#include "rulehier/error.hpp"
#include "rulehier/world.hpp"
#include "support.hpp"

using namespace rulehier;

TEST_CASE("polyline rejects degenerate input") {
  CHECK_THROWS_AS(Polyline({{0.0, 0.0}}), Error);
  CHECK_THROWS_AS(Polyline({{0.0, 0.0}, {0.0, 0.0}}), Error);
  const Polyline ok({{0.0, 0.0}, {3.0, 4.0}});
  CHECK(ok.segments().size() == 1);
  CHECK(ok.segments()[0].len == doctest::Approx(5.0));
}

TEST_CASE("lateral offset is positive on the left of travel") {
  const Polyline east({{0.0, 0.0}, {10.0, 0.0}});
  CHECK(signed_lateral_offset({5.0, 2.0}, east) == doctest::Approx(2.0));
  CHECK(signed_lateral_offset({5.0, -1.5}, east) == doctest::Approx(-1.5));
  const Polyline west({{10.0, 0.0}, {0.0, 0.0}});
  CHECK(signed_lateral_offset({5.0, 2.0}, west) == doctest::Approx(-2.0));
  // Past the end the distance is to the endpoint, signed by side.
  CHECK(signed_lateral_offset({13.0, 4.0}, east) == doctest::Approx(5.0));
}

TEST_CASE("nearest line offset picks the closest line of the kind") {
  const WorldScene s = testing::road_scene();
  CHECK(nearest_line_offset(0.0, 0.5, s.map, LineKind::solid) == doctest::Approx(2.5));
  CHECK(nearest_line_offset(0.0, 0.5, s.map, LineKind::dashed) == doctest::Approx(1.5));
  CHECK(nearest_line_offset(0.0, 3.0, s.map, LineKind::dashed) == doctest::Approx(-1.0));
}

TEST_CASE("occupancy margin uses the l-inf body-frame box") {
  NonEgoTrack tr;
  tr.states.push_back({{0.0, 0.0}, 0.0, 0.0});
  CHECK(occupancy_margin({8.0, 0.0}, tr, 0) == doctest::Approx(3.0));
  CHECK(occupancy_margin({0.0, 3.0}, tr, 0) == doctest::Approx(1.0));
  CHECK(occupancy_margin({1.0, 0.5}, tr, 0) == doctest::Approx(-1.5));
  tr.states[0].heading = std::numbers::pi / 2.0;
  CHECK(occupancy_margin({0.0, 8.0}, tr, 0) == doctest::Approx(3.0));
  tr.frame = KeepOutFrame::inertial;
  CHECK(occupancy_margin({0.0, 8.0}, tr, 0) == doctest::Approx(6.0));
}

TEST_CASE("stop zone depth") {
  const WorldScene s = testing::road_scene();
  CHECK(nearest_stop_zone_depth(15.0, 0.0, s.map) == doctest::Approx(2.0));
  CHECK(nearest_stop_zone_depth(16.5, 0.0, s.map) == doctest::Approx(0.5));
  CHECK(nearest_stop_zone_depth(20.0, 0.0, s.map) == doctest::Approx(-3.0));
}

TEST_CASE("tracks extend at constant velocity") {
  NonEgoTrack tr;
  tr.states.push_back({{0.0, 0.0}, std::numbers::pi / 2.0, 10.0});
  const NonEgoTrack ext = extend_track(tr, 4, 0.2);
  REQUIRE(ext.states.size() == 4);
  CHECK(ext.states[3].position.y == doctest::Approx(6.0));
  CHECK(ext.states[3].position.x == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("window re-indexes tracks") {
  const WorldScene s = testing::road_scene(11);
  const WorldScene w = s.window(3, 20);
  CHECK(w.non_ego[1].states.size() >= 20);
  CHECK(w.non_ego[1].states[0].position.x == doctest::Approx(s.non_ego[1].states[3].position.x));
}

TEST_CASE("lane heading follows the nearest lane") {
  WorldScene s = testing::road_scene();
  CHECK(lane_heading({0.0, 0.3}, s.map) == 0.0);
}
