#include <cmath>
#include <random>

#include "doctest.h"
#include "rulehier/dynamics.hpp"
#include "rulehier/error.hpp"
#include "support.hpp"

using namespace rulehier;

namespace {

// Kinematic bicycle written out directly.
EgoState oracle_step(EgoState x, double a, double delta, double dt) {
  const double lf = 1.5, lr = 1.5;
  a = std::clamp(a, -5.0, 5.0);
  delta = std::clamp(delta, -std::numbers::pi / 8.0, std::numbers::pi / 8.0);
  const double beta = std::atan(lr / (lf + lr) * std::tan(delta));
  EgoState n;
  n.px = x.px + x.v * std::cos(x.psi + beta) * dt;
  n.py = x.py + x.v * std::sin(x.psi + beta) * dt;
  n.psi = std::remainder(x.psi + x.v / lr * std::sin(beta) * dt, 2.0 * std::numbers::pi);
  n.v = std::max(0.0, x.v + a * dt);
  return n;
}

}  // namespace

TEST_CASE("rollout matches the bicycle equations") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const EgoState x0 = testing::random_start(rng);
    const auto u = testing::random_controls(rng, 10, 1.3);
    const Trajectory traj = rollout(x0, u, 0.2, VehicleParams{});
    REQUIRE(traj.states.size() == 11);
    EgoState x = x0;
    for (std::size_t t = 0; t < u.size(); ++t) {
      x = oracle_step(x, u[t].accel, u[t].steer, 0.2);
      CHECK(traj.states[t + 1].px == doctest::Approx(x.px).epsilon(1e-12));
      CHECK(traj.states[t + 1].py == doctest::Approx(x.py).epsilon(1e-12));
      CHECK(traj.states[t + 1].psi == doctest::Approx(x.psi).epsilon(1e-12));
      CHECK(traj.states[t + 1].v == doctest::Approx(x.v).epsilon(1e-12));
    }
  }
}

TEST_CASE("controls are clamped and speed stays nonnegative") {
  const ControlInput big{-40.0, 3.0};
  const Trajectory traj = rollout(EgoState{0, 0, 0, 1.0}, std::vector{big, big, big}, 0.2, {});
  for (const ControlInput& u : traj.controls) {
    CHECK(u.accel == -5.0);
    CHECK(u.steer == doctest::Approx(std::numbers::pi / 8.0));
  }
  for (const EgoState& x : traj.states) CHECK(x.v >= 0.0);
  CHECK(traj.states.back().v == 0.0);
}

TEST_CASE("straight motion at constant speed") {
  const Trajectory traj = rollout(EgoState{0, 0, 0, 10.0},
                                  std::vector<ControlInput>(5, ControlInput{0.0, 0.0}), 0.2, {});
  CHECK(traj.states.back().px == doctest::Approx(10.0));
  CHECK(traj.states.back().py == 0.0);
}

TEST_CASE("rollout argument errors") {
  CHECK_THROWS_AS(rollout(EgoState{}, std::span<const ControlInput>{}, 0.2, {}), Error);
  CHECK_THROWS_AS(rollout(EgoState{}, std::vector{ControlInput{}}, 0.0, {}), Error);
}

TEST_CASE("slip precompute matches step exactly") {
  std::mt19937_64 rng(5);
  const VehicleParams p;
  for (int i = 0; i < 100; ++i) {
    const EgoState x = testing::random_start(rng);
    const ControlInput u = testing::random_controls(rng, 1)[0];
    const double beta = slip_angle(u.steer, p);
    const EgoState a = step(x, u, 0.2, p);
    const EgoState b = step_with_slip(x, u.accel, beta, std::sin(beta), 0.2, p);
    CHECK(a.px == b.px);
    CHECK(a.py == b.py);
    CHECK(a.psi == b.psi);
    CHECK(a.v == b.v);
  }
}

TEST_CASE("differentiable rollout matches plain rollout and its gradient") {
  std::mt19937_64 rng(9);
  const EgoState x0{0.0, 0.0, 0.1, 8.0};
  const auto u = testing::random_controls(rng, 6, 0.8);
  ad::Tape tape;
  const auto lifted = lift_controls(tape, u);
  const auto traj = rollout<DiffScalar>(constant_state(x0), lifted, 0.2, VehicleParams{});
  const Trajectory plain = rollout(x0, u, 0.2, VehicleParams{});
  CHECK(traj.states.back().py.value() == plain.states.back().py);
  const auto g = tape.gradient(traj.states.back().py);
  const std::vector<double> flat = flatten(u);
  auto f = [&](const std::vector<double>& p) {
    return rollout(x0, unflatten(p), 0.2, VehicleParams{}).states.back().py;
  };
  for (std::size_t i = 0; i < flat.size(); ++i) {
    CHECK(g[i] == doctest::Approx(testing::central_difference(f, flat, i, 1e-6)).epsilon(1e-5));
  }
  CHECK(unflatten(flat).size() == u.size());
}
