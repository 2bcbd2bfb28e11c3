#include <cmath>
#include <cstring>
#include <random>
#include <set>

#include "doctest.h"
#include "rulehier/error.hpp"
#include "rulehier/planner.hpp"
#include "rulehier/rulebank.hpp"
#include "support.hpp"

using namespace rulehier;

namespace {

// Reward of one branch computed without the batch evaluator.
double branch_reward_oracle(const EgoState& x0, const std::vector<ControlInput>& u,
                            const RuleHierarchy& h, const WorldScene& scene, double tau) {
  const Trajectory traj = rollout(x0, u, scene.dt, VehicleParams{});
  std::vector<double> rho;
  for (const Rule& r : h.rules) {
    rho.push_back(std::tanh(
        stl::robustness<double>(r.formula, traj, scene, stl::Semantics::smooth, tau) / r.scale));
  }
  return reward_smooth<double>(rho, h.a, h.c);
}

// -|u - target|^2 with its gradient.
Objective quadratic(std::vector<double> target, int* calls = nullptr) {
  return [target, calls](std::span<const double> u, std::span<double> g) {
    if (calls) ++*calls;
    double f = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      f -= (u[i] - target[i]) * (u[i] - target[i]);
      g[i] = -2.0 * (u[i] - target[i]);
    }
    return f;
  };
}

}  // namespace

TEST_CASE("default action set") {
  const auto m = default_actions();
  REQUIRE(m.size() == 6);
  CHECK(m[0].accel == -5.0);
  CHECK(m[0].steer == doctest::Approx(-std::numbers::pi / 8.0));
  CHECK(m[5].accel == 5.0);
  CHECK(m[5].steer == doctest::Approx(std::numbers::pi / 8.0));
}

TEST_CASE("tree size is |M|^ceil(T / segment)") {
  const EgoState x0{0, 0, 0, 10};
  const auto m = default_actions();
  CHECK(generate_primitive_tree(x0, m, 2, 10, 0.2).branch_count() == 7776);
  CHECK(generate_primitive_tree(x0, m, 2, 5, 0.2).branch_count() == 216);
  CHECK(generate_primitive_tree(x0, m, 3, 10, 0.2).branch_count() == 1296);
  CHECK(generate_primitive_tree(x0, m, 10, 10, 0.2).branch_count() == 6);
  CHECK(generate_primitive_tree(x0, m, 1, 3, 0.2).branch_count() == 216);
  CHECK_THROWS_AS(generate_primitive_tree(x0, {}, 2, 10, 0.2), Error);
}

TEST_CASE("every branch is a distinct piecewise-constant sequence") {
  const EgoState x0{0, 0, 0, 10};
  const PrimitiveTree tree = generate_primitive_tree(x0, default_actions(), 2, 5, 0.2);
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t b = 0; b < tree.branch_count(); ++b) {
    const auto u = tree.branch_controls(b);
    REQUIRE(u.size() == 5);
    CHECK(u[0].accel == u[1].accel);
    CHECK(u[2].steer == u[3].steer);
    std::vector<std::size_t> key;
    for (std::size_t l = 0; l < tree.depth(); ++l) key.push_back(tree.action_index(b, l));
    seen.insert(key);
    const Trajectory traj = rollout(x0, u, 0.2, VehicleParams{});
    for (std::size_t t = 0; t <= 5; ++t) {
      const EgoState s = tree.states().get(t, b);
      CHECK(s.px == traj.states[t].px);
      CHECK(s.py == traj.states[t].py);
      CHECK(s.psi == traj.states[t].psi);
      CHECK(s.v == traj.states[t].v);
    }
  }
  CHECK(seen.size() == 216);
  CHECK_THROWS_AS(tree.branch_controls(216), Error);
}

TEST_CASE("stage 1 picks the brute-force arg-max") {
  const WorldScene scene = testing::road_scene(40);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 4; ++trial) {
    const EgoState x0{testing::uniform(rng, 0, 8), testing::uniform(rng, -0.5, 0.5), 0.0,
                      testing::uniform(rng, 6, 12)};
    const RuleHierarchy h = trial % 2 ? build_road_hierarchy(scene, RuleParams{}, 10)
                                      : build_intersection_hierarchy(scene, RuleParams{}, 10,
                                                                     StopMonitor{});
    const PrimitiveTree tree = generate_primitive_tree(x0, default_actions(), 2, 10, 0.2);
    const auto rewards = branch_rewards(tree, h, scene, 0.05);
    std::size_t best = 0;
    double best_r = -1e300;
    for (std::size_t b = 0; b < tree.branch_count(); b += trial == 0 ? 1 : 13) {
      const double r = branch_reward_oracle(x0, tree.branch_controls(b), h, scene, 0.05);
      CHECK(std::abs(rewards[b] - r) <= 1e-12 * std::max(1.0, std::abs(r)));
      if (r > best_r) {
        best_r = r;
        best = b;
      }
    }
    if (trial == 0) {
      const Stage1Result s1 = stage1_select(tree, h, scene, 0.05);
      CHECK(s1.branch == best);
      CHECK(s1.reward == rewards[best]);
      CHECK(s1.controls.size() == 10);
    }
  }
}

TEST_CASE("stage 1 breaks ties towards the lowest branch") {
  const WorldScene scene = testing::road_scene();
  RuleHierarchy h;
  h.rules.push_back({"flat", stl::Formula::predicate("c", stl::Constant{0.2}), 1.0});
  const PrimitiveTree tree = generate_primitive_tree(EgoState{0, 0, 0, 5}, default_actions(), 2, 4, 0.2);
  CHECK(stage1_select(tree, h, scene, 0.05).branch == 0);
  // tanh saturates to exactly -1 for every branch, so all rewards tie.
  RuleHierarchy saturated;
  saturated.rules.push_back(
      {"slow", stl::Formula::eventually({4, 4}, stl::Formula::predicate("v", stl::SpeedAtMost{-100.0})),
       1.0});
  const auto r = branch_rewards(tree, saturated, scene, 0.05);
  REQUIRE(std::all_of(r.begin(), r.end(), [&](double x) { return x == r.front(); }));
  CHECK(stage1_select(tree, saturated, scene, 0.05).branch == 0);
}

TEST_CASE("stage 2 with no iterations returns the warm start") {
  PlannerConfig cfg;
  cfg.iterations = 0;
  const std::vector<ControlInput> init{{1.0, 0.1}, {-1.0, 0.0}};
  int calls = 0;
  const Stage2Result r = stage2_refine(init, quadratic({0, 0, 0, 0}, &calls), cfg);
  CHECK(calls == 1);
  CHECK(r.evaluations == 1);
  CHECK(r.best_iterate == 0);
  CHECK(r.controls[0].accel == 1.0);
  CHECK(r.initial_reward == r.best_reward);
}

TEST_CASE("stage 2 climbs a quadratic and keeps the best iterate") {
  PlannerConfig cfg;
  cfg.iterations = 10;
  cfg.learning_rate = 0.1;
  const std::vector<ControlInput> init{{0.0, 0.0}, {0.0, 0.0}};
  const Stage2Result r = stage2_refine(init, quadratic({2.0, 0.1, -1.0, -0.2}), cfg);
  CHECK(r.evaluations == 11);
  CHECK(r.rewards.size() == 11);
  CHECK(r.best_reward > r.initial_reward);
  CHECK(r.best_reward == *std::max_element(r.rewards.begin(), r.rewards.end()));
  CHECK(r.rewards[r.best_iterate] == r.best_reward);
  // First Adam step moves each coordinate by the learning rate.
  CHECK(r.rewards[1] == doctest::Approx(-(1.9 * 1.9 + 0.0 + 0.9 * 0.9 + 0.1 * 0.1)));
}

TEST_CASE("stage 2 never returns something worse than its start") {
  PlannerConfig cfg;
  cfg.learning_rate = 5.0;  // overshoots badly
  const std::vector<ControlInput> init{{0.5, 0.05}};
  const Stage2Result r = stage2_refine(init, quadratic({0.5, 0.05}), cfg);
  CHECK(r.best_iterate == 0);
  CHECK(r.controls[0].accel == 0.5);
  CHECK(r.controls[0].steer == 0.05);
}

TEST_CASE("stage 2 clamps iterates to the actuator bounds") {
  PlannerConfig cfg;
  cfg.learning_rate = 3.0;
  cfg.iterations = 20;
  const std::vector<ControlInput> init{{4.0, 0.3}};
  const Stage2Result r = stage2_refine(init, quadratic({100.0, 100.0}), cfg);
  CHECK(r.controls[0].accel == 5.0);
  CHECK(r.controls[0].steer == doctest::Approx(std::numbers::pi / 8.0));
}

TEST_CASE("stage 2 stops on a non-finite gradient") {
  PlannerConfig cfg;
  int calls = 0;
  Objective f = [&calls](std::span<const double> u, std::span<double> g) {
    ++calls;
    g[0] = calls == 3 ? std::nan("") : -2.0 * (u[0] - 1.0);
    g[1] = 0.0;
    return -(u[0] - 1.0) * (u[0] - 1.0);
  };
  const Stage2Result r = stage2_refine(std::vector<ControlInput>{{0.0, 0.0}}, f, cfg);
  CHECK(r.nonfinite);
  CHECK(r.evaluations == 3);
  CHECK(r.rewards.size() == 2);
  CHECK(r.best_iterate == 1);
  CHECK_THROWS_AS(stage2_refine(std::vector<ControlInput>{}, f, cfg), Error);
}

TEST_CASE("smooth reward objective gradient matches finite differences") {
  const WorldScene scene = testing::road_scene();
  const RuleHierarchy h = build_road_hierarchy(scene, RuleParams{}, 10);
  PlannerConfig cfg;
  std::mt19937_64 rng(52);
  const EgoState x0{3.0, 0.4, 0.03, 12.0};
  const auto u = testing::random_controls(rng, 10, 0.9);
  const Objective f = smooth_reward_objective(x0, h, scene, cfg);
  const std::vector<double> flat = flatten(u);
  std::vector<double> g(flat.size());
  const double value = f(flat, g);
  CHECK(value == doctest::Approx(smooth_reward(x0, u, h, scene, cfg)).epsilon(1e-12));
  auto plain = [&](const std::vector<double>& p) {
    return smooth_reward(x0, unflatten(p), h, scene, cfg);
  };
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double fd = testing::central_difference(plain, flat, i, 1e-5);
    CHECK(std::abs(g[i] - fd) <= 1e-6 + 1e-4 * std::abs(fd));
  }
}

TEST_CASE("plan cycle diagnostics") {
  const WorldScene scene = testing::road_scene();
  const RuleHierarchy h = build_road_hierarchy(scene, RuleParams{}, 10);
  PlannerConfig cfg;
  cfg.execute = 2;
  const PlanResult p = plan_cycle(EgoState{0, 0, 0, 10}, scene, h, cfg);
  const CycleDiagnostics& d = p.diagnostics;
  CHECK(d.stage1_seconds > 0.0);
  CHECK(d.stage2_seconds > 0.0);
  CHECK(d.total_seconds >= d.stage1_seconds + d.stage2_seconds);
  CHECK(d.tree_searches == 1);
  CHECK(d.gradient_runs == 1);
  CHECK(d.objective_evaluations == cfg.iterations + 1);
  CHECK(d.refined_reward >= d.stage1_reward);
  CHECK(p.execute.size() == 2);
  CHECK(p.controls.size() == 10);
  CHECK(p.trajectory.states.size() == 11);
  CHECK(d.rank == rank(d.robustness));
  CHECK(d.robustness.size() == 6);
  for (const ControlInput& u : p.controls) {
    CHECK(std::abs(u.accel) <= 5.0);
    CHECK(std::abs(u.steer) <= std::numbers::pi / 8.0 + 1e-15);
  }
}

TEST_CASE("planner config validation") {
  PlannerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.execute = 11;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = PlannerConfig{};
  cfg.temperature = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = PlannerConfig{};
  cfg.actions.clear();
  CHECK_THROWS_AS(cfg.validate(), Error);
}
