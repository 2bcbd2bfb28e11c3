// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rulehier/error.hpp"

namespace rulehier::sim {
namespace {

bool inside(Vec2 p, const AxisBox& b) {
  return std::abs(p.x - b.cx) <= b.hx && std::abs(p.y - b.cy) <= b.hy;
}

bool in_stop_zone(const EgoState& x, const MapModel& map) {
  return std::any_of(map.stop_zones.begin(), map.stop_zones.end(),
                     [&](const StopZone& z) { return inside({x.px, x.py}, z.box()); });
}

CrossingTimes crossing_times(const RunResult& run, const IntersectionExpectation& ie) {
  CrossingTimes c;
  const NonEgoTrack* other = nullptr;
  for (const NonEgoTrack& t : run.scenario.scene.non_ego) {
    if (t.name == ie.track) other = &t;
  }
  const NonEgoTrack track = extend_track(*other, run.states.size(), run.scenario.scene.dt);
  for (std::size_t k = 0; k < run.states.size(); ++k) {
    const EgoState& x = run.states[k];
    if (!c.ego_enter && inside({x.px, x.py}, ie.region)) c.ego_enter = k;
    const bool in = inside(track.states[k].position, ie.region);
    if (!c.other_enter && in) c.other_enter = k;
    if (c.other_enter && !c.other_exit && !in) c.other_exit = k;
  }
  if (c.ego_enter) {
    if (!c.other_enter || *c.ego_enter < *c.other_enter) {
      c.observed = CrossingOrder::go;
    } else if (c.other_exit && *c.ego_enter >= *c.other_exit) {
      c.observed = CrossingOrder::wait;
    }
  }
  return c;
}

bool feasible(const RunResult& run) {
  const VehicleParams& p = run.scenario.planner.vehicle;
  for (const ControlInput& u : run.controls) {
    if (std::abs(u.accel) > p.accel_max || std::abs(u.steer) > p.steer_max) return false;
  }
  if (run.controls.empty()) return true;
  const Trajectory replay = rollout(run.states.front(), run.controls, run.scenario.scene.dt, p);
  for (std::size_t k = 0; k < replay.states.size(); ++k) {
    const EgoState& a = replay.states[k];
    const EgoState& b = run.states[k];
    if (a.px != b.px || a.py != b.py || a.psi != b.psi || a.v != b.v) return false;
  }
  return true;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  scenario.validate();
  const std::size_t cycles = options.cycles.value_or(scenario.cycles);
  if (cycles == 0) throw Error(ErrorCategory::invalid_argument, "cycles must be positive");
  const PlannerConfig& cfg = scenario.planner;
  const double dt = scenario.scene.dt;

  RunResult run;
  run.scenario = scenario;
  EgoState x = scenario.ego;
  if (scenario.jitter > 0.0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> noise(-scenario.jitter, scenario.jitter);
    x.px += noise(rng);
    x.py += noise(rng);
  }
  run.states.push_back(x);

  StopMonitor monitor;
  std::vector<bool> violated;
  std::vector<double> totals;
  std::size_t stopped_states = 0;
  RunSummary& s = run.summary;
  s.min_speed = x.v;
  s.min_clearance = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < cycles; ++k) {
    const WorldScene window = scenario.scene.window(k, cfg.horizon + 1);
    const RuleHierarchy h = scenario.build_hierarchy(window, monitor);
    if (k == 0) {
      run.hierarchy = h;
      violated.assign(h.size(), false);
    }
    const PlanResult plan = plan_cycle(x, window, h, cfg);
    const CycleDiagnostics& d = plan.diagnostics;

    CycleTrace c;
    c.cycle = k;
    c.stage1_seconds = d.stage1_seconds;
    c.stage2_seconds = d.stage2_seconds;
    c.total_seconds = d.total_seconds;
    c.state = x;
    c.executed = plan.execute;
    c.robustness = d.robustness;
    c.rank = d.rank;
    c.stage1_rank = d.stage1_rank;
    c.stage1_reward = d.stage1_reward;
    c.refined_reward = d.refined_reward;
    c.branch = d.branch;
    c.stop_latched = monitor.completed();
    c.plan = plan.trajectory.states;
    c.warnings = d.warnings;

    for (std::size_t i = 0; i < d.robustness.size(); ++i) {
      if (d.robustness[i] < 0.0) violated[i] = true;
    }
    if (d.rank > d.stage1_rank) ++s.rank_regressions;
    if (d.refined_reward < d.stage1_reward) ++s.reward_regressions;
    if (d.nonfinite_gradient) ++s.nonfinite_cycles;
    totals.push_back(d.total_seconds);

    for (const ControlInput& u : plan.execute) {
      x = step(x, u, dt, cfg.vehicle);
      run.controls.push_back(u);
      run.states.push_back(x);
      monitor.observe(x, window, scenario.rules);
      // A stop spans the time between its first and last stopped state.
      const bool stopped = in_stop_zone(x, scenario.scene.map) && x.v <= scenario.rules.stop_speed;
      stopped_states = stopped ? stopped_states + 1 : 0;
      if (stopped_states > 0) {
        s.longest_stop_seconds = std::max(s.longest_stop_seconds,
                                          static_cast<double>(stopped_states - 1) * dt);
      }
      s.min_speed = std::min(s.min_speed, x.v);
    }
    run.trace.push_back(std::move(c));
  }

  for (std::size_t t = 0; t < run.states.size(); ++t) {
    const Vec2 p{run.states[t].px, run.states[t].py};
    for (const NonEgoTrack& track : scenario.scene.non_ego) {
      const NonEgoTrack full = t < track.states.size() ? track : extend_track(track, t + 1, dt);
      s.min_clearance = std::min(s.min_clearance, occupancy_margin(p, full, t));
    }
  }

  s.scenario = scenario.name;
  s.seed = options.seed;
  s.cycles = cycles;
  s.timing = summarize(totals);
  for (std::size_t i = 0; i < violated.size(); ++i) {
    if (violated[i]) s.violated.push_back(run.hierarchy.rules[i].name);
  }
  s.final_speed = run.states.back().v;
  s.stop_completed = monitor.completed();
  s.feasible = feasible(run);
  if (scenario.expect.intersection) s.crossing = crossing_times(run, *scenario.expect.intersection);
  return run;
}

RunResult run_scenario(const std::string& name, const RunOptions& options) {
  return run_scenario(find_scenario(name), options);
}

std::vector<std::string> check_expectation(const RunResult& run) {
  std::vector<std::string> failures;
  const Expectation& e = run.scenario.expect;
  const RunSummary& s = run.summary;
  for (const std::string& r : s.violated) {
    if (std::find(e.allowed_violations.begin(), e.allowed_violations.end(), r) ==
        e.allowed_violations.end()) {
      failures.push_back("violated " + r);
    }
  }
  if (!(s.min_clearance > 0.0)) failures.push_back("executed path touches a keep-out box");
  if (e.final_speed_below && !(s.final_speed < *e.final_speed_below)) {
    failures.push_back("final speed " + std::to_string(s.final_speed) + " not below " +
                       std::to_string(*e.final_speed_below));
  }
  if (e.min_stop_seconds && s.longest_stop_seconds + 1e-9 < *e.min_stop_seconds) {
    failures.push_back("longest stop " + std::to_string(s.longest_stop_seconds) + " s");
  }
  if (e.intersection) {
    if (!s.crossing.observed) {
      failures.push_back("no crossing order observed");
    } else if (*s.crossing.observed != e.intersection->order) {
      failures.push_back(std::string("crossing order ") + crossing_order_name(*s.crossing.observed));
    }
  }
  if (!s.feasible) failures.push_back("executed trajectory is not dynamically feasible");
  return failures;
}

}  // namespace rulehier::sim
