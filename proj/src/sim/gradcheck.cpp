// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/sim/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rulehier/error.hpp"

namespace rulehier::sim {

GradcheckReport gradcheck(const Scenario& road, const GradcheckOptions& options) {
  if (road.hierarchy != HierarchyKind::road || road.scene.map.lanes.empty()) {
    throw Error(ErrorCategory::invalid_argument, "gradcheck needs a road scenario with a lane");
  }
  const PlannerConfig& cfg = road.planner;
  const VehicleParams& p = cfg.vehicle;
  const WorldScene scene = road.scene.window(0, cfg.horizon + 1);
  const RuleHierarchy h = build_road_hierarchy(scene, road.rules, cfg.horizon);
  const Polyline& lane = road.scene.map.lanes.front().center;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  GradcheckReport report;
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const auto& segs = lane.segments();
    const Segment& s = segs[static_cast<std::size_t>(uniform(0.0, 1.0) * segs.size()) % segs.size()];
    const double f = uniform(0.0, 1.0);
    const double heading = std::atan2(s.dy, s.dx);
    EgoState x0;
    x0.px = s.ax + f * s.dx - std::sin(heading) * uniform(-1.5, 1.5);
    x0.py = s.ay + f * s.dy + std::cos(heading) * uniform(-1.5, 1.5);
    x0.psi = wrap_angle_value(heading + uniform(-0.3, 0.3));
    x0.v = uniform(11.0, 14.0);

    std::vector<ControlInput> controls(cfg.horizon);
    for (ControlInput& u : controls) {
      u.accel = uniform(-0.95, 0.95) * p.accel_max;
      u.steer = uniform(-0.95, 0.95) * p.steer_max;
    }
    std::vector<double> flat = flatten(controls);
    std::vector<double> grad(flat.size());
    const Objective objective = smooth_reward_objective(x0, h, scene, cfg);
    objective(flat, grad);

    for (std::size_t i = 0; i < flat.size(); ++i) {
      const double saved = flat[i];
      flat[i] = saved + options.step;
      const double up = smooth_reward(x0, unflatten(flat), h, scene, cfg);
      flat[i] = saved - options.step;
      const double down = smooth_reward(x0, unflatten(flat), h, scene, cfg);
      flat[i] = saved;
      const double fd = (up - down) / (2.0 * options.step);
      const double err = std::abs(grad[i] - fd);
      const double mag = std::max(std::abs(grad[i]), std::abs(fd));
      ++report.entries;
      report.max_abs_error = std::max(report.max_abs_error, err);
      if (mag > options.atol) report.max_rel_error = std::max(report.max_rel_error, err / mag);
      if (err > options.rtol * mag + options.atol) ++report.failures;
    }
    ++report.trials;
  }
  return report;
}

}  // namespace rulehier::sim
