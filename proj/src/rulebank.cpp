// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/rulebank.hpp"

#include "rulehier/error.hpp"

namespace rulehier {

using stl::Formula;
using stl::Interval;

namespace {

void require_road_geometry(const WorldScene& scene) {
  if (scene.map.lanes.empty()) {
    throw Error(ErrorCategory::invalid_argument, "missing lane geometry: no lanes");
  }
  if (!scene.map.has_lines(LineKind::solid) || !scene.map.has_lines(LineKind::dashed)) {
    throw Error(ErrorCategory::invalid_argument,
                "missing lane geometry: need solid and dashed lines");
  }
}

Formula collision_rule(const WorldScene& scene, const RuleParams& p, Interval all) {
  std::vector<Formula> clear;
  for (std::size_t k = 0; k < scene.non_ego.size(); ++k) {
    clear.push_back(Formula::predicate("clear_of_" + scene.non_ego[k].name,
                                       stl::CollisionClearance{k}));
  }
  if (clear.empty()) {
    clear.push_back(Formula::predicate("no_agents", stl::Constant{p.no_agent_clearance}));
  }
  Formula body = clear.size() == 1 ? clear.front() : Formula::conjunction(std::move(clear));
  return Formula::always(all, std::move(body));
}

std::vector<Rule> road_rules(const WorldScene& scene, const RuleParams& p,
                             std::size_t horizon) {
  require_road_geometry(scene);
  const Interval all{0, horizon};
  std::vector<Rule> rules;
  rules.push_back({rule_names::no_collision, collision_rule(scene, p, all), p.scales.collision});
  rules.push_back({rule_names::solid_line,
                   Formula::always(all, Formula::predicate("solid_offset",
                                                           stl::LineClearance{LineKind::solid})),
                   p.scales.solid_line});
  rules.push_back({rule_names::dashed_line,
                   Formula::always(all, Formula::predicate("dashed_offset",
                                                           stl::LineClearance{LineKind::dashed})),
                   p.scales.dashed_line});
  rules.push_back({rule_names::orientation,
                   Formula::eventually(Interval{horizon, horizon},
                                       Formula::predicate("aligned", stl::HeadingAlignment{
                                                                         p.heading_tolerance})),
                   p.scales.orientation});
  rules.push_back({rule_names::min_speed,
                   Formula::always(all, Formula::predicate("above_min_speed",
                                                           stl::SpeedAtLeast{p.min_speed})),
                   p.scales.min_speed});
  rules.push_back({rule_names::max_speed,
                   Formula::always(all, Formula::predicate("below_max_speed",
                                                           stl::SpeedAtMost{p.max_speed})),
                   p.scales.max_speed});
  return rules;
}

RuleHierarchy finish(std::vector<Rule> rules, const RuleParams& p) {
  RuleHierarchy h{std::move(rules), p.a, p.c};
  h.validate();
  return h;
}

}  // namespace

void StopMonitor::observe(const EgoState& x, const WorldScene& scene,
                          const RuleParams& params) {
  if (completed_) return;
  if (scene.map.stop_zones.empty()) return;
  const bool inside = nearest_stop_zone_depth(x.px, x.py, scene.map) >= 0.0;
  const bool stopped = params.stop_speed - x.v >= 0.0;
  consecutive_ = (inside && stopped) ? consecutive_ + 1 : 0;
  if (consecutive_ >= stl::steps_for(params.stop_duration, scene.dt) + 1) completed_ = true;
}

RuleHierarchy build_road_hierarchy(const WorldScene& scene, const RuleParams& params,
                                   std::size_t horizon) {
  if (horizon == 0) throw Error(ErrorCategory::invalid_argument, "horizon must be positive");
  return finish(road_rules(scene, params, horizon), params);
}

RuleHierarchy build_intersection_hierarchy(const WorldScene& scene,
                                           const RuleParams& params,
                                           std::size_t horizon,
                                           const StopMonitor& monitor) {
  if (horizon == 0) throw Error(ErrorCategory::invalid_argument, "horizon must be positive");
  if (scene.map.stop_zones.empty()) {
    throw Error(ErrorCategory::invalid_argument, "missing lane geometry: no stop zone");
  }
  std::vector<Rule> rules = road_rules(scene, params, horizon);

  Formula stop = Formula::predicate("stop_completed", stl::Constant{1.0});
  if (!monitor.completed()) {
    const std::size_t hold = stl::steps_for(params.stop_duration, scene.dt);
    if (hold > horizon) {
      throw Error(ErrorCategory::horizon, "stop duration does not fit in the planning horizon");
    }
    Formula stopped_in_zone = Formula::conjunction(
        {Formula::predicate("in_stop_zone", stl::StopZoneDepth{}),
         Formula::predicate("stopped", stl::SpeedAtMost{params.stop_speed})});
    stop = Formula::eventually(Interval{0, horizon - hold},
                               Formula::always(Interval{0, hold}, std::move(stopped_in_zone)));
  }
  rules.insert(rules.begin() + 3, Rule{rule_names::stop_sign, std::move(stop), params.scales.stop_sign});
  return finish(std::move(rules), params);
}

}  // namespace rulehier
