// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Concrete driving rules.
//
// Road navigation, highest priority first:
//   no_collision  Always[0,T]( And_k clearance to non-ego k )
//   solid_line    Always[0,T]( offset to the nearest solid line )
//   dashed_line   Always[0,T]( offset to the nearest dashed line )
//   orientation   at step T: tol - |psi - lane heading|
//   min_speed     Always[0,T]( v - v_min )
//   max_speed     Always[0,T]( v_max - v )
//
// Intersection negotiation inserts stop_sign at priority 4:
//   Eventually[0,T-K]( Always[0,K]( And(zone depth, v_stop - v) ) ),
//   K = ceil(stop duration / dt), replaced by the constant +1 once the
//   simulator's StopMonitor has latched a completed stop.

#include <string>
#include <vector>

#include "rulehier/hierarchy.hpp"

namespace rulehier {

struct RuleScales {
  double collision = 2.0;
  double solid_line = 1.0;
  double dashed_line = 1.0;
  double orientation = 0.1;
  double min_speed = 2.0;
  double max_speed = 2.0;
  double stop_sign = 1.0;
};

struct RuleParams {
  double heading_tolerance = 0.1;  ///< rad
  double min_speed = 2.0;          ///< m/s
  double max_speed = 15.0;         ///< m/s
  double stop_speed = 0.5;         ///< below this the ego counts as stopped
  double stop_duration = 1.0;      ///< s
  double no_agent_clearance = 100.0;  ///< margin used when the scene is empty
  RuleScales scales;
  double a = 2.01;
  double c = 30.0;
};

namespace rule_names {
inline constexpr const char* no_collision = "no_collision";
inline constexpr const char* solid_line = "solid_line";
inline constexpr const char* dashed_line = "dashed_line";
inline constexpr const char* orientation = "orientation";
inline constexpr const char* min_speed = "min_speed";
inline constexpr const char* max_speed = "max_speed";
inline constexpr const char* stop_sign = "stop_sign";
}  // namespace rule_names

/// Latched record of a completed stop, fed with executed ego states.
class StopMonitor {
 public:
  /// Counts consecutive executed states inside a stop zone below the stop
  /// speed; latches once they span the stop duration.
  void observe(const EgoState& x, const WorldScene& scene, const RuleParams& params);

  bool completed() const { return completed_; }
  std::size_t consecutive() const { return consecutive_; }

 private:
  bool completed_ = false;
  std::size_t consecutive_ = 0;
};

RuleHierarchy build_road_hierarchy(const WorldScene& scene, const RuleParams& params,
                                   std::size_t horizon);

RuleHierarchy build_intersection_hierarchy(const WorldScene& scene,
                                           const RuleParams& params,
                                           std::size_t horizon,
                                           const StopMonitor& monitor);

}  // namespace rulehier
