// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Scenario configuration: the scene, the ego start, which rule hierarchy to
// plan with, and the outcome the run is expected to show. Scenarios are
// JSON files; docs/scenario-format.md describes the schema.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rulehier/planner.hpp"
#include "rulehier/rulebank.hpp"

namespace rulehier::sim {

enum class HierarchyKind { road, intersection };

enum class CrossingOrder { wait, go };

/// Who enters the shared region first.
struct IntersectionExpectation {
  std::string track;  ///< the crossing non-ego vehicle
  AxisBox region;
  CrossingOrder order = CrossingOrder::wait;
};

struct Expectation {
  std::vector<std::string> allowed_violations;
  std::optional<double> final_speed_below;  ///< ego must end slower than this
  std::optional<double> min_stop_seconds;   ///< ego must hold a stop this long
  std::optional<IntersectionExpectation> intersection;
};

struct Scenario {
  std::string name;
  std::string description;
  WorldScene scene;  ///< tracks cover at least cycles + horizon + 1 steps
  EgoState ego;
  HierarchyKind hierarchy = HierarchyKind::road;
  RuleParams rules;
  PlannerConfig planner;
  std::size_t cycles = 0;
  double jitter = 0.0;  ///< seeded uniform perturbation of the ego start (m)
  Expectation expect;

  /// Throws Error(config) when the expectation names a rule the hierarchy
  /// does not have, or the scene is malformed.
  void validate() const;
  RuleHierarchy build_hierarchy(const WorldScene& window, const StopMonitor& monitor) const;
  std::vector<std::string> rule_names() const;
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

/// Directory searched for scenario files: $RULEHIER_SCENARIO_DIR if set,
/// otherwise the directory the library was configured with.
std::filesystem::path scenario_directory();

/// Names of every scenario file in `dir`, sorted.
std::vector<std::string> registered_scenarios(const std::filesystem::path& dir = scenario_directory());

/// Throws Error(unknown_scenario) listing the registered names.
Scenario find_scenario(const std::string& name,
                       const std::filesystem::path& dir = scenario_directory());

const char* hierarchy_kind_name(HierarchyKind kind);
const char* crossing_order_name(CrossingOrder order);

}  // namespace rulehier::sim
