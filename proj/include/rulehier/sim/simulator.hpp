// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Closed-loop receding-horizon simulation. Each cycle plans over the scene
// window starting at the current step, executes the first controls, moves
// the non-ego vehicles along their scripts, and feeds the executed ego
// states to the stop monitor.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rulehier/sim/scenario.hpp"
#include "rulehier/sim/stats.hpp"

namespace rulehier::sim {

struct CycleTrace {
  std::size_t cycle = 0;
  double stage1_seconds = 0.0;
  double stage2_seconds = 0.0;
  double total_seconds = 0.0;
  EgoState state;  ///< ego state the cycle planned from
  std::vector<ControlInput> executed;
  std::vector<double> robustness;  ///< hard, scaled, of the refined plan
  std::uint64_t rank = 0;
  std::uint64_t stage1_rank = 0;
  double stage1_reward = 0.0;
  double refined_reward = 0.0;
  std::size_t branch = 0;
  bool stop_latched = false;  ///< latch state the cycle planned with
  std::vector<EgoState> plan;
  std::vector<std::string> warnings;
};

struct CrossingTimes {
  std::optional<std::size_t> ego_enter;
  std::optional<std::size_t> other_enter;
  std::optional<std::size_t> other_exit;
  std::optional<CrossingOrder> observed;
};

struct RunSummary {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t cycles = 0;
  TimingStats timing;
  std::vector<std::string> violated;  ///< rules with negative robustness in any plan
  std::size_t rank_regressions = 0;
  std::size_t reward_regressions = 0;
  std::size_t nonfinite_cycles = 0;
  double min_clearance = 0.0;  ///< executed ego center to every keep-out box
  double min_speed = 0.0;
  double final_speed = 0.0;
  double longest_stop_seconds = 0.0;
  bool stop_completed = false;
  bool feasible = false;  ///< executed states re-integrate exactly within bounds
  CrossingTimes crossing;
};

struct RunOptions {
  std::optional<std::size_t> cycles;  ///< overrides the scenario length
  std::uint64_t seed = 0;
};

struct RunResult {
  Scenario scenario;
  RuleHierarchy hierarchy;  ///< as built at cycle 0, for names and parameters
  std::vector<CycleTrace> trace;
  std::vector<EgoState> states;  ///< executed, one more than controls
  std::vector<ControlInput> controls;
  RunSummary summary;
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});
RunResult run_scenario(const std::string& name, const RunOptions& options = {});

/// Checks a finished run against its scenario's expectation. Returns one
/// message per failed check; empty means the run shows the expected outcome.
std::vector<std::string> check_expectation(const RunResult& run);

}  // namespace rulehier::sim
