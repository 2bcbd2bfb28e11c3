// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Two-stage receding-horizon planner.
//
// Stage 1 expands a tree of piecewise-constant motion primitives (|M| actions
// held for `segment` steps, |M|^ceil(T/segment) branches) and keeps the
// branch with the largest smooth rank-preserving reward. Stage 2 warm-starts
// Adam on the negated smooth reward from that branch and returns the best
// iterate seen, so refinement never lowers the smooth reward.

#include <chrono>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rulehier/batch.hpp"
#include "rulehier/hierarchy.hpp"

namespace rulehier {

/// {-5, 5} m/s^2 x {-pi/8, 0, pi/8} rad, acceleration-major.
std::vector<ControlInput> default_actions();

struct PlannerConfig {
  std::size_t horizon = 10;   ///< T, steps
  std::size_t segment = 2;    ///< steps each primitive is held
  std::size_t execute = 1;    ///< steps executed per cycle
  double learning_rate = 0.01;
  std::size_t iterations = 10;  ///< K, Adam steps
  double temperature = 0.05;    ///< log-sum-exp smoothing of min/max
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::vector<ControlInput> actions = default_actions();
  VehicleParams vehicle;

  void validate() const;
};

class PrimitiveTree {
 public:
  PrimitiveTree(const EgoState& x0, std::vector<ControlInput> actions, std::size_t segment,
                std::size_t horizon, double dt, const VehicleParams& vehicle);

  std::size_t branch_count() const { return branch_count_; }
  std::size_t depth() const { return depth_; }
  std::size_t horizon() const { return horizon_; }
  const std::vector<ControlInput>& actions() const { return actions_; }

  /// Action held during `level` of `branch` (level 0 is the first segment).
  std::size_t action_index(std::size_t branch, std::size_t level) const;
  std::vector<ControlInput> branch_controls(std::size_t branch) const;
  /// Rolled-out states of every branch, sharing common prefixes.
  const StateBatch& states() const { return states_; }

 private:
  std::vector<ControlInput> actions_;
  std::size_t segment_;
  std::size_t horizon_;
  std::size_t depth_;
  std::size_t branch_count_;
  StateBatch states_;
};

/// Throws Error(invalid_argument) for an empty action set.
PrimitiveTree generate_primitive_tree(const EgoState& x0, std::span<const ControlInput> actions,
                                      std::size_t segment, std::size_t horizon, double dt,
                                      const VehicleParams& vehicle = {});

/// Smooth reward of every branch.
std::vector<double> branch_rewards(const PrimitiveTree& tree, const RuleHierarchy& hierarchy,
                                   const WorldScene& scene, double temperature,
                                   const simd::KernelTable& kernels = simd::kernels());

struct Stage1Result {
  std::size_t branch = 0;
  double reward = 0.0;
  std::vector<ControlInput> controls;
};

/// Arg-max of the smooth reward; ties go to the lowest branch index.
Stage1Result stage1_select(const PrimitiveTree& tree, const RuleHierarchy& hierarchy,
                           const WorldScene& scene, double temperature,
                           const simd::KernelTable& kernels = simd::kernels());

/// Reward to maximise over the flattened controls; fills `gradient`.
using Objective = std::function<double(std::span<const double> flat, std::span<double> gradient)>;

/// The smooth rank-preserving reward of the rollout from x0.
Objective smooth_reward_objective(const EgoState& x0, const RuleHierarchy& hierarchy,
                                  const WorldScene& scene, const PlannerConfig& config);

double smooth_reward(const EgoState& x0, std::span<const ControlInput> controls,
                     const RuleHierarchy& hierarchy, const WorldScene& scene,
                     const PlannerConfig& config);

struct Stage2Result {
  std::vector<ControlInput> controls;
  double initial_reward = 0.0;
  double best_reward = 0.0;
  std::size_t best_iterate = 0;  ///< 0 is the warm start
  std::size_t evaluations = 0;
  bool nonfinite = false;
  std::vector<double> rewards;  ///< reward of each evaluated iterate
};

Stage2Result stage2_refine(std::span<const ControlInput> initial, const Objective& objective,
                           const PlannerConfig& config);

Stage2Result stage2_refine(std::span<const ControlInput> initial, const EgoState& x0,
                           const RuleHierarchy& hierarchy, const WorldScene& scene,
                           const PlannerConfig& config);

struct CycleDiagnostics {
  double stage1_seconds = 0.0;  ///< tree generation and branch selection
  double stage2_seconds = 0.0;
  double total_seconds = 0.0;
  std::size_t branch = 0;
  double stage1_reward = 0.0;
  double refined_reward = 0.0;
  std::vector<double> stage1_robustness;  ///< hard, scaled
  std::uint64_t stage1_rank = 0;
  std::vector<double> robustness;  ///< hard, scaled, after refinement
  std::uint64_t rank = 0;
  std::size_t tree_searches = 0;
  std::size_t gradient_runs = 0;
  std::size_t objective_evaluations = 0;
  bool nonfinite_gradient = false;
  std::vector<std::string> warnings;
};

struct PlanResult {
  std::vector<ControlInput> execute;  ///< first `execute` controls
  std::vector<ControlInput> controls;  ///< the whole refined plan
  Trajectory trajectory;               ///< rollout of `controls`
  CycleDiagnostics diagnostics;
};

PlanResult plan_cycle(const EgoState& x, const WorldScene& scene, const RuleHierarchy& hierarchy,
                      const PlannerConfig& config);

/// Hard, tanh-scaled robustness vector of a trajectory.
std::vector<double> hard_robustness(const RuleHierarchy& hierarchy, const Trajectory& traj,
                                    const WorldScene& scene);

}  // namespace rulehier
