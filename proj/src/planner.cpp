// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/planner.hpp"

#include <cmath>
#include <numbers>

#include "rulehier/error.hpp"

namespace rulehier {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

std::vector<ControlInput> default_actions() {
  std::vector<ControlInput> actions;
  for (double accel : {-5.0, 5.0}) {
    for (double steer : {-std::numbers::pi / 8.0, 0.0, std::numbers::pi / 8.0}) {
      actions.push_back({accel, steer});
    }
  }
  return actions;
}

void PlannerConfig::validate() const {
  if (horizon == 0) throw Error(ErrorCategory::invalid_argument, "horizon must be positive");
  if (segment == 0) throw Error(ErrorCategory::invalid_argument, "segment must be positive");
  if (execute == 0 || execute > horizon) {
    throw Error(ErrorCategory::invalid_argument, "execute must lie in [1, horizon]");
  }
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCategory::invalid_argument, "learning rate must be positive");
  }
  if (!(temperature > 0.0)) {
    throw Error(ErrorCategory::invalid_argument, "temperature must be positive");
  }
  if (actions.empty()) throw Error(ErrorCategory::invalid_argument, "empty action set");
}

PrimitiveTree::PrimitiveTree(const EgoState& x0, std::vector<ControlInput> actions,
                             std::size_t segment, std::size_t horizon, double dt,
                             const VehicleParams& vehicle)
    : actions_(std::move(actions)), segment_(segment), horizon_(horizon) {
  if (actions_.empty()) throw Error(ErrorCategory::invalid_argument, "empty action set");
  if (segment_ == 0 || horizon_ == 0) {
    throw Error(ErrorCategory::invalid_argument, "segment and horizon must be positive");
  }
  depth_ = ceil_div(horizon_, segment_);
  branch_count_ = 1;
  for (std::size_t i = 0; i < depth_; ++i) branch_count_ *= actions_.size();

  for (ControlInput& a : actions_) a = clamp_control(a, vehicle);
  std::vector<double> beta, sin_beta;
  for (const ControlInput& a : actions_) {
    beta.push_back(slip_angle(a.steer, vehicle));
    sin_beta.push_back(std::sin(beta.back()));
  }

  // Expand level by level. `frontier` holds one state per tree node at the
  // current level, in branch-index order; each node covers `stride`
  // consecutive branches.
  states_ = StateBatch(branch_count_, horizon_ + 1);
  for (std::size_t b = 0; b < branch_count_; ++b) states_.set(0, b, x0);
  // The state after step t is fixed by the primitives of the segments begun
  // so far.
  states_.distinct.assign(horizon_ + 1, 1);
  for (std::size_t t = 1; t <= horizon_; ++t) {
    std::size_t d = 1;
    for (std::size_t l = 0; l <= (t - 1) / segment_; ++l) d *= actions_.size();
    states_.distinct[t] = d;
  }
  std::vector<EgoState> frontier{x0};
  std::size_t stride = branch_count_;
  std::size_t t = 0;
  for (std::size_t level = 0; level < depth_; ++level) {
    const std::size_t len = std::min(segment_, horizon_ - t);
    stride /= actions_.size();
    std::vector<EgoState> next;
    next.reserve(frontier.size() * actions_.size());
    for (const EgoState& parent : frontier) {
      for (std::size_t a = 0; a < actions_.size(); ++a) {
        EgoState x = parent;
        const std::size_t node = next.size();
        for (std::size_t k = 0; k < len; ++k) {
          x = step_with_slip(x, actions_[a].accel, beta[a], sin_beta[a], dt, vehicle);
          for (std::size_t b = node * stride; b < (node + 1) * stride; ++b) {
            states_.set(t + k + 1, b, x);
          }
        }
        next.push_back(x);
      }
    }
    frontier = std::move(next);
    t += len;
  }
}

std::size_t PrimitiveTree::action_index(std::size_t branch, std::size_t level) const {
  std::size_t divisor = 1;
  for (std::size_t i = level + 1; i < depth_; ++i) divisor *= actions_.size();
  return (branch / divisor) % actions_.size();
}

std::vector<ControlInput> PrimitiveTree::branch_controls(std::size_t branch) const {
  if (branch >= branch_count_) throw Error(ErrorCategory::invalid_argument, "branch out of range");
  std::vector<ControlInput> controls;
  controls.reserve(horizon_);
  for (std::size_t t = 0; t < horizon_; ++t) {
    controls.push_back(actions_[action_index(branch, t / segment_)]);
  }
  return controls;
}

PrimitiveTree generate_primitive_tree(const EgoState& x0, std::span<const ControlInput> actions,
                                      std::size_t segment, std::size_t horizon, double dt,
                                      const VehicleParams& vehicle) {
  return PrimitiveTree(x0, std::vector<ControlInput>(actions.begin(), actions.end()), segment,
                       horizon, dt, vehicle);
}

std::vector<double> branch_rewards(const PrimitiveTree& tree, const RuleHierarchy& hierarchy,
                                   const WorldScene& scene, double temperature,
                                   const simd::KernelTable& kernels) {
  const std::size_t n = tree.branch_count();
  std::vector<std::vector<double>> rho;
  rho.reserve(hierarchy.size());
  for (const Rule& r : hierarchy.rules) {
    std::vector<double> row = stl::batch_robustness(r.formula, tree.states(), scene,
                                                    stl::Semantics::smooth, temperature, kernels);
    for (double& x : row) x = std::tanh(x / r.scale);
    rho.push_back(std::move(row));
  }
  std::vector<double> rewards(n);
  std::vector<double> v(hierarchy.size());
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = rho[i][b];
    rewards[b] = reward_smooth<double>(v, hierarchy.a, hierarchy.c);
  }
  return rewards;
}

Stage1Result stage1_select(const PrimitiveTree& tree, const RuleHierarchy& hierarchy,
                           const WorldScene& scene, double temperature,
                           const simd::KernelTable& kernels) {
  const std::vector<double> rewards = branch_rewards(tree, hierarchy, scene, temperature, kernels);
  Stage1Result best;
  best.reward = rewards.front();
  for (std::size_t b = 1; b < rewards.size(); ++b) {
    if (rewards[b] > best.reward) {
      best.reward = rewards[b];
      best.branch = b;
    }
  }
  best.controls = tree.branch_controls(best.branch);
  return best;
}

Objective smooth_reward_objective(const EgoState& x0, const RuleHierarchy& hierarchy,
                                  const WorldScene& scene, const PlannerConfig& config) {
  return [x0, &hierarchy, &scene, &config](std::span<const double> flat,
                                           std::span<double> gradient) {
    ad::Tape tape;
    const std::vector<ControlInput> controls = unflatten(flat);
    const std::vector<ControlT<DiffScalar>> u = lift_controls(tape, controls);
    const TrajectoryT<DiffScalar> traj = rollout<DiffScalar>(
        constant_state(x0), std::span<const ControlT<DiffScalar>>(u), scene.dt, config.vehicle);
    const std::vector<DiffScalar> rho = scaled_robustness<DiffScalar>(
        hierarchy, traj, scene, stl::Semantics::smooth, config.temperature);
    const DiffScalar reward =
        reward_smooth<DiffScalar>(std::span<const DiffScalar>(rho), hierarchy.a, hierarchy.c);
    const std::vector<double> g = tape.gradient(reward);
    std::copy(g.begin(), g.end(), gradient.begin());
    return reward.value();
  };
}

double smooth_reward(const EgoState& x0, std::span<const ControlInput> controls,
                     const RuleHierarchy& hierarchy, const WorldScene& scene,
                     const PlannerConfig& config) {
  const Trajectory traj = rollout(x0, controls, scene.dt, config.vehicle);
  const std::vector<double> rho = scaled_robustness<double>(
      hierarchy, traj, scene, stl::Semantics::smooth, config.temperature);
  return reward_smooth<double>(rho, hierarchy.a, hierarchy.c);
}

Stage2Result stage2_refine(std::span<const ControlInput> initial, const Objective& objective,
                           const PlannerConfig& config) {
  if (initial.empty()) throw Error(ErrorCategory::invalid_argument, "empty warm start");
  const VehicleParams& p = config.vehicle;
  std::vector<double> u = flatten(initial);
  const std::size_t n = u.size();
  auto clamp_flat = [&p](std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); i += 2) {
      x[i] = clamp_value(x[i], -p.accel_max, p.accel_max);
      x[i + 1] = clamp_value(x[i + 1], -p.steer_max, p.steer_max);
    }
  };
  clamp_flat(u);

  Stage2Result result;
  std::vector<double> best = u;
  std::vector<double> grad(n), m(n, 0.0), v(n, 0.0);
  double beta1_power = 1.0;
  double beta2_power = 1.0;
  for (std::size_t k = 0; k <= config.iterations; ++k) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const double reward = objective(u, grad);
    ++result.evaluations;
    bool finite = std::isfinite(reward);
    for (double g : grad) finite = finite && std::isfinite(g);
    if (!finite) {
      result.nonfinite = true;
      if (k == 0) result.initial_reward = result.best_reward = reward;
      break;
    }
    result.rewards.push_back(reward);
    if (k == 0) {
      result.initial_reward = result.best_reward = reward;
    } else if (reward > result.best_reward) {
      result.best_reward = reward;
      result.best_iterate = k;
      best = u;
    }
    if (k == config.iterations) break;

    // Adam on -reward.
    beta1_power *= config.beta1;
    beta2_power *= config.beta2;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = -grad[i];
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
      const double m_hat = m[i] / (1.0 - beta1_power);
      const double v_hat = v[i] / (1.0 - beta2_power);
      u[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
    clamp_flat(u);
  }
  result.controls = unflatten(best);
  return result;
}

Stage2Result stage2_refine(std::span<const ControlInput> initial, const EgoState& x0,
                           const RuleHierarchy& hierarchy, const WorldScene& scene,
                           const PlannerConfig& config) {
  return stage2_refine(initial, smooth_reward_objective(x0, hierarchy, scene, config), config);
}

std::vector<double> hard_robustness(const RuleHierarchy& hierarchy, const Trajectory& traj,
                                    const WorldScene& scene) {
  return scaled_robustness<double>(hierarchy, traj, scene, stl::Semantics::hard, 1.0);
}

PlanResult plan_cycle(const EgoState& x, const WorldScene& scene, const RuleHierarchy& hierarchy,
                      const PlannerConfig& config) {
  config.validate();
  hierarchy.validate();
  const Clock::time_point start = Clock::now();
  PlanResult out;
  CycleDiagnostics& d = out.diagnostics;

  const PrimitiveTree tree(x, config.actions, config.segment, config.horizon, scene.dt,
                           config.vehicle);
  const Stage1Result s1 = stage1_select(tree, hierarchy, scene, config.temperature);
  ++d.tree_searches;
  d.stage1_seconds = seconds_since(start);

  const Clock::time_point refine_start = Clock::now();
  const Stage2Result s2 = stage2_refine(s1.controls, x, hierarchy, scene, config);
  ++d.gradient_runs;
  d.stage2_seconds = seconds_since(refine_start);

  d.branch = s1.branch;
  d.stage1_reward = s1.reward;
  d.refined_reward = s2.best_reward;
  d.objective_evaluations = s2.evaluations;
  d.nonfinite_gradient = s2.nonfinite;
  if (s2.nonfinite) d.warnings.push_back("non-finite gradient; refinement stopped early");

  const Trajectory coarse = rollout(x, s1.controls, scene.dt, config.vehicle);
  d.stage1_robustness = hard_robustness(hierarchy, coarse, scene);
  d.stage1_rank = rank(d.stage1_robustness);

  out.controls = s2.controls;
  out.trajectory = rollout(x, out.controls, scene.dt, config.vehicle);
  out.controls = out.trajectory.controls;
  d.robustness = hard_robustness(hierarchy, out.trajectory, scene);
  d.rank = rank(d.robustness);
  if (d.rank > d.stage1_rank) {
    d.warnings.push_back("refinement worsened the hard rank from " +
                         std::to_string(d.stage1_rank) + " to " + std::to_string(d.rank));
  }
  out.execute.assign(out.controls.begin(),
                     out.controls.begin() + static_cast<std::ptrdiff_t>(config.execute));
  d.total_seconds = seconds_since(start);
  return out;
}

}  // namespace rulehier
