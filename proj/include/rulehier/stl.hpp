// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Bounded-time STL over ego trajectories in a world scene.
//
// Quantitative semantics: a predicate yields a signed margin; Not negates;
// And / Always take the minimum; Or / Eventually take the maximum. Temporal
// windows are inclusive step intervals relative to the evaluation step. The
// smooth semantics replace min/max with log-sum-exp at a given temperature.
// Until is not supported.

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "rulehier/dynamics.hpp"
#include "rulehier/world.hpp"

namespace rulehier::stl {

enum class Semantics { hard, smooth };

// Predicate kinds. Each one maps (trajectory, scene, t) to a margin.

/// v - limit
struct SpeedAtLeast {
  double limit;
};
/// limit - v
struct SpeedAtMost {
  double limit;
};
/// Signed lateral offset to the nearest lane line of `kind`.
struct LineClearance {
  LineKind kind;
};
/// occupancy_margin against one non-ego track.
struct CollisionClearance {
  std::size_t track;
};
/// tolerance - |psi - heading of the nearest lane|
struct HeadingAlignment {
  double tolerance;
};
/// Depth inside the nearest stop zone (negative outside).
struct StopZoneDepth {};
/// Linear function of the ego state.
struct AffineState {
  AffineCoefficients coefficients;
};
struct Constant {
  double value;
};

using PredicateKind = std::variant<SpeedAtLeast, SpeedAtMost, LineClearance,
                                   CollisionClearance, HeadingAlignment,
                                   StopZoneDepth, AffineState, Constant>;

struct Interval {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

struct Node;

class Formula {
 public:
  static Formula predicate(std::string name, PredicateKind kind);
  static Formula negation(Formula child);
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula always(Interval window, Formula child);
  static Formula eventually(Interval window, Formula child);

  const Node& node() const { return *node_; }
  /// Number of steps past the evaluation step the formula looks at.
  std::size_t horizon() const;
  std::string to_string() const;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct PredicateNode {
  std::string name;
  PredicateKind kind;
};
struct NotNode {
  Formula child;
};
struct AndNode {
  std::vector<Formula> children;
};
struct OrNode {
  std::vector<Formula> children;
};
struct AlwaysNode {
  Interval window;
  Formula child;
};
struct EventuallyNode {
  Interval window;
  Formula child;
};

struct Node {
  std::variant<PredicateNode, NotNode, AndNode, OrNode, AlwaysNode, EventuallyNode> op;
};

/// Converts a duration into a step count, rounding towards the larger window.
std::size_t steps_for(double seconds, double dt);

template <class S>
S predicate_margin(const PredicateKind& kind, const TrajectoryT<S>& traj,
                   const WorldScene& scene, std::size_t t);

/// Throws Error(horizon, "horizon too short for formula") when the formula's
/// windows run past the end of the trajectory.
template <class S>
S robustness(const Formula& phi, const TrajectoryT<S>& traj, const WorldScene& scene,
             Semantics semantics, double temperature, std::size_t t = 0);

inline double robustness_hard(const Formula& phi, const Trajectory& traj,
                              const WorldScene& scene, std::size_t t = 0) {
  return robustness<double>(phi, traj, scene, Semantics::hard, 1.0, t);
}

inline DiffScalar robustness_smooth(const Formula& phi,
                                    const TrajectoryT<DiffScalar>& traj,
                                    const WorldScene& scene, double temperature,
                                    std::size_t t = 0) {
  return robustness<DiffScalar>(phi, traj, scene, Semantics::smooth, temperature, t);
}

}  // namespace rulehier::stl
