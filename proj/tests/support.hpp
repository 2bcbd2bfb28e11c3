// Shared fixtures for the test binaries: a small road scene, random
// trajectories, random formulas, and a boolean STL evaluator that works
// directly on states (no robustness involved).

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "rulehier/dynamics.hpp"
#include "rulehier/stl.hpp"

namespace testing {

using namespace rulehier;

/// Two-lane road along +x: solid edge at y = -2, dashed divider at y = 2
/// (drawn towards -x so the ego lane is on its positive side), a stop zone
/// and one parked car.
inline WorldScene road_scene(std::size_t steps = 11) {
  WorldScene s;
  s.map.lane_lines.push_back({Polyline({{-50.0, -2.0}, {200.0, -2.0}}), LineKind::solid});
  s.map.lane_lines.push_back({Polyline({{200.0, 2.0}, {-50.0, 2.0}}), LineKind::dashed});
  s.map.lanes.push_back({Polyline({{-50.0, 0.0}, {200.0, 0.0}}), {0.0, 0.0}});
  s.map.lanes.push_back({Polyline({{-50.0, 4.0}, {200.0, 4.0}}), {0.0, 0.0}});
  s.map.stop_zones.push_back({{15.0, 0.0}, {2.0, 2.0}});
  NonEgoTrack parked;
  parked.name = "parked";
  parked.states.assign(steps, AgentState{{20.0, 0.0}, 0.0, 0.0});
  s.non_ego.push_back(parked);
  NonEgoTrack mover;
  mover.name = "mover";
  mover.states.push_back({{-5.0, 4.0}, 0.3, 8.0});
  s.non_ego.push_back(extend_track(mover, steps, s.dt));
  return s;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<ControlInput> random_controls(std::mt19937_64& rng, std::size_t n,
                                                 double fraction = 1.0) {
  const VehicleParams p;
  std::vector<ControlInput> u(n);
  for (ControlInput& c : u) {
    c.accel = uniform(rng, -fraction, fraction) * p.accel_max;
    c.steer = uniform(rng, -fraction, fraction) * p.steer_max;
  }
  return u;
}

inline EgoState random_start(std::mt19937_64& rng) {
  return {uniform(rng, 0.0, 25.0), uniform(rng, -3.0, 5.0), uniform(rng, -0.5, 0.5),
          uniform(rng, 0.0, 14.0)};
}

inline Trajectory random_trajectory(std::mt19937_64& rng, std::size_t steps = 10) {
  return rollout(random_start(rng), random_controls(rng, steps), 0.2, VehicleParams{});
}

/// Random formula over predicates whose truth the boolean evaluator below
/// decides from raw states. `budget` bounds the remaining time window.
inline stl::Formula random_formula(std::mt19937_64& rng, int depth, std::size_t budget) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  if (depth == 0 || pick(4) == 0) {
    switch (pick(6)) {
      case 0:
        return stl::Formula::predicate("fast", stl::SpeedAtLeast{uniform(rng, 0.0, 14.0)});
      case 1:
        return stl::Formula::predicate("slow", stl::SpeedAtMost{uniform(rng, 0.0, 14.0)});
      case 2: {
        AffineCoefficients c{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1),
                             uniform(rng, -1, 1), uniform(rng, -5, 5)};
        return stl::Formula::predicate("affine", stl::AffineState{c});
      }
      case 3:
        return stl::Formula::predicate("clear", stl::CollisionClearance{rng() % 2});
      case 4:
        return stl::Formula::predicate("in_zone", stl::StopZoneDepth{});
      default:
        return stl::Formula::predicate("const", stl::Constant{uniform(rng, -1, 1)});
    }
  }
  auto window = [&]() {
    const std::size_t lo = budget == 0 ? 0 : rng() % (budget + 1);
    const std::size_t hi = lo + (budget - lo == 0 ? 0 : rng() % (budget - lo + 1));
    return stl::Interval{lo, hi};
  };
  switch (pick(6)) {
    case 0:
      return stl::Formula::negation(random_formula(rng, depth - 1, budget));
    case 1:
    case 2: {
      std::vector<stl::Formula> kids;
      const int n = 2 + pick(2);
      for (int i = 0; i < n; ++i) kids.push_back(random_formula(rng, depth - 1, budget));
      return pick(2) == 0 ? stl::Formula::conjunction(std::move(kids))
                          : stl::Formula::disjunction(std::move(kids));
    }
    case 3:
    case 4: {
      const stl::Interval w = window();
      return stl::Formula::always(w, random_formula(rng, depth - 1, budget - w.hi));
    }
    default: {
      const stl::Interval w = window();
      return stl::Formula::eventually(w, random_formula(rng, depth - 1, budget - w.hi));
    }
  }
}

/// Whether the state satisfies an atomic proposition, decided from its
/// definition rather than from a margin.
inline bool holds(const stl::PredicateKind& kind, const EgoState& x, const WorldScene& scene,
                  std::size_t t) {
  struct Visitor {
    const EgoState& x;
    const WorldScene& scene;
    std::size_t t;
    bool operator()(const stl::SpeedAtLeast& p) const { return x.v >= p.limit; }
    bool operator()(const stl::SpeedAtMost& p) const { return x.v <= p.limit; }
    bool operator()(const stl::AffineState& p) const {
      const AffineCoefficients& c = p.coefficients;
      return c.px * x.px + c.py * x.py + c.psi * x.psi + c.v * x.v + c.offset >= 0.0;
    }
    bool operator()(const stl::Constant& p) const { return p.value >= 0.0; }
    bool operator()(const stl::CollisionClearance& p) const {
      // Outside (or on the boundary of) the keep-out rectangle.
      const NonEgoTrack& tr = scene.non_ego[p.track];
      const AgentState& a = tr.states[t];
      const double h = tr.frame == KeepOutFrame::body ? a.heading : 0.0;
      const double dx = x.px - a.position.x;
      const double dy = x.py - a.position.y;
      const double along = std::cos(h) * dx + std::sin(h) * dy;
      const double across = -std::sin(h) * dx + std::cos(h) * dy;
      return !(std::abs(along) < tr.half_extents.x && std::abs(across) < tr.half_extents.y);
    }
    bool operator()(const stl::StopZoneDepth&) const {
      for (const StopZone& z : scene.map.stop_zones) {
        if (std::abs(x.px - z.center.x) <= z.half_extents.x &&
            std::abs(x.py - z.center.y) <= z.half_extents.y) {
          return true;
        }
      }
      return false;
    }
    bool operator()(const stl::LineClearance&) const { return false; }
    bool operator()(const stl::HeadingAlignment&) const { return false; }
  };
  return std::visit(Visitor{x, scene, t}, kind);
}

inline bool satisfies(const stl::Formula& phi, const Trajectory& traj, const WorldScene& scene,
                      std::size_t t) {
  const auto& op = phi.node().op;
  if (const auto* p = std::get_if<stl::PredicateNode>(&op)) {
    return holds(p->kind, traj.states[t], scene, t);
  }
  if (const auto* n = std::get_if<stl::NotNode>(&op)) return !satisfies(n->child, traj, scene, t);
  if (const auto* n = std::get_if<stl::AndNode>(&op)) {
    for (const auto& c : n->children) {
      if (!satisfies(c, traj, scene, t)) return false;
    }
    return true;
  }
  if (const auto* n = std::get_if<stl::OrNode>(&op)) {
    for (const auto& c : n->children) {
      if (satisfies(c, traj, scene, t)) return true;
    }
    return false;
  }
  if (const auto* n = std::get_if<stl::AlwaysNode>(&op)) {
    for (std::size_t k = n->window.lo; k <= n->window.hi; ++k) {
      if (!satisfies(n->child, traj, scene, t + k)) return false;
    }
    return true;
  }
  const auto& n = std::get<stl::EventuallyNode>(op);
  for (std::size_t k = n.window.lo; k <= n.window.hi; ++k) {
    if (satisfies(n.child, traj, scene, t + k)) return true;
  }
  return false;
}

/// Central difference of f at x along coordinate i.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, std::size_t i, double h) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double up = f(x);
  x[i] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

}  // namespace testing
