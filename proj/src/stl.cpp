// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/stl.hpp"

#include <cmath>
#include <sstream>

#include "rulehier/error.hpp"

namespace rulehier::stl {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Formula Formula::predicate(std::string name, PredicateKind kind) {
  return Formula(std::make_shared<const Node>(
      Node{PredicateNode{std::move(name), kind}}));
}

Formula Formula::negation(Formula child) {
  return Formula(std::make_shared<const Node>(Node{NotNode{std::move(child)}}));
}

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.empty()) throw Error(ErrorCategory::invalid_argument, "And needs operands");
  return Formula(std::make_shared<const Node>(Node{AndNode{std::move(children)}}));
}

Formula Formula::disjunction(std::vector<Formula> children) {
  if (children.empty()) throw Error(ErrorCategory::invalid_argument, "Or needs operands");
  return Formula(std::make_shared<const Node>(Node{OrNode{std::move(children)}}));
}

Formula Formula::always(Interval window, Formula child) {
  if (window.lo > window.hi) {
    throw Error(ErrorCategory::invalid_argument, "interval lower bound exceeds upper bound");
  }
  return Formula(std::make_shared<const Node>(Node{AlwaysNode{window, std::move(child)}}));
}

Formula Formula::eventually(Interval window, Formula child) {
  if (window.lo > window.hi) {
    throw Error(ErrorCategory::invalid_argument, "interval lower bound exceeds upper bound");
  }
  return Formula(
      std::make_shared<const Node>(Node{EventuallyNode{window, std::move(child)}}));
}

std::size_t Formula::horizon() const {
  return std::visit(
      overloaded{
          [](const PredicateNode&) -> std::size_t { return 0; },
          [](const NotNode& n) { return n.child.horizon(); },
          [](const AndNode& n) {
            std::size_t h = 0;
            for (const Formula& c : n.children) h = std::max(h, c.horizon());
            return h;
          },
          [](const OrNode& n) {
            std::size_t h = 0;
            for (const Formula& c : n.children) h = std::max(h, c.horizon());
            return h;
          },
          [](const AlwaysNode& n) { return n.window.hi + n.child.horizon(); },
          [](const EventuallyNode& n) { return n.window.hi + n.child.horizon(); },
      },
      node_->op);
}

std::string Formula::to_string() const {
  std::ostringstream os;
  auto list = [&os](const char* op, const std::vector<Formula>& cs) {
    os << op << '(';
    for (std::size_t i = 0; i < cs.size(); ++i) os << (i ? ", " : "") << cs[i].to_string();
    os << ')';
  };
  std::visit(overloaded{
                 [&](const PredicateNode& n) { os << n.name; },
                 [&](const NotNode& n) { os << "Not(" << n.child.to_string() << ')'; },
                 [&](const AndNode& n) { list("And", n.children); },
                 [&](const OrNode& n) { list("Or", n.children); },
                 [&](const AlwaysNode& n) {
                   os << "Always[" << n.window.lo << ',' << n.window.hi << "]("
                      << n.child.to_string() << ')';
                 },
                 [&](const EventuallyNode& n) {
                   os << "Eventually[" << n.window.lo << ',' << n.window.hi << "]("
                      << n.child.to_string() << ')';
                 },
             },
             node_->op);
  return os.str();
}

std::size_t steps_for(double seconds, double dt) {
  if (!(dt > 0.0) || !(seconds >= 0.0)) {
    throw Error(ErrorCategory::invalid_argument, "duration and dt must be non-negative / positive");
  }
  // Tolerate representation error in ratios such as 1.0 / 0.2.
  return static_cast<std::size_t>(std::ceil(seconds / dt - 1e-9));
}

template <class S>
S predicate_margin(const PredicateKind& kind, const TrajectoryT<S>& traj,
                   const WorldScene& scene, std::size_t t) {
  const EgoStateT<S>& x = traj.states.at(t);
  return std::visit(
      overloaded{
          [&](const SpeedAtLeast& p) { return linear_margin(x.v, 1.0, -p.limit); },
          [&](const SpeedAtMost& p) { return linear_margin(x.v, -1.0, p.limit); },
          [&](const LineClearance& p) {
            if (!scene.map.has_lines(p.kind)) {
              throw Error(ErrorCategory::invalid_argument, "missing lane geometry");
            }
            return nearest_line_offset(x.px, x.py, scene.map, p.kind);
          },
          [&](const CollisionClearance& p) {
            if (p.track >= scene.non_ego.size()) {
              throw Error(ErrorCategory::invalid_argument, "collision predicate names a missing track");
            }
            return box_clearance(x.px, x.py, scene.non_ego[p.track].keep_out(t));
          },
          [&](const HeadingAlignment& p) {
            const double h =
                lane_heading(Vec2{value_of(x.px), value_of(x.py)}, scene.map);
            return heading_margin(x.psi, h, p.tolerance);
          },
          [&](const StopZoneDepth&) {
            if (scene.map.stop_zones.empty()) {
              throw Error(ErrorCategory::invalid_argument, "scene has no stop zone");
            }
            return nearest_stop_zone_depth(x.px, x.py, scene.map);
          },
          [&](const AffineState& p) {
            return affine_margin(x.px, x.py, x.psi, x.v, p.coefficients);
          },
          [&](const Constant& p) { return S(p.value); },
      },
      kind);
}

namespace {

template <class S>
S reduce(std::vector<S>& xs, bool take_min, Semantics semantics, double temperature) {
  using rulehier::hard_max;
  using rulehier::hard_min;
  using rulehier::smooth_max;
  using rulehier::smooth_min;
  const std::span<const S> view(xs);
  if (semantics == Semantics::hard) return take_min ? hard_min(view) : hard_max(view);
  return take_min ? smooth_min(view, temperature) : smooth_max(view, temperature);
}

template <class S>
S evaluate(const Formula& phi, const TrajectoryT<S>& traj, const WorldScene& scene,
           Semantics semantics, double temperature, std::size_t t) {
  return std::visit(
      overloaded{
          [&](const PredicateNode& n) { return predicate_margin(n.kind, traj, scene, t); },
          [&](const NotNode& n) {
            return -evaluate(n.child, traj, scene, semantics, temperature, t);
          },
          [&](const AndNode& n) {
            std::vector<S> xs;
            xs.reserve(n.children.size());
            for (const Formula& c : n.children) {
              xs.push_back(evaluate(c, traj, scene, semantics, temperature, t));
            }
            return reduce(xs, true, semantics, temperature);
          },
          [&](const OrNode& n) {
            std::vector<S> xs;
            xs.reserve(n.children.size());
            for (const Formula& c : n.children) {
              xs.push_back(evaluate(c, traj, scene, semantics, temperature, t));
            }
            return reduce(xs, false, semantics, temperature);
          },
          [&](const AlwaysNode& n) {
            std::vector<S> xs;
            xs.reserve(n.window.hi - n.window.lo + 1);
            for (std::size_t k = n.window.lo; k <= n.window.hi; ++k) {
              xs.push_back(evaluate(n.child, traj, scene, semantics, temperature, t + k));
            }
            return reduce(xs, true, semantics, temperature);
          },
          [&](const EventuallyNode& n) {
            std::vector<S> xs;
            xs.reserve(n.window.hi - n.window.lo + 1);
            for (std::size_t k = n.window.lo; k <= n.window.hi; ++k) {
              xs.push_back(evaluate(n.child, traj, scene, semantics, temperature, t + k));
            }
            return reduce(xs, false, semantics, temperature);
          },
      },
      phi.node().op);
}

}  // namespace

template <class S>
S robustness(const Formula& phi, const TrajectoryT<S>& traj, const WorldScene& scene,
             Semantics semantics, double temperature, std::size_t t) {
  if (traj.states.empty() || t + phi.horizon() > traj.states.size() - 1) {
    throw Error(ErrorCategory::horizon, "horizon too short for formula");
  }
  if (semantics == Semantics::smooth && !(temperature > 0.0)) {
    throw Error(ErrorCategory::domain, "smooth semantics need a positive temperature");
  }
  return evaluate(phi, traj, scene, semantics, temperature, t);
}

template double predicate_margin<double>(const PredicateKind&, const Trajectory&,
                                         const WorldScene&, std::size_t);
template DiffScalar predicate_margin<DiffScalar>(const PredicateKind&,
                                                 const TrajectoryT<DiffScalar>&,
                                                 const WorldScene&, std::size_t);
template double robustness<double>(const Formula&, const Trajectory&, const WorldScene&,
                                   Semantics, double, std::size_t);
template DiffScalar robustness<DiffScalar>(const Formula&, const TrajectoryT<DiffScalar>&,
                                           const WorldScene&, Semantics, double,
                                           std::size_t);

}  // namespace rulehier::stl
