// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Kinematic bicycle model, forward-Euler discretised. Everything is
// templated on the scalar type so that the plain and the differentiable
// rollouts run the identical operation sequence.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "rulehier/autodiff.hpp"
#include "rulehier/error.hpp"
#include "rulehier/math.hpp"

namespace rulehier {

template <class S>
struct EgoStateT {
  S px{};
  S py{};
  S psi{};  ///< heading, wrapped into (-pi, pi]
  S v{};
};

template <class S>
struct ControlT {
  S accel{};  ///< m/s^2
  S steer{};  ///< rad
};

using EgoState = EgoStateT<double>;
using ControlInput = ControlT<double>;

struct VehicleParams {
  double front_axle = 1.5;  ///< l_f, center of mass to front axle (m)
  double rear_axle = 1.5;   ///< l_r, center of mass to rear axle (m)
  double accel_max = 5.0;
  double steer_max = std::numbers::pi / 8.0;
  bool clamp_speed_at_zero = true;
};

template <class S>
struct TrajectoryT {
  std::vector<EgoStateT<S>> states;   ///< T + 1 entries
  std::vector<ControlT<S>> controls;  ///< T entries
};

using Trajectory = TrajectoryT<double>;

template <class S>
S clamp_value(const S& x, double lo, double hi) {
  return vmin(vmax(x, S(lo)), S(hi));
}

template <class S>
ControlT<S> clamp_control(const ControlT<S>& u, const VehicleParams& p) {
  return {clamp_value(u.accel, -p.accel_max, p.accel_max),
          clamp_value(u.steer, -p.steer_max, p.steer_max)};
}

/// Slip angle at the center of mass for a steering angle.
template <class S>
S slip_angle(const S& steer, const VehicleParams& p) {
  using std::atan;
  using std::tan;
  const double wheelbase = p.front_axle + p.rear_axle;
  return atan(S(p.rear_axle) * tan(steer) / S(wheelbase));
}

/// One Euler step given the slip angle and its sine. Callers that hold the
/// steering fixed can reuse both; the result matches `step` exactly.
template <class S>
EgoStateT<S> step_with_slip(const EgoStateT<S>& x, const S& accel, const S& beta,
                            const S& sin_beta, double dt, const VehicleParams& p) {
  using std::cos;
  using std::sin;
  const S heading = x.psi + beta;
  EgoStateT<S> next;
  next.px = x.px + x.v * cos(heading) * S(dt);
  next.py = x.py + x.v * sin(heading) * S(dt);
  next.psi = wrap_angle(x.psi + x.v / S(p.rear_axle) * sin_beta * S(dt));
  next.v = x.v + accel * S(dt);
  if (p.clamp_speed_at_zero) next.v = vmax(next.v, S(0.0));
  return next;
}

template <class S>
EgoStateT<S> step(const EgoStateT<S>& x, const ControlT<S>& u, double dt,
                  const VehicleParams& p) {
  using std::sin;
  const S beta = slip_angle(u.steer, p);
  return step_with_slip(x, u.accel, beta, S(sin(beta)), dt, p);
}

/// Clamps every control to the actuator bounds and integrates from x0.
template <class S>
TrajectoryT<S> rollout(const EgoStateT<S>& x0, std::span<const ControlT<S>> controls,
                       double dt, const VehicleParams& p) {
  if (controls.empty()) {
    throw Error(ErrorCategory::invalid_argument, "rollout needs at least one control");
  }
  if (!(dt > 0.0)) throw Error(ErrorCategory::invalid_argument, "dt must be positive");
  TrajectoryT<S> traj;
  traj.states.reserve(controls.size() + 1);
  traj.controls.reserve(controls.size());
  traj.states.push_back(x0);
  for (const ControlT<S>& raw : controls) {
    const ControlT<S> u = clamp_control(raw, p);
    traj.controls.push_back(u);
    traj.states.push_back(step(traj.states.back(), u, dt, p));
  }
  return traj;
}

inline Trajectory rollout(const EgoState& x0, std::span<const ControlInput> controls,
                          double dt, const VehicleParams& p) {
  return rollout<double>(x0, controls, dt, p);
}

/// Flattens controls as (accel_0, steer_0, accel_1, steer_1, ...).
std::vector<double> flatten(std::span<const ControlInput> controls);
std::vector<ControlInput> unflatten(std::span<const double> flat);

/// Lifts each control entry into an independent variable of `tape`, in
/// flattened order.
std::vector<ControlT<DiffScalar>> lift_controls(ad::Tape& tape,
                                                std::span<const ControlInput> controls);

EgoStateT<DiffScalar> constant_state(const EgoState& x);

}  // namespace rulehier
