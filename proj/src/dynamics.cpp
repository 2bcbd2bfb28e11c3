// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/dynamics.hpp"

namespace rulehier {

std::vector<double> flatten(std::span<const ControlInput> controls) {
  std::vector<double> flat;
  flat.reserve(2 * controls.size());
  for (const ControlInput& u : controls) {
    flat.push_back(u.accel);
    flat.push_back(u.steer);
  }
  return flat;
}

std::vector<ControlInput> unflatten(std::span<const double> flat) {
  if (flat.size() % 2 != 0) {
    throw Error(ErrorCategory::invalid_argument, "flattened controls must have even length");
  }
  std::vector<ControlInput> out(flat.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {flat[2 * i], flat[2 * i + 1]};
  return out;
}

std::vector<ControlT<DiffScalar>> lift_controls(ad::Tape& tape,
                                                std::span<const ControlInput> controls) {
  if (controls.empty()) {
    throw Error(ErrorCategory::invalid_argument, "cannot lift an empty control sequence");
  }
  const std::vector<double> flat = flatten(controls);
  const std::vector<DiffScalar> vars = tape.lift(flat);
  std::vector<ControlT<DiffScalar>> out(controls.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {vars[2 * i], vars[2 * i + 1]};
  return out;
}

EgoStateT<DiffScalar> constant_state(const EgoState& x) {
  return {DiffScalar(x.px), DiffScalar(x.py), DiffScalar(x.psi), DiffScalar(x.v)};
}

}  // namespace rulehier
