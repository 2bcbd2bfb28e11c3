// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Central-difference check of the smooth reward gradient on random ego
// states and control sequences in a road scenario.

#include <cstdint>

#include "rulehier/sim/scenario.hpp"

namespace rulehier::sim {

struct GradcheckOptions {
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  double step = 1e-5;
  double rtol = 1e-4;
  double atol = 1e-6;
};

struct GradcheckReport {
  std::size_t trials = 0;
  std::size_t entries = 0;
  std::size_t failures = 0;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;  ///< over entries with |gradient| > atol
};

/// Ego positions are drawn along the first lane with lateral and heading
/// noise; speeds keep the rollout away from the v >= 0 clamp and controls
/// stay strictly inside the actuator bounds.
GradcheckReport gradcheck(const Scenario& road, const GradcheckOptions& options);

}  // namespace rulehier::sim
