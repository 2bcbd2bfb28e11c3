// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Robustness of one formula over many trajectories at once. States are held
// as structure-of-arrays rows (one row per time step, one lane per
// trajectory) so that predicate margins and hard min/max reductions run
// through the SIMD kernel table. Results match stl::robustness<double> on
// every trajectory bit for bit. When the batch declares shared prefixes, a
// subformula at step t is evaluated once per distinct prefix covering its
// time window.

#include <span>
#include <vector>

#include "rulehier/simd/kernels.hpp"
#include "rulehier/stl.hpp"

namespace rulehier {

struct StateBatch {
  std::size_t count = 0;  ///< trajectories
  std::size_t steps = 0;  ///< states per trajectory
  std::vector<double> px, py, psi, v;  ///< index t * count + b
  /// Optional prefix sharing. distinct[t] = d means that at step t the
  /// trajectories form d consecutive blocks of count / d members with equal
  /// states, and each block at step t lies inside one block at step t - 1.
  /// Empty means every trajectory is distinct.
  std::vector<std::size_t> distinct;

  std::size_t distinct_at(std::size_t t) const { return distinct.empty() ? count : distinct[t]; }

  StateBatch() = default;
  StateBatch(std::size_t count, std::size_t steps);

  static StateBatch from_trajectories(std::span<const Trajectory> trajectories);

  void set(std::size_t t, std::size_t b, const EgoState& x);
  EgoState get(std::size_t t, std::size_t b) const;

  const double* row(const std::vector<double>& field, std::size_t t) const {
    return field.data() + t * count;
  }
};

namespace stl {

std::vector<double> batch_robustness(const Formula& phi, const StateBatch& batch,
                                     const WorldScene& scene, Semantics semantics,
                                     double temperature,
                                     const simd::KernelTable& kernels = simd::kernels());

}  // namespace stl
}  // namespace rulehier
