// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Smooth reward of a two-rule hierarchy sampled on a square grid over
// rho_1, rho_2 in [-1, 1].

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace rulehier::sim {

struct SurfaceGrid {
  std::size_t resolution = 0;
  std::vector<double> axis;    ///< resolution samples of [-1, 1]
  std::vector<double> reward;  ///< reward[i * resolution + j] at (axis[i], axis[j])

  double at(std::size_t i, std::size_t j) const { return reward[i * resolution + j]; }
};

/// Throws Error(invalid_argument) for resolution < 2 and Error(domain) for a <= 2.
SurfaceGrid reward_surface(double a, double c, std::size_t resolution);

/// Mean reward over the strict quadrants, ordered (-,-), (-,+), (+,-), (+,+)
/// in (rho_1, rho_2). Points on either axis are left out.
std::vector<double> quadrant_means(const SurfaceGrid& grid);

/// CSV with header "rho1,rho2,reward", one row per grid point.
void write_surface_csv(std::ostream& out, const SurfaceGrid& grid);
void write_surface_csv(const std::filesystem::path& path, const SurfaceGrid& grid);

}  // namespace rulehier::sim
