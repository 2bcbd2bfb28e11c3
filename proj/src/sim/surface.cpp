// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/sim/surface.hpp"

#include <array>
#include <fstream>
#include <ostream>

#include "rulehier/error.hpp"
#include "rulehier/hierarchy.hpp"

namespace rulehier::sim {

SurfaceGrid reward_surface(double a, double c, std::size_t resolution) {
  if (resolution < 2) throw Error(ErrorCategory::invalid_argument, "resolution must be at least 2");
  if (!(a > 2.0)) throw Error(ErrorCategory::domain, "a must exceed 2");
  SurfaceGrid g;
  g.resolution = resolution;
  g.axis.resize(resolution);
  const double last = static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) {
    // Symmetric construction keeps the middle sample at exactly 0 for odd sizes.
    g.axis[i] = (2.0 * static_cast<double>(i) - last) / last;
  }
  g.reward.resize(resolution * resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      const std::array<double, 2> rho{g.axis[i], g.axis[j]};
      g.reward[i * resolution + j] = reward_smooth<double>(rho, a, c);
    }
  }
  return g;
}

std::vector<double> quadrant_means(const SurfaceGrid& grid) {
  std::array<double, 4> sum{};
  std::array<std::size_t, 4> count{};
  for (std::size_t i = 0; i < grid.resolution; ++i) {
    for (std::size_t j = 0; j < grid.resolution; ++j) {
      const double r1 = grid.axis[i];
      const double r2 = grid.axis[j];
      if (r1 == 0.0 || r2 == 0.0) continue;
      const std::size_t q = (r1 > 0.0 ? 2 : 0) + (r2 > 0.0 ? 1 : 0);
      sum[q] += grid.at(i, j);
      ++count[q];
    }
  }
  std::vector<double> means(4, 0.0);
  for (std::size_t q = 0; q < 4; ++q) {
    if (count[q] > 0) means[q] = sum[q] / static_cast<double>(count[q]);
  }
  return means;
}

void write_surface_csv(std::ostream& out, const SurfaceGrid& grid) {
  out << "rho1,rho2,reward\n";
  out.precision(17);
  for (std::size_t i = 0; i < grid.resolution; ++i) {
    for (std::size_t j = 0; j < grid.resolution; ++j) {
      out << grid.axis[i] << ',' << grid.axis[j] << ',' << grid.at(i, j) << '\n';
    }
  }
}

void write_surface_csv(const std::filesystem::path& path, const SurfaceGrid& grid) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::io, "cannot open " + path.string());
  write_surface_csv(out, grid);
  if (!out) throw Error(ErrorCategory::io, "write failed: " + path.string());
}

}  // namespace rulehier::sim
