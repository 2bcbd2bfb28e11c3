// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Array kernels behind the batched stage-1 evaluator. Each backend (scalar
// reference, AVX2, NEON) fills the same table; `kernels()` returns the one
// selected at startup from CPU features, overridable through the
// RULEHIER_SIMD environment variable or `force_backend`.
//
// All entries are bit-for-bit equivalent across backends: they only use
// IEEE-exact operations (add, sub, mul, div, sqrt, round, compare, select,
// exponent assembly) in the same order as the scalar reference.

#include <cstddef>
#include <string_view>
#include <vector>

#include "rulehier/geometry.hpp"

namespace rulehier::simd {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend backend);

struct KernelTable {
  Backend backend;
  std::size_t width;

  // out[i] = box_clearance(px[i], py[i], box)
  void (*box_clearance)(const double* px, const double* py, std::size_t n,
                        const OrientedBox& box, double* out);
  // out[i] = box_depth(px[i], py[i], box)
  void (*box_depth)(const double* px, const double* py, std::size_t n,
                    const AxisBox& box, double* out);
  // Nearest-segment update: where dist2 < best_d2, replace best_d2 and
  // best_offset with this segment's values.
  void (*nearest_segment)(const double* px, const double* py, std::size_t n,
                          const Segment& segment, double* best_d2,
                          double* best_offset);
  // out[i] = x[i] * scale + offset
  void (*linear)(const double* x, std::size_t n, double scale, double offset,
                 double* out);
  void (*affine)(const double* px, const double* py, const double* psi,
                 const double* v, std::size_t n, const AffineCoefficients& c,
                 double* out);
  // acc[i] = vmin(acc[i], x[i]) / vmax(acc[i], x[i])
  void (*min_into)(const double* x, std::size_t n, double* acc);
  void (*max_into)(const double* x, std::size_t n, double* acc);
  void (*negate)(const double* x, std::size_t n, double* out);
  // Log-sum-exp accumulation: sum[i] += exp_portable((m[i] - x[i]) / t) for
  // the soft minimum, exp_portable((x[i] - m[i]) / t) for the soft maximum.
  void (*softmin_accumulate)(const double* x, const double* m, std::size_t n,
                             double temperature, double* sum);
  void (*softmax_accumulate)(const double* x, const double* m, std::size_t n,
                             double temperature, double* sum);
  // m[i] -= t * log_portable(sum[i]) / m[i] += t * log_portable(sum[i])
  void (*softmin_finish)(const double* sum, std::size_t n, double temperature, double* m);
  void (*softmax_finish)(const double* sum, std::size_t n, double temperature, double* m);
};

const KernelTable& kernels();
const KernelTable& kernels_for(Backend backend);

/// Backends compiled into this binary and supported by the running CPU.
std::vector<Backend> available_backends();
Backend active_backend();
/// Throws Error(invalid_argument) when the backend is unavailable.
void force_backend(Backend backend);

}  // namespace rulehier::simd
