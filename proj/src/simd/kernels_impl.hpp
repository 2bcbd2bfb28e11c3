// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Kernel bodies shared by every backend. P is a pack type with `width`,
// `load` and `store`; the remainder of each array is processed with plain
// doubles through the same geometry templates.

#include "rulehier/geometry.hpp"
#include "rulehier/simd/kernels.hpp"

namespace rulehier::simd::detail {

/// Pack placeholder for the scalar reference table.
struct NoPack {
  static constexpr std::size_t width = 0;
};

template <class P>
std::size_t vector_end(std::size_t n) {
  if constexpr (P::width == 0) {
    return 0;
  } else {
    return n - n % P::width;
  }
}

template <class P>
void box_clearance(const double* px, const double* py, std::size_t n,
                   const OrientedBox& box, double* out) {
  const std::size_t m = vector_end<P>(n);
  if constexpr (P::width > 0) {
    for (std::size_t i = 0; i < m; i += P::width) {
      rulehier::box_clearance(P::load(px + i), P::load(py + i), box).store(out + i);
    }
  }
  for (std::size_t i = m; i < n; ++i) out[i] = rulehier::box_clearance(px[i], py[i], box);
}

template <class P>
void box_depth(const double* px, const double* py, std::size_t n,
               const AxisBox& box, double* out) {
  const std::size_t m = vector_end<P>(n);
  if constexpr (P::width > 0) {
    for (std::size_t i = 0; i < m; i += P::width) {
      rulehier::box_depth(P::load(px + i), P::load(py + i), box).store(out + i);
    }
  }
  for (std::size_t i = m; i < n; ++i) out[i] = rulehier::box_depth(px[i], py[i], box);
}

template <class P>
void nearest_segment(const double* px, const double* py, std::size_t n,
                     const Segment& segment, double* best_d2,
                     double* best_offset) {
  const std::size_t m = vector_end<P>(n);
  if constexpr (P::width > 0) {
    for (std::size_t i = 0; i < m; i += P::width) {
      const auto r = segment_offset(P::load(px + i), P::load(py + i), segment);
      const P d2 = P::load(best_d2 + i);
      const auto closer = vlt(r.dist2, d2);
      vselect(closer, r.dist2, d2).store(best_d2 + i);
      vselect(closer, r.offset, P::load(best_offset + i)).store(best_offset + i);
    }
  }
  for (std::size_t i = m; i < n; ++i) {
    const auto r = segment_offset(px[i], py[i], segment);
    if (r.dist2 < best_d2[i]) {
      best_d2[i] = r.dist2;
      best_offset[i] = r.offset;
    }
  }
}

template <class P>
void linear(const double* x, std::size_t n, double scale, double offset,
            double* out) {
  const std::size_t m = vector_end<P>(n);
  if constexpr (P::width > 0) {
    for (std::size_t i = 0; i < m; i += P::width) {
      linear_margin(P::load(x + i), scale, offset).store(out + i);
    }
  }
  for (std::size_t i = m; i < n; ++i) out[i] = linear_margin(x[i], scale, offset);
}

template <class P>
void affine(const double* px, const double* py, const double* psi,
            const double* v, std::size_t n, const AffineCoefficients& c,
            double* out) {
  const std::size_t m = vector_end<P>(n);
  if constexpr (P::width > 0) {
    for (std::size_t i = 0; i < m; i += P::width) {
      affine_margin(P::load(px + i), P::load(py + i), P::load(psi + i),
                    P::load(v + i), c)
          .store(out + i);
    }
  }
  for (std::size_t i = m; i < n; ++i) {
    out[i] = affine_margin(px[i], py[i], psi[i], v[i], c);
  }
}

template <class P>
void min_into(const double* x, std::size_t n, double* acc) {
  const std::size_t m = vector_end<P>(n);
  if constexpr (P::width > 0) {
    for (std::size_t i = 0; i < m; i += P::width) {
      vmin(P::load(acc + i), P::load(x + i)).store(acc + i);
    }
  }
  for (std::size_t i = m; i < n; ++i) acc[i] = vmin(acc[i], x[i]);
}

template <class P>
void max_into(const double* x, std::size_t n, double* acc) {
  const std::size_t m = vector_end<P>(n);
  if constexpr (P::width > 0) {
    for (std::size_t i = 0; i < m; i += P::width) {
      vmax(P::load(acc + i), P::load(x + i)).store(acc + i);
    }
  }
  for (std::size_t i = m; i < n; ++i) acc[i] = vmax(acc[i], x[i]);
}

template <class P>
void negate(const double* x, std::size_t n, double* out) {
  const std::size_t m = vector_end<P>(n);
  if constexpr (P::width > 0) {
    for (std::size_t i = 0; i < m; i += P::width) (-P::load(x + i)).store(out + i);
  }
  for (std::size_t i = m; i < n; ++i) out[i] = -x[i];
}

template <class P, bool Min>
void soft_accumulate(const double* x, const double* m, std::size_t n, double temperature,
                     double* sum) {
  const std::size_t end = vector_end<P>(n);
  if constexpr (P::width > 0) {
    const P t(temperature);
    for (std::size_t i = 0; i < end; i += P::width) {
      const P d = Min ? P::load(m + i) - P::load(x + i) : P::load(x + i) - P::load(m + i);
      (P::load(sum + i) + exp_portable(d / t)).store(sum + i);
    }
  }
  for (std::size_t i = end; i < n; ++i) {
    const double d = Min ? m[i] - x[i] : x[i] - m[i];
    sum[i] = sum[i] + exp_portable(d / temperature);
  }
}

template <class P, bool Min>
void soft_finish(const double* sum, std::size_t n, double temperature, double* m) {
  const std::size_t end = vector_end<P>(n);
  if constexpr (P::width > 0) {
    const P t(temperature);
    for (std::size_t i = 0; i < end; i += P::width) {
      const P l = t * log_portable(P::load(sum + i));
      (Min ? P::load(m + i) - l : P::load(m + i) + l).store(m + i);
    }
  }
  for (std::size_t i = end; i < n; ++i) {
    const double l = temperature * log_portable(sum[i]);
    m[i] = Min ? m[i] - l : m[i] + l;
  }
}

template <class P>
constexpr KernelTable make_table(Backend backend) {
  return KernelTable{
      backend,
      P::width == 0 ? 1 : P::width,
      &box_clearance<P>,
      &box_depth<P>,
      &nearest_segment<P>,
      &linear<P>,
      &affine<P>,
      &min_into<P>,
      &max_into<P>,
      &negate<P>,
      &soft_accumulate<P, true>,
      &soft_accumulate<P, false>,
      &soft_finish<P, true>,
      &soft_finish<P, false>,
  };
}

}  // namespace rulehier::simd::detail
