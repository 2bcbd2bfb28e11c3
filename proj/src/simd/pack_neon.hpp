// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Two-lane double pack on AArch64 NEON.

#include <arm_neon.h>

#include <cstddef>

namespace rulehier::simd {

struct NeonMask {
  uint64x2_t bits;
};

struct NeonPack {
  static constexpr std::size_t width = 2;

  float64x2_t v;

  NeonPack() = default;
  explicit NeonPack(float64x2_t x) : v(x) {}
  explicit NeonPack(double s) : v(vdupq_n_f64(s)) {}

  static NeonPack load(const double* p) { return NeonPack(vld1q_f64(p)); }
  void store(double* p) const { vst1q_f64(p, v); }
};

inline NeonPack operator+(NeonPack a, NeonPack b) { return NeonPack(vaddq_f64(a.v, b.v)); }
inline NeonPack operator-(NeonPack a, NeonPack b) { return NeonPack(vsubq_f64(a.v, b.v)); }
inline NeonPack operator*(NeonPack a, NeonPack b) { return NeonPack(vmulq_f64(a.v, b.v)); }
inline NeonPack operator/(NeonPack a, NeonPack b) { return NeonPack(vdivq_f64(a.v, b.v)); }
inline NeonPack operator-(NeonPack a) { return NeonPack(vnegq_f64(a.v)); }

inline NeonMask vlt(NeonPack a, NeonPack b) { return NeonMask{vcltq_f64(a.v, b.v)}; }
inline NeonMask vle(NeonPack a, NeonPack b) { return NeonMask{vcleq_f64(a.v, b.v)}; }
inline NeonPack vselect(NeonMask m, NeonPack if_true, NeonPack if_false) {
  return NeonPack(vbslq_f64(m.bits, if_true.v, if_false.v));
}

// vminq/vmaxq order signed zeros differently from the scalar reference, so
// min and max are spelled as compare + select.
inline NeonPack vmin(NeonPack a, NeonPack b) { return vselect(vlt(b, a), b, a); }
inline NeonPack vmax(NeonPack a, NeonPack b) { return vselect(vlt(a, b), b, a); }
inline NeonPack vabs(NeonPack a) { return NeonPack(vabsq_f64(a.v)); }
inline NeonPack vsqrt(NeonPack a) { return NeonPack(vsqrtq_f64(a.v)); }
inline NeonPack vround(NeonPack a) { return NeonPack(vrndnq_f64(a.v)); }
inline NeonPack vexponent_bits(NeonPack x) {
  const uint64x2_t b = vshrq_n_u64(vreinterpretq_u64_f64(x.v), 52);
  const float64x2_t two52 = vdupq_n_f64(0x1p52);
  const uint64x2_t biased = vorrq_u64(b, vreinterpretq_u64_f64(two52));
  return NeonPack(vsubq_f64(vreinterpretq_f64_u64(biased), two52));
}
inline NeonPack vmantissa(NeonPack x) {
  const uint64x2_t b = vandq_u64(vreinterpretq_u64_f64(x.v), vdupq_n_u64(0x000fffffffffffffULL));
  return NeonPack(vreinterpretq_f64_u64(vorrq_u64(b, vdupq_n_u64(0x3ff0000000000000ULL))));
}
inline NeonPack vpow2i(NeonPack k) {
  const float64x2_t biased = vaddq_f64(k.v, vdupq_n_f64(0x1p52 + 1023.0));
  return NeonPack(vreinterpretq_f64_u64(vshlq_n_u64(vreinterpretq_u64_f64(biased), 52)));
}

}  // namespace rulehier::simd
