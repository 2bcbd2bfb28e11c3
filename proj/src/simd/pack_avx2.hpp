// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Four-lane double pack on AVX2. Include only from translation units
// compiled with -mavx2.

#include <immintrin.h>

#include <cstddef>

namespace rulehier::simd {

struct Avx2Mask {
  __m256d bits;
};

struct Avx2Pack {
  static constexpr std::size_t width = 4;

  __m256d v;

  Avx2Pack() = default;
  explicit Avx2Pack(__m256d x) : v(x) {}
  explicit Avx2Pack(double s) : v(_mm256_set1_pd(s)) {}

  static Avx2Pack load(const double* p) { return Avx2Pack(_mm256_loadu_pd(p)); }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
};

inline Avx2Pack operator+(Avx2Pack a, Avx2Pack b) { return Avx2Pack(_mm256_add_pd(a.v, b.v)); }
inline Avx2Pack operator-(Avx2Pack a, Avx2Pack b) { return Avx2Pack(_mm256_sub_pd(a.v, b.v)); }
inline Avx2Pack operator*(Avx2Pack a, Avx2Pack b) { return Avx2Pack(_mm256_mul_pd(a.v, b.v)); }
inline Avx2Pack operator/(Avx2Pack a, Avx2Pack b) { return Avx2Pack(_mm256_div_pd(a.v, b.v)); }
inline Avx2Pack operator-(Avx2Pack a) {
  return Avx2Pack(_mm256_xor_pd(a.v, _mm256_set1_pd(-0.0)));
}

// min/max keep the scalar tie rules: vmin(a, b) = b < a ? b : a, and
// _mm256_min_pd(x, y) = x < y ? x : y.
inline Avx2Pack vmin(Avx2Pack a, Avx2Pack b) { return Avx2Pack(_mm256_min_pd(b.v, a.v)); }
inline Avx2Pack vmax(Avx2Pack a, Avx2Pack b) { return Avx2Pack(_mm256_max_pd(b.v, a.v)); }
inline Avx2Pack vabs(Avx2Pack a) {
  return Avx2Pack(_mm256_andnot_pd(_mm256_set1_pd(-0.0), a.v));
}
inline Avx2Pack vsqrt(Avx2Pack a) { return Avx2Pack(_mm256_sqrt_pd(a.v)); }
inline Avx2Pack vround(Avx2Pack a) {
  return Avx2Pack(_mm256_round_pd(a.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
}
inline Avx2Pack vexponent_bits(Avx2Pack x) {
  const __m256i b = _mm256_srli_epi64(_mm256_castpd_si256(x.v), 52);
  const __m256d two52 = _mm256_set1_pd(0x1p52);
  const __m256i biased = _mm256_or_si256(b, _mm256_castpd_si256(two52));
  return Avx2Pack(_mm256_sub_pd(_mm256_castsi256_pd(biased), two52));
}
inline Avx2Pack vmantissa(Avx2Pack x) {
  const __m256i b = _mm256_and_si256(_mm256_castpd_si256(x.v),
                                     _mm256_set1_epi64x(0x000fffffffffffffLL));
  return Avx2Pack(
      _mm256_castsi256_pd(_mm256_or_si256(b, _mm256_set1_epi64x(0x3ff0000000000000LL))));
}
inline Avx2Pack vpow2i(Avx2Pack k) {
  const __m256d biased = _mm256_add_pd(k.v, _mm256_set1_pd(0x1p52 + 1023.0));
  return Avx2Pack(_mm256_castsi256_pd(_mm256_slli_epi64(_mm256_castpd_si256(biased), 52)));
}

inline Avx2Mask vlt(Avx2Pack a, Avx2Pack b) {
  return Avx2Mask{_mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ)};
}
inline Avx2Mask vle(Avx2Pack a, Avx2Pack b) {
  return Avx2Mask{_mm256_cmp_pd(a.v, b.v, _CMP_LE_OQ)};
}
inline Avx2Pack vselect(Avx2Mask m, Avx2Pack if_true, Avx2Pack if_false) {
  return Avx2Pack(_mm256_blendv_pd(if_false.v, if_true.v, m.bits));
}

}  // namespace rulehier::simd
