// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Value-generic primitives. Every geometric kernel in the library is written
// against this small vocabulary so that the same source instantiates for
// plain doubles, autodiff scalars and SIMD packs. The overloads below are the
// double versions; DiffScalar and the pack types provide their own.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

namespace rulehier {

inline double vmin(double a, double b) { return b < a ? b : a; }
inline double vmax(double a, double b) { return a < b ? b : a; }
inline double vabs(double a) { return std::fabs(a); }
inline double vsqrt(double a) { return std::sqrt(a); }
inline bool vlt(double a, double b) { return a < b; }
inline bool vle(double a, double b) { return a <= b; }
inline double vselect(bool mask, double if_true, double if_false) {
  return mask ? if_true : if_false;
}

inline double value_of(double x) { return x; }

/// Round half to even.
inline double vround(double x) { return std::nearbyint(x); }

/// 2^k for an integral k in [-1022, 1023]. Adding 2^52 + 1023 leaves
/// k + 1023 in the low mantissa bits; shifting them into the exponent field
/// drops the rest.
inline double vpow2i(double k) {
  return std::bit_cast<double>(std::bit_cast<std::uint64_t>(k + 0x1p52 + 1023.0) << 52);
}

/// exp(x) from add, mul, round and exponent assembly only, so that scalar
/// and SIMD instantiations agree bit for bit. Within about 2 ulp of the
/// libm result; below -708.39 it flushes to +0 instead of returning
/// subnormals, above 709 it returns +inf.
template <class S>
S exp_portable(S x) {
  constexpr double lo = -708.39;
  constexpr double hi = 709.0;
  constexpr double log2e = 1.44269504088896338700e+00;
  constexpr double ln2_hi = 6.93147180369123816490e-01;  // low 32 bits zero
  constexpr double ln2_lo = 1.90821492927058770002e-10;
  const S xc = vmin(vmax(x, S(lo)), S(hi));
  const S k = vround(xc * S(log2e));
  const S r = (xc - k * S(ln2_hi)) - k * S(ln2_lo);
  // Taylor series to r^13; |r| <= ln(2)/2 leaves a truncation error near 1e-18.
  constexpr double c[] = {1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0,
                          1.0 / 3628800.0,    1.0 / 362880.0,    1.0 / 40320.0,
                          1.0 / 5040.0,       1.0 / 720.0,       1.0 / 120.0,
                          1.0 / 24.0,         1.0 / 6.0,         0.5,
                          1.0,                1.0};
  S p(c[0]);
  for (std::size_t i = 1; i < std::size(c); ++i) p = p * r + S(c[i]);
  const S y = p * vpow2i(k);
  return vselect(vlt(x, S(lo)), S(0.0),
                 vselect(vlt(S(hi), x), S(std::numeric_limits<double>::infinity()), y));
}

/// Maps an angle into (-pi, pi].
inline double wrap_angle_value(double angle) {
  if (angle > -std::numbers::pi && angle <= std::numbers::pi) return angle;
  double w = std::remainder(angle, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

/// Shifts `angle` by the multiple of 2*pi that brings its value into
/// (-pi, pi]. The shift is piecewise constant so derivatives pass through.
template <class S>
S wrap_angle(const S& angle) {
  const double raw = value_of(angle);
  const double wrapped = wrap_angle_value(raw);
  if (wrapped == raw) return angle;
  return angle - (raw - wrapped);
}

/// Exponent field of a double as a double (biased, so 1023 for 1.0), and the
/// value with its exponent field replaced by that of 1.0.
inline double vexponent_bits(double x) {
  const std::uint64_t b = std::bit_cast<std::uint64_t>(x);
  return std::bit_cast<double>((b >> 52) | std::bit_cast<std::uint64_t>(0x1p52)) - 0x1p52;
}
inline double vmantissa(double x) {
  const std::uint64_t b = std::bit_cast<std::uint64_t>(x);
  return std::bit_cast<double>((b & 0x000fffffffffffffULL) | 0x3ff0000000000000ULL);
}

/// Natural log companion of exp_portable. Exact for 1. Arguments must be
/// positive normal numbers or +inf; zero gives -inf, negatives and NaN give
/// NaN, subnormals are treated as zero.
template <class S>
S log_portable(S x) {
  constexpr double ln2_hi = 6.93147180369123816490e-01;
  constexpr double ln2_lo = 1.90821492927058770002e-10;
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  // x = 2^e * m with m in [sqrt(1/2), sqrt(2)).
  S m = vmantissa(x);
  S e = vexponent_bits(x) - S(1023.0);
  const auto high = vlt(S(std::numbers::sqrt2), m);
  m = vselect(high, m * S(0.5), m);
  e = vselect(high, e + S(1.0), e);
  // log(m) = 2 atanh(s), s = (m - 1) / (m + 1), |s| < 0.1716.
  const S f = m - S(1.0);
  const S s = f / (m + S(1.0));
  const S z = s * s;
  constexpr double c[] = {1.0 / 23.0, 1.0 / 21.0, 1.0 / 19.0, 1.0 / 17.0,
                          1.0 / 15.0, 1.0 / 13.0, 1.0 / 11.0, 1.0 / 9.0,
                          1.0 / 7.0,  1.0 / 5.0,  1.0 / 3.0};
  S p(c[0]);
  for (std::size_t i = 1; i < std::size(c); ++i) p = p * z + S(c[i]);
  // 2 s (1 + z p) = f - f s + 2 s z p keeps the leading term exact-ish.
  const S tail = S(2.0) * s * z * p - f * s;
  const S y = e * S(ln2_hi) + (f + (tail + e * S(ln2_lo)));
  const S min_normal(std::numeric_limits<double>::min());
  S out = vselect(vlt(x, min_normal), S(-inf), y);
  out = vselect(vlt(x, S(0.0)), S(nan), out);
  out = vselect(vle(S(inf), x), S(inf), out);
  // x <= x fails only for NaN.
  return vselect(vle(x, x), out, S(nan));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Log-sum-exp soft minimum: -t * log(sum exp(-x_i / t)), evaluated with a
/// min shift through exp_portable. Reduction order is the input order.
double smooth_min(std::span<const double> xs, double temperature);

/// Log-sum-exp soft maximum: t * log(sum exp(x_i / t)).
double smooth_max(std::span<const double> xs, double temperature);

double hard_min(std::span<const double> xs);
double hard_max(std::span<const double> xs);

}  // namespace rulehier
