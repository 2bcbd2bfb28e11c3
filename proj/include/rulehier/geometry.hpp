// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Per-point predicate geometry, written once over a value type V. V is a
// double, an ad::DiffScalar, or one of the SIMD pack types; the scalar and
// vector paths therefore execute the same IEEE operation sequence per lane.

#include <cmath>

#include "rulehier/math.hpp"

namespace rulehier {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// A polyline segment with its derived quantities cached.
struct Segment {
  double ax = 0.0;
  double ay = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double len2 = 1.0;
  double len = 1.0;

  static Segment between(Vec2 a, Vec2 b) {
    Segment s;
    s.ax = a.x;
    s.ay = a.y;
    s.dx = b.x - a.x;
    s.dy = b.y - a.y;
    s.len2 = s.dx * s.dx + s.dy * s.dy;
    s.len = std::sqrt(s.len2);
    return s;
  }
};

/// Rectangle with a rotation, as seen from a point in the inertial frame.
struct OrientedBox {
  double cx = 0.0;
  double cy = 0.0;
  double cos = 1.0;
  double sin = 0.0;
  double hx = 1.0;
  double hy = 1.0;
};

struct AxisBox {
  double cx = 0.0;
  double cy = 0.0;
  double hx = 1.0;
  double hy = 1.0;
};

/// l-inf margin to the box in its own frame: positive outside, the negated
/// penetration depth inside.
template <class V>
V box_clearance(const V& px, const V& py, const OrientedBox& b) {
  const V rx = px - V(b.cx);
  const V ry = py - V(b.cy);
  const V lx = rx * V(b.cos) + ry * V(b.sin);
  const V ly = ry * V(b.cos) - rx * V(b.sin);
  return vmax(vabs(lx) - V(b.hx), vabs(ly) - V(b.hy));
}

/// Positive inside an axis-aligned box, negative outside.
template <class V>
V box_depth(const V& px, const V& py, const AxisBox& b) {
  const V rx = vabs(px - V(b.cx));
  const V ry = vabs(py - V(b.cy));
  return vmin(V(b.hx) - rx, V(b.hy) - ry);
}

template <class V>
struct SegmentOffset {
  V dist2;   ///< squared distance to the closest point of the segment
  V offset;  ///< signed distance, positive left of the segment direction
};

template <class V>
SegmentOffset<V> segment_offset(const V& px, const V& py, const Segment& s) {
  const V rx = px - V(s.ax);
  const V ry = py - V(s.ay);
  const V proj = (rx * V(s.dx) + ry * V(s.dy)) / V(s.len2);
  const V cross = V(s.dx) * ry - V(s.dy) * rx;
  const V ex = rx - V(s.dx);
  const V ey = ry - V(s.dy);
  const V start2 = rx * rx + ry * ry;
  const V end2 = ex * ex + ey * ey;
  const V perp = cross / V(s.len);

  const auto before = vle(proj, V(0.0));
  const auto after = vle(V(1.0), proj);
  const auto right = vlt(cross, V(0.0));
  const V start = vsqrt(start2);
  const V end = vsqrt(end2);

  SegmentOffset<V> r{
      vselect(before, start2, vselect(after, end2, perp * perp)),
      vselect(before, vselect(right, -start, start),
              vselect(after, vselect(right, -end, end), perp)),
  };
  return r;
}

template <class V>
V linear_margin(const V& x, double scale, double offset) {
  return x * V(scale) + V(offset);
}

struct AffineCoefficients {
  double px = 0.0;
  double py = 0.0;
  double psi = 0.0;
  double v = 0.0;
  double offset = 0.0;
};

template <class V>
V affine_margin(const V& px, const V& py, const V& psi, const V& v,
                const AffineCoefficients& c) {
  return px * V(c.px) + py * V(c.py) + psi * V(c.psi) + v * V(c.v) +
         V(c.offset);
}

/// tolerance - |wrap(psi - heading)|
template <class S>
S heading_margin(const S& psi, double heading, double tolerance) {
  return S(tolerance) - vabs(wrap_angle(psi - S(heading)));
}

}  // namespace rulehier
