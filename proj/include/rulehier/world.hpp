// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Static map, non-ego motion over the horizon, and the geometric queries
// the rule predicates are built from. A WorldScene is immutable once built;
// every query is a pure function of its inputs.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "rulehier/geometry.hpp"

namespace rulehier {

class Polyline {
 public:
  Polyline() = default;
  /// Throws Error(invalid_argument) for fewer than two points or a
  /// zero-length segment.
  explicit Polyline(std::vector<Vec2> points);

  const std::vector<Vec2>& points() const { return points_; }
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  std::vector<Vec2> points_;
  std::vector<Segment> segments_;
};

enum class LineKind { solid, dashed };

/// A painted line. Its direction sets the lane-keeping side: offsets are
/// positive to the left of the direction of travel along the polyline.
struct LaneLine {
  Polyline line;
  LineKind kind = LineKind::solid;
};

struct Lane {
  Polyline center;
  std::vector<double> heading;  ///< one heading (rad) per center point
};

struct StopZone {
  Vec2 center;
  Vec2 half_extents;

  AxisBox box() const { return {center.x, center.y, half_extents.x, half_extents.y}; }
};

struct MapModel {
  std::vector<LaneLine> lane_lines;
  std::vector<Lane> lanes;
  std::vector<StopZone> stop_zones;

  void validate() const;
  bool has_lines(LineKind kind) const;
};

struct AgentState {
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
};

/// Whether the keep-out rectangle turns with the vehicle or stays aligned
/// with the inertial axes.
enum class KeepOutFrame { body, inertial };

struct NonEgoTrack {
  std::string name;
  std::vector<AgentState> states;
  Vec2 half_extents{5.0, 2.0};
  KeepOutFrame frame = KeepOutFrame::body;

  OrientedBox keep_out(std::size_t t) const;
};

struct WorldScene {
  MapModel map;
  std::vector<NonEgoTrack> non_ego;
  double dt = 0.2;

  void validate() const;

  /// The scene seen from step `start`: every track is re-indexed so that
  /// state 0 is `start`, and extended to at least `steps` states.
  WorldScene window(std::size_t start, std::size_t steps) const;
};

/// Appends constant-speed, constant-heading states until the track holds at
/// least `horizon_steps` states. Existing states are kept unchanged.
NonEgoTrack extend_track(const NonEgoTrack& track, std::size_t horizon_steps,
                         double dt);

double signed_lateral_offset(Vec2 point, const Polyline& line);

/// l-inf body-frame margin to the keep-out rectangle of `track` at step t.
double occupancy_margin(Vec2 ego, const NonEgoTrack& track, std::size_t t);

// Nearest-segment queries. The winner is the first segment, in map order,
// with the strictly smallest squared distance.

template <class S>
S nearest_line_offset(const S& px, const S& py, const MapModel& map,
                      LineKind kind) {
  const double x = value_of(px);
  const double y = value_of(py);
  const Segment* best = nullptr;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const LaneLine& l : map.lane_lines) {
    if (l.kind != kind) continue;
    for (const Segment& s : l.line.segments()) {
      const double d2 = segment_offset(x, y, s).dist2;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = &s;
      }
    }
  }
  return segment_offset(px, py, *best).offset;
}

/// Heading of the closest lane-center segment (the heading stored for the
/// segment's first point).
double lane_heading(Vec2 point, const MapModel& map);

template <class S>
S nearest_stop_zone_depth(const S& px, const S& py, const MapModel& map) {
  S best = box_depth(px, py, map.stop_zones.front().box());
  for (std::size_t i = 1; i < map.stop_zones.size(); ++i) {
    best = vmax(best, box_depth(px, py, map.stop_zones[i].box()));
  }
  return best;
}

}  // namespace rulehier
