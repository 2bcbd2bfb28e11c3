// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/world.hpp"

#include <cmath>
#include <numbers>

#include "rulehier/error.hpp"

namespace rulehier {

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw Error(ErrorCategory::invalid_argument, "polyline needs at least two points");
  }
  segments_.reserve(points_.size() - 1);
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Segment s = Segment::between(points_[i], points_[i + 1]);
    if (!(s.len2 > 0.0)) {
      throw Error(ErrorCategory::invalid_argument, "polyline has a zero-length segment");
    }
    segments_.push_back(s);
  }
}

bool MapModel::has_lines(LineKind kind) const {
  for (const LaneLine& l : lane_lines) {
    if (l.kind == kind) return true;
  }
  return false;
}

void MapModel::validate() const {
  for (const LaneLine& l : lane_lines) {
    if (l.line.points().size() < 2) {
      throw Error(ErrorCategory::invalid_argument, "lane line needs at least two points");
    }
  }
  for (const Lane& lane : lanes) {
    if (lane.center.points().size() < 2) {
      throw Error(ErrorCategory::invalid_argument, "lane center needs at least two points");
    }
    if (lane.heading.size() != lane.center.points().size()) {
      throw Error(ErrorCategory::invalid_argument,
                  "lane heading profile must have one entry per center point");
    }
    for (double h : lane.heading) {
      if (!(h > -std::numbers::pi && h <= std::numbers::pi)) {
        throw Error(ErrorCategory::invalid_argument, "lane heading outside (-pi, pi]");
      }
    }
  }
  for (const StopZone& z : stop_zones) {
    if (!(z.half_extents.x > 0.0 && z.half_extents.y > 0.0)) {
      throw Error(ErrorCategory::invalid_argument,
                  "stop zone half-extents must be positive");
    }
  }
}

OrientedBox NonEgoTrack::keep_out(std::size_t t) const {
  if (t >= states.size()) {
    throw Error(ErrorCategory::horizon,
                "step " + std::to_string(t) + " is beyond track '" + name + "' (" +
                    std::to_string(states.size()) + " states)");
  }
  const AgentState& s = states[t];
  OrientedBox box;
  box.cx = s.position.x;
  box.cy = s.position.y;
  if (frame == KeepOutFrame::body) {
    box.cos = std::cos(s.heading);
    box.sin = std::sin(s.heading);
  }
  box.hx = half_extents.x;
  box.hy = half_extents.y;
  return box;
}

void WorldScene::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorCategory::invalid_argument, "dt must be positive");
  map.validate();
  for (const NonEgoTrack& t : non_ego) {
    if (t.states.empty()) {
      throw Error(ErrorCategory::invalid_argument, "empty track '" + t.name + "'");
    }
    if (!(t.half_extents.x > 0.0 && t.half_extents.y > 0.0)) {
      throw Error(ErrorCategory::invalid_argument,
                  "footprint half-extents must be positive for '" + t.name + "'");
    }
  }
}

NonEgoTrack extend_track(const NonEgoTrack& track, std::size_t horizon_steps,
                         double dt) {
  if (track.states.empty()) throw Error(ErrorCategory::invalid_argument, "empty track");
  NonEgoTrack out = track;
  out.states.reserve(std::max(horizon_steps, track.states.size()));
  while (out.states.size() < horizon_steps) {
    AgentState next = out.states.back();
    next.position.x += next.speed * std::cos(next.heading) * dt;
    next.position.y += next.speed * std::sin(next.heading) * dt;
    out.states.push_back(next);
  }
  return out;
}

WorldScene WorldScene::window(std::size_t start, std::size_t steps) const {
  WorldScene out;
  out.map = map;
  out.dt = dt;
  out.non_ego.reserve(non_ego.size());
  for (const NonEgoTrack& track : non_ego) {
    NonEgoTrack full = extend_track(track, start + steps, dt);
    NonEgoTrack w = track;
    w.states.assign(full.states.begin() + static_cast<std::ptrdiff_t>(start),
                    full.states.end());
    out.non_ego.push_back(std::move(w));
  }
  return out;
}

double signed_lateral_offset(Vec2 point, const Polyline& line) {
  const Segment* best = nullptr;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const Segment& s : line.segments()) {
    const double d2 = segment_offset(point.x, point.y, s).dist2;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = &s;
    }
  }
  return segment_offset(point.x, point.y, *best).offset;
}

double occupancy_margin(Vec2 ego, const NonEgoTrack& track, std::size_t t) {
  return box_clearance(ego.x, ego.y, track.keep_out(t));
}

double lane_heading(Vec2 point, const MapModel& map) {
  if (map.lanes.empty()) {
    throw Error(ErrorCategory::invalid_argument, "map has no lanes");
  }
  double heading = 0.0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const Lane& lane : map.lanes) {
    const auto& segs = lane.center.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const double d2 = segment_offset(point.x, point.y, segs[i]).dist2;
      if (d2 < best_d2) {
        best_d2 = d2;
        heading = lane.heading[i];
      }
    }
  }
  return heading;
}

}  // namespace rulehier
