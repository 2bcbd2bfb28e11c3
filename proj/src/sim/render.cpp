// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/sim/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "rulehier/error.hpp"

namespace rulehier::sim {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Round-trip precision, for attributes that restate traced values.
std::string exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string points_attr(const std::vector<Vec2>& pts) {
  std::string s;
  for (const Vec2& p : pts) {
    if (!s.empty()) s += ' ';
    s += num(p.x) + ',' + num(p.y);
  }
  return s;
}

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

void rect(std::ostringstream& o, double cx, double cy, double hx, double hy, double heading,
          const std::string& attrs) {
  o << "<rect x=\"" << num(cx - hx) << "\" y=\"" << num(cy - hy) << "\" width=\"" << num(2 * hx)
    << "\" height=\"" << num(2 * hy) << "\" transform=\"rotate(" << num(degrees(heading)) << ' '
    << num(cx) << ' ' << num(cy) << ")\" " << attrs << "/>\n";
}

}  // namespace

std::string render_frame(const RunResult& run, std::size_t cycle) {
  if (cycle >= run.trace.size()) throw Error(ErrorCategory::invalid_argument, "cycle out of range");
  const Scenario& s = run.scenario;
  const CycleTrace& c = run.trace[cycle];
  const WorldScene window = s.scene.window(cycle, 1);

  // View box: everything the frame draws plus a margin.
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto grow = [&](double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const EgoState& x : c.plan) grow(x.px, x.py);
  for (std::size_t k = 0; k <= cycle && k < run.states.size(); ++k) {
    grow(run.states[k].px, run.states[k].py);
  }
  for (const NonEgoTrack& t : window.non_ego) grow(t.states[0].position.x, t.states[0].position.y);
  for (const StopZone& z : s.scene.map.stop_zones) grow(z.center.x, z.center.y);
  xmin -= 20.0;
  xmax += 20.0;
  ymin -= 12.0;
  ymax += 12.0;

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(xmin) << ' ' << num(-ymax)
    << ' ' << num(xmax - xmin) << ' ' << num(ymax - ymin) << "\" width=\""
    << num(8.0 * (xmax - xmin)) << "\" height=\"" << num(8.0 * (ymax - ymin)) << "\">\n"
    << "<title>" << s.name << " cycle " << cycle << "</title>\n"
    << "<rect x=\"" << num(xmin) << "\" y=\"" << num(-ymax) << "\" width=\"" << num(xmax - xmin)
    << "\" height=\"" << num(ymax - ymin) << "\" fill=\"#f4f4f0\"/>\n"
    << "<g transform=\"scale(1,-1)\">\n";

  for (const Lane& lane : s.scene.map.lanes) {
    o << "<polyline class=\"lane\" points=\"" << points_attr(lane.center.points())
      << "\" fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"0.15\"/>\n";
  }
  for (const LaneLine& l : s.scene.map.lane_lines) {
    const bool solid = l.kind == LineKind::solid;
    o << "<polyline class=\"" << (solid ? "solid-line" : "dashed-line") << "\" points=\""
      << points_attr(l.line.points()) << "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"0.3\""
      << (solid ? "" : " stroke-dasharray=\"3 3\"") << "/>\n";
  }
  for (const StopZone& z : s.scene.map.stop_zones) {
    rect(o, z.center.x, z.center.y, z.half_extents.x, z.half_extents.y, 0.0,
         "class=\"stop-zone\" fill=\"#e04040\" fill-opacity=\"0.3\"");
  }
  for (const NonEgoTrack& t : window.non_ego) {
    const AgentState& a = t.states[0];
    const double heading = t.frame == KeepOutFrame::body ? a.heading : 0.0;
    rect(o, a.position.x, a.position.y, t.half_extents.x, t.half_extents.y, heading,
         "class=\"non-ego\" data-name=\"" + t.name + "\" fill=\"#3060d0\" fill-opacity=\"0.6\"");
  }

  std::vector<Vec2> executed;
  for (std::size_t k = 0; k <= cycle; ++k) executed.push_back({run.states[k].px, run.states[k].py});
  if (executed.size() >= 2) {
    o << "<polyline class=\"executed\" points=\"" << points_attr(executed)
      << "\" fill=\"none\" stroke=\"#202020\" stroke-width=\"0.2\"/>\n";
  }
  std::vector<Vec2> planned;
  for (const EgoState& x : c.plan) planned.push_back({x.px, x.py});
  o << "<polyline class=\"plan\" points=\"" << points_attr(planned)
    << "\" fill=\"none\" stroke=\"#e0a000\" stroke-width=\"0.2\" stroke-dasharray=\"0.6 0.4\"/>\n";

  const EgoState& x = c.state;
  o << "<g id=\"ego\" data-x=\"" << exact(x.px) << "\" data-y=\"" << exact(x.py)
    << "\" data-psi=\"" << exact(x.psi) << "\">\n";
  rect(o, x.px, x.py, 2.25, 1.0, x.psi, "fill=\"#f0c020\" stroke=\"#806000\" stroke-width=\"0.1\"");
  o << "<circle cx=\"" << num(x.px) << "\" cy=\"" << num(x.py) << "\" r=\"0.3\" fill=\"#806000\"/>\n"
    << "</g>\n</g>\n</svg>\n";
  return o.str();
}

std::vector<std::filesystem::path> emit_frames(const RunResult& run,
                                               const std::filesystem::path& dir,
                                               std::span<const std::size_t> cycles) {
  if (run.trace.empty()) throw Error(ErrorCategory::invalid_argument, "empty trace");
  std::vector<std::size_t> wanted(cycles.begin(), cycles.end());
  if (wanted.empty()) {
    for (std::size_t k = 0; k < run.trace.size(); ++k) wanted.push_back(k);
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCategory::io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (std::size_t k : wanted) {
    const std::string svg = render_frame(run, k);
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.svg", k);
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::io, "cannot open " + path.string());
    out << svg;
    if (!out) throw Error(ErrorCategory::io, "write failed: " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace rulehier::sim
