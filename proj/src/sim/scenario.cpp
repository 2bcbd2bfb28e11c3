// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "rulehier/error.hpp"

namespace rulehier::sim {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCategory::config, what);
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

Vec2 parse_point(const json& p) {
  if (!p.is_array() || p.size() != 2) config_error("point must be [x, y]");
  return {p[0].get<double>(), p[1].get<double>()};
}

std::vector<Vec2> parse_points(const json& arr) {
  std::vector<Vec2> pts;
  for (const json& p : arr) pts.push_back(parse_point(p));
  return pts;
}

LineKind parse_line_kind(const std::string& s) {
  if (s == "solid") return LineKind::solid;
  if (s == "dashed") return LineKind::dashed;
  config_error("unknown line kind '" + s + "'");
}

/// Heading of each point: direction of the segment that starts there, the
/// last point reusing the final segment.
std::vector<double> derived_headings(const std::vector<Vec2>& pts) {
  std::vector<double> h(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    h[i] = wrap_angle_value(std::atan2(pts[i + 1].y - pts[i].y, pts[i + 1].x - pts[i].x));
  }
  if (pts.size() >= 2) h.back() = h[h.size() - 2];
  return h;
}

MapModel parse_map(const json& m) {
  MapModel map;
  for (const json& l : m.value("lane_lines", json::array())) {
    map.lane_lines.push_back(
        {Polyline(parse_points(l.at("points"))), parse_line_kind(l.at("kind").get<std::string>())});
  }
  for (const json& l : m.value("lanes", json::array())) {
    std::vector<Vec2> pts = parse_points(l.at("points"));
    std::vector<double> heading = l.contains("heading")
                                      ? l.at("heading").get<std::vector<double>>()
                                      : derived_headings(pts);
    map.lanes.push_back({Polyline(std::move(pts)), std::move(heading)});
  }
  for (const json& z : m.value("stop_zones", json::array())) {
    map.stop_zones.push_back({parse_point(z.at("center")), parse_point(z.at("half_extents"))});
  }
  return map;
}

/// Scripted straight-line motion: the speed changes at the listed times.
NonEgoTrack parse_track(const json& t, std::size_t steps, double dt) {
  NonEgoTrack track;
  track.name = t.at("name").get<std::string>();
  if (t.contains("half_extents")) track.half_extents = parse_point(t.at("half_extents"));
  const std::string frame = t.value("frame", std::string("body"));
  if (frame == "body") {
    track.frame = KeepOutFrame::body;
  } else if (frame == "inertial") {
    track.frame = KeepOutFrame::inertial;
  } else {
    config_error("unknown keep-out frame '" + frame + "' for '" + track.name + "'");
  }
  struct Change {
    double from;
    double speed;
  };
  std::vector<Change> profile;
  for (const json& c : t.value("speed_profile", json::array())) {
    profile.push_back({c.at("from").get<double>(), c.at("speed").get<double>()});
  }
  std::stable_sort(profile.begin(), profile.end(),
                   [](const Change& a, const Change& b) { return a.from < b.from; });
  const double initial = t.at("speed").get<double>();
  auto speed_at = [&](std::size_t k) {
    double s = initial;
    const double time = static_cast<double>(k) * dt;
    for (const Change& c : profile) {
      if (c.from <= time + 1e-9) s = c.speed;
    }
    return s;
  };
  AgentState x;
  x.position = {t.at("x").get<double>(), t.at("y").get<double>()};
  x.heading = wrap_angle_value(t.value("heading", 0.0));
  for (std::size_t k = 0; k < steps; ++k) {
    x.speed = speed_at(k);
    track.states.push_back(x);
    x.position.x += x.speed * std::cos(x.heading) * dt;
    x.position.y += x.speed * std::sin(x.heading) * dt;
  }
  return track;
}

RuleParams parse_rules(const json& r) {
  RuleParams p;
  p.heading_tolerance = get_or(r, "heading_tolerance", p.heading_tolerance);
  p.min_speed = get_or(r, "min_speed", p.min_speed);
  p.max_speed = get_or(r, "max_speed", p.max_speed);
  p.stop_speed = get_or(r, "stop_speed", p.stop_speed);
  p.stop_duration = get_or(r, "stop_duration", p.stop_duration);
  p.no_agent_clearance = get_or(r, "no_agent_clearance", p.no_agent_clearance);
  p.a = get_or(r, "a", p.a);
  p.c = get_or(r, "c", p.c);
  if (r.contains("scales")) {
    const json& s = r.at("scales");
    RuleScales& k = p.scales;
    k.collision = get_or(s, rule_names::no_collision, k.collision);
    k.solid_line = get_or(s, rule_names::solid_line, k.solid_line);
    k.dashed_line = get_or(s, rule_names::dashed_line, k.dashed_line);
    k.orientation = get_or(s, rule_names::orientation, k.orientation);
    k.min_speed = get_or(s, rule_names::min_speed, k.min_speed);
    k.max_speed = get_or(s, rule_names::max_speed, k.max_speed);
    k.stop_sign = get_or(s, rule_names::stop_sign, k.stop_sign);
  }
  return p;
}

void parse_planner(const json& j, PlannerConfig& c) {
  c.horizon = get_or(j, "horizon", c.horizon);
  c.segment = get_or(j, "segment", c.segment);
  c.execute = get_or(j, "execute", c.execute);
  c.learning_rate = get_or(j, "learning_rate", c.learning_rate);
  c.iterations = get_or(j, "iterations", c.iterations);
  c.temperature = get_or(j, "temperature", c.temperature);
  if (j.contains("actions")) {
    c.actions.clear();
    for (const json& a : j.at("actions")) {
      const Vec2 u = parse_point(a);
      c.actions.push_back({u.x, u.y});
    }
  }
}

void parse_vehicle(const json& j, VehicleParams& v) {
  v.front_axle = get_or(j, "front_axle", v.front_axle);
  v.rear_axle = get_or(j, "rear_axle", v.rear_axle);
  v.accel_max = get_or(j, "accel_max", v.accel_max);
  v.steer_max = get_or(j, "steer_max", v.steer_max);
  v.clamp_speed_at_zero = get_or(j, "clamp_speed_at_zero", v.clamp_speed_at_zero);
}

Expectation parse_expect(const json& e) {
  Expectation x;
  x.allowed_violations = e.value("allowed_violations", std::vector<std::string>{});
  if (e.contains("final_speed_below")) x.final_speed_below = e.at("final_speed_below").get<double>();
  if (e.contains("min_stop_seconds")) x.min_stop_seconds = e.at("min_stop_seconds").get<double>();
  if (e.contains("intersection")) {
    const json& i = e.at("intersection");
    IntersectionExpectation ie;
    ie.track = i.at("track").get<std::string>();
    const Vec2 c = parse_point(i.at("center"));
    const Vec2 h = parse_point(i.at("half_extents"));
    ie.region = {c.x, c.y, h.x, h.y};
    const std::string order = i.at("order").get<std::string>();
    if (order == "wait") {
      ie.order = CrossingOrder::wait;
    } else if (order == "go") {
      ie.order = CrossingOrder::go;
    } else {
      config_error("intersection order must be 'wait' or 'go'");
    }
    x.intersection = ie;
  }
  return x;
}

}  // namespace

const char* hierarchy_kind_name(HierarchyKind kind) {
  return kind == HierarchyKind::road ? "road" : "intersection";
}

const char* crossing_order_name(CrossingOrder order) {
  return order == CrossingOrder::wait ? "wait" : "go";
}

std::vector<std::string> Scenario::rule_names() const {
  std::vector<std::string> names{rulehier::rule_names::no_collision,
                                 rulehier::rule_names::solid_line,
                                 rulehier::rule_names::dashed_line};
  if (hierarchy == HierarchyKind::intersection) names.push_back(rulehier::rule_names::stop_sign);
  for (const char* n : {rulehier::rule_names::orientation, rulehier::rule_names::min_speed,
                        rulehier::rule_names::max_speed}) {
    names.push_back(n);
  }
  return names;
}

RuleHierarchy Scenario::build_hierarchy(const WorldScene& window,
                                        const StopMonitor& monitor) const {
  return hierarchy == HierarchyKind::road
             ? build_road_hierarchy(window, rules, planner.horizon)
             : build_intersection_hierarchy(window, rules, planner.horizon, monitor);
}

void Scenario::validate() const {
  if (name.empty()) config_error("scenario needs a name");
  if (cycles == 0) config_error("scenario '" + name + "' needs at least one cycle");
  try {
    scene.validate();
    planner.validate();
  } catch (const Error& e) {
    config_error("scenario '" + name + "': " + e.what());
  }
  const std::vector<std::string> names = rule_names();
  for (const std::string& r : expect.allowed_violations) {
    if (std::find(names.begin(), names.end(), r) == names.end()) {
      config_error("scenario '" + name + "' expects unknown rule '" + r + "'");
    }
  }
  if (expect.intersection) {
    const auto& tracks = scene.non_ego;
    const bool found = std::any_of(tracks.begin(), tracks.end(), [&](const NonEgoTrack& t) {
      return t.name == expect.intersection->track;
    });
    if (!found) config_error("intersection expectation names unknown track");
  }
  // Building the hierarchy once checks that the map carries what the rules need.
  try {
    (void)build_hierarchy(scene.window(0, planner.horizon + 1), StopMonitor{});
  } catch (const Error& e) {
    config_error("scenario '" + name + "': " + e.what());
  }
}

Scenario parse_scenario(const json& doc) {
  try {
    Scenario s;
    s.name = doc.at("name").get<std::string>();
    s.description = doc.value("description", std::string());
    const std::string kind = doc.at("hierarchy").get<std::string>();
    if (kind == "road") {
      s.hierarchy = HierarchyKind::road;
    } else if (kind == "intersection") {
      s.hierarchy = HierarchyKind::intersection;
    } else {
      config_error("unknown hierarchy '" + kind + "'");
    }
    s.cycles = doc.at("cycles").get<std::size_t>();
    s.scene.dt = doc.value("dt", 0.2);
    s.jitter = doc.value("jitter", 0.0);
    if (doc.contains("planner")) parse_planner(doc.at("planner"), s.planner);
    if (doc.contains("vehicle")) parse_vehicle(doc.at("vehicle"), s.planner.vehicle);
    if (doc.contains("rules")) s.rules = parse_rules(doc.at("rules"));
    const json& ego = doc.at("ego");
    s.ego = {ego.at("x").get<double>(), ego.at("y").get<double>(),
             wrap_angle_value(ego.value("heading", 0.0)), ego.at("speed").get<double>()};
    s.scene.map = parse_map(doc.at("map"));
    const std::size_t steps = s.cycles + s.planner.horizon + 1;
    for (const json& t : doc.value("non_ego", json::array())) {
      s.scene.non_ego.push_back(parse_track(t, steps, s.scene.dt));
    }
    if (doc.contains("expect")) s.expect = parse_expect(doc.at("expect"));
    s.validate();
    return s;
  } catch (const json::exception& e) {
    config_error(std::string("malformed scenario: ") + e.what());
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::config) throw;
    config_error(std::string("invalid scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    config_error(path.string() + ": " + e.what());
  }
  return parse_scenario(doc);
}

std::filesystem::path scenario_directory() {
  if (const char* env = std::getenv("RULEHIER_SCENARIO_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return RULEHIER_SCENARIO_DIR;
}

namespace {

std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  if (ec) throw Error(ErrorCategory::io, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::vector<std::string> registered_scenarios(const std::filesystem::path& dir) {
  std::set<std::string> names;
  for (const auto& f : scenario_files(dir)) names.insert(f.stem().string());
  return {names.begin(), names.end()};
}

Scenario find_scenario(const std::string& name, const std::filesystem::path& dir) {
  const std::vector<std::string> names = registered_scenarios(dir);
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string list;
    for (const std::string& n : names) list += (list.empty() ? "" : ", ") + n;
    throw Error(ErrorCategory::unknown_scenario,
                "unknown scenario '" + name + "'; registered: " + list);
  }
  Scenario s = load_scenario(dir / (name + ".json"));
  if (s.name != name) {
    config_error("file " + name + ".json declares scenario '" + s.name + "'");
  }
  return s;
}

}  // namespace rulehier::sim
