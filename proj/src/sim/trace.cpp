// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

#include "rulehier/sim/trace.hpp"

#include <fstream>
#include <ostream>

#include "rulehier/error.hpp"

namespace rulehier::sim {
namespace {

using nlohmann::json;

json state_json(const EgoState& x) {
  return {{"px", x.px}, {"py", x.py}, {"psi", x.psi}, {"v", x.v}};
}

json stats_json(const TimingStats& t) {
  return {{"mean", t.mean}, {"std", t.std},   {"median", t.median},
          {"max", t.max},   {"min", t.min},   {"count", t.count}};
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot open " + path.string());
  return out;
}

}  // namespace

json trace_header(const RunResult& run) {
  const Scenario& s = run.scenario;
  const PlannerConfig& p = s.planner;
  json rules = json::array();
  for (const Rule& r : run.hierarchy.rules) {
    rules.push_back({{"name", r.name}, {"scale", r.scale}, {"formula", r.formula.to_string()}});
  }
  json actions = json::array();
  for (const ControlInput& u : p.actions) actions.push_back({u.accel, u.steer});
  return {
      {"schema", trace_schema},
      {"version", trace_version},
      {"scenario", s.name},
      {"seed", run.summary.seed},
      {"cycles", run.summary.cycles},
      {"dt", s.scene.dt},
      {"initial_state", state_json(run.states.front())},
      {"hierarchy",
       {{"kind", hierarchy_kind_name(s.hierarchy)},
        {"a", run.hierarchy.a},
        {"c", run.hierarchy.c},
        {"rules", rules}}},
      {"rule_params",
       {{"heading_tolerance", s.rules.heading_tolerance},
        {"min_speed", s.rules.min_speed},
        {"max_speed", s.rules.max_speed},
        {"stop_speed", s.rules.stop_speed},
        {"stop_duration", s.rules.stop_duration}}},
      {"planner",
       {{"horizon", p.horizon},
        {"segment", p.segment},
        {"execute", p.execute},
        {"learning_rate", p.learning_rate},
        {"iterations", p.iterations},
        {"temperature", p.temperature},
        {"actions", actions}}},
      {"vehicle",
       {{"front_axle", p.vehicle.front_axle},
        {"rear_axle", p.vehicle.rear_axle},
        {"accel_max", p.vehicle.accel_max},
        {"steer_max", p.vehicle.steer_max},
        {"clamp_speed_at_zero", p.vehicle.clamp_speed_at_zero}}},
  };
}

json cycle_record(const CycleTrace& c) {
  json executed = json::array();
  for (const ControlInput& u : c.executed) executed.push_back({u.accel, u.steer});
  json plan = json::array();
  for (const EgoState& x : c.plan) plan.push_back({x.px, x.py, x.psi, x.v});
  return {{"cycle", c.cycle},
          {"state", state_json(c.state)},
          {"executed", executed},
          {"robustness", c.robustness},
          {"rank", c.rank},
          {"stage1_rank", c.stage1_rank},
          {"stage1_reward", c.stage1_reward},
          {"refined_reward", c.refined_reward},
          {"branch", c.branch},
          {"stop_latched", c.stop_latched},
          {"plan", plan},
          {"warnings", c.warnings}};
}

json summary_document(const RunResult& run) {
  const RunSummary& s = run.summary;
  json timings = json::array();
  for (const CycleTrace& c : run.trace) {
    timings.push_back(
        {{"stage1", c.stage1_seconds}, {"stage2", c.stage2_seconds}, {"total", c.total_seconds}});
  }
  json crossing = json::object();
  if (run.scenario.expect.intersection) {
    const CrossingTimes& t = s.crossing;
    auto opt = [](const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); };
    crossing = {{"ego_enter", opt(t.ego_enter)},
                {"other_enter", opt(t.other_enter)},
                {"other_exit", opt(t.other_exit)},
                {"observed", t.observed ? json(crossing_order_name(*t.observed)) : json(nullptr)},
                {"expected", crossing_order_name(run.scenario.expect.intersection->order)}};
  }
  const std::vector<std::string> failures = check_expectation(run);
  return {{"schema", "rulehier.summary"},
          {"version", trace_version},
          {"scenario", s.scenario},
          {"seed", s.seed},
          {"cycles", s.cycles},
          {"timing", stats_json(s.timing)},
          {"cycle_timings", timings},
          {"violated", s.violated},
          {"rank_regressions", s.rank_regressions},
          {"reward_regressions", s.reward_regressions},
          {"nonfinite_cycles", s.nonfinite_cycles},
          {"min_clearance", s.min_clearance},
          {"min_speed", s.min_speed},
          {"final_speed", s.final_speed},
          {"longest_stop_seconds", s.longest_stop_seconds},
          {"stop_completed", s.stop_completed},
          {"feasible", s.feasible},
          {"crossing", crossing},
          {"expectation_met", failures.empty()},
          {"expectation_failures", failures}};
}

void write_trace(std::ostream& out, const RunResult& run) {
  out << trace_header(run).dump() << '\n';
  for (const CycleTrace& c : run.trace) out << cycle_record(c).dump() << '\n';
}

void write_trace(const std::filesystem::path& path, const RunResult& run) {
  std::ofstream out = open_for_write(path);
  write_trace(out, run);
  if (!out) throw Error(ErrorCategory::io, "write failed: " + path.string());
}

void write_summary(const std::filesystem::path& path, const RunResult& run) {
  std::ofstream out = open_for_write(path);
  out << summary_document(run).dump(2) << '\n';
  if (!out) throw Error(ErrorCategory::io, "write failed: " + path.string());
}

std::filesystem::path summary_path_for(const std::filesystem::path& trace_path) {
  std::filesystem::path p = trace_path;
  p.replace_extension(".summary.json");
  return p;
}

}  // namespace rulehier::sim
