// Copyright 2026 The rulehier Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: closed-loop runs, the planning-time table, the
// two-rule reward surface and the gradient check.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rulehier/error.hpp"
#include "rulehier/sim/gradcheck.hpp"
#include "rulehier/sim/render.hpp"
#include "rulehier/sim/simulator.hpp"
#include "rulehier/sim/surface.hpp"
#include "rulehier/sim/trace.hpp"
#include "rulehier/simd/kernels.hpp"

namespace {

using namespace rulehier;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::invalid_argument: return 2;
    case ErrorCategory::domain: return 3;
    case ErrorCategory::horizon: return 4;
    case ErrorCategory::config: return 5;
    case ErrorCategory::io: return 6;
    case ErrorCategory::unknown_scenario: return 7;
  }
  return 1;
}

int report_error(const std::string& category, const std::string& message, int code) {
  const nlohmann::json e = {{"error", {{"category", category}, {"message", message}}}};
  std::cerr << e.dump() << '\n';
  return code;
}

int cmd_run(const std::string& name, std::size_t cycles, std::uint64_t seed,
            const std::filesystem::path& out, const std::string& frames) {
  sim::RunOptions opts;
  if (cycles > 0) opts.cycles = cycles;
  opts.seed = seed;
  const sim::RunResult run = sim::run_scenario(name, opts);
  sim::write_trace(out, run);
  const std::filesystem::path summary = sim::summary_path_for(out);
  sim::write_summary(summary, run);
  if (!frames.empty()) sim::emit_frames(run, frames);

  const sim::TimingStats& t = run.summary.timing;
  std::printf("scenario %s: %zu cycles, violated {", name.c_str(), run.summary.cycles);
  for (std::size_t i = 0; i < run.summary.violated.size(); ++i) {
    std::printf("%s%s", i ? ", " : "", run.summary.violated[i].c_str());
  }
  std::printf("}, cycle time %.4f +- %.4f s\n", t.mean, t.std);
  std::printf("trace %s\nsummary %s\n", out.string().c_str(), summary.string().c_str());
  const std::vector<std::string> failures = sim::check_expectation(run);
  for (const std::string& f : failures) std::printf("expectation: %s\n", f.c_str());
  return 0;
}

int cmd_bench() {
  std::printf("%-28s %-18s %-10s %-10s %-10s %s\n", "Scenario", "Mean+-Std (s)", "Median (s)",
              "Max (s)", "Min (s)", "Violated");
  for (const std::string& name : sim::registered_scenarios()) {
    const sim::RunResult run = sim::run_scenario(name);
    const sim::TimingStats& t = run.summary.timing;
    std::string violated;
    for (const std::string& r : run.summary.violated) violated += (violated.empty() ? "" : ",") + r;
    char mean_std[32];
    std::snprintf(mean_std, sizeof mean_std, "%.3f+-%.3f", t.mean, t.std);
    std::printf("%-28s %-18s %-10.3f %-10.3f %-10.3f %s\n", name.c_str(), mean_std, t.median,
                t.max, t.min, violated.empty() ? "-" : violated.c_str());
  }
  return 0;
}

int cmd_surface(double a, double c, std::size_t res, const std::string& out) {
  const sim::SurfaceGrid g = sim::reward_surface(a, c, res);
  if (out.empty()) {
    sim::write_surface_csv(std::cout, g);
  } else {
    sim::write_surface_csv(std::filesystem::path(out), g);
    const std::vector<double> q = sim::quadrant_means(g);
    std::printf("quadrant means (-,-) %.6f (-,+) %.6f (+,-) %.6f (+,+) %.6f\n", q[0], q[1], q[2],
                q[3]);
  }
  return 0;
}

int cmd_gradcheck(std::size_t trials, std::uint64_t seed, const std::string& scenario) {
  sim::GradcheckOptions opts;
  opts.trials = trials;
  opts.seed = seed;
  const sim::GradcheckReport r = sim::gradcheck(sim::find_scenario(scenario), opts);
  std::printf("trials %zu entries %zu failures %zu max_abs_error %.3e max_rel_error %.3e\n",
              r.trials, r.entries, r.failures, r.max_abs_error, r.max_rel_error);
  return r.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-hierarchy motion planner"};
  app.require_subcommand(1);

  std::string name;
  std::size_t cycles = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string frames;
  CLI::App* run = app.add_subcommand("run", "closed-loop run of one scenario");
  run->add_option("--scenario", name, "scenario name")->required();
  run->add_option("--cycles", cycles, "planning cycles (default: the scenario's own)");
  run->add_option("--seed", seed, "seed for the start-state jitter");
  run->add_option("--out", out, "trace path (JSON lines)")->required();
  run->add_option("--frames", frames, "directory for SVG frames");

  bool all = false;
  CLI::App* bench = app.add_subcommand("bench", "planning-time statistics per scenario");
  bench->add_flag("--all", all, "every registered scenario")->required();

  double a = 2.01;
  double c = 30.0;
  std::size_t res = 101;
  std::string surface_out;
  CLI::App* surface = app.add_subcommand("surface", "two-rule smooth reward grid as CSV");
  surface->add_option("--a", a, "base of the reward weights");
  surface->add_option("--c", c, "sigmoid sharpness");
  surface->add_option("--res", res, "samples per axis");
  surface->add_option("--out", surface_out, "CSV path (default: stdout)");

  std::size_t trials = 50;
  std::uint64_t grad_seed = 1;
  std::string grad_scenario = "overtake-from-lane";
  CLI::App* grad = app.add_subcommand("gradcheck", "autodiff vs central differences");
  grad->add_option("--trials", trials, "random states");
  grad->add_option("--seed", grad_seed, "sampling seed");
  grad->add_option("--scenario", grad_scenario, "road scenario supplying the scene");

  CLI::App* list = app.add_subcommand("list", "registered scenarios and SIMD backend");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("usage", e.what(), 2);
  }

  try {
    if (*run) return cmd_run(name, cycles, seed, out, frames);
    if (*bench) return cmd_bench();
    if (*surface) return cmd_surface(a, c, res, surface_out);
    if (*grad) return cmd_gradcheck(trials, grad_seed, grad_scenario);
    if (*list) {
      std::printf("simd backend: %s\n", std::string(simd::backend_name(simd::active_backend())).c_str());
      for (const std::string& n : sim::registered_scenarios()) std::printf("%s\n", n.c_str());
      return 0;
    }
  } catch (const Error& e) {
    return report_error(std::string(category_name(e.category())), e.what(),
                        exit_code(e.category()));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
  return 0;
}
