#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "rulehier/error.hpp"
#include "rulehier/sim/render.hpp"
#include "rulehier/sim/scenario.hpp"
#include "rulehier/sim/simulator.hpp"
#include "rulehier/sim/stats.hpp"
#include "rulehier/sim/surface.hpp"
#include "rulehier/sim/trace.hpp"

using namespace rulehier;
using namespace rulehier::sim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ErrorCategory category_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected an error");
  return ErrorCategory::invalid_argument;
}

json road_doc() {
  std::ifstream in(scenario_directory() / "double-parked.json");
  return json::parse(in);
}

// Tags open and close in order; self-closing tags and the prolog are skipped.
bool balanced_xml(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while ((i = s.find('<', i)) != std::string::npos) {
    const std::size_t end = s.find('>', i);
    if (end == std::string::npos) return false;
    const std::string tag = s.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty() || tag[0] == '?' || tag[0] == '!' || tag.back() == '/') continue;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
    } else {
      stack.push_back(tag.substr(0, tag.find(' ')));
    }
  }
  return stack.empty();
}

double attribute(const std::string& svg, const std::string& name) {
  const std::regex re("<g id=\"ego\"[^>]*" + name + "=\"([^\"]+)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, re));
  return std::stod(m[1]);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rulehier_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("scenario registry") {
  const auto names = registered_scenarios();
  CHECK(names == std::vector<std::string>{"double-parked", "intersection-go",
                                          "intersection-wait", "overtake-from-lane",
                                          "overtake-from-shoulder", "stop-instead-of-overtake"});
  for (const auto& n : names) {
    const Scenario s = find_scenario(n);
    CHECK(s.name == n);
    CHECK(s.cycles > 0);
    for (const NonEgoTrack& t : s.scene.non_ego) {
      CHECK(t.states.size() >= s.cycles + s.planner.horizon + 1);
    }
  }
}

TEST_CASE("unknown scenarios list the registered names") {
  try {
    find_scenario("motorway");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::unknown_scenario);
    const std::string msg = e.what();
    CHECK(msg.find("motorway") != std::string::npos);
    CHECK(msg.find("overtake-from-lane") != std::string::npos);
    CHECK(msg.find("intersection-wait") != std::string::npos);
  }
}

TEST_CASE("malformed scenarios are config errors") {
  json d = road_doc();
  d.erase("ego");
  CHECK(category_of([&] { parse_scenario(d); }) == ErrorCategory::config);
  d = road_doc();
  d["ego"]["speed"] = "fast";
  CHECK(category_of([&] { parse_scenario(d); }) == ErrorCategory::config);
  d = road_doc();
  d["hierarchy"] = "motorway";
  CHECK(category_of([&] { parse_scenario(d); }) == ErrorCategory::config);
  d = road_doc();
  d["expect"]["allowed_violations"] = json::array({"stop_sign"});
  CHECK(category_of([&] { parse_scenario(d); }) == ErrorCategory::config);
  d = road_doc();
  d["map"]["lane_lines"] = json::array();
  CHECK(category_of([&] { parse_scenario(d); }) == ErrorCategory::config);
  d = road_doc();
  d["planner"]["horizon"] = 0;
  CHECK(category_of([&] { parse_scenario(d); }) == ErrorCategory::config);
  CHECK(category_of([] { load_scenario("/nonexistent/x.json"); }) == ErrorCategory::io);

  const fs::path dir = scratch("bad_registry");
  fs::create_directories(dir);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(category_of([&] { find_scenario("broken", dir); }) == ErrorCategory::config);
  json renamed = road_doc();
  renamed["name"] = "other";
  std::ofstream(dir / "mismatch.json") << renamed.dump();
  CHECK(category_of([&] { find_scenario("mismatch", dir); }) == ErrorCategory::config);
}

TEST_CASE("timing statistics") {
  const std::vector<double> xs{1.0, 3.0, 2.0, 4.0};
  const TimingStats s = summarize(xs);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.std == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.median == doctest::Approx(2.5));
  CHECK(s.max == 4.0);
  CHECK(s.min == 1.0);
  CHECK(s.count == 4);
  CHECK(summarize(std::vector<double>{7.0}).median == 7.0);
  CHECK(summarize(std::vector<double>{3.0, 1.0, 2.0}).median == 2.0);
  CHECK_THROWS_AS(summarize(std::vector<double>{}), Error);
}

TEST_CASE("reward surface") {
  const SurfaceGrid g = reward_surface(2.01, 30.0, 21);
  CHECK(g.axis.size() == 21);
  CHECK(g.reward.size() == 441);
  CHECK(g.axis.front() == -1.0);
  CHECK(g.axis.back() == 1.0);
  CHECK(g.axis[10] == 0.0);
  // Satisfying the top rule alone beats satisfying the second rule alone.
  CHECK(g.at(20, 0) > g.at(0, 20));
  const auto q = quadrant_means(g);
  REQUIRE(q.size() == 4);
  CHECK(q[0] < q[1]);
  CHECK(q[1] < q[2]);
  CHECK(q[2] < q[3]);
  std::ostringstream csv;
  write_surface_csv(csv, reward_surface(2.01, 30.0, 2));
  CHECK(csv.str().rfind("rho1,rho2,reward\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv.str()) lines += ch == '\n';
  CHECK(lines == 5);
  CHECK(category_of([] { reward_surface(2.01, 30.0, 1); }) == ErrorCategory::invalid_argument);
  CHECK(category_of([] { reward_surface(2.0, 30.0, 5); }) == ErrorCategory::domain);
}

TEST_CASE("short run: trace, summary and frames") {
  RunOptions opts;
  opts.cycles = 4;
  opts.seed = 3;
  const RunResult run = run_scenario("overtake-from-lane", opts);
  REQUIRE(run.trace.size() == 4);
  CHECK(run.states.size() == 5);
  CHECK(run.controls.size() == 4);
  CHECK(run.summary.feasible);
  CHECK(run.summary.timing.count == 4);

  std::ostringstream a, b;
  write_trace(a, run);
  write_trace(b, run_scenario("overtake-from-lane", opts));
  CHECK(a.str() == b.str());

  std::istringstream lines(a.str());
  std::string line;
  std::getline(lines, line);
  const json header = json::parse(line);
  CHECK(header["schema"] == trace_schema);
  CHECK(header["version"] == trace_version);
  CHECK(header["scenario"] == "overtake-from-lane");
  CHECK(header["seed"] == 3);
  CHECK(header["planner"]["temperature"] == 0.05);
  CHECK(header["hierarchy"]["rules"].size() == 6);
  std::size_t records = 0;
  while (std::getline(lines, line)) {
    const json rec = json::parse(line);
    CHECK(rec["cycle"] == records);
    CHECK_FALSE(rec.contains("seconds"));
    ++records;
  }
  CHECK(records == 4);

  const json summary = summary_document(run);
  CHECK(summary["cycle_timings"].size() == 4);
  CHECK(summary.contains("expectation_met"));
  CHECK(summary_path_for("out/run.jsonl") == fs::path("out/run.summary.json"));

  const fs::path dir = scratch("frames");
  const auto files = emit_frames(run, dir);
  CHECK(files.size() == 4);
  for (std::size_t k = 0; k < files.size(); ++k) {
    CHECK(files[k].filename() == "frame_000" + std::to_string(k) + ".svg");
    std::ifstream in(files[k]);
    const std::string svg((std::istreambuf_iterator<char>(in)), {});
    CHECK(balanced_xml(svg));
    CHECK(svg.find("class=\"dashed-line\"") != std::string::npos);
    CHECK(svg.find("class=\"non-ego\"") != std::string::npos);
    CHECK(attribute(svg, "data-x") == run.trace[k].state.px);
    CHECK(attribute(svg, "data-y") == run.trace[k].state.py);
    CHECK(attribute(svg, "data-psi") == run.trace[k].state.psi);
  }
  const std::vector<std::size_t> only{2};
  CHECK(emit_frames(run, scratch("one_frame"), only).size() == 1);
  const std::vector<std::size_t> bad{9};
  CHECK(category_of([&] { emit_frames(run, scratch("bad_frame"), bad); }) ==
        ErrorCategory::invalid_argument);
  CHECK(category_of([&] { emit_frames(run, "/proc/rulehier/frames"); }) == ErrorCategory::io);
  CHECK(category_of([&] { write_trace(fs::path("/proc/rulehier/t.jsonl"), run); }) ==
        ErrorCategory::io);
}

TEST_CASE("seeded jitter changes the start and nothing else") {
  Scenario s = find_scenario("double-parked");
  s.jitter = 0.2;
  RunOptions a, b;
  a.cycles = b.cycles = 1;
  a.seed = 1;
  b.seed = 2;
  const RunResult ra = run_scenario(s, a);
  CHECK(run_scenario(s, a).states[0].px == ra.states[0].px);
  CHECK(run_scenario(s, b).states[0].px != ra.states[0].px);
  CHECK(std::abs(ra.states[0].px - s.ego.px) <= 0.2);
  RunOptions zero;
  zero.cycles = 0;
  CHECK(category_of([&] { run_scenario(s, zero); }) == ErrorCategory::invalid_argument);
}
