#include <gtest/gtest.h>

#include <filesystem>

#include <json.hpp>

#include "spp/io.hpp"
#include "spp/runner.hpp"

using namespace spp;
namespace fs = std::filesystem;

namespace {

const char* kTiny = R"({
  "name": "tiny",
  "grid": {"x": [-1, 1], "y": [-1, 1], "counts": [25, 25, 16]},
  "dynamics": {"speed": 1.0, "omega_max": 1.0},
  "method": {"name": "basic", "collision_radius": 0.1},
  "vehicles": [
    {"id": 1, "x0": [-0.6, 0.3, 0.0], "target": {"center": [0.6, 0.3], "radius": 0.2}, "sta": 0.0},
    {"id": 2, "x0": [-0.6, -0.4, 0.0], "target": {"center": [0.6, -0.4], "radius": 0.2}, "sta": 0.0}
  ],
  "solver": {"horizon": 3.0, "spatial_order": 2},
  "seed": 5
})";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("spp_runner_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_scenario(const fs::path& dir, const std::string& text) {
  save_text(dir / "s.json", text);
  return dir / "s.json";
}

}  // namespace

TEST(Runner, PlanWritesBundleAndIsReproducible) {
  const fs::path d = scratch("plan");
  const fs::path s = write_scenario(d, kTiny);
  ASSERT_EQ(command_plan(s, d / "a"), kExitOk);
  ASSERT_EQ(command_plan(s, d / "b"), kExitOk);
  const std::string sa = load_text(d / "a" / "summary.jsonl");
  EXPECT_EQ(sa, load_text(d / "b" / "summary.jsonl"));
  for (const char* f : {"scenario.json", "audit.txt", "plans/v1/plan.json", "plans/v1/value.hjt",
                        "plans/v2/obstacles.hjt", "plans/v2/trajectory.txt"}) {
    EXPECT_TRUE(fs::exists(d / "a" / f)) << f;
  }
  EXPECT_NE(sa.find("\"total_solves\":2"), std::string::npos) << sa;
  EXPECT_EQ(load_text(d / "a" / "audit.txt"), "vehicle 1 reads none\nvehicle 2 reads 1\n");
}

TEST(Runner, SavedPlanRoundTrips) {
  const fs::path d = scratch("roundtrip");
  ASSERT_EQ(command_plan(write_scenario(d, kTiny), d / "out"), kExitOk);
  const PlanResult p = load_plan(d / "out" / "plans" / "v2");
  EXPECT_EQ(p.id, 2);
  EXPECT_EQ(p.priority, 2);
  EXPECT_FALSE(p.trajectory.empty());
  const std::string line = load_text(d / "out" / "summary.jsonl");
  EXPECT_NE(line.find(plan_summary_line(p)), std::string::npos);
}

TEST(Runner, SimulateWritesReportAndRepeats) {
  const fs::path d = scratch("sim");
  ASSERT_EQ(command_plan(write_scenario(d, kTiny), d / "out"), kExitOk);
  ASSERT_EQ(command_simulate(d / "out", std::nullopt, std::nullopt), kExitOk);
  const fs::path run = d / "out" / "sim" / "zero-5";
  const auto report = nlohmann::json::parse(load_text(run / "report.json"));
  EXPECT_EQ(report.at("violation_count"), 0);
  for (const auto& a : report.at("arrivals")) EXPECT_TRUE(a.at("arrived").get<bool>());
  const std::string first = load_text(run / "v1.traj");

  ASSERT_EQ(command_simulate(d / "out", 9, DisturbanceKind::UniformRandom), kExitOk);
  EXPECT_TRUE(fs::exists(d / "out" / "sim" / "random-9" / "manifest.json"));
  ASSERT_EQ(command_simulate(d / "out", std::nullopt, std::nullopt), kExitOk);
  EXPECT_EQ(load_text(run / "v1.traj"), first);
}

TEST(Runner, MissingPlanDirectoryIsInputError) {
  EXPECT_EQ(command_simulate(scratch("missing") / "nope", std::nullopt, std::nullopt), kExitInput);
}

TEST(Runner, BadScenarioIsInputError) {
  const fs::path d = scratch("bad");
  EXPECT_EQ(command_plan(write_scenario(d, "{\"grid\": }"), d / "out"), kExitInput);
  EXPECT_EQ(command_plan(d / "absent.json", d / "out"), kExitInput);
}

TEST(Runner, InfeasibleWritesFailureRecord) {
  const fs::path d = scratch("infeasible");
  std::string text = kTiny;
  text.replace(text.find("\"horizon\": 3.0"), 14, "\"horizon\": 0.2, \"horizon_extension\": 0.0");
  std::string log;
  ASSERT_EQ(command_plan(write_scenario(d, text), d / "out", [&](const std::string& s) { log += s + "\n"; }),
            kExitInfeasible);
  const auto rec = nlohmann::json::parse(load_text(d / "out" / "failure.json"));
  EXPECT_EQ(rec.at("status"), "infeasible");
  EXPECT_EQ(rec.at("vehicle"), 1);
  EXPECT_NE(log.find("vehicle 1"), std::string::npos);
}

TEST(Runner, FullDrawsOverview) {
  const fs::path d = scratch("full");
  ASSERT_EQ(command_full(write_scenario(d, kTiny), d / "out"), kExitOk);
  const fs::path run = d / "out" / "sim" / "zero-5";
  EXPECT_TRUE(fs::exists(run / "overview.svg"));
  EXPECT_TRUE(fs::exists(run / "brs_v1.svg"));
  EXPECT_EQ(load_text(run / "overview.svg").rfind("<svg", 0), 0u);
}
