#include <gtest/gtest.h>

#include <filesystem>

#include "spp/errors.hpp"
#include "spp/geometry.hpp"
#include "spp/scenario.hpp"

using namespace spp;

namespace {

const char* kMinimal = R"({
  "name": "tiny",
  "grid": {"x": [-1, 1], "y": [-1, 1], "counts": [21, 21, 12]},
  "dynamics": {"speed": 1.0, "omega_max": 1.0},
  "method": {"name": "basic", "collision_radius": 0.1},
  "vehicles": [
    {"id": 1, "x0": [-0.5, 0.0, 0.0], "target": {"center": [0.5, 0.0], "radius": 0.1}, "sta": 0.0},
    {"id": 2, "x0": [0.5, 0.5, 3.14], "target": {"center": [-0.5, 0.5], "radius": 0.1}, "sta": 0.5}
  ],
  "obstacles": [{"type": "box", "lo": [-0.1, -0.9], "hi": [0.1, -0.7]}],
  "seed": 3
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  if (at != std::string::npos) s.replace(at, from.size(), to);
  return s;
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "test.json");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Scenario, ParsesMinimal) {
  const Scenario s = parse_scenario(kMinimal);
  EXPECT_EQ(s.name, "tiny");
  ASSERT_EQ(s.vehicles.size(), 2u);
  EXPECT_EQ(s.vehicles[1].priority, 2);
  EXPECT_DOUBLE_EQ(s.vehicles[1].sta, 0.5);
  EXPECT_EQ(s.method.method, Method::Basic);
  EXPECT_EQ(s.seed, 3u);
  EXPECT_EQ(s.disturbance.seed, 3u);
  EXPECT_EQ(s.disturbance.kind, DisturbanceKind::Zero);
  EXPECT_TRUE(s.grid.periodic(2));
  EXPECT_FALSE(s.intruder);

  const PlanningProblem p = s.problem();
  EXPECT_LE(sample(p.static_obstacles, {0.0, -0.8, 0.0, 0.0}), 0.0);
  EXPECT_GT(sample(p.static_obstacles, {0.0, 0.0, 0.0, 0.0}), 0.0);
}

TEST(Scenario, SyntaxErrorNamesLineAndColumn) {
  const std::string bad = "{\n  \"name\": \"x\",\n  \"grid\": [1, 2,,]\n}";
  const std::string msg = error_of(bad);
  EXPECT_NE(msg.find("test.json"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(Scenario, MissingVehicles) {
  std::string s = kMinimal;
  const auto from = s.find("\"vehicles\"");
  const auto to = s.find("\"obstacles\"");
  s.erase(from, to - from);
  const std::string msg = error_of(s);
  EXPECT_NE(msg.find("/vehicles"), std::string::npos) << msg;
}

TEST(Scenario, EmptyVehicleList) {
  std::string s = kMinimal;
  const auto from = s.find('[', s.find("\"vehicles\""));
  const auto to = s.find("\"obstacles\"");
  s.replace(from, to - from, "[],\n  ");
  EXPECT_NE(error_of(s).find("/vehicles"), std::string::npos);
}

TEST(Scenario, UnknownKeyRejected) {
  const std::string msg = error_of(replace(kMinimal, "\"seed\": 3", "\"seed\": 3, \"colour\": 1"));
  EXPECT_NE(msg.find("/colour"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key"), std::string::npos) << msg;
}

TEST(Scenario, ValidationNamesThePath) {
  EXPECT_NE(error_of(replace(kMinimal, "\"x0\": [-0.5, 0.0, 0.0]", "\"x0\": [-1.5, 0.0, 0.0]")).find("/vehicles/0/x0"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "\"id\": 2", "\"id\": 1")).find("/vehicles/1/id"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "\"name\": \"basic\"", "\"name\": \"teleport\"")).find("/method/name"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "\"seed\": 3", "\"seed\": -3")).find("/seed"), std::string::npos);
}

TEST(Scenario, RobustTrackingNeedsSharedDynamics) {
  std::string s = replace(kMinimal, R"("name": "basic", "collision_radius": 0.1)",
                          R"("name": "robust_tracking", "collision_radius": 0.1,
                             "rtt": {"planner": {"speed": 1.0, "omega_max": 0.5}, "r_eb": 0.1})");
  EXPECT_NO_THROW(parse_scenario(s));
  s = replace(s, "\"sta\": 0.5}", "\"sta\": 0.5, \"dynamics\": {\"speed\": 0.9, \"omega_max\": 1.0}}");
  EXPECT_NE(error_of(s).find("/vehicles/1"), std::string::npos);
}

TEST(Scenario, MissingFile) { EXPECT_THROW(load_scenario("/nonexistent/none.json"), InputError); }

TEST(Scenario, BundledScenariosLoad) {
  const std::filesystem::path dir = SPP_SCENARIO_DIR;
  for (const char* name : {"basic4", "dstb4_cc", "dstb4_lrc", "dstb4_rtt", "intruder5"}) {
    SCOPED_TRACE(name);
    const Scenario s = load_scenario(dir / (std::string(name) + ".json"));
    EXPECT_EQ(s.name, name);
  }
  const Scenario i5 = load_scenario(dir / "intruder5.json");
  ASSERT_TRUE(i5.intruder);
  EXPECT_EQ(i5.vehicles.size(), 5u);
  EXPECT_NO_THROW(i5.intruder->spec.validate());
}
