#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spp/intruder.hpp"
#include "spp/planner.hpp"
#include "spp/simulator.hpp"

namespace spp {

struct ObstacleSpec {
  enum Kind { Box, Disk } kind = Box;
  /// Box: lower corner. Disk: center.
  Vec2 a{0.0, 0.0};
  /// Box: upper corner.
  Vec2 b{0.0, 0.0};
  double radius = 0.0;
};

struct IntruderScenario {
  IntruderSpec spec;
  AvoidGridSpec avoid_grid;
  double band = 0.05;
  /// Re-planned vehicles must arrive by max(sta, departure + window).
  double replan_window = 3.0;
};

/// A complete batch run. See README for the JSON schema.
struct Scenario {
  std::string name;
  Grid grid;
  MethodConfig method;
  std::vector<VehicleSpec> vehicles;
  std::vector<ObstacleSpec> obstacles;
  DisturbanceModel disturbance;
  std::optional<IntruderScenario> intruder;
  PlannerSettings solver;
  SimConfig sim;
  std::uint64_t seed = 0;
  std::string output;

  /// Planning inputs with the static obstacles rasterized on the position grid.
  PlanningProblem problem() const;
};

/// Parses and validates. Syntax errors throw InputError naming line and
/// column; validation errors name the JSON path (e.g. /vehicles/2/sta).
/// Unknown keys are rejected.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace spp
