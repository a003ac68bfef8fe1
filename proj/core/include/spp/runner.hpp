#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spp/intruder.hpp"
#include "spp/planner.hpp"
#include "spp/scenario.hpp"
#include "spp/simulator.hpp"

namespace spp {

/// Process exit codes of the batch front end.
enum ExitCode : int { kExitOk = 0, kExitInfeasible = 2, kExitSeparation = 3, kExitInput = 4 };

using RunLog = std::function<void(const std::string&)>;

/// Writes plan.json, value.hjt, target.hjf, obstacles.hjt and, when present,
/// trajectory.txt and kernel.hjf into `dir`.
void save_plan(const std::filesystem::path& dir, const PlanResult& plan);
/// Inverse of save_plan. Throws InputError on missing or malformed files.
PlanResult load_plan(const std::filesystem::path& dir);

/// `{"id":..,"priority":..,"method":..,"ldt":..,"sta":..,"feasible":true,"solves":..}`
std::string plan_summary_line(const PlanResult& plan);

/// Everything the intruder event produced, after re-planning and re-running
/// the affected vehicles.
struct IntruderOutcome {
  IntruderRun run;
  PlanSet replanned;
  /// Final trajectory per vehicle: unaffected runs as flown, affected runs
  /// spliced with their re-planned continuation. Same order as the plans.
  std::vector<SimResult> runs;
  std::vector<IntruderEvent> events;
  std::vector<SeparationViolation> violations;
  std::size_t avoid_solves = 0;
};

/// Avoid sets for every distinct vehicle dynamics, the intruder run, the
/// re-plan of affected vehicles and their continued simulation.
IntruderOutcome run_intruder_event(const Scenario& scenario, const std::vector<PlanResult>& plans,
                                   const DisturbanceModel& model, const RunLog& log = {});

/// `spp plan`: plans every vehicle and writes DIR/scenario.json,
/// DIR/plans/v<id>/ and DIR/summary.jsonl. Returns an ExitCode.
int command_plan(const std::filesystem::path& scenario, const std::filesystem::path& out, const RunLog& log = {});

/// `spp simulate`: runs the plans in DIR and writes DIR/sim/<model>-<seed>/.
/// Seed and model default to the scenario's.
int command_simulate(const std::filesystem::path& dir, std::optional<std::uint64_t> seed,
                     std::optional<DisturbanceKind> model, const RunLog& log = {});

/// `spp full`: plan, simulate and draw SVG overviews.
int command_full(const std::filesystem::path& scenario, const std::filesystem::path& out, const RunLog& log = {});

}  // namespace spp
