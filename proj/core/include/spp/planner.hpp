#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spp/dynamics.hpp"
#include "spp/field.hpp"
#include "spp/geometry.hpp"
#include "spp/grid.hpp"
#include "spp/hj_solver.hpp"
#include "spp/tracking.hpp"
#include "spp/trajectory.hpp"

namespace spp {

enum class Method { Basic, Centralized, LeastRestrictive, RobustTracking };

const char* to_string(Method m);
/// Accepts "basic", "centralized", "least_restrictive", "robust_tracking".
std::optional<Method> method_from_string(const std::string& s);

struct VehicleSpec {
  int id = 0;
  /// 1 is the highest priority.
  int priority = 0;
  DubinsParams params;
  State3 x0;
  Vec2 target_center{0.0, 0.0};
  double target_radius = 0.1;
  double sta = 0.0;
  /// When set the vehicle leaves x0 at exactly this time (re-planning an
  /// airborne vehicle) instead of searching for the latest departure.
  std::optional<double> depart_at;
};

/// Throws std::invalid_argument unless priorities are 1..n without gaps and
/// every target radius is positive.
void validate_vehicles(const std::vector<VehicleSpec>& vehicles);

struct MethodConfig {
  Method method = Method::Basic;
  std::optional<TrackingErrorParams> rtt;
  double collision_radius = 0.1;
  /// Least-restrictive switching band, value units (used by the simulator).
  double lrc_band = 0.05;

  void validate() const;
};

struct PlannerSettings {
  double save_dt = 0.02;
  double cfl = 0.5;
  int spatial_order = 5;
  /// Backward solves start at sta - horizon; one retry adds horizon_extension.
  double horizon = 5.0;
  double horizon_extension = 2.0;
  std::size_t stop_extra_samples = 2;
  /// Lattice samples a Basic or robust-tracking departure may move earlier
  /// when the extracted path misses the target.
  std::size_t max_departure_backoff = 10;
  /// Induced obstacles are dilated by R_c plus this many position cells. On
  /// coarse grids the gradient path can cut a fraction of a cell into a
  /// numerically smoothed obstacle.
  double obstacle_margin_cells = 0.0;
  KernelSettings kernel;

  void validate() const;
};

struct PlanningProblem {
  Grid grid;
  /// Union of static obstacles on the position grid (absent when none).
  Field static_obstacles;
  MethodConfig config;
  PlannerSettings settings;
};

struct PlanResult {
  int id = 0;
  int priority = 0;
  Method method = Method::Basic;
  DubinsParams params;
  State3 x0;
  Vec2 target_center{0.0, 0.0};
  double target_radius = 0.0;
  double sta = 0.0;
  double ldt = 0.0;
  /// Field the BRS was solved against (shrunken for robust tracking).
  Field target;
  ValueFunction value;
  /// Basic: planned path. RobustTracking: nominal reference. Otherwise empty.
  Trajectory trajectory;
  /// Position-grid obstacle this vehicle imposes on lower priorities, on the
  /// save_dt lattice; absent outside its presence window.
  TimeField induced_obstacles;
  std::string obstacle_tag;
  std::optional<Field> kernel;
  double kernel_radius = 0.0;
  std::size_t solves = 0;
};

struct PlanSet {
  std::vector<PlanResult> plans;
  /// One line per vehicle naming the higher-priority plans it read.
  std::vector<std::string> audit;
  std::size_t solve_count = 0;
};

/// Multiples of save_dt from the one at or below t_lo to the one at or below t_hi.
std::vector<double> lattice_times(double t_lo, double t_hi, double save_dt);

/// Static field united with every induced obstacle present at each time.
/// An induced TimeField counts only at its own sample times (matched within
/// kTimeEps); elsewhere that vehicle is absent.
TimeField total_obstacles(const Field& static_obstacles, const std::vector<const TimeField*>& induced,
                          const std::vector<double>& times);

/// Latest time x0 lies in the BRS: the last sample with value <= 0, refined
/// linearly toward the next sample. nullopt when no sample contains x0.
std::optional<double> latest_departure_time(const ValueFunction& value, const State3& x0);

/// Capsule obstacle: at lattice time t_k, every position within `radius` of
/// the path swept over [t_k, t_k + save_dt].
TimeField induced_obstacle_basic(const Trajectory& traj, double radius, const Grid& position_grid, double save_dt);

/// Position projections (time, 2-D field) swept onto the lattice: sample t_k
/// unites every projection in [t_k, t_k + save_dt], then dilates by radius.
TimeField sweep_projections(const std::vector<std::pair<double, Field>>& projections, double radius,
                            double save_dt);

/// Projection of each FRS sample, swept and dilated by R_c.
TimeField induced_obstacle_cc(const ValueFunction& frs, double r_c, double save_dt);

/// FRS intersected with the BRS sample at or before the same time, then as
/// induced_obstacle_cc. Throws std::invalid_argument when the spans miss.
TimeField induced_obstacle_lrc(const ValueFunction& frs_open, const ValueFunction& brs, double r_c, double save_dt);

/// Nominal path dilated by the kernel's circumscribed radius plus R_c.
/// Throws EmptyKernelError for an empty kernel.
TimeField induced_obstacle_rtt(const Trajectory& nominal, const Field& kernel, double r_c,
                               const Grid& position_grid, double save_dt);

/// Erodes the target by the kernel's circumscribed disk. Throws
/// EmptyTargetError when nothing is left.
Field shrink_target(const Field& target, const Field& kernel);

/// Dilates every obstacle sample by the kernel's circumscribed disk.
TimeField augment_obstacles(const TimeField& obstacles, const Field& kernel);

/// Small disk around x0 in position, one heading cell wide, for FRS starts.
Field initial_state_set(const Grid& grid, const State3& x0);

/// Closed-loop path from the value function's optimal control, RK4 at dt,
/// from t0 until the position enters `target` or t_end.
Trajectory extract_trajectory(const ValueFunction& value, const Field& target, const State3& x0, double t0,
                              double t_end, HamiltonianMode mode, const DubinsParams& params, double dt);

using PlanLog = std::function<void(const std::string&)>;

/// Sequential planning in ascending priority. `higher` plans (already fixed)
/// act as additional higher-priority vehicles; a kernel found there is reused.
/// Throws InfeasibleError naming the first vehicle that fails.
PlanSet plan_all(const PlanningProblem& problem, std::vector<VehicleSpec> vehicles,
                 const std::vector<const PlanResult*>& higher = {}, const PlanLog& log = {});

}  // namespace spp
