#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spp/dynamics.hpp"
#include "spp/field.hpp"
#include "spp/planner.hpp"
#include "spp/simulator.hpp"
#include "spp/trajectory.hpp"

namespace spp {

enum class IntruderBehavior { Scripted, Pursuit };

const char* to_string(IntruderBehavior b);
/// Accepts "scripted" and "pursuit".
std::optional<IntruderBehavior> intruder_behavior_from_string(const std::string& s);

/// Piecewise-constant control from `t` until the next segment starts.
struct ControlSegment {
  double t = 0.0;
  double v = 0.0;
  double omega = 0.0;
};

struct IntruderSpec {
  DubinsParams params;
  /// State at t_sa.
  State3 x0;
  double t_sa = 0.0;
  double t_ea = 0.0;
  double t_iat = 0.0;
  IntruderBehavior behavior = IntruderBehavior::Scripted;
  /// Scripted only; sorted by time. Before the first segment the intruder
  /// flies at v_max straight ahead.
  std::vector<ControlSegment> script;

  /// Throws std::invalid_argument unless t_sa <= t_ea <= t_sa + t_iat and the
  /// script is sorted and within the control bounds.
  void validate() const;
};

/// Collision-reachable set in relative coordinates: the intruder's position
/// and heading seen from the vehicle's body frame. Value <= 0 means the
/// intruder can force |p_rel| <= r_c within `horizon`.
struct AvoidSet {
  Field value;
  double r_c = 0.0;
  double horizon = 0.0;
  DubinsParams vehicle;
  DubinsParams intruder;

  /// Value at a relative state; +infinity outside the computed window.
  double at(const State3& rel) const;
  /// Vehicle control maximizing the value's growth at `rel`.
  Control avoid_control(const State3& rel) const;
  /// Intruder control pushing the value down at `rel`.
  Control pursuit_control(const State3& rel) const;
};

struct AvoidGridSpec {
  std::size_t position_count = 61;
  std::size_t heading_count = 36;
  /// Extra room past the relative-speed bound, as a fraction of it.
  double margin = 0.15;
  int spatial_order = 5;
  double cfl = 0.5;
};

/// Intruder relative to the vehicle body frame: position R(-theta)(p_I - p),
/// heading theta_I - theta.
State3 relative_state(const State3& vehicle, const State3& intruder);

/// Backward reachable set of the collision disk under the relative game. Both
/// disturbance bounds are folded into the vehicle side. Throws Error when
/// every node of the window is unsafe.
AvoidSet compute_avoid_set(const DubinsParams& vehicle, const DubinsParams& intruder, double r_c, double horizon,
                           const AvoidGridSpec& spec = {});

struct IntruderEvent {
  double t = 0.0;
  int vehicle = 0;
  enum Kind { AvoidOn, AvoidOff, Replanned } kind = AvoidOn;
  /// Avoid-set value at the event (AvoidOn / AvoidOff).
  double value = 0.0;
};

const char* to_string(IntruderEvent::Kind k);
/// `t=<t> vehicle=<id> event=<kind>`
std::string format_event(const IntruderEvent& e);

struct IntruderConfig {
  SimConfig sim;
  DisturbanceModel model;
  /// Override switches on when the avoid value drops to this band.
  double band = 0.05;
};

struct AirborneState {
  int id = 0;
  double t = 0.0;
  State3 x;
};

struct IntruderRun {
  /// One per plan, in plan order. Affected vehicles stop at t_ea.
  std::vector<SimResult> runs;
  Trajectory intruder;
  std::vector<int> affected;
  std::vector<AirborneState> states_at_tea;
  std::vector<IntruderEvent> events;
  /// Closest approach to the intruder per plan while it was present
  /// (+infinity when the vehicle was never airborne alongside it).
  std::vector<double> min_intruder_distance;
  /// Steps where some vehicle was within r_c of the intruder.
  std::vector<SeparationViolation> intruder_violations;
};

/// Runs every plan with the intruder present on [t_sa, t_ea]. `avoid` holds
/// one set per vehicle parameter set; the first whose vehicle params match a
/// plan is used.
IntruderRun run_with_intruder(const std::vector<PlanResult>& plans, const IntruderSpec& intruder,
                              const std::vector<AvoidSet>& avoid, const IntruderConfig& config);

/// Re-plans affected vehicles as the lowest priorities, in their original
/// relative order, leaving from their t_ea states. Arrival is required by
/// max(sta, t + window). Unaffected plans are kept and renumbered 1..U.
PlanSet replan_after_intruder(const PlanningProblem& problem, const std::vector<PlanResult>& plans,
                              const std::vector<AirborneState>& affected, double window, const PlanLog& log = {});

/// A pre-event trajectory followed by its re-planned continuation.
SimResult splice_runs(const SimResult& before, const SimResult& after);

}  // namespace spp
