#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spp/planner.hpp"
#include "spp/trajectory.hpp"

namespace spp {

enum class DisturbanceKind { Zero, UniformRandom, Adversarial };

const char* to_string(DisturbanceKind k);
/// Accepts "zero", "random", "adversarial".
std::optional<DisturbanceKind> disturbance_from_string(const std::string& s);

struct DisturbanceModel {
  DisturbanceKind kind = DisturbanceKind::Zero;
  std::uint64_t seed = 0;
};

struct SimConfig {
  double dt = 0.005;
  /// Least-restrictive runs apply the optimal control once V(t, x) >= -lrc_band.
  double lrc_band = 0.05;
  /// Turn gain of the least-restrictive free control (head for the target).
  double free_turn_gain = 4.0;
  /// Required for robust-tracking plans.
  std::optional<TrackingErrorParams> rtt;
};

struct SimResult {
  int id = 0;
  Trajectory trajectory;
  bool arrived = false;
  double arrival_time = 0.0;
  /// Steps where the position had to be clamped back into the grid domain.
  std::size_t boundary_hits = 0;
  /// Largest position tracking error seen (robust tracking only).
  double max_tracking_error = 0.0;
};

/// Step-by-step closed-loop run of one planned vehicle. The intruder event
/// loop drives several of these side by side.
class VehicleSim {
 public:
  VehicleSim(const PlanResult& plan, const DisturbanceModel& model, const SimConfig& config);

  double time() const { return t_; }
  const State3& state() const { return x_; }
  const PlanResult& plan() const { return *plan_; }
  bool finished() const { return finished_; }

  /// Control the plan asks for at the current state. Basic plans replay the
  /// planned controls until an override has moved the vehicle off the path,
  /// then follow the value function.
  Control planned_control() const;
  /// Disturbance for the current step under the model.
  Disturbance next_disturbance();

  /// Applies `override_control` when given, else the planned control, for one
  /// step; records the step and checks arrival and the sta cut-off.
  void step(const std::optional<Control>& override_control = std::nullopt);
  /// As step(), but the step is shortened so the clock does not pass `until`.
  void step_until(double until, const std::optional<Control>& override_control = std::nullopt);
  /// Ends the run here; the current state becomes the final sample.
  void halt();

  /// Runs to completion without overrides.
  void run();

  const SimResult& result() const { return result_; }

 private:
  bool inside_target(const State3& x) const;
  State3 tracking_error(const State3& ref) const;
  Vec3 tracking_costate(const State3& e) const;
  void finish_if_done();
  void finish();

  const PlanResult* plan_;
  DisturbanceModel model_;
  SimConfig config_;
  std::mt19937_64 rng_;
  double t_ = 0.0;
  State3 x_;
  bool finished_ = false;
  bool deviated_ = false;
  SimResult result_;
};

SimResult simulate(const PlanResult& plan, const DisturbanceModel& model, const SimConfig& config);

/// Independent per-vehicle runs; the seed of each is mixed with the vehicle id.
std::vector<SimResult> simulate_all(const std::vector<PlanResult>& plans, const DisturbanceModel& model,
                                    const SimConfig& config);

struct SeparationViolation {
  double t = 0.0;
  int i = 0;
  int j = 0;
  double distance = 0.0;
};

/// Every sample time of one trajectory where another trajectory, interpolated
/// to that time, is within r_c (distance <= r_c counts). Only overlapping
/// spans are compared.
std::vector<SeparationViolation> check_separation(const std::vector<SimResult>& runs, double r_c);

struct Arrival {
  bool arrived = false;
  double time = 0.0;
};

/// First sample inside the target disk; arrived when that is no later than sta.
Arrival check_arrival(const Trajectory& traj, Vec2 center, double radius, double sta);

}  // namespace spp
