#pragma once

#include <array>
#include <optional>

#include "spp/grid.hpp"

namespace spp {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle into [0, 2*pi).
double wrap_angle(double a);
/// Signed difference a - b mapped into [-pi, pi).
double angle_diff(double a, double b);

/// Bounds of a (possibly disturbed) Dubins car.
struct DubinsParams {
  double v_min = 1.0;
  double v_max = 1.0;
  double omega_max = 1.0;
  double d_r = 0.0;
  double d_theta_max = 0.0;
  std::optional<double> speed_fixed;

  /// Throws std::invalid_argument when the bounds are inconsistent.
  void validate() const;

  static DubinsParams fixed_speed(double v, double omega_max);
};

struct State3 {
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;
};

struct Control {
  double v = 0.0;
  double omega = 0.0;
};

struct Disturbance {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

using Vec3 = std::array<double, 3>;

/// Which player optimizes what in the Hamiltonian.
///
/// BasicReach / ReducedReach: min over control, no disturbance.
/// ReachUnderDstb: min over control, max over disturbance.
/// FrsClosedLoop: control pinned to a supplied feedback, max over disturbance.
/// FrsOpenLoop: max over control and disturbance.
/// ErrorBound: tracking-error game, see error_hamiltonian.
enum class HamiltonianMode { BasicReach, ReachUnderDstb, FrsClosedLoop, FrsOpenLoop, ErrorBound, ReducedReach };

const char* to_string(HamiltonianMode mode);

/// Tracker/planner pair for robust trajectory tracking. The disturbance bounds
/// are the tracker's.
struct TrackingErrorParams {
  DubinsParams tracker;
  DubinsParams planner;
  double r_eb = 0.075;

  /// Throws std::invalid_argument unless the planner's control set is nested
  /// in the tracker's and r_eb > 0.
  void validate() const;
};

Vec3 flow(const State3& x, const Control& u, const Disturbance& d);

/// Closed-form optimum of costate . flow for the mode. FrsClosedLoop needs
/// `feedback`; ErrorBound is rejected (use error_hamiltonian).
double hamiltonian(const Vec3& costate, const State3& x, HamiltonianMode mode, const DubinsParams& params,
                   std::optional<Control> feedback = std::nullopt);

/// Optimizing control for BasicReach, ReachUnderDstb, ReducedReach (min) and
/// FrsOpenLoop (max). Zero coefficients pick the upper bound.
Control optimal_control(const Vec3& costate, const State3& x, HamiltonianMode mode, const DubinsParams& params);

/// Maximizing disturbance for ReachUnderDstb, FrsOpenLoop and FrsClosedLoop.
Disturbance optimal_disturbance(const Vec3& costate, const State3& x, HamiltonianMode mode,
                                const DubinsParams& params);

/// Disturbance extremizing costate . d within the bounds; `maximize` false
/// gives the negated (minimizing) choice.
Disturbance extremal_disturbance(const Vec3& costate, const DubinsParams& params, bool maximize);

/// Relative dynamics of the reference as seen from the tracker frame.
Vec3 error_flow(const State3& e, const Control& u, const Control& u_ref, const Disturbance& d_frame);

/// max over tracker control, min over planner control and disturbance.
double error_hamiltonian(const Vec3& costate, const State3& e, const TrackingErrorParams& params);

/// Maximizing tracker control of error_hamiltonian.
Control tracking_law(const Vec3& costate, const State3& e, const TrackingErrorParams& params);

/// Minimizing planner control of error_hamiltonian.
Control error_reference_control(const Vec3& costate, const State3& e, const TrackingErrorParams& params);

/// Minimizing disturbance of error_hamiltonian, in the tracker frame.
Disturbance error_disturbance(const Vec3& costate, const TrackingErrorParams& params);

/// Lax-Friedrichs coefficients: bounds on |dH/dp_k| over the grid.
std::array<double, 3> dissipation_bounds(const Grid& grid, HamiltonianMode mode, const DubinsParams& params);
std::array<double, 3> dissipation_bounds(const Grid& grid, const TrackingErrorParams& params);

}  // namespace spp
