#pragma once

#include <cstddef>
#include <vector>

#include "spp/dynamics.hpp"

namespace spp {

/// Closed-loop run sampled every dt; only the final step may be shorter. controls[k] and disturbances[k] are
/// held over [times[k], times[k] + dt); the final entries repeat the last
/// applied values.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<State3> states;
  std::vector<Control> controls;
  std::vector<Disturbance> disturbances;

  bool empty() const { return times.empty(); }
  std::size_t size() const { return times.size(); }
  double start_time() const { return times.front(); }
  double end_time() const { return times.back(); }

  void push(double t, const State3& x, const Control& u, const Disturbance& d);

  /// Linear interpolation between samples, heading along the short arc.
  /// Clamps to the end samples outside the covered span.
  State3 state_at(double t) const;
};

/// One fourth-order Runge-Kutta step of the Dubins flow with u and d held.
State3 rk4_step(const State3& x, const Control& u, const Disturbance& d, double dt);

}  // namespace spp
