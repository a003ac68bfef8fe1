#include "spp/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace spp {

void Trajectory::push(double t, const State3& x, const Control& u, const Disturbance& d) {
  times.push_back(t);
  states.push_back(x);
  controls.push_back(u);
  disturbances.push_back(d);
}

State3 Trajectory::state_at(double t) const {
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
  const double s = (t - times[k]) / (times[k + 1] - times[k]);
  const State3& a = states[k];
  const State3& b = states[k + 1];
  return {a.px + s * (b.px - a.px), a.py + s * (b.py - a.py), wrap_angle(a.theta + s * angle_diff(b.theta, a.theta))};
}

State3 rk4_step(const State3& x, const Control& u, const Disturbance& d, double dt) {
  auto at = [&](const Vec3& k, double h) { return State3{x.px + h * k[0], x.py + h * k[1], x.theta + h * k[2]}; };
  const Vec3 k1 = flow(x, u, d);
  const Vec3 k2 = flow(at(k1, dt / 2), u, d);
  const Vec3 k3 = flow(at(k2, dt / 2), u, d);
  const Vec3 k4 = flow(at(k3, dt), u, d);
  return {x.px + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          x.py + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
          wrap_angle(x.theta + dt / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]))};
}

}  // namespace spp
