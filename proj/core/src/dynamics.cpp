#include "spp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spp {

namespace {

bool minimizes_control(HamiltonianMode mode) {
  return mode == HamiltonianMode::BasicReach || mode == HamiltonianMode::ReachUnderDstb ||
         mode == HamiltonianMode::ReducedReach;
}

bool has_disturbance(HamiltonianMode mode) {
  return mode == HamiltonianMode::ReachUnderDstb || mode == HamiltonianMode::FrsOpenLoop ||
         mode == HamiltonianMode::FrsClosedLoop;
}

// Upper bound on ties.
double argmin_linear(double coef, double lo, double hi) { return coef > 0.0 ? lo : hi; }
double argmax_linear(double coef, double lo, double hi) { return coef < 0.0 ? lo : hi; }

}  // namespace

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double angle_diff(double a, double b) {
  double d = std::fmod(a - b + kPi, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d - kPi;
}

void DubinsParams::validate() const {
  if (!(v_min >= 0.0 && v_min <= v_max)) throw std::invalid_argument("dynamics: need 0 <= v_min <= v_max");
  if (!(omega_max > 0.0)) throw std::invalid_argument("dynamics: omega_max must be positive");
  if (!(d_r >= 0.0) || !(d_theta_max >= 0.0)) throw std::invalid_argument("dynamics: negative disturbance bound");
  if (speed_fixed && (v_min != *speed_fixed || v_max != *speed_fixed)) {
    throw std::invalid_argument("dynamics: speed_fixed must equal v_min and v_max");
  }
}

DubinsParams DubinsParams::fixed_speed(double v, double omega_max) {
  DubinsParams p;
  p.v_min = p.v_max = v;
  p.omega_max = omega_max;
  p.speed_fixed = v;
  return p;
}

const char* to_string(HamiltonianMode mode) {
  switch (mode) {
    case HamiltonianMode::BasicReach: return "BasicReach";
    case HamiltonianMode::ReachUnderDstb: return "ReachUnderDstb";
    case HamiltonianMode::FrsClosedLoop: return "FrsClosedLoop";
    case HamiltonianMode::FrsOpenLoop: return "FrsOpenLoop";
    case HamiltonianMode::ErrorBound: return "ErrorBound";
    case HamiltonianMode::ReducedReach: return "ReducedReach";
  }
  return "?";
}

void TrackingErrorParams::validate() const {
  tracker.validate();
  planner.validate();
  if (!(r_eb > 0.0)) throw std::invalid_argument("tracking: r_eb must be positive");
  if (planner.v_min < tracker.v_min || planner.v_max > tracker.v_max || planner.omega_max > tracker.omega_max) {
    throw std::invalid_argument("tracking: planner control set must lie inside the tracker's");
  }
}

Vec3 flow(const State3& x, const Control& u, const Disturbance& d) {
  return {u.v * std::cos(x.theta) + d.dx, u.v * std::sin(x.theta) + d.dy, u.omega + d.dtheta};
}

Control optimal_control(const Vec3& l, const State3& x, HamiltonianMode mode, const DubinsParams& p) {
  const double c = l[0] * std::cos(x.theta) + l[1] * std::sin(x.theta);
  if (minimizes_control(mode)) {
    return {argmin_linear(c, p.v_min, p.v_max), argmin_linear(l[2], -p.omega_max, p.omega_max)};
  }
  if (mode == HamiltonianMode::FrsOpenLoop) {
    return {argmax_linear(c, p.v_min, p.v_max), argmax_linear(l[2], -p.omega_max, p.omega_max)};
  }
  throw std::invalid_argument(std::string("optimal_control: mode ") + to_string(mode) + " has no control optimum");
}

Disturbance extremal_disturbance(const Vec3& l, const DubinsParams& p, bool maximize) {
  const double s = maximize ? 1.0 : -1.0;
  Disturbance d;
  const double n = std::hypot(l[0], l[1]);
  if (n > 0.0) {
    d.dx = s * p.d_r * l[0] / n;
    d.dy = s * p.d_r * l[1] / n;
  }
  if (l[2] != 0.0) d.dtheta = s * p.d_theta_max * (l[2] > 0.0 ? 1.0 : -1.0);
  return d;
}

Disturbance optimal_disturbance(const Vec3& l, const State3&, HamiltonianMode mode, const DubinsParams& p) {
  if (!has_disturbance(mode)) {
    throw std::invalid_argument(std::string("optimal_disturbance: mode ") + to_string(mode) +
                                " has no disturbance player");
  }
  return extremal_disturbance(l, p, true);
}

double hamiltonian(const Vec3& l, const State3& x, HamiltonianMode mode, const DubinsParams& p,
                   std::optional<Control> feedback) {
  if (mode == HamiltonianMode::ErrorBound) {
    throw std::invalid_argument("hamiltonian: ErrorBound needs tracking parameters");
  }
  Control u;
  if (mode == HamiltonianMode::FrsClosedLoop) {
    if (!feedback) throw std::invalid_argument("hamiltonian: FrsClosedLoop needs a feedback control");
    u = *feedback;
  } else {
    u = optimal_control(l, x, mode, p);
  }
  const Vec3 f = flow(x, u, {});
  double h = l[0] * f[0] + l[1] * f[1] + l[2] * f[2];
  if (has_disturbance(mode)) h += p.d_r * std::hypot(l[0], l[1]) + p.d_theta_max * std::abs(l[2]);
  return h;
}

Vec3 error_flow(const State3& e, const Control& u, const Control& r, const Disturbance& d) {
  return {r.v * std::cos(e.theta) - u.v + u.omega * e.py + d.dx,
          r.v * std::sin(e.theta) - u.omega * e.px + d.dy, r.omega - u.omega + d.dtheta};
}

Control tracking_law(const Vec3& l, const State3& e, const TrackingErrorParams& p) {
  const double k = l[0] * e.py - l[1] * e.px - l[2];
  return {argmax_linear(-l[0], p.tracker.v_min, p.tracker.v_max),
          argmax_linear(k, -p.tracker.omega_max, p.tracker.omega_max)};
}

Control error_reference_control(const Vec3& l, const State3& e, const TrackingErrorParams& p) {
  const double cr = l[0] * std::cos(e.theta) + l[1] * std::sin(e.theta);
  return {argmin_linear(cr, p.planner.v_min, p.planner.v_max),
          argmin_linear(l[2], -p.planner.omega_max, p.planner.omega_max)};
}

Disturbance error_disturbance(const Vec3& l, const TrackingErrorParams& p) {
  return extremal_disturbance(l, p.tracker, false);
}

double error_hamiltonian(const Vec3& l, const State3& e, const TrackingErrorParams& p) {
  const Control u = tracking_law(l, e, p);
  const Control r = error_reference_control(l, e, p);
  const Vec3 f = error_flow(e, u, r, {});
  return l[0] * f[0] + l[1] * f[1] + l[2] * f[2] - p.tracker.d_r * std::hypot(l[0], l[1]) -
         p.tracker.d_theta_max * std::abs(l[2]);
}

std::array<double, 3> dissipation_bounds(const Grid&, HamiltonianMode mode, const DubinsParams& p) {
  const double dr = has_disturbance(mode) ? p.d_r : 0.0;
  const double dt = has_disturbance(mode) ? p.d_theta_max : 0.0;
  return {p.v_max + dr, p.v_max + dr, p.omega_max + dt};
}

std::array<double, 3> dissipation_bounds(const Grid& g, const TrackingErrorParams& p) {
  const double ex = std::max(std::abs(g.min(0)), std::abs(g.max(0)));
  const double ey = std::max(std::abs(g.min(1)), std::abs(g.max(1)));
  const double w = p.tracker.omega_max;
  return {p.planner.v_max + p.tracker.v_max + w * ey + p.tracker.d_r,
          p.planner.v_max + w * ex + p.tracker.d_r,
          p.tracker.omega_max + p.planner.omega_max + p.tracker.d_theta_max};
}

}  // namespace spp
