#include "spp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spp/geometry.hpp"

namespace spp {

const char* to_string(DisturbanceKind k) {
  switch (k) {
    case DisturbanceKind::Zero: return "zero";
    case DisturbanceKind::UniformRandom: return "random";
    case DisturbanceKind::Adversarial: return "adversarial";
  }
  return "?";
}

std::optional<DisturbanceKind> disturbance_from_string(const std::string& s) {
  for (DisturbanceKind k : {DisturbanceKind::Zero, DisturbanceKind::UniformRandom, DisturbanceKind::Adversarial}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

namespace {

constexpr double kEps = 1e-9;

Point as_point(const State3& x) { return {x.px, x.py, x.theta, 0.0}; }

Vec3 gradient_at(const Field& f, const State3& x) {
  const Point g = sample_gradient(f, as_point(x));
  return {g[0], g[1], g[2]};
}

}  // namespace

VehicleSim::VehicleSim(const PlanResult& plan, const DisturbanceModel& model, const SimConfig& config)
    : plan_(&plan), model_(model), config_(config) {
  if (!(config.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
  if (plan.value.samples.empty()) throw std::invalid_argument("simulate: plan has no value function");
  if (plan.method == Method::RobustTracking) {
    if (!config.rtt) throw std::invalid_argument("simulate: robust tracking needs tracking parameters");
    if (!plan.kernel || plan.trajectory.empty()) throw std::invalid_argument("simulate: plan lacks kernel or nominal path");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(model.seed), static_cast<std::uint32_t>(model.seed >> 32),
                    static_cast<std::uint32_t>(plan.id)};
  rng_.seed(seq);
  t_ = plan.ldt;
  x_ = plan.x0;
  result_.id = plan.id;
  result_.trajectory.dt = config.dt;
  if (inside_target(x_)) {
    result_.trajectory.push(t_, x_, {}, {});
    result_.arrived = true;
    result_.arrival_time = t_;
    finished_ = true;
  } else if (t_ >= plan.sta - kEps) {
    result_.trajectory.push(t_, x_, {}, {});
    result_.arrival_time = t_;
    finished_ = true;
  }
}

bool VehicleSim::inside_target(const State3& x) const {
  return std::hypot(x.px - plan_->target_center[0], x.py - plan_->target_center[1]) <= plan_->target_radius;
}

State3 VehicleSim::tracking_error(const State3& ref) const {
  const double c = std::cos(x_.theta);
  const double s = std::sin(x_.theta);
  const double dx = ref.px - x_.px;
  const double dy = ref.py - x_.py;
  return {c * dx + s * dy, -s * dx + c * dy, angle_diff(ref.theta, x_.theta)};
}

Vec3 VehicleSim::tracking_costate(const State3& e) const {
  const Field& k = *plan_->kernel;
  const Grid& g = k.grid();
  Point q{std::clamp(e.px, g.min(0), g.max(0)), std::clamp(e.py, g.min(1), g.max(1)), e.theta, 0.0};
  q[2] = g.periodic(2) ? wrap_angle(e.theta) : std::clamp(e.theta, g.min(2), g.max(2));
  const Point grad = sample_gradient(k, q);
  // The kernel field is the negated error value function.
  return {-grad[0], -grad[1], -grad[2]};
}

Control VehicleSim::planned_control() const {
  const PlanResult& p = *plan_;
  if (p.method == Method::Basic && !deviated_ && !p.trajectory.empty()) {
    // Replay the planned path's controls; they define the induced obstacle.
    const Trajectory& tr = p.trajectory;
    const auto k = static_cast<std::size_t>(std::clamp(std::floor((t_ - tr.start_time()) / tr.dt + kEps), 0.0,
                                                       static_cast<double>(tr.size() - 1)));
    return tr.controls[k];
  }
  if (p.method == Method::RobustTracking) {
    const State3 e = tracking_error(p.trajectory.state_at(t_));
    return tracking_law(tracking_costate(e), e, *config_.rtt);
  }
  std::size_t k = p.value.samples.index_at_or_before(t_);
  if (k == TimeField::npos) k = 0;
  const Field& v = p.value.samples.field(k);
  const Vec3 lam = gradient_at(v, x_);
  switch (p.method) {
    case Method::Basic: return optimal_control(lam, x_, HamiltonianMode::BasicReach, p.params);
    case Method::Centralized: return optimal_control(lam, x_, HamiltonianMode::ReachUnderDstb, p.params);
    case Method::LeastRestrictive: {
      if (sample(v, as_point(x_)) >= -config_.lrc_band) {
        return optimal_control(lam, x_, HamiltonianMode::ReachUnderDstb, p.params);
      }
      const double bearing = std::atan2(p.target_center[1] - x_.py, p.target_center[0] - x_.px);
      const double w = config_.free_turn_gain * angle_diff(bearing, x_.theta);
      return {p.params.v_max, std::clamp(w, -p.params.omega_max, p.params.omega_max)};
    }
    case Method::RobustTracking: break;
  }
  return {};
}

Disturbance VehicleSim::next_disturbance() {
  const DubinsParams& prm = plan_->params;
  switch (model_.kind) {
    case DisturbanceKind::Zero: return {};
    case DisturbanceKind::UniformRandom: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double r = prm.d_r * std::sqrt(u(rng_));
      const double a = kTwoPi * u(rng_);
      const double dth = prm.d_theta_max * (2.0 * u(rng_) - 1.0);
      return {r * std::cos(a), r * std::sin(a), dth};
    }
    case DisturbanceKind::Adversarial: {
      if (plan_->method == Method::RobustTracking) {
        const State3 e = tracking_error(plan_->trajectory.state_at(t_));
        const Disturbance df = error_disturbance(tracking_costate(e), *config_.rtt);
        // The error sees the negated disturbance rotated into the tracker frame.
        const double c = std::cos(x_.theta);
        const double s = std::sin(x_.theta);
        return {-(c * df.dx - s * df.dy), -(s * df.dx + c * df.dy), -df.dtheta};
      }
      std::size_t k = plan_->value.samples.index_at_or_before(t_);
      if (k == TimeField::npos) k = 0;
      return extremal_disturbance(gradient_at(plan_->value.samples.field(k), x_), prm, true);
    }
  }
  return {};
}

void VehicleSim::step(const std::optional<Control>& override_control) { step_until(plan_->sta, override_control); }

void VehicleSim::step_until(double until, const std::optional<Control>& override_control) {
  if (finished_) return;
  if (override_control) deviated_ = true;
  const Control u = override_control ? *override_control : planned_control();
  const Disturbance d = next_disturbance();
  if (plan_->method == Method::RobustTracking) {
    const State3 e = tracking_error(plan_->trajectory.state_at(t_));
    result_.max_tracking_error = std::max(result_.max_tracking_error, std::hypot(e.px, e.py));
  }
  result_.trajectory.push(t_, x_, u, d);
  const double limit = std::min(until, plan_->sta);
  const double h = std::min(config_.dt, limit - t_);
  State3 next = rk4_step(x_, u, d, h);
  const Grid& g = plan_->target.grid();
  const double cx = std::clamp(next.px, g.min(0), g.max(0));
  const double cy = std::clamp(next.py, g.min(1), g.max(1));
  if (cx != next.px || cy != next.py) ++result_.boundary_hits;
  next.px = cx;
  next.py = cy;
  x_ = next;
  t_ = h < config_.dt ? limit : t_ + config_.dt;
  finish_if_done();
}

void VehicleSim::finish_if_done() {
  if (!inside_target(x_) && t_ < plan_->sta - kEps) return;
  finish();
}

void VehicleSim::halt() {
  if (!finished_) finish();
}

void VehicleSim::finish() {
  const Control u = result_.trajectory.empty() ? Control{} : result_.trajectory.controls.back();
  const Disturbance d = result_.trajectory.empty() ? Disturbance{} : result_.trajectory.disturbances.back();
  if (plan_->method == Method::RobustTracking) {
    const State3 e = tracking_error(plan_->trajectory.state_at(t_));
    result_.max_tracking_error = std::max(result_.max_tracking_error, std::hypot(e.px, e.py));
  }
  result_.trajectory.push(t_, x_, u, d);
  result_.arrived = inside_target(x_) && t_ <= plan_->sta + kEps;
  result_.arrival_time = t_;
  finished_ = true;
}

void VehicleSim::run() {
  while (!finished_) step();
}

SimResult simulate(const PlanResult& plan, const DisturbanceModel& model, const SimConfig& config) {
  VehicleSim sim(plan, model, config);
  sim.run();
  return sim.result();
}

std::vector<SimResult> simulate_all(const std::vector<PlanResult>& plans, const DisturbanceModel& model,
                                    const SimConfig& config) {
  std::vector<SimResult> out;
  out.reserve(plans.size());
  for (const PlanResult& p : plans) out.push_back(simulate(p, model, config));
  return out;
}

std::vector<SeparationViolation> check_separation(const std::vector<SimResult>& runs, double r_c) {
  std::vector<SeparationViolation> out;
  auto scan = [&](const SimResult& a, const SimResult& b) {
    const Trajectory& ta = a.trajectory;
    const Trajectory& tb = b.trajectory;
    for (std::size_t k = 0; k < ta.size(); ++k) {
      const double t = ta.times[k];
      if (t < tb.start_time() - kEps || t > tb.end_time() + kEps) continue;
      const State3 q = tb.state_at(t);
      const double d = std::hypot(ta.states[k].px - q.px, ta.states[k].py - q.py);
      if (d <= r_c) out.push_back({t, a.id, b.id, d});
    }
  };
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      if (runs[i].trajectory.empty() || runs[j].trajectory.empty()) continue;
      scan(runs[i], runs[j]);
      scan(runs[j], runs[i]);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return out;
}

Arrival check_arrival(const Trajectory& traj, Vec2 center, double radius, double sta) {
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const State3& x = traj.states[k];
    if (std::hypot(x.px - center[0], x.py - center[1]) <= radius) {
      return {traj.times[k] <= sta + kEps, traj.times[k]};
    }
  }
  return {false, 0.0};
}

}  // namespace spp
