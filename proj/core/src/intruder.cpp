#include "spp/intruder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spp/errors.hpp"
#include "spp/geometry.hpp"
#include "spp/hj_solver.hpp"

namespace spp {

const char* to_string(IntruderBehavior b) {
  switch (b) {
    case IntruderBehavior::Scripted: return "scripted";
    case IntruderBehavior::Pursuit: return "pursuit";
  }
  return "?";
}

std::optional<IntruderBehavior> intruder_behavior_from_string(const std::string& s) {
  for (IntruderBehavior b : {IntruderBehavior::Scripted, IntruderBehavior::Pursuit}) {
    if (s == to_string(b)) return b;
  }
  return std::nullopt;
}

void IntruderSpec::validate() const {
  params.validate();
  if (!(t_iat >= 0.0)) throw std::invalid_argument("intruder: t_iat must be non-negative");
  if (!(t_sa <= t_ea)) throw std::invalid_argument("intruder: t_ea must not precede t_sa");
  if (t_ea - t_sa > t_iat + 1e-9) throw std::invalid_argument("intruder: t_ea - t_sa exceeds t_iat");
  for (std::size_t k = 0; k < script.size(); ++k) {
    const ControlSegment& s = script[k];
    if (k > 0 && !(script[k - 1].t < s.t)) throw std::invalid_argument("intruder: script times must increase");
    if (s.v < params.v_min - 1e-12 || s.v > params.v_max + 1e-12 || std::abs(s.omega) > params.omega_max + 1e-12) {
      throw std::invalid_argument("intruder: script control outside the intruder's bounds");
    }
  }
}

namespace {

constexpr double kEps = 1e-9;

TrackingErrorParams game_params(const AvoidSet& a) {
  TrackingErrorParams p;
  p.tracker = a.vehicle;
  p.tracker.d_r += a.intruder.d_r;
  p.tracker.d_theta_max += a.intruder.d_theta_max;
  p.planner = a.intruder;
  p.planner.d_r = 0.0;
  p.planner.d_theta_max = 0.0;
  p.r_eb = a.r_c;
  return p;
}

bool inside_window(const Grid& g, const State3& rel) {
  return rel.px >= g.min(0) && rel.px <= g.max(0) && rel.py >= g.min(1) && rel.py <= g.max(1);
}

Point rel_point(const State3& rel) { return {rel.px, rel.py, wrap_angle(rel.theta), 0.0}; }

Vec3 rel_gradient(const Field& f, const State3& rel) {
  const Point g = sample_gradient(f, rel_point(rel));
  return {g[0], g[1], g[2]};
}

bool same_params(const DubinsParams& a, const DubinsParams& b) {
  return a.v_min == b.v_min && a.v_max == b.v_max && a.omega_max == b.omega_max && a.d_r == b.d_r &&
         a.d_theta_max == b.d_theta_max && a.speed_fixed == b.speed_fixed;
}

}  // namespace

double AvoidSet::at(const State3& rel) const {
  if (!inside_window(value.grid(), rel)) return std::numeric_limits<double>::infinity();
  return sample(value, rel_point(rel));
}

Control AvoidSet::avoid_control(const State3& rel) const {
  if (!inside_window(value.grid(), rel)) return {vehicle.v_max, 0.0};
  return tracking_law(rel_gradient(value, rel), rel, game_params(*this));
}

Control AvoidSet::pursuit_control(const State3& rel) const {
  if (!inside_window(value.grid(), rel)) return {intruder.v_max, 0.0};
  return error_reference_control(rel_gradient(value, rel), rel, game_params(*this));
}

State3 relative_state(const State3& vehicle, const State3& intruder) {
  const double c = std::cos(vehicle.theta);
  const double s = std::sin(vehicle.theta);
  const double dx = intruder.px - vehicle.px;
  const double dy = intruder.py - vehicle.py;
  return {c * dx + s * dy, -s * dx + c * dy, wrap_angle(intruder.theta - vehicle.theta)};
}

AvoidSet compute_avoid_set(const DubinsParams& vehicle, const DubinsParams& intruder, double r_c, double horizon,
                           const AvoidGridSpec& spec) {
  vehicle.validate();
  intruder.validate();
  if (!(r_c > 0.0)) throw std::invalid_argument("compute_avoid_set: r_c must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("compute_avoid_set: horizon must be non-negative");
  if (spec.position_count < 5 || spec.heading_count < 4) throw std::invalid_argument("compute_avoid_set: grid too small");

  AvoidSet out;
  out.r_c = r_c;
  out.horizon = horizon;
  out.vehicle = vehicle;
  out.intruder = intruder;

  const double reach = r_c + (vehicle.v_max + intruder.v_max + vehicle.d_r + intruder.d_r) * horizon;
  const double cells = static_cast<double>(spec.position_count - 1);
  // Two extra cells keep the clamped boundary away from the set.
  const double l = reach * (1.0 + spec.margin) * cells / (cells - 4.0);
  const Grid grid = make_grid({-l, -l, 0.0}, {l, l, kTwoPi}, {spec.position_count, spec.position_count, spec.heading_count},
                              {false, false, true});
  const Field target = sdf_disk_cylinder(grid, {0.0, 0.0}, r_c);
  if (horizon == 0.0) {
    out.value = target;
    return out;
  }

  ErrorHamiltonian h(game_params(out));
  SolveRequest req;
  req.target = target;
  req.hamiltonian = &h;
  req.t_start = -horizon;
  req.t_end = 0.0;
  req.save_dt = horizon;
  req.cfl = spec.cfl;
  req.spatial_order = spec.spatial_order;
  ValueFunction v = solve(req);
  out.value = v.samples.front();
  if (out.value.max_value() <= 0.0) throw Error("avoid set covers the whole relative window");
  return out;
}

const char* to_string(IntruderEvent::Kind k) {
  switch (k) {
    case IntruderEvent::AvoidOn: return "avoid_on";
    case IntruderEvent::AvoidOff: return "avoid_off";
    case IntruderEvent::Replanned: return "replanned";
  }
  return "?";
}

std::string format_event(const IntruderEvent& e) {
  std::ostringstream os;
  os << "t=" << e.t << " vehicle=" << e.vehicle << " event=" << to_string(e.kind);
  return os.str();
}

namespace {

class IntruderSim {
 public:
  IntruderSim(const IntruderSpec& spec, double dt) : spec_(spec), dt_(dt), t_(spec.t_sa), x_(spec.x0) {
    traj_.dt = dt;
  }

  double time() const { return t_; }
  const State3& state() const { return x_; }
  bool finished() const { return t_ >= spec_.t_ea - kEps; }
  const Trajectory& trajectory() const { return traj_; }

  Control scripted() const {
    Control u{spec_.params.v_max, 0.0};
    for (const ControlSegment& s : spec_.script) {
      if (s.t > t_ + kEps) break;
      u = {s.v, s.omega};
    }
    return u;
  }

  void step(const Control& u) {
    traj_.push(t_, x_, u, {});
    const double h = std::min(dt_, spec_.t_ea - t_);
    x_ = rk4_step(x_, u, {}, h);
    t_ += h;
    if (finished()) {
      t_ = spec_.t_ea;
      traj_.push(t_, x_, u, {});
    }
  }

 private:
  const IntruderSpec& spec_;
  double dt_;
  double t_;
  State3 x_;
  Trajectory traj_;
};

const AvoidSet& avoid_for(const std::vector<AvoidSet>& sets, const DubinsParams& p) {
  for (const AvoidSet& a : sets) {
    if (same_params(a.vehicle, p)) return a;
  }
  throw std::invalid_argument("run_with_intruder: no avoid set for a vehicle's parameters");
}

}  // namespace

IntruderRun run_with_intruder(const std::vector<PlanResult>& plans, const IntruderSpec& intruder,
                              const std::vector<AvoidSet>& avoid, const IntruderConfig& config) {
  intruder.validate();
  if (!(config.band > 0.0)) throw std::invalid_argument("run_with_intruder: band must be positive");
  const double r_c = avoid.empty() ? 0.0 : avoid.front().r_c;

  const std::size_t n = plans.size();
  std::vector<VehicleSim> sims;
  std::vector<const AvoidSet*> sets;
  sims.reserve(n);
  for (const PlanResult& p : plans) {
    sims.emplace_back(p, config.model, config.sim);
    sets.push_back(&avoid_for(avoid, p.params));
  }
  std::vector<bool> on(n, false), affected(n, false), stopped(n, false);
  IntruderRun out;
  out.min_intruder_distance.assign(n, std::numeric_limits<double>::infinity());
  IntruderSim isim(intruder, config.sim.dt);

  auto present = [&](std::size_t i) {
    return !sims[i].finished() && !stopped[i] && sims[i].time() >= plans[i].ldt - kEps;
  };

  auto intruder_control = [&]() -> Control {
    if (intruder.behavior == IntruderBehavior::Scripted) return isim.scripted();
    double best = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> target;
    for (std::size_t i = 0; i < n; ++i) {
      if (!present(i)) continue;
      const State3& x = sims[i].state();
      const double d = std::hypot(x.px - isim.state().px, x.py - isim.state().py);
      if (d < best) best = d, target = i;
    }
    if (!target) return {intruder.params.v_max, 0.0};
    const State3 rel = relative_state(sims[*target].state(), isim.state());
    return sets[*target]->pursuit_control(rel);
  };

  while (true) {
    // Step whichever clock is furthest behind; the intruder goes first on ties
    // so its path always covers the vehicle step being taken.
    std::optional<std::size_t> next;
    for (std::size_t i = 0; i < n; ++i) {
      if (sims[i].finished() || stopped[i]) continue;
      if (!next || sims[i].time() < sims[*next].time()) next = i;
    }
    const bool intruder_due = !isim.finished() && (!next || isim.time() <= sims[*next].time() + kEps);
    if (intruder_due) {
      isim.step(intruder_control());
      continue;
    }
    if (!next) break;

    const std::size_t i = *next;
    VehicleSim& sim = sims[i];
    const double t = sim.time();
    const int id = plans[i].id;
    if (t >= intruder.t_ea - kEps) {
      if (on[i]) {
        on[i] = false;
        out.events.push_back({intruder.t_ea, id, IntruderEvent::AvoidOff, 0.0});
      }
      if (affected[i]) {
        stopped[i] = true;
        sim.halt();
        out.states_at_tea.push_back({id, t, sim.state()});
        continue;
      }
      sim.step();
      continue;
    }
    if (t < intruder.t_sa - kEps || intruder.t_ea - intruder.t_sa <= 0.0) {
      sim.step();
      continue;
    }

    const State3 xi = isim.trajectory().empty() ? isim.state() : isim.trajectory().state_at(t);
    const State3& x = sim.state();
    const double dist = std::hypot(x.px - xi.px, x.py - xi.py);
    out.min_intruder_distance[i] = std::min(out.min_intruder_distance[i], dist);
    if (dist <= r_c) out.intruder_violations.push_back({t, id, 0, dist});

    const State3 rel = relative_state(x, xi);
    const double a = sets[i]->at(rel);
    const bool in_band = a <= config.band;
    if (in_band && !on[i]) {
      on[i] = true;
      affected[i] = true;
      out.events.push_back({t, id, IntruderEvent::AvoidOn, a});
    } else if (!in_band && on[i]) {
      on[i] = false;
      out.events.push_back({t, id, IntruderEvent::AvoidOff, a});
    }
    // Affected vehicles stop at t_ea, so their last step lands on it.
    const std::optional<Control> u = on[i] ? std::optional<Control>(sets[i]->avoid_control(rel)) : std::nullopt;
    if (affected[i]) {
      sim.step_until(intruder.t_ea, u);
    } else {
      sim.step(u);
    }
  }

  out.intruder = isim.trajectory();
  for (std::size_t i = 0; i < n; ++i) {
    out.runs.push_back(sims[i].result());
    if (affected[i]) out.affected.push_back(plans[i].id);
  }
  std::stable_sort(out.events.begin(), out.events.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return out;
}

PlanSet replan_after_intruder(const PlanningProblem& problem, const std::vector<PlanResult>& plans,
                              const std::vector<AirborneState>& affected, double window, const PlanLog& log) {
  if (!(window > 0.0)) throw std::invalid_argument("replan_after_intruder: window must be positive");
  std::vector<const PlanResult*> ordered;
  for (const PlanResult& p : plans) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) { return a->priority < b->priority; });

  auto state_of = [&](int id) -> const AirborneState* {
    for (const AirborneState& s : affected) {
      if (s.id == id) return &s;
    }
    return nullptr;
  };
  for (const AirborneState& s : affected) {
    if (std::none_of(plans.begin(), plans.end(), [&](const PlanResult& p) { return p.id == s.id; })) {
      throw std::invalid_argument("replan_after_intruder: unknown vehicle " + std::to_string(s.id));
    }
  }

  PlanSet out;
  std::vector<VehicleSpec> specs;
  int priority = 0;
  for (const PlanResult* p : ordered) {
    if (state_of(p->id)) continue;
    out.plans.push_back(*p);
    out.plans.back().priority = ++priority;
  }
  std::vector<const PlanResult*> higher;
  for (const PlanResult& p : out.plans) higher.push_back(&p);
  for (const PlanResult* p : ordered) {
    const AirborneState* s = state_of(p->id);
    if (!s) continue;
    VehicleSpec v;
    v.id = p->id;
    v.priority = ++priority;
    v.params = p->params;
    v.x0 = s->x;
    v.target_center = p->target_center;
    v.target_radius = p->target_radius;
    v.sta = std::max(p->sta, s->t + window);
    v.depart_at = s->t;
    specs.push_back(v);
  }
  if (specs.empty()) return out;

  PlanSet tail = plan_all(problem, specs, higher, log);
  for (PlanResult& r : tail.plans) out.plans.push_back(std::move(r));
  for (std::string& a : tail.audit) out.audit.push_back(std::move(a));
  out.solve_count = tail.solve_count;
  return out;
}

SimResult splice_runs(const SimResult& before, const SimResult& after) {
  SimResult out = after;
  Trajectory& t = out.trajectory;
  const Trajectory& b = before.trajectory;
  Trajectory merged;
  merged.dt = b.empty() ? t.dt : b.dt;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!t.empty() && b.times[k] >= t.start_time() - kEps) break;
    merged.push(b.times[k], b.states[k], b.controls[k], b.disturbances[k]);
  }
  for (std::size_t k = 0; k < t.size(); ++k) merged.push(t.times[k], t.states[k], t.controls[k], t.disturbances[k]);
  t = std::move(merged);
  out.boundary_hits += before.boundary_hits;
  out.max_tracking_error = std::max(out.max_tracking_error, before.max_tracking_error);
  return out;
}

}  // namespace spp
