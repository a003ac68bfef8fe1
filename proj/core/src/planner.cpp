#include "spp/planner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spp/errors.hpp"

namespace spp {

const char* to_string(Method m) {
  switch (m) {
    case Method::Basic: return "basic";
    case Method::Centralized: return "centralized";
    case Method::LeastRestrictive: return "least_restrictive";
    case Method::RobustTracking: return "robust_tracking";
  }
  return "?";
}

std::optional<Method> method_from_string(const std::string& s) {
  for (Method m : {Method::Basic, Method::Centralized, Method::LeastRestrictive, Method::RobustTracking}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

void validate_vehicles(const std::vector<VehicleSpec>& vehicles) {
  std::vector<int> prio;
  for (const VehicleSpec& v : vehicles) {
    v.params.validate();
    if (!(v.target_radius > 0.0)) throw std::invalid_argument("vehicle " + std::to_string(v.id) + ": target_radius must be positive");
    prio.push_back(v.priority);
  }
  std::sort(prio.begin(), prio.end());
  for (std::size_t i = 0; i < prio.size(); ++i) {
    if (prio[i] != static_cast<int>(i) + 1) throw std::invalid_argument("priorities must be 1..n without gaps or repeats");
  }
}

void MethodConfig::validate() const {
  if (method == Method::RobustTracking && !rtt) throw std::invalid_argument("robust tracking needs tracking parameters");
  if (rtt) rtt->validate();
  if (!(collision_radius > 0.0)) throw std::invalid_argument("collision_radius must be positive");
  if (!(lrc_band >= 0.0)) throw std::invalid_argument("lrc_band must be non-negative");
}

void PlannerSettings::validate() const {
  if (!(save_dt > 0.0)) throw std::invalid_argument("save_dt must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (spatial_order != 1 && spatial_order != 2 && spatial_order != 5) throw std::invalid_argument("spatial_order must be 1, 2 or 5");
  if (!(horizon > 0.0) || horizon_extension < 0.0) throw std::invalid_argument("horizon must be positive");
  if (!(obstacle_margin_cells >= 0.0)) throw std::invalid_argument("obstacle_margin_cells must be non-negative");
  kernel.grid.validate();
}

std::vector<double> lattice_times(double t_lo, double t_hi, double save_dt) {
  const double eps = 1e-9;
  const auto k0 = static_cast<long long>(std::floor(t_lo / save_dt + eps));
  const auto k1 = static_cast<long long>(std::floor(t_hi / save_dt + eps));
  std::vector<double> out;
  for (long long k = k0; k <= k1; ++k) out.push_back(static_cast<double>(k) * save_dt);
  return out;
}

namespace {

const Field* sample_exactly_at(const TimeField& tf, double t) {
  const std::size_t k = tf.index_at_or_before(t);
  if (k == TimeField::npos || std::abs(tf.time(k) - t) > 1e-6) return nullptr;
  return &tf.field(k);
}

double segment_distance(double x, double y, const Vec2& a, const Vec2& b) {
  const double ex = b[0] - a[0];
  const double ey = b[1] - a[1];
  const double len2 = ex * ex + ey * ey;
  double s = len2 > 0.0 ? ((x - a[0]) * ex + (y - a[1]) * ey) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(x - a[0] - s * ex, y - a[1] - s * ey);
}

Field capsule_field(const Grid& pg, const std::vector<Vec2>& path, double radius) {
  std::vector<double> v(pg.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point p = pg.node(i);
    double d = std::hypot(p[0] - path[0][0], p[1] - path[0][1]);
    for (std::size_t s = 1; s < path.size(); ++s) d = std::min(d, segment_distance(p[0], p[1], path[s - 1], path[s]));
    v[i] = d - radius;
  }
  return Field(pg, std::move(v), true);
}

double circumscribed_radius(const Field& kernel) {
  const double rho = kernel_position_radius(kernel);
  if (rho < 0.0) throw EmptyKernelError("tracking kernel is empty");
  return rho;
}

State3 clamp_to_domain(const Grid& g, State3 x) {
  x.px = std::clamp(x.px, g.min(0), g.max(0));
  x.py = std::clamp(x.py, g.min(1), g.max(1));
  return x;
}

Point as_point(const State3& x) { return {x.px, x.py, x.theta, 0.0}; }

}  // namespace

TimeField total_obstacles(const Field& static_obstacles, const std::vector<const TimeField*>& induced,
                          const std::vector<double>& times) {
  for (const TimeField* tf : induced) {
    if (!tf->empty() && !(tf->front().grid() == static_obstacles.grid())) {
      throw std::invalid_argument("total_obstacles: grid mismatch");
    }
  }
  TimeField out;
  for (double t : times) {
    Field f = static_obstacles;
    for (const TimeField* tf : induced) {
      if (const Field* g = sample_exactly_at(*tf, t)) f = set_union(f, *g);
    }
    out.push_back(t, std::move(f));
  }
  return out;
}

std::optional<double> latest_departure_time(const ValueFunction& value, const State3& x0) {
  const TimeField& s = value.samples;
  const Point x = as_point(x0);
  for (std::size_t k = s.size(); k-- > 0;) {
    const double vk = sample(s.field(k), x);
    if (vk > 0.0) continue;
    if (k + 1 == s.size()) return s.time(k);
    const double vn = sample(s.field(k + 1), x);
    return s.time(k) + (s.time(k + 1) - s.time(k)) * (-vk) / (vn - vk);
  }
  return std::nullopt;
}

TimeField induced_obstacle_basic(const Trajectory& traj, double radius, const Grid& position_grid, double save_dt) {
  if (traj.empty()) throw std::invalid_argument("induced_obstacle_basic: empty trajectory");
  TimeField out;
  for (double tk : lattice_times(traj.start_time(), traj.end_time(), save_dt)) {
    const double lo = std::max(tk, traj.start_time());
    const double hi = std::min(tk + save_dt, traj.end_time());
    std::vector<Vec2> path;
    auto add = [&](const State3& x) { path.push_back({x.px, x.py}); };
    add(traj.state_at(lo));
    for (std::size_t i = 0; i < traj.size(); ++i) {
      if (traj.times[i] > lo && traj.times[i] < hi) add(traj.states[i]);
    }
    add(traj.state_at(hi));
    out.push_back(tk, capsule_field(position_grid, path, radius));
  }
  return out;
}

TimeField sweep_projections(const std::vector<std::pair<double, Field>>& projections, double radius,
                            double save_dt) {
  if (projections.empty()) throw std::invalid_argument("sweep_projections: nothing to sweep");
  const double eps = 1e-9;
  TimeField out;
  for (double tk : lattice_times(projections.front().first, projections.back().first, save_dt)) {
    std::optional<Field> acc;
    auto unite = [&](const Field& f) { acc = acc ? set_union(*acc, f) : f; };
    for (std::size_t i = 0; i < projections.size(); ++i) {
      const double t = projections[i].first;
      const bool in_window = t >= tk - eps && t <= tk + save_dt + eps;
      const bool holds_at_tk = t < tk - eps && (i + 1 == projections.size() || projections[i + 1].first > tk + eps);
      if (in_window || holds_at_tk) unite(projections[i].second);
    }
    out.push_back(tk, dilate_positions(*acc, radius));
  }
  return out;
}

TimeField induced_obstacle_cc(const ValueFunction& frs, double r_c, double save_dt) {
  std::vector<std::pair<double, Field>> proj;
  for (std::size_t k = 0; k < frs.samples.size(); ++k) {
    proj.emplace_back(frs.samples.time(k), project_min_nonposition(frs.samples.field(k)));
  }
  return sweep_projections(proj, r_c, save_dt);
}

TimeField induced_obstacle_lrc(const ValueFunction& frs_open, const ValueFunction& brs, double r_c, double save_dt) {
  std::vector<std::pair<double, Field>> proj;
  for (std::size_t k = 0; k < frs_open.samples.size(); ++k) {
    const double t = frs_open.samples.time(k);
    const std::size_t j = brs.samples.index_at_or_before(t);
    if (j == TimeField::npos) continue;
    proj.emplace_back(t, project_min_nonposition(set_intersect(frs_open.samples.field(k), brs.samples.field(j))));
  }
  if (proj.empty()) throw std::invalid_argument("induced_obstacle_lrc: FRS and BRS spans do not overlap");
  return sweep_projections(proj, r_c, save_dt);
}

TimeField induced_obstacle_rtt(const Trajectory& nominal, const Field& kernel, double r_c,
                               const Grid& position_grid, double save_dt) {
  return induced_obstacle_basic(nominal, circumscribed_radius(kernel) + r_c, position_grid, save_dt);
}

Field shrink_target(const Field& target, const Field& kernel) {
  const double rho = circumscribed_radius(kernel);
  if (rho == 0.0) return target;
  Field out;
  if (target.exact_sdf()) {
    std::vector<double> v(target.values().begin(), target.values().end());
    for (double& x : v) x += rho;
    out = Field(target.grid(), std::move(v), true);
  } else {
    out = set_complement(dilate_positions(set_complement(target), rho));
  }
  if (!has_interior_node(out)) throw EmptyTargetError("target is empty after erosion by the tracking kernel");
  return out;
}

TimeField augment_obstacles(const TimeField& obstacles, const Field& kernel) {
  const double rho = circumscribed_radius(kernel);
  TimeField out;
  for (std::size_t k = 0; k < obstacles.size(); ++k) out.push_back(obstacles.time(k), dilate_positions(obstacles.field(k), rho));
  return out;
}

Field initial_state_set(const Grid& grid, const State3& x0) {
  const double r = std::max(grid.spacing(0), grid.spacing(1));
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point p = grid.node(i);
    double l = std::hypot(p[0] - x0.px, p[1] - x0.py) - r;
    if (grid.dim() > 2) {
      const double h = grid.spacing(2);
      l = std::max(l, r * (std::abs(angle_diff(p[2], x0.theta)) - h) / h);
    }
    v[i] = l;
  }
  return Field(grid, std::move(v));
}

Trajectory extract_trajectory(const ValueFunction& value, const Field& target, const State3& x0, double t0,
                              double t_end, HamiltonianMode mode, const DubinsParams& params, double dt) {
  const Grid& g = target.grid();
  Trajectory traj;
  traj.dt = dt;
  State3 x = clamp_to_domain(g, x0);
  double t = t0;
  const double eps = 1e-9;
  for (;;) {
    const bool done = sample(target, as_point(x)) <= 0.0 || t >= t_end - eps;
    std::size_t k = value.samples.index_at_or_before(t);
    if (k == TimeField::npos) k = 0;
    const Point grad = sample_gradient(value.samples.field(k), as_point(x));
    const Control u = optimal_control({grad[0], grad[1], grad[2]}, x, mode, params);
    traj.push(t, x, u, {});
    if (done) break;
    // The last step is shortened to land on t_end.
    const double h = std::min(dt, t_end - t);
    x = clamp_to_domain(g, rk4_step(x, u, {}, h));
    t = h < dt ? t_end : t + dt;
  }
  return traj;
}

namespace {

struct Planner {
  const PlanningProblem& problem;
  const PlanLog& log;
  Grid pgrid;
  Field static_field;
  std::optional<KernelResult> kernel;
  std::size_t solves = 0;

  void note(const std::string& s) const {
    if (log) log(s);
  }

  /// Planned path from r.ldt. When the grid value function is slightly
  /// optimistic the path can end just short of the target; the departure
  /// then moves back one lattice sample at a time.
  Trajectory realizable_path(PlanResult& r, const VehicleSpec& v, HamiltonianMode mode, const DubinsParams& params) {
    const PlannerSettings& st = problem.settings;
    const double eps = 1e-9;
    for (std::size_t attempt = 0;; ++attempt) {
      Trajectory tr = extract_trajectory(r.value, r.target, v.x0, r.ldt, v.sta, mode, params, st.save_dt);
      if (sample(r.target, as_point(tr.states.back())) <= 0.0) return tr;
      const double earlier = std::floor((r.ldt - eps) / st.save_dt) * st.save_dt;
      if (v.depart_at || attempt == st.max_departure_backoff || earlier < r.value.samples.time(0) - eps) {
        throw InfeasibleError(v.id, "planned path does not reach the target by the arrival time");
      }
      note("vehicle " + std::to_string(v.id) + ": path from t=" + std::to_string(r.ldt) + " misses the target");
      r.ldt = earlier;
    }
  }

  const KernelResult& ensure_kernel(int id) {
    if (!kernel) {
      try {
        kernel = compute_tracking_kernel(*problem.config.rtt, problem.settings.kernel);
      } catch (const EmptyKernelError&) {
        ++solves;
        throw InfeasibleError(id, "tracking error kernel is empty");
      }
      ++solves;
      std::ostringstream os;
      os << "kernel converged=" << kernel->converged << " change=" << kernel->final_change
         << " radius=" << kernel_position_radius(kernel->kernel);
      note(os.str());
    }
    return *kernel;
  }

  PlanResult plan_one(const VehicleSpec& v, const std::vector<const TimeField*>& induced) {
    const PlannerSettings& st = problem.settings;
    const MethodConfig& cfg = problem.config;
    const Grid& grid = problem.grid;
    const std::size_t solves_before = solves;

    PlanResult r;
    r.id = v.id;
    r.priority = v.priority;
    r.method = cfg.method;
    r.params = v.params;
    r.x0 = v.x0;
    r.target_center = v.target_center;
    r.target_radius = v.target_radius;
    r.sta = v.sta;
    r.target = sdf_disk_cylinder(grid, v.target_center, v.target_radius);

    HamiltonianMode mode = HamiltonianMode::BasicReach;
    DubinsParams params = v.params;
    if (cfg.method == Method::Centralized || cfg.method == Method::LeastRestrictive) mode = HamiltonianMode::ReachUnderDstb;
    if (cfg.method == Method::RobustTracking) {
      mode = HamiltonianMode::ReducedReach;
      params = cfg.rtt->planner;
      const KernelResult& k = ensure_kernel(v.id);
      r.kernel = k.kernel;
      r.kernel_radius = kernel_position_radius(k.kernel);
      try {
        r.target = shrink_target(r.target, k.kernel);
      } catch (const EmptyTargetError& e) {
        throw InfeasibleError(v.id, e.what());
      }
    }

    std::vector<double> starts;
    if (v.depart_at) {
      if (!(*v.depart_at < v.sta)) throw InfeasibleError(v.id, "departure time is not before the arrival time");
      starts.push_back(*v.depart_at);
    } else {
      starts.push_back(v.sta - st.horizon);
      if (st.horizon_extension > 0.0) starts.push_back(v.sta - st.horizon - st.horizon_extension);
    }

    DubinsHamiltonian ham(mode, params);
    std::optional<double> ldt;
    for (double t_start : starts) {
      TimeField obstacles = total_obstacles(static_field, induced, lattice_times(t_start, v.sta, st.save_dt));
      if (r.kernel) obstacles = augment_obstacles(obstacles, *r.kernel);
      SolveRequest req;
      req.target = r.target;
      req.obstacles = std::move(obstacles);
      req.hamiltonian = &ham;
      req.t_start = t_start;
      req.t_end = v.sta;
      req.save_dt = st.save_dt;
      req.cfl = st.cfl;
      req.spatial_order = st.spatial_order;
      if (!v.depart_at) {
        req.stop_when_reached = as_point(v.x0);
        req.stop_extra_samples = st.stop_extra_samples;
      }
      r.value = solve(req);
      ++solves;
      if (v.depart_at) {
        if (sample(r.value.samples.front(), as_point(v.x0)) <= 0.0) ldt = *v.depart_at;
      } else {
        ldt = latest_departure_time(r.value, v.x0);
      }
      if (ldt) break;
      note("vehicle " + std::to_string(v.id) + ": start state not reached from t=" + std::to_string(t_start));
    }
    if (!ldt) throw InfeasibleError(v.id, "start state is outside the backward reachable set over the solved span");
    r.ldt = *ldt;

    const double rc = cfg.collision_radius + st.obstacle_margin_cells * std::max(pgrid.spacing(0), pgrid.spacing(1));
    switch (cfg.method) {
      case Method::Basic:
        r.trajectory = realizable_path(r, v, mode, params);
        r.induced_obstacles = induced_obstacle_basic(r.trajectory, rc, pgrid, st.save_dt);
        r.obstacle_tag = "basic";
        break;
      case Method::RobustTracking:
        r.trajectory = realizable_path(r, v, mode, params);
        r.induced_obstacles = induced_obstacle_rtt(r.trajectory, *r.kernel, rc, pgrid, st.save_dt);
        r.obstacle_tag = "robust_tracking";
        break;
      case Method::Centralized:
      case Method::LeastRestrictive: {
        const bool cc = cfg.method == Method::Centralized;
        std::vector<std::pair<double, Field>> proj;
        const Field start = initial_state_set(grid, v.x0);
        if (r.ldt < v.sta - 1e-9) {
          ClosedLoopHamiltonian closed(v.params, r.value.samples);
          DubinsHamiltonian open(HamiltonianMode::FrsOpenLoop, v.params);
          SolveRequest req;
          req.target = start;
          req.hamiltonian = cc ? static_cast<Hamiltonian*>(&closed) : &open;
          req.t_start = r.ldt;
          req.t_end = v.sta;
          req.save_dt = st.save_dt;
          req.cfl = st.cfl;
          req.spatial_order = st.spatial_order;
          req.direction = Direction::Forward;
          req.keep_samples = false;
          // A vehicle that has arrived is gone; states a cell deep in the
          // target leave the closed-loop set.
          const double cell = std::max(pgrid.spacing(0), pgrid.spacing(1));
          if (cc && v.target_radius > cell) {
            req.obstacles.push_back(r.ldt, sdf_disk_cylinder(pgrid, v.target_center, v.target_radius - cell));
          }
          req.on_sample = [&](double t, const Field& w) {
            if (cc) {
              proj.emplace_back(t, project_min_nonposition(w));
              return;
            }
            std::size_t j = r.value.samples.index_at_or_before(t);
            if (j == TimeField::npos) j = 0;
            proj.emplace_back(t, project_min_nonposition(set_intersect(w, r.value.samples.field(j))));
          };
          solve(req);
          ++solves;
        } else {
          proj.emplace_back(v.sta, project_min_nonposition(start));
        }
        r.induced_obstacles = sweep_projections(proj, rc, st.save_dt);
        r.obstacle_tag = cc ? "centralized" : "least_restrictive";
        break;
      }
    }
    r.solves = solves - solves_before;
    std::ostringstream os;
    os << "vehicle " << v.id << ": ldt=" << r.ldt << " sta=" << v.sta << " solves=" << r.solves;
    note(os.str());
    return r;
  }
};

}  // namespace

PlanSet plan_all(const PlanningProblem& problem, std::vector<VehicleSpec> vehicles,
                 const std::vector<const PlanResult*>& higher, const PlanLog& log) {
  problem.config.validate();
  problem.settings.validate();
  if (problem.grid.dim() != 3) throw std::invalid_argument("plan_all: planning grid must be 3-D");
  std::sort(vehicles.begin(), vehicles.end(), [](const auto& a, const auto& b) { return a.priority < b.priority; });

  Planner p{problem, log, problem.grid.position_grid(), {}, std::nullopt, 0};
  p.static_field = problem.static_obstacles.size() == 0 ? absent_field(p.pgrid) : problem.static_obstacles;
  if (!(p.static_field.grid() == p.pgrid)) throw std::invalid_argument("plan_all: static obstacles must be on the position grid");

  std::vector<const TimeField*> induced;
  std::vector<int> readable;
  for (const PlanResult* h : higher) {
    induced.push_back(&h->induced_obstacles);
    readable.push_back(h->id);
    if (h->kernel && !p.kernel) p.kernel = KernelResult{*h->kernel, true, 0.0, 0.0};
  }

  PlanSet out;
  out.plans.reserve(vehicles.size());
  for (const VehicleSpec& v : vehicles) {
    std::ostringstream audit;
    audit << "vehicle " << v.id << " reads";
    if (readable.empty()) audit << " none";
    for (int id : readable) audit << ' ' << id;
    out.audit.push_back(audit.str());

    out.plans.push_back(p.plan_one(v, induced));
    readable.push_back(v.id);
    induced.clear();
    for (const PlanResult* h : higher) induced.push_back(&h->induced_obstacles);
    for (const PlanResult& r : out.plans) induced.push_back(&r.induced_obstacles);
  }
  out.solve_count = p.solves;
  return out;
}

}  // namespace spp
