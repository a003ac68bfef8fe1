#include "spp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "spp/errors.hpp"
#include "spp/geometry.hpp"
#include "spp/io.hpp"
#include "spp/svg.hpp"

namespace spp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string color_for(std::size_t k) { return kPalette[k % (sizeof kPalette / sizeof kPalette[0])]; }

void say(const RunLog& log, const std::string& s) {
  if (log) log(s);
}

json params_json(const DubinsParams& p) {
  json j{{"v_min", p.v_min}, {"v_max", p.v_max}, {"omega_max", p.omega_max}, {"d_r", p.d_r}, {"d_theta_max", p.d_theta_max}};
  if (p.speed_fixed) j["speed_fixed"] = *p.speed_fixed;
  return j;
}

DubinsParams params_from(const json& j) {
  DubinsParams p;
  p.v_min = j.at("v_min").get<double>();
  p.v_max = j.at("v_max").get<double>();
  p.omega_max = j.at("omega_max").get<double>();
  p.d_r = j.at("d_r").get<double>();
  p.d_theta_max = j.at("d_theta_max").get<double>();
  if (j.contains("speed_fixed")) p.speed_fixed = j.at("speed_fixed").get<double>();
  return p;
}

fs::path vehicle_dir(const fs::path& root, int id) { return root / ("v" + std::to_string(id)); }

std::string dump_line(const json& j) { return j.dump() + "\n"; }

bool same_dynamics(const DubinsParams& a, const DubinsParams& b) {
  return a.v_min == b.v_min && a.v_max == b.v_max && a.omega_max == b.omega_max && a.d_r == b.d_r &&
         a.d_theta_max == b.d_theta_max && a.speed_fixed == b.speed_fixed;
}

std::vector<Vec2> positions(const Trajectory& t) {
  std::vector<Vec2> out;
  out.reserve(t.size());
  for (const State3& x : t.states) out.push_back({x.px, x.py});
  return out;
}

json violations_json(const std::vector<SeparationViolation>& v) {
  json arr = json::array();
  for (std::size_t k = 0; k < v.size() && k < 100; ++k) {
    arr.push_back({{"t", v[k].t}, {"i", v[k].i}, {"j", v[k].j}, {"distance", v[k].distance}});
  }
  return arr;
}

struct PlanStage {
  Scenario scenario;
  PlanSet set;
};

struct SimStage {
  fs::path dir;
  DisturbanceModel model;
  std::vector<SimResult> runs;
  std::vector<SeparationViolation> violations;
  std::optional<IntruderOutcome> intruder;
};

/// Loads, plans and writes the bundle. Returns the exit code and, on success,
/// the stage.
int plan_stage(const fs::path& scenario_path, const fs::path& out, const RunLog& log, std::optional<PlanStage>& stage) {
  Scenario s;
  std::string text;
  try {
    text = load_text(scenario_path);
    s = parse_scenario(text, scenario_path.string());
  } catch (const InputError& e) {
    say(log, std::string("input error: ") + e.what());
    return kExitInput;
  }
  fs::create_directories(out);
  save_text(out / "scenario.json", text);
  fs::remove(out / "failure.json");

  PlanSet set;
  try {
    set = plan_all(s.problem(), s.vehicles, {}, log);
  } catch (const InfeasibleError& e) {
    say(log, e.what());
    const json rec{{"status", "infeasible"}, {"vehicle", e.vehicle_id()}, {"message", e.what()}};
    save_text(out / "failure.json", dump_line(rec));
    save_text(out / "summary.jsonl", dump_line({{"id", e.vehicle_id()}, {"feasible", false}, {"error", e.what()}}));
    return kExitInfeasible;
  }

  std::string summary;
  for (const PlanResult& p : set.plans) {
    save_plan(vehicle_dir(out / "plans", p.id), p);
    summary += plan_summary_line(p);
  }
  summary += dump_line({{"total_solves", set.solve_count}});
  save_text(out / "summary.jsonl", summary);
  std::string audit;
  for (const std::string& a : set.audit) audit += a + "\n";
  save_text(out / "audit.txt", audit);
  stage = PlanStage{std::move(s), std::move(set)};
  return kExitOk;
}

int sim_stage(const fs::path& dir, const Scenario& s, const std::vector<PlanResult>& plans,
              std::optional<std::uint64_t> seed, std::optional<DisturbanceKind> kind, const RunLog& log,
              std::optional<SimStage>& stage) {
  SimStage st;
  st.model.kind = kind.value_or(s.disturbance.kind);
  st.model.seed = seed.value_or(s.seed);
  st.dir = dir / "sim" / (std::string(to_string(st.model.kind)) + "-" + std::to_string(st.model.seed));
  fs::create_directories(st.dir);

  json report;
  if (s.intruder) {
    try {
      st.intruder = run_intruder_event(s, plans, st.model, log);
    } catch (const InfeasibleError& e) {
      say(log, e.what());
      save_text(st.dir / "failure.json",
                dump_line({{"status", "infeasible"}, {"vehicle", e.vehicle_id()}, {"message", e.what()}}));
      return kExitInfeasible;
    }
    const IntruderOutcome& o = *st.intruder;
    st.runs = o.runs;
    st.violations = o.violations;
    std::string events;
    for (const IntruderEvent& e : o.events) events += format_event(e) + "\n";
    save_text(st.dir / "events.log", events);
    save_trajectory(st.dir / "intruder.traj", o.run.intruder);
    for (const PlanResult& p : o.replanned.plans) {
      if (std::find(o.run.affected.begin(), o.run.affected.end(), p.id) != o.run.affected.end()) {
        save_plan(vehicle_dir(st.dir / "replan", p.id), p);
      }
    }
    json dist = json::object();
    for (std::size_t i = 0; i < plans.size(); ++i) {
      const double d = o.run.min_intruder_distance[i];
      dist[std::to_string(plans[i].id)] = std::isfinite(d) ? json(d) : json(nullptr);
    }
    std::size_t plan_solves = 0;
    for (const PlanResult& p : plans) plan_solves += p.solves;
    report["intruder"] = {{"affected", o.run.affected},
                          {"min_distance", dist},
                          {"intruder_violations", violations_json(o.run.intruder_violations)},
                          {"intruder_violation_count", o.run.intruder_violations.size()},
                          {"solves", {{"plan", plan_solves}, {"avoid", o.avoid_solves}, {"replan", o.replanned.solve_count}}}};
  } else {
    st.runs = simulate_all(plans, st.model, s.sim);
    st.violations = check_separation(st.runs, s.method.collision_radius);
  }

  json arrivals = json::array();
  for (std::size_t i = 0; i < st.runs.size(); ++i) {
    const SimResult& r = st.runs[i];
    save_trajectory(st.dir / ("v" + std::to_string(r.id) + ".traj"), r.trajectory);
    if (r.boundary_hits > 0) {
      say(log, "warning: vehicle " + std::to_string(r.id) + " touched the grid boundary " +
                   std::to_string(r.boundary_hits) + " times");
    }
    json a{{"id", r.id}, {"arrived", r.arrived}, {"time", r.arrival_time}, {"boundary_hits", r.boundary_hits}};
    if (plans[i].method == Method::RobustTracking) a["max_tracking_error"] = r.max_tracking_error;
    arrivals.push_back(a);
  }
  report["arrivals"] = arrivals;
  report["violations"] = violations_json(st.violations);
  report["violation_count"] = st.violations.size();
  save_text(st.dir / "report.json", report.dump(2) + "\n");

  json ids = json::array();
  for (const PlanResult& p : plans) ids.push_back(p.id);
  const json manifest{{"scenario", s.name}, {"method", to_string(s.method.method)}, {"model", to_string(st.model.kind)},
                      {"seed", st.model.seed}, {"dt", s.sim.dt}, {"vehicles", ids}};
  save_text(st.dir / "manifest.json", manifest.dump(2) + "\n");

  const bool intruder_hit = st.intruder && !st.intruder->run.intruder_violations.empty();
  for (const SeparationViolation& v : st.violations) {
    std::ostringstream os;
    os << "separation violation t=" << v.t << " vehicles " << v.i << " and " << v.j << " distance " << v.distance;
    say(log, os.str());
    break;
  }
  if (intruder_hit) say(log, "intruder came within the collision radius");
  const bool ok = st.violations.empty() && !intruder_hit;
  stage = std::move(st);
  return ok ? kExitOk : kExitSeparation;
}

void draw_overview(const fs::path& path, const Scenario& s, const PlanningProblem& problem,
                   const std::vector<PlanResult>& plans, const SimStage& sim) {
  const Grid& g = s.grid;
  SvgCanvas c({g.min(0), g.min(1)}, {g.max(0), g.max(1)});
  if (problem.static_obstacles.size() > 0) c.segments(zero_contour(problem.static_obstacles), "black", 2.0);
  double t_lo = 0.0, t_hi = 0.0;
  bool any = false;
  for (const SimResult& r : sim.runs) {
    if (r.trajectory.empty()) continue;
    t_lo = any ? std::min(t_lo, r.trajectory.start_time()) : r.trajectory.start_time();
    t_hi = any ? std::max(t_hi, r.trajectory.end_time()) : r.trajectory.end_time();
    any = true;
  }
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const std::string col = color_for(i);
    c.circle(plans[i].target_center, plans[i].target_radius, col, "none");
    c.circle({plans[i].x0.px, plans[i].x0.py}, 0.02, col, col);
    const Trajectory& t = sim.runs[i].trajectory;
    c.polyline(positions(t), col);
    if (!t.empty()) {
      for (int k = 1; k <= 3; ++k) {
        const double tk = t_lo + (t_hi - t_lo) * k / 4.0;
        if (tk < t.start_time() || tk > t.end_time()) continue;
        const State3 x = t.state_at(tk);
        c.circle({x.px, x.py}, s.method.collision_radius, col, "none", true);
      }
    }
    c.text({plans[i].x0.px + 0.03, plans[i].x0.py + 0.03}, "Q" + std::to_string(plans[i].id), col);
  }
  if (sim.intruder) c.polyline(positions(sim.intruder->run.intruder), "black", 2.0);
  std::ostringstream title;
  title << (s.name.empty() ? std::string("scenario") : s.name) << " / " << to_string(s.method.method) << " / "
        << to_string(sim.model.kind) << " seed " << sim.model.seed;
  c.text({g.min(0) + 0.02, g.max(1) - 0.06}, title.str());
  save_text(path, c.str());
}

void draw_brs(const fs::path& path, const Scenario& s, const PlanningProblem& problem, const PlanResult& p,
              const SimResult& run) {
  const Grid& g = s.grid;
  SvgCanvas c({g.min(0), g.min(1)}, {g.max(0), g.max(1)});
  if (problem.static_obstacles.size() > 0) c.segments(zero_contour(problem.static_obstacles), "black", 2.0);
  const TimeField& v = p.value.samples;
  const char* shades[] = {"#08306b", "#2171b5", "#6baed6", "#c6dbef"};
  for (int k = 0; k < 4 && !v.empty(); ++k) {
    const double t = p.ldt + (p.sta - p.ldt) * k / 3.0;
    std::size_t j = v.index_at_or_before(t);
    if (j == TimeField::npos) j = 0;
    const double heading = run.trajectory.empty() ? p.x0.theta : run.trajectory.state_at(t).theta;
    c.segments(zero_contour(heading_slice(v.field(j), heading)), shades[k], 1.2);
    std::ostringstream os;
    os.precision(3);
    os << "t=" << v.time(j);
    c.text({g.min(0) + 0.02, g.min(1) + 0.05 + 0.07 * k}, os.str(), shades[k]);
  }
  c.circle(p.target_center, p.target_radius, "#2ca02c");
  c.polyline(positions(run.trajectory), "#d62728");
  save_text(path, c.str());
}

std::vector<PlanResult> load_plans(const fs::path& dir, const Scenario& s) {
  std::vector<PlanResult> plans;
  for (const VehicleSpec& v : s.vehicles) plans.push_back(load_plan(vehicle_dir(dir / "plans", v.id)));
  std::sort(plans.begin(), plans.end(), [](const auto& a, const auto& b) { return a.priority < b.priority; });
  return plans;
}

}  // namespace

void save_plan(const fs::path& dir, const PlanResult& p) {
  fs::create_directories(dir);
  json j{{"id", p.id},
         {"priority", p.priority},
         {"method", to_string(p.method)},
         {"params", params_json(p.params)},
         {"x0", {p.x0.px, p.x0.py, p.x0.theta}},
         {"target_center", {p.target_center[0], p.target_center[1]}},
         {"target_radius", p.target_radius},
         {"sta", p.sta},
         {"ldt", p.ldt},
         {"obstacle_tag", p.obstacle_tag},
         {"kernel_radius", p.kernel_radius},
         {"solves", p.solves},
         {"value_mode", p.value.mode},
         {"stopped_early", p.value.stopped_early}};
  save_text(dir / "plan.json", j.dump(2) + "\n");
  save_time_field(dir / "value.hjt", p.value.samples);
  save_field(dir / "target.hjf", p.target);
  save_time_field(dir / "obstacles.hjt", p.induced_obstacles);
  if (!p.trajectory.empty()) save_trajectory(dir / "trajectory.txt", p.trajectory);
  if (p.kernel) save_field(dir / "kernel.hjf", *p.kernel);
}

PlanResult load_plan(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError(dir.string(), "plan directory not found");
  PlanResult p;
  try {
    const json j = json::parse(load_text(dir / "plan.json"));
    p.id = j.at("id").get<int>();
    p.priority = j.at("priority").get<int>();
    const auto m = method_from_string(j.at("method").get<std::string>());
    if (!m) throw InputError((dir / "plan.json").string(), "unknown method");
    p.method = *m;
    p.params = params_from(j.at("params"));
    const auto x0 = j.at("x0").get<std::vector<double>>();
    const auto tc = j.at("target_center").get<std::vector<double>>();
    if (x0.size() != 3 || tc.size() != 2) throw InputError((dir / "plan.json").string(), "bad state or target");
    p.x0 = {x0[0], x0[1], x0[2]};
    p.target_center = {tc[0], tc[1]};
    p.target_radius = j.at("target_radius").get<double>();
    p.sta = j.at("sta").get<double>();
    p.ldt = j.at("ldt").get<double>();
    p.obstacle_tag = j.at("obstacle_tag").get<std::string>();
    p.kernel_radius = j.at("kernel_radius").get<double>();
    p.solves = j.at("solves").get<std::size_t>();
    p.value.mode = j.at("value_mode").get<std::string>();
    p.value.stopped_early = j.at("stopped_early").get<bool>();
  } catch (const json::exception& e) {
    throw InputError((dir / "plan.json").string(), e.what());
  }
  p.value.samples = load_time_field(dir / "value.hjt");
  p.target = load_field(dir / "target.hjf");
  p.induced_obstacles = load_time_field(dir / "obstacles.hjt");
  if (fs::exists(dir / "trajectory.txt")) p.trajectory = load_trajectory(dir / "trajectory.txt");
  if (fs::exists(dir / "kernel.hjf")) p.kernel = load_field(dir / "kernel.hjf");
  return p;
}

std::string plan_summary_line(const PlanResult& p) {
  return dump_line({{"id", p.id},
                    {"priority", p.priority},
                    {"method", to_string(p.method)},
                    {"ldt", p.ldt},
                    {"sta", p.sta},
                    {"feasible", true},
                    {"solves", p.solves}});
}

IntruderOutcome run_intruder_event(const Scenario& s, const std::vector<PlanResult>& plans,
                                   const DisturbanceModel& model, const RunLog& log) {
  if (!s.intruder) throw std::invalid_argument("run_intruder_event: scenario has no intruder");
  const IntruderScenario& is = *s.intruder;
  IntruderOutcome o;
  std::vector<AvoidSet> sets;
  for (const PlanResult& p : plans) {
    if (std::any_of(sets.begin(), sets.end(), [&](const AvoidSet& a) { return same_dynamics(a.vehicle, p.params); })) {
      continue;
    }
    sets.push_back(compute_avoid_set(p.params, is.spec.params, s.method.collision_radius, is.spec.t_iat, is.avoid_grid));
    ++o.avoid_solves;
    say(log, "avoid set computed for vehicle " + std::to_string(p.id) + "'s dynamics");
  }

  IntruderConfig cfg;
  cfg.sim = s.sim;
  cfg.model = model;
  cfg.band = is.band;
  o.run = run_with_intruder(plans, is.spec, sets, cfg);
  o.events = o.run.events;
  for (const IntruderEvent& e : o.events) say(log, format_event(e));

  o.replanned = replan_after_intruder(s.problem(), plans, o.run.states_at_tea, is.replan_window, log);
  for (const PlanResult& p : plans) {
    const auto it = std::find(o.run.affected.begin(), o.run.affected.end(), p.id);
    if (it == o.run.affected.end()) {
      o.runs.push_back(o.run.runs[&p - plans.data()]);
      continue;
    }
    const auto r = std::find_if(o.replanned.plans.begin(), o.replanned.plans.end(),
                                [&](const PlanResult& q) { return q.id == p.id; });
    const IntruderEvent ev{r->ldt, p.id, IntruderEvent::Replanned, 0.0};
    o.events.push_back(ev);
    say(log, format_event(ev));
    o.runs.push_back(splice_runs(o.run.runs[&p - plans.data()], simulate(*r, model, s.sim)));
  }
  // Microsecond buckets so an avoid_off at t_ea sorts before a replan that departs at t_ea.
  std::stable_sort(o.events.begin(), o.events.end(), [](const auto& a, const auto& b) {
    const auto ta = std::llround(a.t * 1e6), tb = std::llround(b.t * 1e6);
    return ta != tb ? ta < tb : a.kind < b.kind;
  });
  o.violations = check_separation(o.runs, s.method.collision_radius);
  return o;
}

int command_plan(const fs::path& scenario, const fs::path& out, const RunLog& log) {
  std::optional<PlanStage> stage;
  return plan_stage(scenario, out, log, stage);
}

int command_simulate(const fs::path& dir, std::optional<std::uint64_t> seed, std::optional<DisturbanceKind> model,
                     const RunLog& log) {
  Scenario s;
  std::vector<PlanResult> plans;
  try {
    if (!fs::is_directory(dir)) throw InputError(dir.string(), "plan directory not found");
    s = load_scenario(dir / "scenario.json");
    plans = load_plans(dir, s);
  } catch (const InputError& e) {
    say(log, std::string("input error: ") + e.what());
    return kExitInput;
  }
  std::optional<SimStage> stage;
  return sim_stage(dir, s, plans, seed, model, log, stage);
}

int command_full(const fs::path& scenario, const fs::path& out, const RunLog& log) {
  std::optional<PlanStage> plan;
  const int rc = plan_stage(scenario, out, log, plan);
  if (rc != kExitOk) return rc;
  std::optional<SimStage> sim;
  const int sim_rc = sim_stage(out, plan->scenario, plan->set.plans, std::nullopt, std::nullopt, log, sim);
  if (!sim) return sim_rc;

  const PlanningProblem problem = plan->scenario.problem();
  draw_overview(sim->dir / "overview.svg", plan->scenario, problem, plan->set.plans, *sim);
  for (std::size_t i = 0; i < plan->set.plans.size(); ++i) {
    const PlanResult& p = plan->set.plans[i];
    draw_brs(sim->dir / ("brs_v" + std::to_string(p.id) + ".svg"), plan->scenario, problem, p, sim->runs[i]);
  }
  return sim_rc;
}

}  // namespace spp
