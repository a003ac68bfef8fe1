#include "spp/scenario.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "spp/errors.hpp"
#include "spp/geometry.hpp"
#include "spp/io.hpp"

namespace spp {

using nlohmann::json;

namespace {

/// A JSON node plus its pointer path, for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *j_; }

  [[noreturn]] void fail(const std::string& msg) const { throw InputError(path_.empty() ? "/" : path_, msg); }

  Node object(std::initializer_list<const char*> allowed) const {
    if (!j_->is_object()) fail("expected an object");
    for (const auto& [k, v] : j_->items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
        throw InputError(path_ + "/" + k, "unknown key");
      }
    }
    return *this;
  }

  bool has(const char* key) const { return j_->contains(key); }

  Node at(const char* key) const {
    if (!j_->contains(key)) throw InputError(path_ + "/" + key, "missing required key");
    return Node((*j_)[key], path_ + "/" + key);
  }

  std::vector<Node> array() const {
    if (!j_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], path_ + "/" + std::to_string(i));
    return out;
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    return j_->get<double>();
  }

  long long integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long long>();
  }

  std::size_t count() const {
    const long long v = integer();
    if (v < 0) fail("expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }

  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }

  std::vector<double> numbers(std::size_t n) const {
    const auto items = array();
    if (items.size() != n) fail("expected " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (const Node& x : items) out.push_back(x.number());
    return out;
  }

  Vec2 vec2() const {
    const auto v = numbers(2);
    return {v[0], v[1]};
  }

  double number_or(const char* key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  std::size_t count_or(const char* key, std::size_t fallback) const { return has(key) ? at(key).count() : fallback; }

 private:
  const json* j_;
  std::string path_;
};

template <class Fn>
void checked(const Node& n, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
}

DubinsParams parse_dynamics(const Node& n, const DubinsParams& base) {
  n.object({"v_min", "v_max", "speed", "omega_max", "d_r", "d_theta_max"});
  DubinsParams p = base;
  if (n.has("speed")) {
    if (n.has("v_min") || n.has("v_max")) n.fail("give either speed or v_min/v_max");
    p = DubinsParams::fixed_speed(n.at("speed").number(), n.number_or("omega_max", base.omega_max));
    p.d_r = base.d_r;
    p.d_theta_max = base.d_theta_max;
  } else {
    p.v_min = n.number_or("v_min", base.v_min);
    p.v_max = n.number_or("v_max", base.v_max);
    p.omega_max = n.number_or("omega_max", base.omega_max);
    if (n.has("v_min") || n.has("v_max")) p.speed_fixed.reset();
  }
  p.d_r = n.number_or("d_r", p.d_r);
  p.d_theta_max = n.number_or("d_theta_max", p.d_theta_max);
  checked(n, [&] { p.validate(); });
  return p;
}

State3 parse_state(const Node& n) {
  const auto v = n.numbers(3);
  return {v[0], v[1], v[2]};
}

Grid parse_grid(const Node& n) {
  n.object({"x", "y", "counts", "heading_periodic"});
  const Vec2 x = n.at("x").vec2();
  const Vec2 y = n.at("y").vec2();
  const auto cn = n.at("counts").array();
  if (cn.size() != 3) n.at("counts").fail("expected 3 counts (x, y, heading)");
  std::vector<std::size_t> counts;
  for (const Node& c : cn) counts.push_back(c.count());
  if (n.has("heading_periodic") && !n.at("heading_periodic").boolean()) {
    n.at("heading_periodic").fail("the heading dimension must be periodic");
  }
  Grid g;
  checked(n, [&] { g = make_grid({x[0], y[0], 0.0}, {x[1], y[1], kTwoPi}, counts, {false, false, true}); });
  return g;
}

MethodConfig parse_method(const Node& n, const DubinsParams& tracker) {
  n.object({"name", "collision_radius", "lrc_band", "rtt"});
  MethodConfig m;
  const Node name = n.at("name");
  const auto method = method_from_string(name.string());
  if (!method) name.fail("unknown method '" + name.string() + "'");
  m.method = *method;
  m.collision_radius = n.number_or("collision_radius", m.collision_radius);
  m.lrc_band = n.number_or("lrc_band", m.lrc_band);
  if (n.has("rtt")) {
    const Node r = n.at("rtt").object({"planner", "r_eb"});
    TrackingErrorParams t;
    t.tracker = tracker;
    t.planner = parse_dynamics(r.at("planner"), DubinsParams{});
    t.r_eb = r.number_or("r_eb", t.r_eb);
    checked(r, [&] { t.validate(); });
    m.rtt = t;
  }
  checked(n, [&] { m.validate(); });
  return m;
}

void parse_kernel(const Node& n, KernelSettings& k) {
  n.object({"position_count", "heading_count", "heading_window", "extent", "tol", "t_max", "cfl", "spatial_order"});
  k.grid.position_count = n.count_or("position_count", k.grid.position_count);
  k.grid.heading_count = n.count_or("heading_count", k.grid.heading_count);
  k.grid.heading_window = n.number_or("heading_window", k.grid.heading_window);
  k.grid.extent = n.number_or("extent", k.grid.extent);
  k.tol = n.number_or("tol", k.tol);
  k.t_max = n.number_or("t_max", k.t_max);
  k.cfl = n.number_or("cfl", k.cfl);
  if (n.has("spatial_order")) k.spatial_order = static_cast<int>(n.at("spatial_order").integer());
  checked(n, [&] { k.grid.validate(); });
}

PlannerSettings parse_solver(const Node& n) {
  n.object({"save_dt", "cfl", "spatial_order", "horizon", "horizon_extension", "stop_extra_samples",
            "max_departure_backoff", "obstacle_margin_cells", "kernel"});
  PlannerSettings s;
  s.save_dt = n.number_or("save_dt", s.save_dt);
  s.cfl = n.number_or("cfl", s.cfl);
  if (n.has("spatial_order")) s.spatial_order = static_cast<int>(n.at("spatial_order").integer());
  s.horizon = n.number_or("horizon", s.horizon);
  s.horizon_extension = n.number_or("horizon_extension", s.horizon_extension);
  s.stop_extra_samples = n.count_or("stop_extra_samples", s.stop_extra_samples);
  s.max_departure_backoff = n.count_or("max_departure_backoff", s.max_departure_backoff);
  s.obstacle_margin_cells = n.number_or("obstacle_margin_cells", s.obstacle_margin_cells);
  if (n.has("kernel")) parse_kernel(n.at("kernel"), s.kernel);
  checked(n, [&] { s.validate(); });
  return s;
}

ObstacleSpec parse_obstacle(const Node& n) {
  const std::string type = n.at("type").string();
  ObstacleSpec o;
  if (type == "box") {
    n.object({"type", "lo", "hi"});
    o.kind = ObstacleSpec::Box;
    o.a = n.at("lo").vec2();
    o.b = n.at("hi").vec2();
    if (!(o.a[0] < o.b[0] && o.a[1] < o.b[1])) n.fail("box needs lo < hi componentwise");
  } else if (type == "disk") {
    n.object({"type", "center", "radius"});
    o.kind = ObstacleSpec::Disk;
    o.a = n.at("center").vec2();
    o.radius = n.at("radius").number();
    if (!(o.radius > 0.0)) n.at("radius").fail("radius must be positive");
  } else {
    n.at("type").fail("expected \"box\" or \"disk\"");
  }
  return o;
}

VehicleSpec parse_vehicle(const Node& n, const DubinsParams& base, int default_priority) {
  n.object({"id", "priority", "x0", "target", "sta", "dynamics"});
  VehicleSpec v;
  v.id = static_cast<int>(n.at("id").integer());
  v.priority = n.has("priority") ? static_cast<int>(n.at("priority").integer()) : default_priority;
  v.x0 = parse_state(n.at("x0"));
  const Node t = n.at("target").object({"center", "radius"});
  v.target_center = t.at("center").vec2();
  v.target_radius = t.at("radius").number();
  if (!(v.target_radius > 0.0)) t.at("radius").fail("radius must be positive");
  v.sta = n.at("sta").number();
  v.params = n.has("dynamics") ? parse_dynamics(n.at("dynamics"), base) : base;
  return v;
}

IntruderScenario parse_intruder(const Node& n) {
  n.object({"dynamics", "x0", "t_sa", "t_ea", "t_iat", "behavior", "script", "avoid_grid", "band", "replan_window"});
  IntruderScenario s;
  IntruderSpec& i = s.spec;
  i.params = parse_dynamics(n.at("dynamics"), DubinsParams{});
  i.x0 = parse_state(n.at("x0"));
  i.t_sa = n.at("t_sa").number();
  i.t_ea = n.at("t_ea").number();
  i.t_iat = n.at("t_iat").number();
  if (n.has("behavior")) {
    const Node b = n.at("behavior");
    const auto k = intruder_behavior_from_string(b.string());
    if (!k) b.fail("expected \"scripted\" or \"pursuit\"");
    i.behavior = *k;
  }
  if (n.has("script")) {
    for (const Node& seg : n.at("script").array()) {
      seg.object({"t", "v", "omega"});
      i.script.push_back({seg.at("t").number(), seg.at("v").number(), seg.at("omega").number()});
    }
  }
  if (n.has("avoid_grid")) {
    const Node g = n.at("avoid_grid").object({"position_count", "heading_count", "margin", "spatial_order"});
    s.avoid_grid.position_count = g.count_or("position_count", s.avoid_grid.position_count);
    s.avoid_grid.heading_count = g.count_or("heading_count", s.avoid_grid.heading_count);
    s.avoid_grid.margin = g.number_or("margin", s.avoid_grid.margin);
    if (g.has("spatial_order")) s.avoid_grid.spatial_order = static_cast<int>(g.at("spatial_order").integer());
  }
  s.band = n.number_or("band", s.band);
  s.replan_window = n.number_or("replan_window", s.replan_window);
  if (!(s.band > 0.0)) n.at("band").fail("band must be positive");
  if (!(s.replan_window > 0.0)) n.at("replan_window").fail("replan_window must be positive");
  checked(n, [&] { i.validate(); });
  return s;
}

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

PlanningProblem Scenario::problem() const {
  PlanningProblem p;
  p.grid = grid;
  p.config = method;
  p.settings = solver;
  const Grid pg = grid.position_grid();
  if (!obstacles.empty()) {
    p.static_obstacles = absent_field(pg);
    for (const ObstacleSpec& o : obstacles) {
      const Field f = o.kind == ObstacleSpec::Box ? sdf_axis_box(pg, o.a, o.b) : sdf_disk_cylinder(pg, o.a, o.radius);
      p.static_obstacles = set_union(p.static_obstacles, f);
    }
  }
  return p;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source, "parse error at " + location(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  const Node root = Node(doc, "").object({"name", "grid", "dynamics", "method", "vehicles", "obstacles", "disturbance",
                                          "intruder", "solver", "simulation", "seed", "output"});
  Scenario s;
  s.name = root.has("name") ? root.at("name").string() : std::string();
  s.grid = parse_grid(root.at("grid"));
  const DubinsParams base = root.has("dynamics") ? parse_dynamics(root.at("dynamics"), DubinsParams{}) : DubinsParams{};

  const auto vehicles = root.at("vehicles").array();
  if (vehicles.empty()) root.at("vehicles").fail("at least one vehicle is required");
  std::set<int> ids;
  for (std::size_t k = 0; k < vehicles.size(); ++k) {
    VehicleSpec v = parse_vehicle(vehicles[k], base, static_cast<int>(k) + 1);
    if (!ids.insert(v.id).second) vehicles[k].at("id").fail("duplicate vehicle id");
    const Grid& g = s.grid;
    if (v.x0.px < g.min(0) || v.x0.px > g.max(0) || v.x0.py < g.min(1) || v.x0.py > g.max(1)) {
      vehicles[k].at("x0").fail("start position lies outside the grid");
    }
    s.vehicles.push_back(v);
  }
  checked(root.at("vehicles"), [&] { validate_vehicles(s.vehicles); });

  s.method = parse_method(root.at("method"), s.vehicles.front().params);
  if (s.method.method == Method::RobustTracking) {
    for (std::size_t k = 0; k < s.vehicles.size(); ++k) {
      const DubinsParams& p = s.vehicles[k].params;
      const DubinsParams& t = s.method.rtt->tracker;
      if (p.v_min != t.v_min || p.v_max != t.v_max || p.omega_max != t.omega_max || p.d_r != t.d_r ||
          p.d_theta_max != t.d_theta_max) {
        vehicles[k].fail("robust tracking needs every vehicle to share one dynamics");
      }
    }
  }

  if (root.has("obstacles")) {
    for (const Node& o : root.at("obstacles").array()) s.obstacles.push_back(parse_obstacle(o));
  }
  if (root.has("disturbance")) {
    const Node d = root.at("disturbance").object({"model"});
    const Node m = d.at("model");
    const auto k = disturbance_from_string(m.string());
    if (!k) m.fail("expected \"zero\", \"random\" or \"adversarial\"");
    s.disturbance.kind = *k;
  }
  if (root.has("seed")) {
    const long long seed = root.at("seed").integer();
    if (seed < 0) root.at("seed").fail("seed must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  s.disturbance.seed = s.seed;
  if (root.has("solver")) s.solver = parse_solver(root.at("solver"));
  if (root.has("simulation")) {
    const Node n = root.at("simulation").object({"dt", "free_turn_gain"});
    s.sim.dt = n.number_or("dt", s.sim.dt);
    s.sim.free_turn_gain = n.number_or("free_turn_gain", s.sim.free_turn_gain);
    if (!(s.sim.dt > 0.0)) n.at("dt").fail("dt must be positive");
  }
  s.sim.lrc_band = s.method.lrc_band;
  s.sim.rtt = s.method.rtt;
  if (root.has("intruder")) s.intruder = parse_intruder(root.at("intruder"));
  if (root.has("output")) s.output = root.at("output").string();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw InputError(path.string(), "file not found");
  return parse_scenario(load_text(path), path.string());
}

}  // namespace spp
