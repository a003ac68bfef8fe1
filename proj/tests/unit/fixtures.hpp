#pragma once

#include <vector>

#include "spp/dynamics.hpp"
#include "spp/geometry.hpp"
#include "spp/planner.hpp"

namespace spp::test {

inline Grid small_grid(std::size_t n = 41, std::size_t nth = 24) {
  return make_grid({-1, -1, 0}, {1, 1, kTwoPi}, {n, n, nth}, {false, false, true});
}

inline PlanningProblem small_problem(Method method = Method::Basic) {
  PlanningProblem pb;
  pb.grid = small_grid();
  pb.config.method = method;
  pb.settings.horizon = 3.0;
  pb.settings.obstacle_margin_cells = 1.0;
  return pb;
}

inline VehicleSpec vehicle(int id, State3 x0, Vec2 target, double sta = 0.0) {
  VehicleSpec v;
  v.id = id;
  v.priority = id;
  v.params = DubinsParams::fixed_speed(1.0, 1.0);
  v.x0 = x0;
  v.target_center = target;
  v.target_radius = 0.15;
  v.sta = sta;
  return v;
}

// Two vehicles whose straight-line paths cross at the origin at the same time.
inline std::vector<VehicleSpec> crossing_pair() {
  return {vehicle(1, {-0.6, -0.6, kPi / 4}, {0.6, 0.6}), vehicle(2, {0.6, -0.6, 3 * kPi / 4}, {-0.6, 0.6})};
}

// Planned once per test process; several suites share it.
inline const PlanSet& crossing_plans() {
  static const PlanSet plans = plan_all(small_problem(), crossing_pair());
  return plans;
}

}  // namespace spp::test
