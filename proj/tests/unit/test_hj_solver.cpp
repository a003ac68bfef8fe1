#include <gtest/gtest.h>

#include <cmath>

#include "oracles/dubins_oracle.hpp"
#include "spp/errors.hpp"
#include "spp/geometry.hpp"
#include "spp/hj_solver.hpp"
#include "spp/tracking.hpp"

using namespace spp;

namespace {

Grid dubins_grid(std::size_t n, std::size_t nth) {
  return make_grid({-1, -1, 0}, {1, 1, kTwoPi}, {n, n, nth}, {false, false, true});
}

Field linear_1d(const Grid& g, double a, double b) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = a * g.coord(0, i) + b;
  return Field(g, v);
}

// Zero crossing of a monotone 1-D field, by linear interpolation.
double zero_crossing_1d(const Field& f) {
  const Grid& g = f.grid();
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (f[i] <= 0.0 && f[i + 1] > 0.0) return g.coord(0, i) + g.spacing(0) * f[i] / (f[i] - f[i + 1]);
  }
  return NAN;
}

}  // namespace

TEST(LaxFriedrichs, LinearAndConstantFields) {
  const Grid g = make_grid({-1}, {1}, {21}, {false});
  FunctionHamiltonian h([](const Point&, const Point& p) { return p[0] * p[0] + 3 * p[0]; }, {5, 0, 0, 0});
  const Field f = linear_1d(g, 0.7, 0.2);
  for (std::size_t i : {2u, 5u, 10u, 18u}) EXPECT_NEAR(lf_numerical_hamiltonian(f, i, h, {5, 0, 0, 0}), 0.49 + 2.1, 1e-12);
  EXPECT_NEAR(lf_numerical_hamiltonian(Field(g, 3.0), 4, h, {5, 0, 0, 0}), 0.0, 1e-15);
}

TEST(LaxFriedrichs, AbsoluteValueKink) {
  const Grid g = make_grid({-1}, {1}, {21}, {false});
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::abs(g.coord(0, i));
  FunctionHamiltonian h([](const Point&, const Point& p) { return p[0] * p[0]; }, {2, 0, 0, 0});
  EXPECT_NEAR(lf_numerical_hamiltonian(Field(g, v), 10, h, {2, 0, 0, 0}), -2.0, 1e-12);
}

TEST(StepBackward, ClampsAndObstacle) {
  const Grid g = make_grid({-1}, {1}, {21}, {false});
  const Field l = linear_1d(g, 1.0, 0.0);
  FunctionHamiltonian grow([](const Point&, const Point& p) { return std::abs(p[0]); }, {1, 0, 0, 0});
  const Field out = step_backward_vi(l, 0.0, 0.05, l, nullptr, grow);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LE(out[i], l[i]);

  std::vector<double> ob(g.size(), kAbsentValue);
  ob[3] = -0.4;
  const Field obstacle(g, ob);
  FunctionHamiltonian shrink([](const Point&, const Point& p) { return -std::abs(p[0]); }, {1, 0, 0, 0});
  const Field out2 = step_backward_vi(l, 0.0, 0.05, l, &obstacle, shrink);
  EXPECT_GE(out2[3], 0.4);
  EXPECT_THROW(step_backward_vi(l, 0.0, 0.5, l, nullptr, shrink), std::invalid_argument);
}

TEST(Solve, TransportFrontMatchesCharacteristics) {
  const Grid g = make_grid({-1}, {2}, {151}, {false});
  FunctionHamiltonian h([](const Point&, const Point& p) { return -std::abs(p[0]); }, {1, 0, 0, 0});
  SolveRequest req;
  req.target = linear_1d(g, 1.0, 0.0);
  req.hamiltonian = &h;
  req.t_start = -0.5;
  req.t_end = 0.0;
  req.save_dt = 0.1;
  const ValueFunction vf = solve(req);
  ASSERT_EQ(vf.samples.size(), 6u);
  EXPECT_NEAR(vf.samples.time(0), -0.5, 1e-12);
  for (std::size_t k = 0; k < vf.samples.size(); ++k) {
    EXPECT_NEAR(zero_crossing_1d(vf.samples.field(k)), -vf.samples.time(k), g.spacing(0));
  }
}

TEST(Solve, TerminalConditionAndObstacleExclusion) {
  const Grid g = dubins_grid(31, 12);
  DubinsHamiltonian h(HamiltonianMode::BasicReach, DubinsParams::fixed_speed(1, 1));
  SolveRequest req;
  req.target = sdf_disk_cylinder(g, {0.5, 0.0}, 0.15);
  const Field wall = sdf_axis_box(g.position_grid(), {0.0, -0.6}, {0.15, 0.6});
  for (int k = -20; k <= 0; ++k) req.obstacles.push_back(0.02 * k, wall);
  req.hamiltonian = &h;
  req.t_start = -0.4;
  req.t_end = 0.0;
  const ValueFunction vf = solve(req);
  const Field& last = vf.samples.back();
  const std::size_t per = g.nodes_per_position();
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(last[i], std::max(req.target[i], -wall[i / per]));
  for (const Field& f : vf.samples.fields()) {
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(f[i], -wall[i / per]);
  }
  EXPECT_THROW(
      {
        SolveRequest bad = req;
        bad.t_start = -1.0;
        solve(bad);
      },
      std::invalid_argument);
}

class HorizonMonotone : public ::testing::TestWithParam<int> {};

// The first-order scheme is monotone node by node. ENO2 only keeps set
// inclusion, up to a small overshoot.
TEST_P(HorizonMonotone, LongerHorizonNeverShrinksTheSet) {
  const int order = GetParam();
  const double slack = order == 1 ? 0.0 : 1e-4;
  const Grid g = dubins_grid(41, 16);
  DubinsHamiltonian h(HamiltonianMode::BasicReach, DubinsParams::fixed_speed(1, 1));
  SolveRequest req;
  req.target = sdf_disk_cylinder(g, {0, 0}, 0.1);
  req.hamiltonian = &h;
  req.t_start = -0.3;
  req.t_end = 0.0;
  req.save_dt = 0.05;
  req.spatial_order = order;
  const ValueFunction vf = solve(req);
  for (std::size_t k = 0; k + 1 < vf.samples.size(); ++k) {
    const Field& a = vf.samples.field(k);
    const Field& b = vf.samples.field(k + 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (order == 1) ASSERT_LE(a[i], b[i]);
      if (b[i] <= 0.0) ASSERT_LE(a[i], slack);
    }
  }
  const Field& early = vf.samples.front();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.node(i);
    const double r = std::hypot(x[0], x[1]);
    if (r <= 0.1) EXPECT_LE(early[i], 0.0);
    if (r > 0.4) EXPECT_GT(early[i], 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, HorizonMonotone, ::testing::Values(1, 2));

TEST(Solve, ForwardSetStaysInSpeedBall) {
  const Grid g = dubins_grid(41, 16);
  DubinsHamiltonian h(HamiltonianMode::FrsOpenLoop, DubinsParams::fixed_speed(1, 1));
  SolveRequest req;
  req.target = sdf_disk_cylinder(g, {0, 0}, 0.1);
  req.hamiltonian = &h;
  req.t_start = 0.0;
  req.t_end = 0.3;
  req.direction = Direction::Forward;
  const ValueFunction vf = solve(req);
  EXPECT_NEAR(vf.samples.back().grid().spacing(0), 0.05, 1e-12);
  for (std::size_t k = 0; k < vf.samples.size(); ++k) {
    const double tau = vf.samples.time(k);
    const Field& f = vf.samples.field(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point x = g.node(i);
      if (std::hypot(x[0], x[1]) > 0.1 + tau + g.spacing(0)) EXPECT_GT(f[i], 0.0);
    }
  }
}

TEST(Solve, ForwardObstacleDropsStates) {
  const Grid g = dubins_grid(41, 16);
  DubinsHamiltonian h(HamiltonianMode::FrsOpenLoop, DubinsParams::fixed_speed(1, 1));
  SolveRequest req;
  req.target = sdf_disk_cylinder(g, {0, 0}, 0.1);
  req.hamiltonian = &h;
  req.t_start = 0.0;
  req.t_end = 0.4;
  req.direction = Direction::Forward;
  // After 0.4 s at unit speed the set is a ring of disks 0.4 out along each heading.
  const Point ahead{0.4, 0.0, 0.0, 0.0};
  const Point behind{-0.4, 0.0, kPi, 0.0};
  const Field free_end = solve(req).samples.back();
  EXPECT_LE(sample(free_end, ahead), 0.0);
  req.obstacles.push_back(0.0, sdf_disk_cylinder(g.position_grid(), {0.3, 0.0}, 0.15));
  const Field end = solve(req).samples.back();
  EXPECT_GT(sample(end, ahead), 0.0);
  EXPECT_NEAR(sample(end, behind), sample(free_end, behind), 1e-6);
}

TEST(Solve, EarlyStopOnReach) {
  const Grid g = dubins_grid(31, 12);
  DubinsHamiltonian h(HamiltonianMode::BasicReach, DubinsParams::fixed_speed(1, 1));
  SolveRequest req;
  req.target = sdf_disk_cylinder(g, {0.5, 0}, 0.1);
  req.hamiltonian = &h;
  req.t_start = -3.0;
  req.t_end = 0.0;
  req.stop_when_reached = Point{0.0, 0.0, 0.0, 0.0};
  req.stop_extra_samples = 2;
  const ValueFunction vf = solve(req);
  EXPECT_TRUE(vf.stopped_early);
  EXPECT_LE(sample(vf.samples.field(2), *req.stop_when_reached), 0.0);
  EXPECT_GT(sample(vf.samples.field(3), *req.stop_when_reached), 0.0);
}

TEST(Solve, MembershipTimeMatchesDubinsOracle) {
  const Grid g = dubins_grid(71, 45);
  DubinsHamiltonian h(HamiltonianMode::BasicReach, DubinsParams::fixed_speed(1, 1));
  SolveRequest req;
  req.target = sdf_disk_cylinder(g, {0.7, 0.2}, 0.1);
  req.hamiltonian = &h;
  req.t_start = -3.0;
  req.t_end = 0.0;
  req.stop_when_reached = Point{-0.5, 0.0, 0.0, 0.0};
  req.stop_extra_samples = 0;
  const ValueFunction vf = solve(req);
  const double t_reach = -vf.samples.time(0);
  const auto ref = oracle::min_time_to_disk({-0.5, 0.0, 0.0}, 0.7, 0.2, 0.1, 1.0, 1.0);
  const double cell = std::hypot(g.spacing(0), g.spacing(1));
  EXPECT_NEAR(t_reach, ref.time, 2 * cell) << "oracle " << ref.time;
}

TEST(Kernel, DominantTrackerHoldsZeroError) {
  TrackingErrorParams p;
  p.tracker.v_min = 0.5;
  p.tracker.v_max = 1.0;
  p.tracker.omega_max = 1.0;
  p.planner = DubinsParams::fixed_speed(0.75, 0.6);
  KernelSettings s;
  s.grid.position_count = 17;
  s.grid.heading_count = 17;
  s.t_max = 4.0;
  const KernelResult k = compute_tracking_kernel(p, s);
  EXPECT_LE(sample(k.kernel, {0, 0, 0, 0}), 0.0);
  EXPECT_LE(kernel_position_radius(k.kernel), p.r_eb + 1e-9);
}

TEST(Kernel, FastReferenceEmptiesKernel) {
  const Grid g = make_grid({-0.1, -0.1, 0}, {0.1, 0.1, kTwoPi}, {21, 21, 12}, {false, false, true});
  TrackingErrorParams p;
  p.tracker.v_min = 0.2;
  p.tracker.v_max = 0.4;
  p.tracker.omega_max = 1.0;
  p.tracker.d_r = 0.2;
  p.planner = DubinsParams::fixed_speed(1.0, 1.0);
  ErrorHamiltonian h(p);
  const Field violation = set_complement(sdf_disk_cylinder(g, {0, 0}, 0.075));
  EXPECT_THROW(solve_invariant_kernel(violation, h, 1e-3, 3.0), EmptyKernelError);
}
