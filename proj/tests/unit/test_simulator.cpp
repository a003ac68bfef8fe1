#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "spp/simulator.hpp"

using namespace spp;
using spp::test::crossing_plans;

namespace {

Trajectory line(double y, double t0, double t1, double dt, double vx = 1.0) {
  Trajectory tr;
  tr.dt = dt;
  const auto n = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = t0 + k * dt;
    tr.push(t, {vx * t, y, 0.0}, {vx, 0.0}, {});
  }
  return tr;
}

SimResult run_of(int id, Trajectory tr) {
  SimResult r;
  r.id = id;
  r.trajectory = std::move(tr);
  return r;
}

}  // namespace

TEST(Trajectory, StateAtInterpolatesAndClamps) {
  const Trajectory tr = line(0.5, 0.0, 1.0, 0.1);
  EXPECT_NEAR(tr.state_at(0.25).px, 0.25, 1e-12);
  EXPECT_NEAR(tr.state_at(-3.0).px, 0.0, 1e-12);
  EXPECT_NEAR(tr.state_at(9.0).px, 1.0, 1e-12);
}

TEST(Trajectory, HeadingInterpolatesOnShortArc) {
  Trajectory tr;
  tr.dt = 1.0;
  tr.push(0.0, {0, 0, kTwoPi - 0.1}, {}, {});
  tr.push(1.0, {0, 0, 0.1}, {}, {});
  EXPECT_NEAR(std::abs(angle_diff(tr.state_at(0.5).theta, 0.0)), 0.0, 1e-12);
}

TEST(Rk4, StraightAndTurn) {
  const State3 s = rk4_step({0, 0, 0}, {1.0, 0.0}, {}, 0.5);
  EXPECT_NEAR(s.px, 0.5, 1e-12);
  EXPECT_NEAR(s.py, 0.0, 1e-12);
  // Quarter circle of radius 1.
  State3 x{0, 0, 0};
  for (int k = 0; k < 100; ++k) x = rk4_step(x, {1.0, 1.0}, {}, kPi / 200);
  EXPECT_NEAR(x.px, 1.0, 1e-8);
  EXPECT_NEAR(x.py, 1.0, 1e-8);
}

TEST(Separation, FlagsCloseSamplesOnly) {
  std::vector<SimResult> runs{run_of(1, line(0.0, 0.0, 1.0, 0.01)), run_of(2, line(0.15, 0.0, 1.0, 0.01))};
  EXPECT_TRUE(check_separation(runs, 0.1).empty());
  EXPECT_EQ(check_separation(runs, 0.15).size(), runs[0].trajectory.size() + runs[1].trajectory.size());
  runs[1] = run_of(2, line(0.05, 2.0, 3.0, 0.01));
  EXPECT_TRUE(check_separation(runs, 0.1).empty()) << "spans do not overlap";
}

TEST(Separation, ReportsPairAndDistance) {
  std::vector<SimResult> runs{run_of(4, line(0.0, 0.0, 1.0, 0.1)), run_of(9, line(0.08, 0.5, 1.0, 0.1))};
  const auto v = check_separation(runs, 0.1);
  ASSERT_FALSE(v.empty());
  for (const auto& s : v) {
    EXPECT_TRUE((s.i == 4 && s.j == 9) || (s.i == 9 && s.j == 4));
    EXPECT_NEAR(s.distance, 0.08, 1e-9);
    EXPECT_GE(s.t, 0.5 - 1e-9);
  }
}

TEST(Arrival, FirstSampleInsideByDeadline) {
  const Trajectory tr = line(0.0, 0.0, 1.0, 0.1);
  const Arrival a = check_arrival(tr, {0.8, 0.0}, 0.1, 1.0);
  EXPECT_TRUE(a.arrived);
  EXPECT_NEAR(a.time, 0.7, 1e-9);
  EXPECT_FALSE(check_arrival(tr, {0.8, 0.0}, 0.1, 0.5).arrived);
  EXPECT_FALSE(check_arrival(tr, {0.0, 0.5}, 0.1, 1.0).arrived);
}

TEST(Simulator, ZeroDisturbanceReplaysBasicPlan) {
  for (const PlanResult& p : crossing_plans().plans) {
    const SimResult r = simulate(p, {}, {});
    EXPECT_LE(r.trajectory.end_time(), p.trajectory.end_time() + 1e-9);
    for (std::size_t k = 0; k < p.trajectory.size() && p.trajectory.times[k] <= r.trajectory.end_time(); ++k) {
      const State3 x = r.trajectory.state_at(p.trajectory.times[k]);
      EXPECT_NEAR(x.px, p.trajectory.states[k].px, 1e-6);
      EXPECT_NEAR(x.py, p.trajectory.states[k].py, 1e-6);
    }
    EXPECT_TRUE(r.arrived);
    EXPECT_LE(r.arrival_time, p.sta + 1e-9);
  }
}

TEST(Simulator, SeededRunsRepeat) {
  PlanResult p = crossing_plans().plans[0];
  p.params.d_r = 0.1;
  p.params.d_theta_max = 0.2;
  const DisturbanceModel m{DisturbanceKind::UniformRandom, 42};
  const SimResult a = simulate(p, m, {});
  const SimResult b = simulate(p, m, {});
  const SimResult c = simulate(p, {DisturbanceKind::UniformRandom, 43}, {});
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t k = 0; k < a.trajectory.size(); ++k) EXPECT_EQ(a.trajectory.states[k].px, b.trajectory.states[k].px);
  EXPECT_NE(a.trajectory.states.back().px, c.trajectory.states.back().px);
}

TEST(Simulator, DisturbanceStaysInBounds) {
  PlanResult p = crossing_plans().plans[1];
  p.params.d_r = 0.1;
  p.params.d_theta_max = 0.2;
  for (DisturbanceKind kind : {DisturbanceKind::UniformRandom, DisturbanceKind::Adversarial}) {
    const SimResult r = simulate(p, {kind, 3}, {});
    for (const Disturbance& d : r.trajectory.disturbances) {
      EXPECT_LE(std::hypot(d.dx, d.dy), 0.1 + 1e-12);
      EXPECT_LE(std::abs(d.dtheta), 0.2 + 1e-12);
    }
  }
}

TEST(Simulator, StopsAtArrivalDeadline) {
  for (const PlanResult& p : crossing_plans().plans) {
    const SimResult r = simulate(p, {}, {});
    EXPECT_NEAR(r.trajectory.start_time(), p.ldt, 1e-9);
    EXPECT_LE(r.trajectory.end_time(), p.sta + 1e-9);
  }
}

TEST(Disturbance, NamesRoundTrip) {
  for (DisturbanceKind k : {DisturbanceKind::Zero, DisturbanceKind::UniformRandom, DisturbanceKind::Adversarial}) {
    EXPECT_EQ(disturbance_from_string(to_string(k)), k);
  }
  EXPECT_FALSE(disturbance_from_string("gusty"));
}
