#include <gtest/gtest.h>

#include <cmath>

#include "spp/field.hpp"
#include "spp/grid.hpp"

using namespace spp;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST(Grid, SpacingFollowsPeriodicity) {
  const Grid g = make_grid({-1, -1, 0}, {1, 1, 2 * kPi}, {71, 71, 45}, {false, false, true});
  EXPECT_NEAR(g.spacing(0), 2.0 / 70, 1e-15);
  EXPECT_NEAR(g.spacing(1), 2.0 / 70, 1e-15);
  EXPECT_NEAR(g.spacing(2), 2 * kPi / 45, 1e-15);
  EXPECT_EQ(g.size(), 71u * 71u * 45u);
  EXPECT_DOUBLE_EQ(g.coord(0, 70), 1.0);
}

TEST(Grid, OneDimensional) {
  const Grid g = make_grid({0}, {1}, {11}, {false});
  EXPECT_NEAR(g.spacing(0), 0.1, 1e-15);
  EXPECT_EQ(g.dim(), 1u);
}

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(make_grid({0, 0, 0}, {1, 1, 1}, {2, 5, 5}, {false, false, false}), std::invalid_argument);
  EXPECT_THROW(make_grid({0, 0}, {1, 1}, {5, 5}, {false}), std::invalid_argument);
  EXPECT_THROW(make_grid({1}, {0}, {5}, {false}), std::invalid_argument);
  EXPECT_THROW(make_grid({0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}, {3, 3, 3, 3, 3}, {false, false, false, false, false}),
               std::invalid_argument);
}

TEST(Grid, RavelRoundTrip) {
  const Grid g = make_grid({0, 0, 0}, {1, 2, 3}, {4, 5, 6}, {false, false, true});
  for (std::size_t flat = 0; flat < g.size(); ++flat) EXPECT_EQ(g.ravel(g.unravel(flat)), flat);
  const MultiIndex idx = g.unravel(g.stride(0) * 2 + g.stride(1) * 3 + 4);
  EXPECT_EQ(idx[0], 2u);
  EXPECT_EQ(idx[1], 3u);
  EXPECT_EQ(idx[2], 4u);
}

TEST(Grid, PositionSubGrid) {
  const Grid g = make_grid({-1, -1, 0}, {1, 1, 2 * kPi}, {11, 13, 8}, {false, false, true});
  const Grid p = g.position_grid();
  EXPECT_EQ(p.dim(), 2u);
  EXPECT_TRUE(p.is_position_grid_of(g));
  EXPECT_EQ(g.nodes_per_position(), 8u);
  EXPECT_EQ(g.position_index(g.ravel({3, 4, 5, 0})), 3u * 13u + 4u);
}

TEST(Grid, WrapsPeriodicCoordinate) {
  const Grid g = make_grid({-1, -1, 0}, {1, 1, 2 * kPi}, {5, 5, 8}, {false, false, true});
  EXPECT_NEAR(g.wrap(2, -0.5), 2 * kPi - 0.5, 1e-12);
  EXPECT_NEAR(g.wrap(2, 2 * kPi + 0.25), 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(g.wrap(0, 3.0), 3.0);
}

TEST(Field, SizeMismatchThrows) {
  const Grid g = make_grid({0}, {1}, {5}, {false});
  EXPECT_THROW(Field(g, std::vector<double>(4, 0.0)), std::invalid_argument);
}

TEST(Field, AbsentSentinel) {
  const Grid g = make_grid({0, 0}, {1, 1}, {5, 5}, {false, false});
  EXPECT_TRUE(absent_field(g).is_absent());
  EXPECT_FALSE(Field(g, 1.0).is_absent());
}

TEST(TimeField, OrderingAndLookup) {
  const Grid g = make_grid({0}, {1}, {5}, {false});
  TimeField tf;
  tf.push_back(0.0, Field(g, 0.0));
  tf.push_back(0.5, Field(g, 1.0));
  tf.push_front(-0.5, Field(g, 2.0));
  EXPECT_THROW(tf.push_back(0.5, Field(g, 0.0)), std::invalid_argument);
  EXPECT_EQ(tf.size(), 3u);
  EXPECT_EQ(tf.index_at_or_before(-1.0), TimeField::npos);
  EXPECT_EQ(tf.index_at_or_before(-0.5), 0u);
  EXPECT_EQ(tf.index_at_or_before(0.49), 1u);
  EXPECT_EQ(tf.index_at_or_before(0.5 - 1e-12), 2u);
  EXPECT_EQ(tf.index_at_or_before(7.0), 2u);
  tf.drop_before(1);
  EXPECT_DOUBLE_EQ(tf.time(0), 0.0);
}
