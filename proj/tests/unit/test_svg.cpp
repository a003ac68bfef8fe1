#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "spp/geometry.hpp"
#include "spp/svg.hpp"

using namespace spp;

TEST(Contour, DiskSegmentsLieOnTheCircle) {
  const Grid g = make_grid({-1, -1}, {1, 1}, {41, 41}, {false, false});
  const Field f = sdf_disk_cylinder(g, {0.2, -0.1}, 0.5);
  const auto segs = zero_contour(f);
  ASSERT_GT(segs.size(), 20u);
  for (const Segment& s : segs) {
    for (const Vec2& p : s) EXPECT_NEAR(std::hypot(p[0] - 0.2, p[1] + 0.1), 0.5, 5e-3);
  }
}

TEST(Contour, EmptyAndFullFieldsHaveNoSegments) {
  const Grid g = make_grid({-1, -1}, {1, 1}, {11, 11}, {false, false});
  EXPECT_TRUE(zero_contour(Field(g, 1.0)).empty());
  EXPECT_TRUE(zero_contour(Field(g, -1.0)).empty());
  EXPECT_THROW(zero_contour(Field(spp::test::small_grid(5, 4), 1.0)), std::invalid_argument);
}

TEST(Contour, SaddleCellGetsTwoSegments) {
  const Grid g = make_grid({0, 0}, {2, 2}, {3, 3}, {false, false});
  // Nodes (0,0) and (1,1) inside, everything else outside: the lower-left
  // cell is a saddle, the three cells around (1,1) add one segment each.
  std::vector<double> v(9, 1.0);
  v[0] = -1.0;
  v[4] = -1.0;
  EXPECT_EQ(zero_contour(Field(g, v)).size(), 5u);
}

TEST(HeadingSlice, PicksNearestHeading) {
  const Grid g = spp::test::small_grid(5, 4);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 4);
  const Field f(g, v);
  EXPECT_EQ(heading_slice(f, 0.0)[0], 0.0);
  EXPECT_EQ(heading_slice(f, kPi / 2 + 0.1)[3], 1.0);
  EXPECT_EQ(heading_slice(f, kTwoPi - 0.1)[7], 0.0);
}

TEST(Canvas, EmitsShapesInPixelSpace) {
  SvgCanvas c({-1, -1}, {1, 1}, 200);
  c.circle({0, 0}, 0.5, "red", "none", true);
  c.polyline({{-1, 1}, {1, -1}}, "blue");
  c.text({0, 0}, "a<b");
  const std::string s = c.str();
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("cx=\"100\" cy=\"100\" r=\"50\""), std::string::npos) << s;
  EXPECT_NE(s.find("points=\"0,0 200,200\""), std::string::npos) << s;
  EXPECT_NE(s.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(s.find("a&lt;b"), std::string::npos);
}
