#pragma once

#include <array>
#include <string>
#include <vector>

#include "spp/field.hpp"
#include "spp/geometry.hpp"

namespace spp {

using Segment = std::array<Vec2, 2>;

/// Zero-level segments of a 2-D field by marching squares. Saddle cells are
/// resolved with the cell-center average.
std::vector<Segment> zero_contour(const Field& f2d);

/// Heading slice of a 3-D field nearest to `theta`, on the position grid.
Field heading_slice(const Field& f, double theta);

/// Minimal SVG canvas in world coordinates (y up).
class SvgCanvas {
 public:
  SvgCanvas(Vec2 lo, Vec2 hi, double pixels = 600.0);

  void polyline(const std::vector<Vec2>& pts, const std::string& color, double width = 1.5);
  void circle(Vec2 c, double r, const std::string& stroke, const std::string& fill = "none", bool dashed = false);
  void segments(const std::vector<Segment>& segs, const std::string& color, double width = 1.0);
  void text(Vec2 at, const std::string& s, const std::string& color = "black");

  std::string str() const;

 private:
  double sx(double x) const;
  double sy(double y) const;

  Vec2 lo_, hi_;
  double scale_;
  std::string body_;
};

}  // namespace spp
