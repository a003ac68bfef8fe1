#include "spp/svg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spp/dynamics.hpp"

namespace spp {

namespace {

Vec2 lerp_zero(Vec2 a, double fa, Vec2 b, double fb) {
  const double s = fa == fb ? 0.5 : fa / (fa - fb);
  return {a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])};
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<Segment> zero_contour(const Field& f) {
  const Grid& g = f.grid();
  if (g.dim() != 2) throw std::invalid_argument("zero_contour: 2-D field required");
  std::vector<Segment> out;
  const std::size_t nx = g.count(0), ny = g.count(1);
  auto at = [&](std::size_t i, std::size_t j) { return f[i * g.stride(0) + j]; };
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      // Corners counter-clockwise from (i, j).
      const Vec2 p[4] = {{g.coord(0, i), g.coord(1, j)},
                         {g.coord(0, i + 1), g.coord(1, j)},
                         {g.coord(0, i + 1), g.coord(1, j + 1)},
                         {g.coord(0, i), g.coord(1, j + 1)}};
      const double v[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      int mask = 0;
      for (int k = 0; k < 4; ++k) {
        if (v[k] <= 0.0) mask |= 1 << k;
      }
      if (mask == 0 || mask == 15) continue;
      std::vector<Vec2> cross;
      for (int k = 0; k < 4; ++k) {
        const int m = (k + 1) % 4;
        if ((v[k] <= 0.0) != (v[m] <= 0.0)) cross.push_back(lerp_zero(p[k], v[k], p[m], v[m]));
      }
      if (cross.size() == 2) {
        out.push_back({cross[0], cross[1]});
      } else if (cross.size() == 4) {
        // Edges 0-1, 1-2, 2-3, 3-0 all cross. Pair them so the center's side
        // stays connected.
        const bool center_in = (v[0] + v[1] + v[2] + v[3]) / 4.0 <= 0.0;
        const bool c0_in = v[0] <= 0.0;
        if (center_in == c0_in) {
          out.push_back({cross[0], cross[1]});
          out.push_back({cross[2], cross[3]});
        } else {
          out.push_back({cross[3], cross[0]});
          out.push_back({cross[1], cross[2]});
        }
      }
    }
  }
  return out;
}

Field heading_slice(const Field& f, double theta) {
  const Grid& g = f.grid();
  if (g.dim() != 3) throw std::invalid_argument("heading_slice: 3-D field required");
  const double u = (g.wrap(2, theta) - g.min(2)) / g.spacing(2);
  std::size_t k = static_cast<std::size_t>(std::llround(u));
  if (k >= g.count(2)) k = g.periodic(2) ? 0 : g.count(2) - 1;
  const Grid pg = g.position_grid();
  std::vector<double> v(pg.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = f[p * g.nodes_per_position() + k];
  return Field(pg, std::move(v));
}

SvgCanvas::SvgCanvas(Vec2 lo, Vec2 hi, double pixels) : lo_(lo), hi_(hi) {
  const double w = std::max(hi[0] - lo[0], hi[1] - lo[1]);
  if (!(w > 0.0)) throw std::invalid_argument("SvgCanvas: empty extent");
  scale_ = pixels / w;
}

double SvgCanvas::sx(double x) const { return (x - lo_[0]) * scale_; }
double SvgCanvas::sy(double y) const { return (hi_[1] - y) * scale_; }

void SvgCanvas::polyline(const std::vector<Vec2>& pts, const std::string& color, double width) {
  if (pts.empty()) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + num(width) + "\" points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) body_ += ' ';
    body_ += num(sx(pts[k][0])) + "," + num(sy(pts[k][1]));
  }
  body_ += "\"/>\n";
}

void SvgCanvas::circle(Vec2 c, double r, const std::string& stroke, const std::string& fill, bool dashed) {
  body_ += "<circle cx=\"" + num(sx(c[0])) + "\" cy=\"" + num(sy(c[1])) + "\" r=\"" + num(r * scale_) +
           "\" stroke=\"" + stroke + "\" fill=\"" + fill + "\"";
  if (dashed) body_ += " stroke-dasharray=\"4 3\"";
  body_ += "/>\n";
}

void SvgCanvas::segments(const std::vector<Segment>& segs, const std::string& color, double width) {
  if (segs.empty()) return;
  body_ += "<path fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + num(width) + "\" d=\"";
  for (const Segment& s : segs) {
    body_ += "M" + num(sx(s[0][0])) + " " + num(sy(s[0][1])) + "L" + num(sx(s[1][0])) + " " + num(sy(s[1][1]));
  }
  body_ += "\"/>\n";
}

void SvgCanvas::text(Vec2 at, const std::string& s, const std::string& color) {
  body_ += "<text x=\"" + num(sx(at[0])) + "\" y=\"" + num(sy(at[1])) + "\" fill=\"" + color +
           "\" font-size=\"12\" font-family=\"sans-serif\">" + escape(s) + "</text>\n";
}

std::string SvgCanvas::str() const {
  const double w = (hi_[0] - lo_[0]) * scale_;
  const double h = (hi_[1] - lo_[1]) * scale_;
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         body_ + "</svg>\n";
}

}  // namespace spp
