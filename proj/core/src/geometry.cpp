#include "spp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spp/errors.hpp"

namespace spp {

namespace {

void require_position_plane(const Grid& g, const char* what) {
  if (g.dim() < 2) throw std::invalid_argument(std::string(what) + ": grid needs two position dimensions");
}

void require_same_grid(const Field& f, const Field& g, const char* what) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

// Multilinear stencil of a query point: for every dimension the two bracketing
// node indices and the weight of the upper one.
struct Stencil {
  MultiIndex lo{};
  MultiIndex hi{};
  std::array<double, kMaxDim> w{};
};

Stencil locate(const Grid& g, const Point& x) {
  Stencil s;
  for (std::size_t k = 0; k < g.dim(); ++k) {
    const double h = g.spacing(k);
    const std::size_t n = g.count(k);
    double xk = g.wrap(k, x[k]);
    if (!std::isfinite(xk)) throw OutOfDomainError("sample: non-finite coordinate");
    if (!g.periodic(k)) {
      const double tol = 1e-9 * (g.max(k) - g.min(k));
      if (xk < g.min(k) - tol || xk > g.max(k) + tol) {
        throw OutOfDomainError("sample: coordinate " + std::to_string(xk) + " outside dimension " +
                               std::to_string(k));
      }
      xk = std::clamp(xk, g.min(k), g.max(k));
    }
    const double u = (xk - g.min(k)) / h;
    auto i = static_cast<std::size_t>(std::floor(u));
    if (g.periodic(k)) {
      i %= n;
      s.lo[k] = i;
      s.hi[k] = (i + 1) % n;
      s.w[k] = std::clamp(u - std::floor(u), 0.0, 1.0);
    } else {
      if (i >= n - 1) i = n - 2;
      s.lo[k] = i;
      s.hi[k] = i + 1;
      s.w[k] = std::clamp(u - static_cast<double>(i), 0.0, 1.0);
    }
  }
  return s;
}

// Central-difference derivative of f along dimension k at a node.
double node_derivative(const Field& f, const MultiIndex& idx, std::size_t k) {
  const Grid& g = f.grid();
  const std::size_t n = g.count(k);
  const std::size_t flat = g.ravel(idx);
  const std::size_t stride = g.stride(k);
  const double h = g.spacing(k);
  const std::size_t i = idx[k];
  if (g.periodic(k)) {
    const std::size_t left = flat - i * stride + ((i + n - 1) % n) * stride;
    const std::size_t right = flat - i * stride + ((i + 1) % n) * stride;
    return (f[right] - f[left]) / (2 * h);
  }
  if (i == 0) return (f[flat + stride] - f[flat]) / h;
  if (i == n - 1) return (f[flat] - f[flat - stride]) / h;
  return (f[flat + stride] - f[flat - stride]) / (2 * h);
}

// Zero crossings of one position slice. `offset` selects the slice: the slice
// value at position (i, j) is f[(i * n1 + j) * per + offset].
void slice_crossings(const Field& f, std::size_t offset, std::vector<Vec2>& out) {
  const Grid& g = f.grid();
  const std::size_t n0 = g.count(0), n1 = g.count(1);
  const std::size_t per = g.nodes_per_position();
  auto at = [&](std::size_t i, std::size_t j) { return f[(i * n1 + j) * per + offset]; };
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      const double a = at(i, j);
      const double x = g.coord(0, i), y = g.coord(1, j);
      if (a == 0.0) out.push_back({x, y});
      if (i + 1 < n0) {
        const double b = at(i + 1, j);
        if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
          const double t = a / (a - b);
          out.push_back({x + t * g.spacing(0), y});
        }
      }
      if (j + 1 < n1) {
        const double b = at(i, j + 1);
        if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
          const double t = a / (a - b);
          out.push_back({x, y + t * g.spacing(1)});
        }
      }
    }
  }
}

}  // namespace

Field sdf_disk_cylinder(const Grid& grid, Vec2 center, double radius) {
  require_position_plane(grid, "sdf_disk_cylinder");
  if (!(radius > 0)) throw std::invalid_argument("sdf_disk_cylinder: radius must be positive");
  std::vector<double> v(grid.size());
  const std::size_t per = grid.nodes_per_position();
  for (std::size_t i = 0; i < grid.count(0); ++i) {
    const double dx = grid.coord(0, i) - center[0];
    for (std::size_t j = 0; j < grid.count(1); ++j) {
      const double dy = grid.coord(1, j) - center[1];
      const double d = std::hypot(dx, dy) - radius;
      const std::size_t base = (i * grid.count(1) + j) * per;
      std::fill_n(v.begin() + static_cast<std::ptrdiff_t>(base), per, d);
    }
  }
  return Field(grid, std::move(v), true);
}

Field sdf_axis_box(const Grid& grid, Vec2 lo, Vec2 hi) {
  require_position_plane(grid, "sdf_axis_box");
  if (!(lo[0] < hi[0] && lo[1] < hi[1])) throw std::invalid_argument("sdf_axis_box: degenerate box");
  const double cx = 0.5 * (lo[0] + hi[0]), cy = 0.5 * (lo[1] + hi[1]);
  const double hx = 0.5 * (hi[0] - lo[0]), hy = 0.5 * (hi[1] - lo[1]);
  std::vector<double> v(grid.size());
  const std::size_t per = grid.nodes_per_position();
  for (std::size_t i = 0; i < grid.count(0); ++i) {
    const double qx = std::abs(grid.coord(0, i) - cx) - hx;
    for (std::size_t j = 0; j < grid.count(1); ++j) {
      const double qy = std::abs(grid.coord(1, j) - cy) - hy;
      const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
      const double inside = std::min(std::max(qx, qy), 0.0);
      const std::size_t base = (i * grid.count(1) + j) * per;
      std::fill_n(v.begin() + static_cast<std::ptrdiff_t>(base), per, outside + inside);
    }
  }
  return Field(grid, std::move(v), true);
}

Field set_union(const Field& f, const Field& g) {
  require_same_grid(f, g, "set_union");
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::min(f[i], g[i]);
  // The min of signed distances is exact outside the union, which is all the
  // dilation shortcut relies on.
  return Field(f.grid(), std::move(v), f.exact_sdf() && g.exact_sdf());
}

Field set_intersect(const Field& f, const Field& g) {
  require_same_grid(f, g, "set_intersect");
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(f[i], g[i]);
  return Field(f.grid(), std::move(v), false);
}

Field set_complement(const Field& f) {
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -f[i];
  return Field(f.grid(), std::move(v), f.exact_sdf());
}

Field dilate_positions(const Field& f, double r) {
  if (!(r >= 0)) throw std::invalid_argument("dilate_positions: radius must be non-negative");
  const Grid& g = f.grid();
  require_position_plane(g, "dilate_positions");
  if (r == 0.0) return f;
  if (f.is_absent()) return f;
  if (f.exact_sdf()) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] >= kAbsentValue ? f[i] : f[i] - r;
    return Field(g, std::move(v), true);
  }

  const std::size_t per = g.nodes_per_position();
  const std::size_t np = g.count(0) * g.count(1);
  std::vector<double> out(f.size());
  std::vector<Vec2> crossings;
  for (std::size_t s = 0; s < per; ++s) {
    crossings.clear();
    slice_crossings(f, s, crossings);
    bool any_inside = false, any_outside = false;
    for (std::size_t p = 0; p < np; ++p) {
      (f[p * per + s] <= 0.0 ? any_inside : any_outside) = true;
    }
    for (std::size_t p = 0; p < np; ++p) {
      const std::size_t flat = p * per + s;
      if (!any_inside) {
        out[flat] = kAbsentValue;
        continue;
      }
      if (!any_outside || crossings.empty()) {
        out[flat] = f[flat] - r;
        continue;
      }
      const double x = g.coord(0, p / g.count(1));
      const double y = g.coord(1, p % g.count(1));
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& c : crossings) {
        const double dx = x - c[0], dy = y - c[1];
        best = std::min(best, dx * dx + dy * dy);
      }
      const double d = std::sqrt(best);
      out[flat] = (f[flat] <= 0.0 ? -d : d) - r;
    }
  }
  return Field(g, std::move(out), true);
}

Field project_min_nonposition(const Field& f) {
  const Grid& g = f.grid();
  require_position_plane(g, "project_min_nonposition");
  if (g.dim() == 2) return f;
  const Grid pg = g.position_grid();
  const std::size_t per = g.nodes_per_position();
  std::vector<double> v(pg.size());
  for (std::size_t p = 0; p < pg.size(); ++p) {
    const auto first = f.values().begin() + static_cast<std::ptrdiff_t>(p * per);
    v[p] = *std::min_element(first, first + static_cast<std::ptrdiff_t>(per));
  }
  return Field(pg, std::move(v), f.exact_sdf());
}

Field extend_to_state_space(const Field& f2d, const Grid& grid) {
  if (!f2d.grid().is_position_grid_of(grid)) {
    throw std::invalid_argument("extend_to_state_space: position sub-grid mismatch");
  }
  const std::size_t per = grid.nodes_per_position();
  std::vector<double> v(grid.size());
  for (std::size_t p = 0; p < f2d.size(); ++p) {
    std::fill_n(v.begin() + static_cast<std::ptrdiff_t>(p * per), per, f2d[p]);
  }
  return Field(grid, std::move(v), f2d.exact_sdf());
}

double sample(const Field& f, const Point& x) {
  const Grid& g = f.grid();
  const Stencil s = locate(g, x);
  const std::size_t d = g.dim();
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const bool up = (corner >> k) & 1U;
      w *= up ? s.w[k] : 1.0 - s.w[k];
      flat += (up ? s.hi[k] : s.lo[k]) * g.stride(k);
    }
    if (w != 0.0) acc += w * f[flat];
  }
  return acc;
}

std::pair<double, Point> sample_with_gradient(const Field& f, const Point& x) {
  const Grid& g = f.grid();
  const Stencil s = locate(g, x);
  const std::size_t d = g.dim();
  double value = 0.0;
  Point grad{};
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    double w = 1.0;
    MultiIndex idx{};
    for (std::size_t k = 0; k < d; ++k) {
      const bool up = (corner >> k) & 1U;
      w *= up ? s.w[k] : 1.0 - s.w[k];
      idx[k] = up ? s.hi[k] : s.lo[k];
    }
    if (w == 0.0) continue;
    value += w * f[g.ravel(idx)];
    for (std::size_t k = 0; k < d; ++k) grad[k] += w * node_derivative(f, idx, k);
  }
  return {value, grad};
}

Point node_gradient(const Field& f, std::size_t flat) {
  const MultiIndex idx = f.grid().unravel(flat);
  Point g{};
  for (std::size_t k = 0; k < f.grid().dim(); ++k) g[k] = node_derivative(f, idx, k);
  return g;
}

Point sample_gradient(const Field& f, const Point& x) { return sample_with_gradient(f, x).second; }

bool has_interior_node(const Field& f) {
  return std::any_of(f.values().begin(), f.values().end(), [](double v) { return v <= 0.0; });
}

std::vector<Vec2> position_zero_crossings(const Field& f) {
  require_position_plane(f.grid(), "position_zero_crossings");
  std::vector<Vec2> out;
  for (std::size_t s = 0; s < f.grid().nodes_per_position(); ++s) slice_crossings(f, s, out);
  return out;
}

double max_position_norm(const Field& f) {
  const Grid& g = f.grid();
  require_position_plane(g, "max_position_norm");
  double best = -1.0;
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    if (f[flat] > 0.0) continue;
    const std::size_t p = g.position_index(flat);
    best = std::max(best, std::hypot(g.coord(0, p / g.count(1)), g.coord(1, p % g.count(1))));
  }
  if (best < 0.0) return best;
  for (const Vec2& c : position_zero_crossings(f)) best = std::max(best, std::hypot(c[0], c[1]));
  return best;
}

}  // namespace spp
